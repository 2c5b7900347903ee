#include "bco/game.hpp"

#include <istream>
#include <ostream>

#include "bco/error.hpp"

namespace bco {

namespace {

std::vector<double> as_vector(const Vec& v) {
    return {v.data(), v.data() + v.size()};
}

Vec as_vec(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json points_to_json(const std::vector<Vec>& pts) {
    auto arr = nlohmann::json::array();
    for (const auto& p : pts) {
        arr.push_back(as_vector(p));
    }
    return arr;
}

std::vector<Vec> points_from_json(const nlohmann::json& j) {
    std::vector<Vec> out;
    for (const auto& p : j) {
        out.push_back(as_vec(p));
    }
    return out;
}

nlohmann::json cut_to_json(const ShrinkResult& c) {
    return {{"h", as_vector(c.h)},
            {"w", c.w},
            {"z", c.z},
            {"center", as_vector(c.center)},
            {"applied_h", as_vector(c.applied_h)},
            {"applied_z", c.applied_z},
            {"cut", c.cut},
            {"body", body_to_json(c.body)}};
}

ShrinkResult cut_from_json(const nlohmann::json& j) {
    ShrinkResult c;
    c.h = as_vec(j.at("h"));
    c.w = j.at("w").get<double>();
    c.z = j.at("z").get<double>();
    c.center = as_vec(j.at("center"));
    c.applied_h = as_vec(j.at("applied_h"));
    c.applied_z = j.at("applied_z").get<double>();
    c.cut = j.at("cut").get<bool>();
    c.body = body_from_json(j.at("body"));
    return c;
}

nlohmann::json epoch_to_json(const EpochSummary& e) {
    nlohmann::json j{{"type", "epoch"},
                     {"epoch", e.epoch},
                     {"generation", e.generation},
                     {"first_round", e.first_round},
                     {"last_round", e.last_round},
                     {"body", body_to_json(e.body)},
                     {"grid", points_to_json(e.grid)},
                     {"values", as_vector(e.values)},
                     {"widths", as_vector(e.widths)},
                     {"shift", e.shift},
                     {"end", e.end}};
    if (e.cut) {
        j["cut"] = cut_to_json(*e.cut);
    }
    return j;
}

EpochSummary epoch_from_json(const nlohmann::json& j) {
    EpochSummary e;
    e.epoch = j.at("epoch").get<std::size_t>();
    e.generation = j.at("generation").get<std::size_t>();
    e.first_round = j.at("first_round").get<std::uint64_t>();
    e.last_round = j.at("last_round").get<std::uint64_t>();
    e.body = body_from_json(j.at("body"));
    e.grid = points_from_json(j.at("grid"));
    e.values = as_vec(j.at("values"));
    e.widths = as_vec(j.at("widths"));
    e.shift = j.at("shift").get<double>();
    e.end = j.at("end").get<std::string>();
    if (j.contains("cut")) {
        e.cut = cut_from_json(j["cut"]);
    }
    return e;
}

}  // namespace

nlohmann::json body_to_json(const ConvexBody& k) {
    auto normals = nlohmann::json::array();
    for (Eigen::Index i = 0; i < k.normals().rows(); ++i) {
        normals.push_back(as_vector(k.normals().row(i).transpose()));
    }
    return {{"normals", normals},
            {"offsets", as_vector(k.offsets())},
            {"frozen", points_to_json(k.frozen())}};
}

ConvexBody body_from_json(const nlohmann::json& j) {
    const auto rows = j.at("normals");
    const Vec offsets = as_vec(j.at("offsets"));
    if (rows.size() != static_cast<std::size_t>(offsets.size()) || rows.empty()) {
        throw SpecError("body: normals and offsets differ in length");
    }
    const auto d = static_cast<Eigen::Index>(rows[0].size());
    Mat normals(offsets.size(), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Vec r = as_vec(rows[i]);
        if (r.size() != d) {
            throw SpecError("body: normals of mixed dimension");
        }
        normals.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    auto body = ConvexBody::from_halfspaces(normals, offsets);
    if (j.contains("frozen")) {
        body = body.with_frozen(points_from_json(j["frozen"]));
    }
    return body;
}

GameRecord run_game(const ConvexBody& k, const LearnerConfig& config, const AdversarySpec& spec,
                    std::uint64_t horizon, std::uint64_t seed) {
    GameRecord rec;
    rec.learner = config;
    rec.adversary = spec;
    rec.body = k;
    rec.horizon = horizon;
    rec.seed = seed;
    if (horizon == 0) {
        return rec;
    }
    std::seed_seq learner_seq{seed, std::uint64_t{0}};
    std::seed_seq adversary_seq{seed, std::uint64_t{1}};
    std::mt19937_64 learner_rng(learner_seq);
    std::mt19937_64 adversary_rng(adversary_seq);

    auto adversary = make_adversary(spec, k, horizon, adversary_rng);
    EpochState state = learner_init(k, config);
    std::vector<Vec> plays;
    plays.reserve(horizon);
    try {
        for (std::uint64_t t = 1; t <= horizon; ++t) {
            RoundRecord r;
            r.t = t;
            r.epoch = state.tau;
            r.generation = state.generation;
            r.grid_size = state.grid.size();
            // The adversary commits to f_t before seeing x_t.
            r.f = adversary->next(t, plays);
            r.x = learner_act(state, learner_rng);
            r.arm = state.last_arm;
            r.loss = r.f(r.x);
            const auto obs = learner_observe(state, std::clamp(r.loss, 0.0, 1.0));
            r.shift = obs.shift;
            r.decide_move = obs.decide_move;
            r.restart = obs.restart;
            if (obs.closed) {
                rec.epochs.push_back(*obs.closed);
            }
            plays.push_back(r.x);
            rec.rounds.push_back(std::move(r));
        }
        rec.epochs.push_back(learner_summary(state, "horizon"));
    } catch (const Error& e) {
        rec.partial = true;
        rec.error = e.what();
    }
    rec.cap_hits = state.cap_hits;
    rec.inconsistent_fits = state.inconsistent_fits;
    return rec;
}

void write_record(std::ostream& out, const GameRecord& rec) {
    nlohmann::json header{{"type", "header"},
                          {"learner", to_json(rec.learner)},
                          {"adversary", to_json(rec.adversary)},
                          {"body", body_to_json(rec.body)},
                          {"horizon", rec.horizon},
                          {"seed", rec.seed}};
    out << header.dump() << '\n';
    for (const auto& r : rec.rounds) {
        nlohmann::json j{{"type", "round"},
                         {"t", r.t},
                         {"epoch", r.epoch},
                         {"generation", r.generation},
                         {"x", as_vector(r.x)},
                         {"arm", r.arm},
                         {"loss", r.loss},
                         {"shift", r.shift},
                         {"grid_size", r.grid_size},
                         {"decide_move", r.decide_move},
                         {"restart", r.restart},
                         {"f", to_json(r.f)}};
        out << j.dump() << '\n';
    }
    for (const auto& e : rec.epochs) {
        out << epoch_to_json(e).dump() << '\n';
    }
    nlohmann::json footer{{"type", "footer"},
                          {"rounds", rec.rounds.size()},
                          {"cap_hits", rec.cap_hits},
                          {"inconsistent_fits", rec.inconsistent_fits},
                          {"partial", rec.partial},
                          {"error", rec.error}};
    out << footer.dump() << '\n';
}

GameRecord read_record(std::istream& in) {
    GameRecord rec;
    std::string line;
    bool header = false;
    bool footer = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            const auto type = j.at("type").get<std::string>();
            if (type == "header") {
                rec.learner = learner_from_json(j.at("learner"));
                rec.adversary = adversary_from_json(j.at("adversary"));
                rec.body = body_from_json(j.at("body"));
                rec.horizon = j.at("horizon").get<std::uint64_t>();
                rec.seed = j.at("seed").get<std::uint64_t>();
                header = true;
            } else if (type == "round") {
                RoundRecord r;
                r.t = j.at("t").get<std::uint64_t>();
                r.epoch = j.at("epoch").get<std::size_t>();
                r.generation = j.at("generation").get<std::size_t>();
                r.x = as_vec(j.at("x"));
                r.arm = j.at("arm").get<std::size_t>();
                r.loss = j.at("loss").get<double>();
                r.shift = j.at("shift").get<double>();
                r.grid_size = j.at("grid_size").get<std::size_t>();
                r.decide_move = j.at("decide_move").get<bool>();
                r.restart = j.at("restart").get<bool>();
                r.f = loss_from_json(j.at("f"));
                rec.rounds.push_back(std::move(r));
            } else if (type == "epoch") {
                rec.epochs.push_back(epoch_from_json(j));
            } else if (type == "footer") {
                rec.cap_hits = j.at("cap_hits").get<std::size_t>();
                rec.inconsistent_fits = j.at("inconsistent_fits").get<std::size_t>();
                rec.partial = j.at("partial").get<bool>();
                rec.error = j.at("error").get<std::string>();
                footer = true;
            } else {
                throw SpecError("unknown line type '" + type + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw SpecError("record line " + std::to_string(lineno) + ": " + e.what());
        } catch (const SpecError& e) {
            throw SpecError("record line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!header || !footer) {
        throw SpecError("record: missing header or footer line");
    }
    return rec;
}

}  // namespace bco
