#include "bco/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bco/error.hpp"

namespace bco {

namespace {

namespace fs = std::filesystem;

void only_keys(const nlohmann::json& j, const std::string& where,
               const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw SpecError(where + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw SpecError(where + "." + key + ": unknown key");
        }
    }
}

double number(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number()) {
        throw SpecError(field + ": expected a number");
    }
    return j.get<double>();
}

std::uint64_t count(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        throw SpecError(field + ": expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

Vec vector_field(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) {
        throw SpecError(field + ": expected a non-empty array of numbers");
    }
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
    }
    return v;
}

ConvexBody parse_body(const nlohmann::json& j) {
    only_keys(j, "body", {"box", "halfspaces"});
    if (j.size() != 1) {
        throw SpecError("body: expected exactly one of box or halfspaces");
    }
    try {
        if (j.contains("box")) {
            const auto& b = j["box"];
            only_keys(b, "body.box", {"lower", "upper"});
            if (!b.contains("lower") || !b.contains("upper")) {
                throw SpecError("body.box: lower and upper are required");
            }
            const Vec lo = vector_field(b["lower"], "body.box.lower");
            const Vec hi = vector_field(b["upper"], "body.box.upper");
            if (lo.size() != hi.size() || !(lo.array() < hi.array()).all()) {
                throw SpecError("body.box: need lower < upper in every coordinate");
            }
            return ConvexBody::box(lo, hi);
        }
        const auto& h = j["halfspaces"];
        only_keys(h, "body.halfspaces", {"normals", "offsets"});
        if (!h.contains("normals") || !h.contains("offsets") || !h["normals"].is_array()) {
            throw SpecError("body.halfspaces: normals and offsets are required");
        }
        const Vec offsets = vector_field(h["offsets"], "body.halfspaces.offsets");
        const auto& rows = h["normals"];
        if (rows.size() != static_cast<std::size_t>(offsets.size())) {
            throw SpecError("body.halfspaces: normals and offsets differ in length");
        }
        const Vec first = vector_field(rows[0], "body.halfspaces.normals[0]");
        Mat normals(offsets.size(), first.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto name = "body.halfspaces.normals[" + std::to_string(i) + "]";
            const Vec r = vector_field(rows[i], name);
            if (r.size() != first.size()) {
                throw SpecError(name + ": dimension differs from the first normal");
            }
            normals.row(static_cast<Eigen::Index>(i)) = r.transpose();
        }
        return ConvexBody::from_halfspaces(normals, offsets);
    } catch (const SpecError&) {
        throw;
    } catch (const Error& e) {
        throw SpecError(std::string("body: ") + e.what());
    }
}

PracticalScales parse_scales(const nlohmann::json& j) {
    only_keys(j, "learner.scales", {"ell", "beta", "gamma_ext", "alpha", "eta"});
    PracticalScales s;
    auto take = [&j](const char* key, double& out) {
        if (j.contains(key)) {
            out = number(j[key], std::string("learner.scales.") + key);
            if (!(out > 0.0)) {
                throw SpecError(std::string("learner.scales.") + key + ": must be positive");
            }
        }
    };
    take("ell", s.ell);
    take("beta", s.beta);
    take("gamma_ext", s.gamma_ext);
    take("alpha", s.alpha);
    take("eta", s.eta);
    return s;
}

nlohmann::json scales_json(const PracticalScales& s) {
    return {{"ell", s.ell},
            {"beta", s.beta},
            {"gamma_ext", s.gamma_ext},
            {"alpha", s.alpha},
            {"eta", s.eta}};
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    fn(out);
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t line_of(const std::string& text, std::size_t byte, std::size_t& column) {
    std::size_t line = 1;
    std::size_t start = 0;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            start = i + 1;
        }
    }
    column = byte >= start ? byte - start : 0;
    return line;
}

}  // namespace

LearnerConfig ExperimentConfig::learner() const {
    LearnerConfig base = preset == Preset::Paper
                             ? LearnerConfig::paper(dim, horizon, delta)
                             : LearnerConfig::practical(dim, horizon, delta, scales);
    nlohmann::json j = to_json(base);
    for (const auto& [key, value] : overrides.items()) {
        j[key] = value;
    }
    LearnerConfig c;
    try {
        c = learner_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("learner.overrides: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig parse_experiment(const nlohmann::json& j) {
    only_keys(j, "config",
              {"learner", "body", "adversary", "horizon", "seeds", "output_dir", "audit",
               "audit_samples", "oracle_resolution"});
    for (const char* key : {"learner", "body", "adversary", "horizon", "seeds"}) {
        if (!j.contains(key)) {
            throw SpecError(std::string("config.") + key + ": required");
        }
    }
    ExperimentConfig c;

    const auto& l = j["learner"];
    only_keys(l, "learner", {"preset", "dim", "delta", "scales", "overrides"});
    if (l.contains("preset")) {
        if (!l["preset"].is_string() ||
            (l["preset"] != "practical" && l["preset"] != "paper")) {
            throw SpecError("learner.preset: expected \"practical\" or \"paper\"");
        }
        c.preset = l["preset"] == "paper" ? Preset::Paper : Preset::Practical;
    }
    if (!l.contains("dim")) {
        throw SpecError("learner.dim: required");
    }
    const auto dim = count(l["dim"], "learner.dim");
    if (dim < 1) {
        throw SpecError("learner.dim: must be at least 1");
    }
    c.dim = static_cast<Eigen::Index>(dim);
    if (l.contains("delta")) {
        c.delta = number(l["delta"], "learner.delta");
    }
    if (l.contains("scales")) {
        if (c.preset == Preset::Paper) {
            throw SpecError("learner.scales: only the practical preset has scales");
        }
        c.scales = parse_scales(l["scales"]);
    }
    if (l.contains("overrides")) {
        const auto& o = l["overrides"];
        std::set<std::string> allowed;
        const auto fields = to_json(LearnerConfig{});
        for (const auto& [key, value] : fields.items()) {
            allowed.insert(key);
        }
        for (const char* fixed : {"dim", "horizon", "delta", "preset"}) {
            allowed.erase(fixed);
        }
        only_keys(o, "learner.overrides", allowed);
        c.overrides = o;
    }

    c.body = parse_body(j["body"]);
    if (c.body.dim() != c.dim) {
        throw SpecError("body: dimension " + std::to_string(c.body.dim()) +
                        " does not match learner.dim " + std::to_string(c.dim));
    }
    c.adversary = adversary_from_json(j["adversary"]);
    c.horizon = count(j["horizon"], "horizon");

    const auto& seeds = j["seeds"];
    if (!seeds.is_array() || seeds.empty()) {
        throw SpecError("seeds: expected a non-empty array of integers");
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        c.seeds.push_back(count(seeds[i], "seeds[" + std::to_string(i) + "]"));
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) {
            throw SpecError("output_dir: expected a string");
        }
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("audit")) {
        if (!j["audit"].is_boolean()) {
            throw SpecError("audit: expected true or false");
        }
        c.audit = j["audit"].get<bool>();
    }
    if (j.contains("audit_samples")) {
        c.audit_samples = count(j["audit_samples"], "audit_samples");
    }
    if (j.contains("oracle_resolution")) {
        c.oracle_resolution = count(j["oracle_resolution"], "oracle_resolution");
        if (c.oracle_resolution < 1) {
            throw SpecError("oracle_resolution: must be at least 1");
        }
    }

    // Resolve once so schedule and adversary errors surface before any output.
    if (c.horizon > 0) {
        (void)c.learner();
        std::mt19937_64 rng(0);
        (void)make_adversary(c.adversary, c.body, c.horizon, rng);
    }
    return c;
}

ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SpecError(path + ": cannot read");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t column = 0;
        const auto line = line_of(text, e.byte > 0 ? e.byte - 1 : 0, column);
        throw SpecError(path + ":" + std::to_string(line) + ":" + std::to_string(column + 1) +
                        ": " + e.what());
    }
    try {
        return parse_experiment(j);
    } catch (const SpecError& e) {
        throw SpecError(path + ": " + e.what());
    }
}

nlohmann::json canonical_json(const ExperimentConfig& c) {
    nlohmann::json learner{{"preset", to_string(c.preset)},
                           {"dim", c.dim},
                           {"delta", c.delta},
                           {"overrides", c.overrides}};
    if (c.preset == Preset::Practical) {
        learner["scales"] = scales_json(c.scales);
    }
    return {{"learner", learner},
            {"body", body_to_json(c.body)},
            {"adversary", to_json(c.adversary)},
            {"horizon", c.horizon},
            {"audit", c.audit},
            {"audit_samples", c.audit_samples},
            {"oracle_resolution", c.oracle_resolution}};
}

std::string config_hash(const ExperimentConfig& c) {
    char buf[17];
    const auto h = fnv1a(canonical_json(c).dump());
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

void write_rounds_csv(std::ostream& out, const GameRecord& record, const std::string& hash) {
    out << "# config " << hash << " seed " << record.seed << '\n';
    out << "t,epoch,restart_gen";
    for (Eigen::Index k = 0; k < record.body.dim(); ++k) {
        out << ",x" << k;
    }
    out << ",loss,shift,decide_move,restart\n";
    for (const auto& r : record.rounds) {
        out << r.t << ',' << r.epoch << ',' << r.generation;
        for (Eigen::Index k = 0; k < r.x.size(); ++k) {
            out << ',' << format_number(r.x(k));
        }
        out << ',' << format_number(r.loss) << ',' << format_number(r.shift) << ','
            << (r.decide_move ? 1 : 0) << ',' << (r.restart ? 1 : 0) << '\n';
    }
}

void write_regret_csv(std::ostream& out, const RegretReport& report, std::uint64_t seed,
                      const std::string& hash) {
    out << "# config " << hash << " seed " << seed << '\n';
    out << "t,cum_loss,cum_best,regret\n";
    for (std::size_t i = 0; i < report.curve.size(); ++i) {
        out << i + 1 << ',' << format_number(report.cum_loss[i]) << ','
            << format_number(report.cum_best[i]) << ',' << format_number(report.curve[i]) << '\n';
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config, const LogFn& log) {
    const auto say = [&log](const std::string& m) {
        if (log) {
            log(m);
        }
    };
    const LearnerConfig lc = config.horizon > 0 ? config.learner() : LearnerConfig{};
    const std::string hash = config_hash(config);
    const fs::path root(config.output_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) {
        throw IoError("cannot create " + root.string() + ": " + ec.message());
    }

    ExperimentResult result;
    auto seeds = nlohmann::json::array();
    std::vector<double> regrets;
    for (const auto seed : config.seeds) {
        SeedOutcome o;
        o.seed = seed;
        const fs::path dir = root / ("seed-" + std::to_string(seed));
        fs::create_directories(dir, ec);
        if (ec) {
            throw IoError("cannot create " + dir.string() + ": " + ec.message());
        }
        o.dir = dir.string();
        say("seed " + std::to_string(seed) + ": playing " + std::to_string(config.horizon) +
            " rounds");
        const GameRecord rec = run_game(config.body, lc, config.adversary, config.horizon, seed);
        o.partial = rec.partial;
        o.error = rec.error;
        if (rec.partial) {
            say("seed " + std::to_string(seed) + ": aborted: " + rec.error);
            result.failed = true;
        }
        write_file(dir / "record.jsonl", [&](std::ostream& out) { write_record(out, rec); });
        o.regret = compute_regret(rec, config.oracle_resolution);
        write_file(dir / "rounds.csv", [&](std::ostream& out) { write_rounds_csv(out, rec, hash); });
        write_file(dir / "regret.csv",
                   [&](std::ostream& out) { write_regret_csv(out, o.regret, seed, hash); });
        nlohmann::json entry{{"seed", seed},
                             {"dir", o.dir},
                             {"partial", o.partial},
                             {"error", o.error},
                             {"regret", to_json(o.regret)}};
        if (config.audit) {
            o.audit = lemma_audit(rec, config.audit_samples);
            auto doc = to_json(*o.audit);
            doc["config_hash"] = hash;
            doc["seed"] = seed;
            write_file(dir / "audit.json", [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
            entry["audit"] = {{"ok", o.audit->ok()},
                              {"violations", o.audit->violations.size()},
                              {"moves", o.audit->moves},
                              {"restarts", o.audit->restarts}};
        }
        say("seed " + std::to_string(seed) + ": regret " + format_number(o.regret.regret));
        regrets.push_back(o.regret.regret);
        seeds.push_back(entry);
        result.seeds.push_back(std::move(o));
    }

    nlohmann::json agg = nlohmann::json::object();
    if (!regrets.empty()) {
        double sum = 0.0;
        for (const double r : regrets) {
            sum += r;
        }
        const double mean = sum / static_cast<double>(regrets.size());
        agg = {{"regret_mean", mean},
               {"regret_max", *std::max_element(regrets.begin(), regrets.end())},
               {"regret_min", *std::min_element(regrets.begin(), regrets.end())},
               {"average_regret_per_round",
                config.horizon > 0 ? mean / static_cast<double>(config.horizon) : 0.0}};
    }
    result.summary = {{"config_hash", hash},
                      {"config", canonical_json(config)},
                      {"learner", to_json(lc)},
                      {"seeds", seeds},
                      {"aggregates", agg},
                      {"partial", result.failed}};
    write_file(root / "summary.json",
               [&](std::ostream& out) { out << result.summary.dump(2) << '\n'; });
    return result;
}

}  // namespace bco
