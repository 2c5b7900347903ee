#include "bco/learner.hpp"

#include <cmath>

#include "bco/error.hpp"
#include "bco/grid.hpp"
#include "bco/lp.hpp"

namespace bco {

const char* to_string(Preset p) {
    return p == Preset::Paper ? "paper" : "practical";
}

namespace {

double log_horizon(std::uint64_t horizon) {
    return std::log(static_cast<double>(std::max<std::uint64_t>(horizon, 2)));
}

std::size_t epoch_cap(Eigen::Index d, std::uint64_t horizon) {
    const double dd = static_cast<double>(d);
    return static_cast<std::size_t>(std::ceil(8.0 * dd * dd * log_horizon(horizon)));
}

}  // namespace

LearnerConfig LearnerConfig::paper(Eigen::Index d, std::uint64_t horizon, double delta) {
    LearnerConfig c;
    const double dd = static_cast<double>(d);
    const double lt = log_horizon(horizon);
    const double root = std::sqrt(static_cast<double>(horizon));
    c.dim = d;
    c.horizon = horizon;
    c.delta = delta;
    c.preset = Preset::Paper;
    c.ell = std::pow(2.0, std::pow(dd, 4)) * std::pow(lt, 2.0 * dd) * std::log(1.0 / delta) * root;
    c.alpha = std::pow(2.0, 3.0 * dd * dd) * lt * lt * lt;
    c.beta = 4096.0 * std::pow(dd, 4) * lt;
    c.gamma_ext = 2048.0 * std::pow(dd, 4) * lt;
    c.eta = 8.0 * dd * dd + 1.0;
    c.tau_max = epoch_cap(d, horizon);
    c.thin_threshold = 1.0 / root;
    // The schedule's alpha is far below gamma beta^2 sqrt(d); nothing to enforce.
    c.strict_grid = false;
    return c;
}

LearnerConfig LearnerConfig::practical(Eigen::Index d, std::uint64_t horizon, double delta,
                                       const PracticalScales& s) {
    LearnerConfig c;
    const double dd = static_cast<double>(d);
    const double root = std::sqrt(static_cast<double>(horizon));
    c.dim = d;
    c.horizon = horizon;
    c.delta = delta;
    c.preset = Preset::Practical;
    c.beta = s.beta * dd;
    c.gamma_ext = s.gamma_ext;
    c.alpha = s.alpha * c.alpha_hypothesis();
    // ell tracks the EXP3.P confidence width over the grid, which the shift adds
    // to every cumulative loss; a smaller ell cannot keep F at the center below 2 ell.
    const double arms = grid_size_bound(d, c.alpha);
    const double n = static_cast<double>(horizon) * arms;
    c.ell = s.ell * std::sqrt(n * std::log(n / delta));
    c.eta = s.eta;
    c.tau_max = epoch_cap(d, horizon);
    c.thin_threshold = 1.0 / root;
    c.strict_grid = s.alpha >= 1.0;
    return c;
}

double LearnerConfig::alpha_hypothesis() const {
    return 2.0 * (gamma_ext + 1.0) * beta * beta * std::sqrt(static_cast<double>(dim));
}

void LearnerConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw SpecError("learner." + field + ": " + why);
    };
    const double dd = static_cast<double>(dim);
    if (dim < 1) {
        fail("dim", "must be at least 1");
    }
    if (horizon < 1) {
        fail("horizon", "must be at least 1");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        fail("delta", "must lie in (0,1)");
    }
    if (!(ell > 0.0) || !std::isfinite(ell)) {
        fail("ell", "must be positive and finite");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        fail("alpha", "must be positive and finite");
    }
    if (!(beta > dd) || !std::isfinite(beta)) {
        fail("beta", "must exceed the dimension");
    }
    if (!(gamma_ext > 1.0) || !std::isfinite(gamma_ext)) {
        fail("gamma_ext", "must exceed 1");
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        fail("eta", "must be positive and finite");
    }
    if (grid_cap < 1) {
        fail("grid_cap", "must be at least 1");
    }
    if (!(thin_threshold >= 0.0)) {
        fail("thin_threshold", "must be nonnegative");
    }
    if (!(eta_exp >= 0.0) || !std::isfinite(eta_exp)) {
        fail("eta_exp", "must be nonnegative and finite");
    }
    if (lce_interval < 1) {
        fail("lce_interval", "must be at least 1");
    }
    if (preset == Preset::Practical && strict_grid &&
        alpha < alpha_hypothesis() * (1.0 - 1e-12)) {
        fail("alpha", "below 2 (gamma_ext + 1) beta^2 sqrt(d) = " +
                          std::to_string(alpha_hypothesis()) + " (set strict_grid false to allow)");
    }
}

nlohmann::json to_json(const LearnerConfig& c) {
    return {{"dim", c.dim},
            {"horizon", c.horizon},
            {"delta", c.delta},
            {"ell", c.ell},
            {"alpha", c.alpha},
            {"beta", c.beta},
            {"gamma_ext", c.gamma_ext},
            {"eta", c.eta},
            {"tau_max", c.tau_max},
            {"preset", to_string(c.preset)},
            {"grid_cap", c.grid_cap},
            {"thin_threshold", c.thin_threshold},
            {"eta_exp", c.eta_exp},
            {"lce_interval", c.lce_interval},
            {"h_max", c.h_max},
            {"strict_grid", c.strict_grid}};
}

LearnerConfig learner_from_json(const nlohmann::json& j) {
    LearnerConfig c;
    j.at("dim").get_to(c.dim);
    j.at("horizon").get_to(c.horizon);
    j.at("delta").get_to(c.delta);
    j.at("ell").get_to(c.ell);
    j.at("alpha").get_to(c.alpha);
    j.at("beta").get_to(c.beta);
    j.at("gamma_ext").get_to(c.gamma_ext);
    j.at("eta").get_to(c.eta);
    j.at("tau_max").get_to(c.tau_max);
    const auto preset = j.at("preset").get<std::string>();
    if (preset != "paper" && preset != "practical") {
        throw SpecError("learner.preset: expected paper or practical");
    }
    c.preset = preset == "paper" ? Preset::Paper : Preset::Practical;
    j.at("grid_cap").get_to(c.grid_cap);
    j.at("thin_threshold").get_to(c.thin_threshold);
    j.at("eta_exp").get_to(c.eta_exp);
    j.at("lce_interval").get_to(c.lce_interval);
    j.at("h_max").get_to(c.h_max);
    j.at("strict_grid").get_to(c.strict_grid);
    return c;
}

namespace {

void start_epoch(EpochState& s, ConvexBody body) {
    s.body = std::move(body);
    s.fit_body.emplace(s.body, s.base, s.config.beta);
    s.grid = build_grid(*s.fit_body, s.config.alpha, GridOptions{s.config.grid_cap});
    if (s.grid.size() == 0) {
        throw InvariantViolation("learner: empty grid");
    }
    s.bandit.emplace(s.grid.size(), s.config.delta, s.config.eta_exp);
    s.rounds.clear();
    s.current.reset();
    s.shift = 0.0;
    s.epoch_start = s.t + 1;
}

}  // namespace

EpochState learner_init(const ConvexBody& k, const LearnerConfig& config) {
    config.validate();
    if (k.dim() != config.dim) {
        throw StructuralError("learner_init: body dimension differs from config.dim");
    }
    EpochState s;
    s.config = config;
    s.base = k;
    start_epoch(s, k);
    return s;
}

Vec learner_act(EpochState& state, std::mt19937_64& rng) {
    if (state.awaiting_loss) {
        throw ContractViolation("learner_act: previous play has no loss yet");
    }
    state.last_arm = state.bandit->sample(rng);
    state.awaiting_loss = true;
    return state.grid.points[state.last_arm];
}

EpochSummary learner_summary(const EpochState& s, const std::string& end) {
    EpochSummary out;
    out.epoch = s.tau;
    out.generation = s.generation;
    out.first_round = s.epoch_start;
    out.last_round = s.rounds.empty() ? 0 : s.rounds.back();
    out.body = s.body;
    out.grid = s.grid.points;
    out.values = s.bandit->values();
    out.widths = s.bandit->widths();
    out.shift = s.shift;
    out.end = end;
    return out;
}

double restart_level(const ConvexBody& body, const std::vector<const LceModel*>& models) {
    const Eigen::Index d = body.dim();
    Eigen::Index rows = body.offsets().size();
    for (const auto* m : models) {
        rows += static_cast<Eigen::Index>(m->facets.size());
    }
    LpProblem lp;
    lp.objective = Vec::Zero(d + 1);
    lp.objective(d) = 1.0;
    lp.a_ub = Mat::Zero(rows, d + 1);
    lp.b_ub.resize(rows);
    const Eigen::Index m0 = body.offsets().size();
    lp.a_ub.topLeftCorner(m0, d) = body.normals();
    lp.b_ub.head(m0) = body.offsets();
    Eigen::Index r = m0;
    for (const auto* m : models) {
        for (const auto& f : m->facets) {
            // Unit rows: clamp-sized slopes otherwise swamp the simplex tolerances.
            const double n = std::hypot(f.a.norm(), 1.0);
            lp.a_ub.row(r).head(d) = f.a.transpose() / n;
            lp.a_ub(r, d) = -1.0 / n;
            lp.b_ub(r) = -f.b / n;
            ++r;
        }
    }
    lp.lower = Vec::Constant(d + 1, -kInf);
    lp.upper = Vec::Constant(d + 1, kInf);
    const auto res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) {
        throw NumericalFailure(std::string("restart_level: LP ") + to_string(res.status));
    }
    return res.value;
}

bool check_restart(const EpochState& state) {
    std::vector<const LceModel*> models;
    for (const auto& rec : state.history) {
        models.push_back(&rec.model);
    }
    if (state.current) {
        models.push_back(&*state.current);
    }
    if (models.empty()) {
        return false;
    }
    return restart_level(state.body, models) > state.config.ell / 4.0;
}

std::optional<MoveCandidate> decide_move(const ConvexBody& body, const Grid& grid,
                                         const LceModel& model, double beta, double ell) {
    const Ellipsoid& e = body.mvee();
    const double d = static_cast<double>(body.dim());
    const Ellipsoid inner = e.scaled(1.0 / (beta * d));
    std::vector<Vec> candidates{inner.center()};
    // A convex function attains its maximum over an ellipsoid at the support
    // point of one of its facets.
    for (const auto& f : model.facets) {
        const Vec q = inner.shape() * f.a;
        const double n = std::sqrt(std::max(0.0, f.a.dot(q)));
        if (n > 0.0) {
            candidates.push_back(inner.center() + q / n);
        }
    }
    for (const auto& g : grid.points) {
        if (minkowski_distance(e, g) <= 1.0 / beta + 1e-12) {
            candidates.push_back(g);
        }
    }
    MoveCandidate best{candidates.front(), eval_lce_unchecked(model, candidates.front())};
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double val = eval_lce_unchecked(model, candidates[i]);
        const double tie = 1e-12 * (1.0 + std::abs(best.value));
        if (val > best.value + tie ||
            (val >= best.value - tie && lex_less(candidates[i], best.point))) {
            best = {candidates[i], val};
        }
    }
    if (best.value >= ell) {
        return best;
    }
    return std::nullopt;
}

std::optional<MoveCandidate> decide_move(const EpochState& state) {
    if (!state.current) {
        return std::nullopt;
    }
    return decide_move(state.body, state.grid, *state.current, state.config.beta,
                       state.config.ell);
}

ShrinkResult shrink_set(const ConvexBody& k_tau, const Vec& x_tilde, const LceModel& model,
                        double ell, double thin_threshold) {
    if (eval_lce_unchecked(model, x_tilde) < ell * (1.0 - 1e-12)) {
        throw ContractViolation("shrink_set: envelope below ell at x_tilde");
    }
    ShrinkResult out;
    out.h = lce_subgradient(model, x_tilde);
    const double hn = out.h.norm();
    if (!(hn > 0.0)) {
        throw InvariantViolation("shrink_set: zero subgradient at a point above the level");
    }
    out.w = out.h.dot(x_tilde);
    const Ellipsoid& e = k_tau.mvee();
    out.center = e.center();
    const double hc = out.h.dot(out.center);
    // Distance from the center to the cut doubles and the center stays kept.
    out.z = hc <= out.w ? 2.0 * out.w - hc : 3.0 * hc - 2.0 * out.w;
    if (out.z < out.w - 1e-12 * (1.0 + std::abs(out.w)) || out.z < hc) {
        throw InvariantViolation("shrink_set: amplified cut violates its conditions");
    }

    // Frozen directions: inherited ones plus MVEE axes thinner than the threshold.
    std::vector<Vec> frozen;
    auto add_direction = [&frozen](Vec u) {
        for (const auto& f : frozen) {
            u -= f.dot(u) * f;
        }
        const double n = u.norm();
        if (n > 1e-9) {
            frozen.push_back(u / n);
        }
    };
    for (const auto& u : k_tau.frozen()) {
        add_direction(u);
    }
    for (Eigen::Index i = 0; i < e.axis_lengths().size(); ++i) {
        if (e.axis_lengths()(i) < thin_threshold) {
            add_direction(e.axes().col(i));
        }
    }
    out.applied_h = out.h;
    out.applied_z = out.z;
    for (const auto& u : frozen) {
        const double hu = out.applied_h.dot(u);
        out.applied_h -= hu * u;
        out.applied_z -= hu * u.dot(out.center);
    }
    if (out.applied_h.norm() <= 1e-12 * hn) {
        out.cut = false;
        out.body = k_tau.with_frozen(frozen);
        return out;
    }
    out.body = k_tau.cut(out.applied_h, out.applied_z).with_frozen(frozen);
    return out;
}

ObserveResult learner_observe(EpochState& s, double loss) {
    if (!s.awaiting_loss) {
        throw ContractViolation("learner_observe: no pending play");
    }
    s.bandit->update(s.last_arm, loss);
    s.awaiting_loss = false;
    ++s.t;
    s.rounds.push_back(s.t);

    const Vec& v = s.bandit->values();
    const Vec& sigma = s.bandit->widths();
    s.shift = (v - s.config.eta * sigma).minCoeff();

    ObserveResult out;
    out.shift = s.shift;
    if (s.rounds.size() % s.config.lce_interval == 0) {
        const Vec shifted = (v.array() - s.shift).cwiseMax(0.0).matrix();
        const Rdf rdf(s.grid.points, shifted, sigma);
        try {
            s.current = fit_lce(rdf, s.fit_body->polytope(), LceOptions{s.config.h_max});
            out.fitted = true;
        } catch (const InconsistentData&) {
            ++s.inconsistent_fits;
        }
    }
    if (!out.fitted) {
        return out;
    }
    if (check_restart(s)) {
        out.restart = true;
        out.closed = learner_summary(s, "restart");
        ++s.generation;
        s.history.clear();
        s.tau = 0;
        start_epoch(s, s.base);
        return out;
    }
    const auto move = decide_move(s);
    if (!move) {
        return out;
    }
    if (s.tau + 1 >= s.config.tau_max) {
        out.capped = true;
        ++s.cap_hits;
        return out;
    }
    auto cut = shrink_set(s.body, move->point, *s.current, s.config.ell, s.config.thin_threshold);
    if (!cut.cut) {
        out.capped = true;
        ++s.cap_hits;
        return out;
    }
    out.decide_move = true;
    out.closed = learner_summary(s, "move");
    ConvexBody next = cut.body;
    out.closed->cut = std::move(cut);
    s.history.push_back({s.tau, *s.current});
    ++s.tau;
    start_epoch(s, std::move(next));
    return out;
}

}  // namespace bco
