#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bco/convex_body.hpp"
#include "bco/exp3p.hpp"
#include "bco/grid.hpp"
#include "bco/lce.hpp"

namespace bco {

enum class Preset { Paper, Practical };

[[nodiscard]] const char* to_string(Preset p);

/// Multipliers that turn the asymptotic schedule into one that acts at desk scale.
struct PracticalScales {
    double ell = 2.0;        // ell = ell * sqrt(T K ln(T K / delta)), K the grid size bound
    double beta = 4.0;       // beta = beta * d
    double gamma_ext = 2.0;  // used as is
    double alpha = 0.075;    // alpha = alpha * 2 (gamma_ext + 1) beta^2 sqrt(d)
    double eta = 1.0;        // blow-up factor, used as is
};

/// All logarithms are natural.
struct LearnerConfig {
    Eigen::Index dim = 1;
    std::uint64_t horizon = 1000;
    double delta = 0.05;
    double ell = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma_ext = 0.0;
    double eta = 0.0;
    std::size_t tau_max = 0;
    Preset preset = Preset::Practical;
    std::size_t grid_cap = 1'000'000;
    double thin_threshold = 0.0;  // MVEE semi-axes below this are frozen
    double eta_exp = 1.0;
    std::size_t lce_interval = 1;  // refit the envelope every this many rounds
    double h_max = 0.0;            // slope clamp, <= 0 selects the data-driven default
    bool strict_grid = true;       // enforce alpha >= 2 (gamma_ext + 1) beta^2 sqrt(d)
                                   // (practical() clears it when its alpha scale is below 1)

    [[nodiscard]] static LearnerConfig paper(Eigen::Index d, std::uint64_t horizon, double delta);
    [[nodiscard]] static LearnerConfig practical(Eigen::Index d, std::uint64_t horizon,
                                                 double delta, const PracticalScales& s = {});

    /// Smallest alpha satisfying the grid-property hypothesis.
    [[nodiscard]] double alpha_hypothesis() const;

    /// Throws SpecError naming the offending field.
    void validate() const;
};

[[nodiscard]] nlohmann::json to_json(const LearnerConfig& c);
/// Inverse of to_json; every field is required.
[[nodiscard]] LearnerConfig learner_from_json(const nlohmann::json& j);

/// Envelope of a finished or ongoing epoch of the current restart generation.
struct LceRecord {
    std::size_t epoch = 0;
    LceModel model;
};

/// The state of the epoch loop.
struct EpochState {
    LearnerConfig config;
    ConvexBody base;  // K
    ConvexBody body;  // K_tau
    std::optional<ScaledIntersection> fit_body;  // beta K_tau intersected with K
    Grid grid;
    std::optional<Exp3State> bandit;
    std::size_t tau = 0;
    std::size_t generation = 0;
    std::size_t cap_hits = 0;
    std::size_t inconsistent_fits = 0;
    std::uint64_t t = 0;                  // rounds observed so far
    std::uint64_t epoch_start = 1;        // first round of the epoch
    std::vector<std::uint64_t> rounds;    // Gamma_tau
    double shift = 0.0;                   // min over the grid of v - eta sigma, unshifted
    std::optional<LceModel> current;      // F_LCE of the ongoing epoch
    std::vector<LceRecord> history;       // finished epochs of this generation
    std::size_t last_arm = 0;
    bool awaiting_loss = false;
};

/// Separating cut produced when an epoch ends with DecideMove.
struct ShrinkResult {
    ConvexBody body;
    Vec h;             // subgradient at x_tilde
    double w = 0.0;    // <h, x_tilde>
    double z = 0.0;    // amplified offset, before thin-direction projection
    Vec center;        // MVEE center of the input body
    Vec applied_h;     // normal actually cut with (h without its frozen part)
    double applied_z = 0.0;
    bool cut = true;   // false when every direction is frozen
};

/// Everything needed to audit an epoch after the fact.
struct EpochSummary {
    std::size_t epoch = 0;
    std::size_t generation = 0;
    std::uint64_t first_round = 0;
    std::uint64_t last_round = 0;  // 0 when the epoch saw no rounds
    ConvexBody body;
    std::vector<Vec> grid;
    Vec values;   // unshifted EXP3.P estimates at the last round
    Vec widths;
    double shift = 0.0;
    std::string end;  // "move", "restart" or "horizon"
    std::optional<ShrinkResult> cut;
};

struct MoveCandidate {
    Vec point;
    double value = 0.0;
};

struct ObserveResult {
    double shift = 0.0;
    bool fitted = false;
    bool decide_move = false;
    bool restart = false;
    bool capped = false;  // DecideMove fired at the epoch cap and was ignored
    std::optional<EpochSummary> closed;
};

/// Epoch 0 over K with grid(beta K cap K). Validates the configuration.
[[nodiscard]] EpochState learner_init(const ConvexBody& k, const LearnerConfig& config);

/// Samples the next grid point; the matching loss must be passed to learner_observe.
[[nodiscard]] Vec learner_act(EpochState& state, std::mt19937_64& rng);

/// Feeds the loss of the last played point and runs shift, fit, RESTART and DecideMove.
ObserveResult learner_observe(EpochState& state, double loss);

/// Summary of the ongoing epoch, for closing a record at the horizon.
[[nodiscard]] EpochSummary learner_summary(const EpochState& state, const std::string& end);

/// min over x in `body` of max over models of F_LCE(x), by one LP in (x, s).
[[nodiscard]] double restart_level(const ConvexBody& body, const std::vector<const LceModel*>& models);

/// True iff every point of K_tau has some envelope of this generation above ell / 4.
[[nodiscard]] bool check_restart(const EpochState& state);

/// Maximizer of F_LCE over the ellipsoid K_tau / beta and the grid points inside it,
/// returned when its value reaches ell. Ties go to the lexicographically smaller point.
[[nodiscard]] std::optional<MoveCandidate> decide_move(const ConvexBody& body, const Grid& grid,
                                                       const LceModel& model, double beta,
                                                       double ell);
[[nodiscard]] std::optional<MoveCandidate> decide_move(const EpochState& state);

/// Cuts K_tau by the amplified separating hyperplane through x_tilde.
/// Throws InvariantViolation when the subgradient at x_tilde vanishes.
[[nodiscard]] ShrinkResult shrink_set(const ConvexBody& k_tau, const Vec& x_tilde,
                                      const LceModel& model, double ell, double thin_threshold);

}  // namespace bco
