#pragma once

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "bco/game.hpp"

namespace bco {

/// One probe where a per-epoch bound fails. slack = bound side minus value side,
/// negative exactly when violated.
struct AuditViolation {
    std::size_t epoch = 0;  // index into GameRecord::epochs
    std::string bound;      // "center", "inside", "outside", "volume" or "epoch_cap"
    Vec point;
    double value = 0.0;
    double limit = 0.0;
    double slack = 0.0;
};

struct EpochAudit {
    std::size_t epoch = 0;
    std::size_t generation = 0;
    std::uint64_t first_round = 0;
    std::uint64_t last_round = 0;
    std::string end;
    std::size_t probes_inside = 0;
    std::size_t probes_outside = 0;
    double center_value = 0.0;  // shifted F at the MVEE center of K_tau
    double min_inside = 0.0;    // smallest shifted F over inside probes
    double min_outside_ratio = 0.0;  // smallest F / gamma(x, K_tau) over outside probes
    double volume_ratio = 0.0;  // vol MVEE(K_{tau+1}) / vol MVEE(K_tau); 0 without a cut
    std::size_t arms = 0;
    std::size_t arms_covered = 0;  // v - sigma <= true cumulative loss <= v + sigma at epoch end
};

/// Ground-truth checks of a record, using the stored loss functions:
///   center:  F(x_tau) <= 2 ell
///   inside:  F(x) >= -2 ell / gamma_ext             for x in K and K_tau
///   outside: F(x) >= -2 gamma(x, K_tau) ell / gamma_ext  for x in K outside K_tau
/// where F = sum of f_t over the epoch's rounds minus the epoch's final shift.
/// Moves must shrink the MVEE volume by 1 - 1/(8d) and no generation may exceed
/// the epoch cap.
struct AuditReport {
    std::vector<EpochAudit> epochs;
    std::vector<AuditViolation> violations;
    std::size_t samples = 0;
    std::size_t max_epochs_per_generation = 0;
    std::size_t epoch_cap = 0;
    std::size_t moves = 0;
    std::size_t restarts = 0;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::size_t count(const std::string& bound) const;
};

/// Probes per epoch: the MVEE center, every grid point, `samples` uniform points of
/// K_tau and `samples` of K minus K_tau. Sampling is seeded from the record's seed.
[[nodiscard]] AuditReport lemma_audit(const GameRecord& record, std::size_t samples = 100);

/// Volume bound used by the audit.
[[nodiscard]] double volume_decrease_bound(Eigen::Index d);

[[nodiscard]] nlohmann::json to_json(const AuditReport& a);

}  // namespace bco
