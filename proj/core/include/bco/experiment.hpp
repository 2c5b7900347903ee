#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bco/audit.hpp"
#include "bco/game.hpp"
#include "bco/regret.hpp"

namespace bco {

/// One experiment document. Every block rejects unknown keys.
///
///   learner:   {preset, dim, delta, scales{ell,beta,gamma_ext,alpha,eta}, overrides{...}}
///   body:      {box: {lower, upper}} or {halfspaces: {normals, offsets}}
///   adversary: see adversary_from_json
///   horizon, seeds, output_dir, audit, audit_samples, oracle_resolution
struct ExperimentConfig {
    Preset preset = Preset::Practical;
    Eigen::Index dim = 1;
    double delta = 0.05;
    PracticalScales scales;
    nlohmann::json overrides = nlohmann::json::object();
    ConvexBody body;
    AdversarySpec adversary;
    std::uint64_t horizon = 0;
    std::vector<std::uint64_t> seeds;
    std::string output_dir = "out";
    bool audit = false;
    std::size_t audit_samples = 100;
    std::size_t oracle_resolution = 200;

    /// Learner configuration for this horizon, with overrides applied and validated.
    [[nodiscard]] LearnerConfig learner() const;
};

/// Throws SpecError naming the offending field.
[[nodiscard]] ExperimentConfig parse_experiment(const nlohmann::json& j);

/// Reads and parses a file. JSON syntax errors are reported as SpecError
/// with "path:line:column".
[[nodiscard]] ExperimentConfig load_experiment(const std::string& path);

/// Canonical JSON of everything that determines a seed's game (seeds and
/// output_dir excluded).
[[nodiscard]] nlohmann::json canonical_json(const ExperimentConfig& c);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
[[nodiscard]] std::string config_hash(const ExperimentConfig& c);

/// Shortest decimal that round-trips to the same double.
[[nodiscard]] std::string format_number(double x);

/// `t,epoch,restart_gen,x0..x{d-1},loss,shift,decide_move,restart`, preceded by
/// a `# config <hash> seed <seed>` line.
void write_rounds_csv(std::ostream& out, const GameRecord& record, const std::string& hash);

/// `t,cum_loss,cum_best,regret`; the last row's regret equals report.regret exactly.
void write_regret_csv(std::ostream& out, const RegretReport& report, std::uint64_t seed,
                      const std::string& hash);

struct SeedOutcome {
    std::uint64_t seed = 0;
    std::string dir;
    RegretReport regret;
    std::optional<AuditReport> audit;
    bool partial = false;
    std::string error;
};

struct ExperimentResult {
    std::vector<SeedOutcome> seeds;
    nlohmann::json summary;
    bool failed = false;  // some game aborted; its outputs are flagged partial
};

using LogFn = std::function<void(const std::string&)>;

/// Plays every seed, writing per seed `record.jsonl`, `rounds.csv`, `regret.csv`
/// (and `audit.json` when enabled) under output_dir/seed-<s>/, then
/// output_dir/summary.json. Throws IoError when a file cannot be written.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config,
                                              const LogFn& log = {});

}  // namespace bco
