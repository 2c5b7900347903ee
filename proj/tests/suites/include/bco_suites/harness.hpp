#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bco/game.hpp"

namespace bco::suites {

/// Everything run_game needs.
struct HarnessRun {
    std::string name;
    ConvexBody body;
    LearnerConfig learner;
    AdversarySpec adversary;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 1;

    [[nodiscard]] GameRecord play() const;
};

/// Valley center sweeping 0.2 -> 0.8 over [0, 1] in four phases, Practical defaults.
[[nodiscard]] HarnessRun moving_valley_1d(std::uint64_t horizon, std::uint64_t seed);

/// Runs whose small regret budget makes DecideMove fire, so epochs change.
/// d = 1: the sweep above with ell scale 0.03.
/// d = 2: unit square, valley (0.1, 0.1) -> (0.3, 0.3), a 49-point grid, refits every 25 rounds.
[[nodiscard]] HarnessRun transition_run_1d(std::uint64_t seed = 1);
[[nodiscard]] HarnessRun transition_run_2d(std::uint64_t seed = 1);

/// The d = 1 audit matrix: MovingValley, ObliviousLinear and Quadratic, each at `seeds`.
[[nodiscard]] std::vector<HarnessRun> audit_matrix(std::uint64_t horizon,
                                                   const std::vector<std::uint64_t>& seeds);

}  // namespace bco::suites
