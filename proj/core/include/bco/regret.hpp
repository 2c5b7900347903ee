#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <vector>

#include "bco/game.hpp"

namespace bco {

/// Regret of a played game against the best fixed point of K in hindsight.
///
/// regret == learner_loss - best_loss exactly, and curve[t-1] == cum_loss[t-1] - cum_best[t-1]
/// where cum_best accumulates the losses of best_point. The sums run in round order,
/// so the last curve entry equals `regret` bit for bit.
struct RegretReport {
    double learner_loss = 0.0;
    double best_loss = 0.0;
    Vec best_point;
    double regret = 0.0;
    std::vector<double> cum_loss;
    std::vector<double> cum_best;
    std::vector<double> curve;
    std::size_t resolution = 0;
    double mesh_gap = 0.0;  // error bar on best_loss: empirical Lipschitz constant times half a mesh diagonal

    // Best fixed point restricted to the first epoch's grid.
    double grid_best_loss = 0.0;
    Vec grid_best_point;
    double grid_regret = 0.0;
};

/// Total loss of the fixed point x over the record's rounds, summed in round order.
[[nodiscard]] double fixed_point_loss(const GameRecord& record, const Vec& x);

/// Uniform mesh over the extent of K with `resolution` cells per axis, refined by
/// 20 golden-section steps around the best cell (d = 1) or a halving pattern
/// search (d >= 2). best_loss never exceeds the loss of any probed point.
[[nodiscard]] RegretReport compute_regret(const GameRecord& record, std::size_t resolution);

[[nodiscard]] nlohmann::json to_json(const RegretReport& r);

}  // namespace bco
