#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bco/linalg.hpp"

namespace bco {

/// Random discrete function (X, v, sigma): a value band [v - sigma, v + sigma]
/// attached to each point of X.
class Rdf {
  public:
    Rdf() = default;
    /// Throws StructuralError on size mismatch, mixed dimensions or sigma < 0.
    Rdf(std::vector<Vec> points, Vec values, Vec widths);

    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] Eigen::Index dim() const { return points_.empty() ? 0 : points_.front().size(); }
    [[nodiscard]] const std::vector<Vec>& points() const { return points_; }
    [[nodiscard]] const Vec& values() const { return values_; }
    [[nodiscard]] const Vec& widths() const { return widths_; }

    /// max(v + sigma) - min(v - sigma).
    [[nodiscard]] double band_range() const;
    /// Smallest distance between two distinct points (0 for a single point).
    [[nodiscard]] double min_spacing() const;

  private:
    std::vector<Vec> points_;
    Vec values_;
    Vec widths_;
};

/// Default clamp on the slope vectors h: 1e6 * band range / min spacing.
/// Falls back to a unit range or unit spacing when either is zero.
[[nodiscard]] double default_h_max(const Rdf& rdf);

struct ExtensionValue {
    double value = 0.0;
    std::size_t argmax = 0;   // index i attaining the max of f^i
    bool clamped = false;     // a clamp bound is active in that index's LP
    std::size_t dropped = 0;  // indices whose slope set is empty
};

/// Minimal extension at x: max over i of
///   (v_i - sigma_i) + min { <h, x - x_i> : <h, x_j - x_i> <= v_j + sigma_j - (v_i - sigma_i), |h|_inf <= H }.
/// Solved with one LP per index. `h_max <= 0` selects default_h_max.
/// Throws InconsistentData when every index is infeasible.
[[nodiscard]] ExtensionValue eval_ftilde_min(const Rdf& rdf, const Vec& x, double h_max = 0.0);

/// Slope set of index i in d = 1: the interval [lo, hi], or nullopt when empty.
[[nodiscard]] std::vector<std::optional<std::pair<double, double>>> slope_intervals(
    const Rdf& rdf, double h_max);

/// Slope set of index i in d = 2 as the vertex list of a convex polygon
/// (possibly a segment or a point), counter-clockwise, or nullopt when empty.
[[nodiscard]] std::vector<std::optional<std::vector<Eigen::Vector2d>>> slope_polygons(
    const Rdf& rdf, double h_max);

}  // namespace bco
