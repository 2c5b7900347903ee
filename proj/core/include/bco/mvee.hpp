#pragma once

#include <vector>

#include "bco/ellipsoid.hpp"

namespace bco {

struct MveeOptions {
    double tol = 1e-7;
    int max_iterations = 100000;
};

/// Minimum-volume enclosing ellipsoid of a point set.
///
/// Khachiyan's barycentric coordinate ascent with Todd-Yildirim away steps.
/// The returned ellipsoid contains every input point exactly (the shape is
/// inflated by the final containment ratio) and its volume is within a factor
/// (1 + tol)^{d/2} of optimal. Throws DegenerateBody when the points are
/// affinely dependent and NumericalFailure on hitting the iteration cap.
[[nodiscard]] Ellipsoid mvee(const std::vector<Vec>& points, const MveeOptions& options = {});

/// Affine rank of a point set (relative tolerance 1e-10).
[[nodiscard]] int affine_rank(const std::vector<Vec>& points);

}  // namespace bco
