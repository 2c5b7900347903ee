#pragma once

#include <vector>

#include "bco/linalg.hpp"

namespace bco {

/// Affine minorant t >= <a, x> + b.
struct Facet {
    Vec a;
    double b = 0.0;

    [[nodiscard]] double operator()(const Vec& x) const { return a.dot(x) + b; }
};

/// Lower convex hull of {(x_m, t_m)} in R^2 as the affine pieces of its edges,
/// ordered by increasing slope. Monotone chain; collinear points are dropped.
/// A single distinct abscissa yields one horizontal facet.
[[nodiscard]] std::vector<Facet> lower_hull_1d(const std::vector<double>& x,
                                               const std::vector<double>& t);

/// Lower convex hull of {(p_m, t_m)} in R^3, p_m in R^2, as the planes of its
/// downward-facing facets (coplanar triangles merged). Requires the p_m to
/// span the plane. Incremental hull with an apex point placed above the data.
[[nodiscard]] std::vector<Facet> lower_hull_2d(const std::vector<Vec>& p,
                                               const std::vector<double>& t);

}  // namespace bco
