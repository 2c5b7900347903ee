#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bco/convex_body.hpp"

namespace bco {

/// The linear map A with A(E'/d) = B_alpha(0), E' the MVEE of the source body.
///
/// A(x) = alpha * Lambda^{-1/2} V^T x where Q_{E'}/d^2 = V Lambda V^T. There is
/// no translation, so the lattice A^{-1}(Z^d) does not depend on the center.
class GridLattice {
  public:
    GridLattice() = default;
    GridLattice(const Ellipsoid& source_mvee, double alpha);

    [[nodiscard]] Eigen::Index dim() const { return forward_.rows(); }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] const Mat& forward() const { return forward_; }
    [[nodiscard]] const Mat& inverse() const { return inverse_; }

    [[nodiscard]] Vec to_lattice(const Vec& x) const { return forward_ * x; }
    [[nodiscard]] Vec from_lattice(const Vec& z) const { return inverse_ * z; }

  private:
    Mat forward_;
    Mat inverse_;
    double alpha_ = 0.0;
};

struct GridOptions {
    std::size_t max_points = 1'000'000;
};

/// Output of the grid construction: A^{-1}(Z^d) intersected with the source body.
///
/// Points are ordered lexicographically by lattice coordinates; `coords[i]`
/// holds the integer preimage of `points[i]`.
struct Grid {
    GridLattice lattice;
    std::vector<Vec> points;
    std::vector<Eigen::VectorXi> coords;

    [[nodiscard]] std::size_t size() const { return points.size(); }
    [[nodiscard]] double alpha() const { return lattice.alpha(); }
};

using MembershipFn = std::function<bool(const Vec&)>;

/// Grid over a body given by an exact membership predicate and a polytope
/// containing it. The transform uses `outer_mvee`. Throws GridTooLarge when the
/// enumeration would exceed `options.max_points`.
[[nodiscard]] Grid build_grid(const ConvexBody& outer, const Ellipsoid& outer_mvee,
                              const MembershipFn& member, double alpha,
                              const GridOptions& options = {});

/// Grid of a polytope (membership tolerance 1e-9).
[[nodiscard]] Grid build_grid(const ConvexBody& body, double alpha, const GridOptions& options = {});

/// Grid of beta*K' intersected with K.
[[nodiscard]] Grid build_grid(const ScaledIntersection& source, double alpha,
                              const GridOptions& options = {});

/// Upper bound on the grid size of a body whose MVEE is mapped to B_{d alpha}.
[[nodiscard]] double grid_size_bound(Eigen::Index d, double alpha);

}  // namespace bco
