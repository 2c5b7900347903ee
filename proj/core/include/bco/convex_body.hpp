#pragma once

#include <optional>
#include <vector>

#include "bco/ellipsoid.hpp"
#include "bco/mvee.hpp"

namespace bco {

/// Vertices of { x : <h_i, x> <= b_i }, d <= 3, sorted lexicographically and
/// deduplicated within 1e-8. Throws Unsupported for d > 3.
[[nodiscard]] std::vector<Vec> polytope_vertices(const Mat& normals, const Vec& offsets);

/// Bounded, full-dimensional polytope { x : <h_i, x> <= b_i } with eagerly
/// computed vertex list and MVEE.
///
/// Frozen directions are unit vectors along which the learner no longer cuts
/// (the body's MVEE axis there fell below the thinness threshold).
class ConvexBody {
  public:
    ConvexBody() = default;

    /// Throws StructuralError for an unbounded or empty body and DegenerateBody
    /// when it is not full-dimensional.
    static ConvexBody from_halfspaces(Mat normals, Vec offsets, const MveeOptions& options = {});
    static ConvexBody box(const Vec& lower, const Vec& upper);

    [[nodiscard]] Eigen::Index dim() const { return offsets_.size() ? normals_.cols() : 0; }
    [[nodiscard]] const Mat& normals() const { return normals_; }
    [[nodiscard]] const Vec& offsets() const { return offsets_; }
    [[nodiscard]] const std::vector<Vec>& vertices() const { return vertices_; }
    [[nodiscard]] const Ellipsoid& mvee() const { return mvee_; }
    [[nodiscard]] const std::vector<Vec>& frozen() const { return frozen_; }

    [[nodiscard]] bool contains(const Vec& x, double tol = 1e-9) const;
    /// Largest halfspace violation at x (<= 0 inside).
    [[nodiscard]] double violation(const Vec& x) const;

    /// Body intersected with { x : <h, x> <= z }.
    [[nodiscard]] ConvexBody cut(const Vec& h, double z) const;
    [[nodiscard]] ConvexBody with_frozen(std::vector<Vec> frozen) const;

    /// Axis-aligned bounding box of the vertex set.
    [[nodiscard]] std::pair<Vec, Vec> extent() const;

  private:
    Mat normals_;
    Vec offsets_;
    std::vector<Vec> vertices_;
    Ellipsoid mvee_;
    std::vector<Vec> frozen_;
};

/// gamma(x, K) = d * ||x - x0||_E with E the MVEE of K and x0 its center.
/// Equals 1 on the boundary of E/d, so points outside K have gamma >= 1.
[[nodiscard]] double minkowski_distance(const ConvexBody& body, const Vec& x);
[[nodiscard]] double minkowski_distance(const Ellipsoid& mvee, const Vec& x);

/// Box circumscribing `e` with faces orthogonal to its axes.
[[nodiscard]] ConvexBody bounding_box(const Ellipsoid& e);

/// beta*K' intersected with K, where beta*K' = { y : gamma(y, K') <= beta }.
///
/// Membership is exact. `polytope()` is an outer polyhedral approximation
/// (K's facets plus a circumscribed polytope of the ellipsoid) used wherever
/// vertices or an MVEE are needed.
class ScaledIntersection {
  public:
    ScaledIntersection(const ConvexBody& k_prime, const ConvexBody& k, double beta);

    [[nodiscard]] bool contains(const Vec& x, double tol = 1e-9) const;
    [[nodiscard]] const ConvexBody& polytope() const { return polytope_; }
    [[nodiscard]] const ConvexBody& outer() const { return outer_; }
    [[nodiscard]] const Ellipsoid& scaled_ellipsoid() const { return scaled_; }
    [[nodiscard]] double beta() const { return beta_; }

  private:
    ConvexBody outer_;
    Ellipsoid scaled_;
    double beta_;
    ConvexBody polytope_;
};

/// Number of facets used to circumscribe an ellipsoid in dimension d.
[[nodiscard]] int ellipsoid_facets(Eigen::Index d);

}  // namespace bco
