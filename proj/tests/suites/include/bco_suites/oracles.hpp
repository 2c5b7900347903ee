#pragma once

#include <functional>
#include <vector>

#include "bco/linalg.hpp"

// Reference computations that share no code path with the library.
namespace bco::oracle {

struct SymmetricEigen {
    Vec values;   // ascending
    Mat vectors;  // column i pairs with values(i)
};

/// Cyclic Jacobi rotations until the off-diagonal mass falls below tol * ||A||_F.
[[nodiscard]] SymmetricEigen jacobi_eigen(const Mat& a, double tol = 1e-14);

/// E = { x : (x - c)^T Q^{-1} (x - c) <= 1 }, inverse and determinant taken from Jacobi.
struct Ellipsoid {
    Vec center;
    Mat shape;
    Mat inverse;
    double log_det = 0.0;

    Ellipsoid(Vec c, Mat q);
    [[nodiscard]] Eigen::Index dim() const { return center.size(); }
    /// (x - c)^T Q^{-1} (x - c), the squared gauge.
    [[nodiscard]] double gauge2(const Vec& x) const;
    [[nodiscard]] double volume() const;
    /// d * sqrt(gauge2), the Minkowski distance when this is the MVEE of a body.
    [[nodiscard]] double minkowski(const Vec& x) const;
};

struct LogDetResult {
    Ellipsoid ellipsoid;
    int iterations = 0;
    double gap = 0.0;  // max_i g_i / (d + 1) - 1 at exit
};

/// D-optimal design by the multiplicative weight update u_i <- u_i g_i / (d + 1),
/// g_i = q_i^T M(u)^{-1} q_i with q_i = (p_i, 1). The ellipsoid is inflated to
/// contain every point.
[[nodiscard]] LogDetResult logdet_mvee(const std::vector<Vec>& points, double gap_tol = 1e-9,
                                       int max_iterations = 2'000'000);

/// Volume of the unit ball by the Gamma-free recursion V_d = 2 pi V_{d-2} / d.
[[nodiscard]] double unit_ball_volume(Eigen::Index d);

/// (f(a) + f(b)) / 2 - f((a + b) / 2); negative means a convexity violation.
[[nodiscard]] double midpoint_slack(const std::function<double(const Vec&)>& f, const Vec& a,
                                    const Vec& b);

}  // namespace bco::oracle
