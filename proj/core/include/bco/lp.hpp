#pragma once

#include <limits>
#include <string>

#include "bco/linalg.hpp"

namespace bco {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize c^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper.
///
/// Empty `lower`/`upper` mean x >= 0 with no upper bound. Use -kInf / kInf
/// for unbounded sides.
struct LpProblem {
    Vec objective;
    Mat a_ub;
    Vec b_ub;
    Mat a_eq;
    Vec b_eq;
    Vec lower;
    Vec upper;

    [[nodiscard]] Eigen::Index num_vars() const { return objective.size(); }
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

[[nodiscard]] const char* to_string(LpStatus s);

/// Outcome of solve_lp. Certificates are filled according to `status`:
///
/// * Optimal: `x`, `value`, `dual_ub` (>= 0, one per A_ub row), `dual_eq`.
/// * Unbounded: `x` is a feasible point and `ray` a direction with
///   A_ub ray <= 0, A_eq ray = 0, compatible with the bounds, c^T ray < 0.
/// * Infeasible: `farkas_ub` (>= 0) and `farkas_eq` such that with
///   g = A_ub^T farkas_ub + A_eq^T farkas_eq the minimum of g^T x over the
///   variable box exceeds b_ub^T farkas_ub + b_eq^T farkas_eq.
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Vec x;
    double value = 0.0;
    Vec dual_ub;
    Vec dual_eq;
    Vec ray;
    Vec farkas_ub;
    Vec farkas_eq;
    int iterations = 0;
};

struct LpOptions {
    double feasibility_tol = 1e-9;
    double pivot_tol = 1e-10;
    int max_iterations = 0;  // 0 selects 50 * (rows + cols) + 1000
};

/// Dense two-phase simplex with Bland's anti-cycling rule.
///
/// Throws StructuralError on dimension mismatches and NumericalFailure when
/// the iteration cap is exceeded.
[[nodiscard]] LpResult solve_lp(const LpProblem& problem, const LpOptions& options = {});

/// Largest violation of the problem's constraints and bounds at `x`.
[[nodiscard]] double lp_primal_residual(const LpProblem& problem, const Vec& x);

/// Margin by which a Farkas certificate proves infeasibility (positive when valid).
[[nodiscard]] double farkas_margin(const LpProblem& problem, const Vec& farkas_ub,
                                   const Vec& farkas_eq);

}  // namespace bco
