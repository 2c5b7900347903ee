#pragma once

#include <Eigen/Dense>
#include <vector>

namespace bco {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Eigen-decomposition of a symmetric matrix, eigenvalues sorted descending.
struct SymEigen {
    Vec values;
    Mat vectors;  // column i pairs with values(i)
};

/// Throws StructuralError when `q` is not square or not symmetric within
/// 1e-10 * max(1, |q|_max).
[[nodiscard]] SymEigen sym_eigen(const Mat& q);

/// Copies a point list into a d x n matrix (one point per column).
[[nodiscard]] Mat to_columns(const std::vector<Vec>& points);

/// Lexicographic strict ordering with tolerance `tol` on each coordinate.
[[nodiscard]] bool lex_less(const Vec& a, const Vec& b, double tol = 0.0);

}  // namespace bco
