#include "bco/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "bco/error.hpp"

namespace bco {

SymEigen sym_eigen(const Mat& q) {
    if (q.rows() != q.cols()) {
        throw StructuralError("sym_eigen: matrix is not square");
    }
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw StructuralError("sym_eigen: matrix is not symmetric");
    }
    const Mat sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("sym_eigen: eigen-decomposition did not converge");
    }
    const auto n = q.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    // Eigen returns ascending order; stable sort keeps ties deterministic.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });
    SymEigen out{Vec(n), Mat(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto src = order[static_cast<std::size_t>(i)];
        out.values(i) = solver.eigenvalues()(src);
        out.vectors.col(i) = solver.eigenvectors().col(src);
    }
    return out;
}

Mat to_columns(const std::vector<Vec>& points) {
    if (points.empty()) {
        return Mat(0, 0);
    }
    Mat out(points.front().size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = points[i];
    }
    return out;
}

bool lex_less(const Vec& a, const Vec& b, double tol) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i) - tol) {
            return true;
        }
        if (a(i) > b(i) + tol) {
            return false;
        }
    }
    return false;
}

}  // namespace bco
