#include "bco/grid.hpp"

#include <cmath>
#include <limits>

#include "bco/error.hpp"
#include "bco/lp.hpp"

namespace bco {

GridLattice::GridLattice(const Ellipsoid& source_mvee, double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0)) {
        throw StructuralError("GridLattice: alpha must be positive");
    }
    const auto d = static_cast<double>(source_mvee.dim());
    // Semi-axes of E = E'/d are lengths/d; A sends each to length alpha.
    const Vec gain = (alpha * d) * source_mvee.axis_lengths().cwiseInverse();
    forward_ = gain.asDiagonal() * source_mvee.axes().transpose();
    inverse_ = source_mvee.axes() * gain.cwiseInverse().asDiagonal();
}

double grid_size_bound(Eigen::Index d, double alpha) {
    const double side = 2.0 * static_cast<double>(d) * alpha;
    // In d = 1 the two endpoints of [-alpha, alpha] are both lattice points.
    return d == 1 ? side + 1.0 : std::pow(side, static_cast<double>(d));
}

Grid build_grid(const ConvexBody& outer, const Ellipsoid& outer_mvee, const MembershipFn& member,
                double alpha, const GridOptions& options) {
    const Eigen::Index d = outer.dim();
    Grid grid;
    grid.lattice = GridLattice(outer_mvee, alpha);

    Eigen::VectorXi lo = Eigen::VectorXi::Constant(d, std::numeric_limits<int>::max());
    Eigen::VectorXi hi = Eigen::VectorXi::Constant(d, std::numeric_limits<int>::min());
    double box_count = 1.0;
    {
        Vec zlo = Vec::Constant(d, kInf);
        Vec zhi = Vec::Constant(d, -kInf);
        for (const auto& v : outer.vertices()) {
            const Vec z = grid.lattice.to_lattice(v);
            zlo = zlo.cwiseMin(z);
            zhi = zhi.cwiseMax(z);
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            const double a = std::floor(zlo(k) - 1e-9);
            const double b = std::ceil(zhi(k) + 1e-9);
            box_count *= b - a + 1.0;
            if (box_count > 64.0 * static_cast<double>(options.max_points) || std::abs(a) > 1e9 ||
                std::abs(b) > 1e9) {
                throw GridTooLarge("build_grid: lattice box too large", box_count);
            }
            lo(k) = static_cast<int>(a);
            hi(k) = static_cast<int>(b);
        }
    }

    Eigen::VectorXi z = lo;
    Vec zd(d);
    while (true) {
        zd = z.cast<double>();
        const Vec x = grid.lattice.from_lattice(zd);
        if (member(x)) {
            if (grid.points.size() >= options.max_points) {
                throw GridTooLarge("build_grid: point cap exceeded", box_count);
            }
            grid.points.push_back(x);
            grid.coords.push_back(z);
        }
        // Odometer increment, last coordinate fastest: lexicographic order.
        Eigen::Index k = d - 1;
        while (k >= 0 && z(k) == hi(k)) {
            z(k) = lo(k);
            --k;
        }
        if (k < 0) {
            break;
        }
        ++z(k);
    }
    return grid;
}

Grid build_grid(const ConvexBody& body, double alpha, const GridOptions& options) {
    return build_grid(
        body, body.mvee(), [&body](const Vec& x) { return body.contains(x); }, alpha, options);
}

Grid build_grid(const ScaledIntersection& source, double alpha, const GridOptions& options) {
    const auto& poly = source.polytope();
    return build_grid(
        poly, poly.mvee(), [&source](const Vec& x) { return source.contains(x); }, alpha, options);
}

}  // namespace bco
