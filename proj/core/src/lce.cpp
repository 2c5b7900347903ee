#include "bco/lce.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bco/error.hpp"
#include "bco/lp.hpp"
#include "polygon.hpp"

namespace bco {

namespace {

// Continuous piecewise-linear function on [x.front(), x.back()].
struct Pwl {
    std::vector<double> x;
    std::vector<double> y;

    [[nodiscard]] double operator()(double q) const {
        if (q <= x.front()) {
            return y.front();
        }
        if (q >= x.back()) {
            return y.back();
        }
        const auto it = std::upper_bound(x.begin(), x.end(), q);
        const auto j = static_cast<std::size_t>(it - x.begin());
        const double t = (q - x[j - 1]) / (x[j] - x[j - 1]);
        return y[j - 1] + t * (y[j] - y[j - 1]);
    }
};

Pwl drop_collinear(const Pwl& f) {
    Pwl out;
    for (std::size_t j = 0; j < f.x.size(); ++j) {
        if (out.x.size() >= 2) {
            // Drop the last kept point when it lies on the chord to the current one.
            const std::size_t n = out.x.size();
            const double x0 = out.x[n - 2];
            const double y0 = out.y[n - 2];
            const double x1 = out.x[n - 1];
            const double y1 = out.y[n - 1];
            const double pred = y0 + (f.y[j] - y0) * (x1 - x0) / (f.x[j] - x0);
            const double scale = 1.0 + std::abs(y0) + std::abs(y1) + std::abs(f.y[j]);
            if (std::abs(pred - y1) <= 1e-13 * scale) {
                out.x.pop_back();
                out.y.pop_back();
            }
        }
        out.x.push_back(f.x[j]);
        out.y.push_back(f.y[j]);
    }
    return out;
}

Pwl pointwise_max(const Pwl& f, const Pwl& g) {
    std::vector<double> xs;
    xs.reserve(f.x.size() + g.x.size());
    std::merge(f.x.begin(), f.x.end(), g.x.begin(), g.x.end(), std::back_inserter(xs));
    const double span = xs.back() - xs.front();
    std::vector<double> uniq;
    for (const double q : xs) {
        if (uniq.empty() || q - uniq.back() > 1e-14 * (1.0 + span)) {
            uniq.push_back(q);
        }
    }
    Pwl out;
    double prev_diff = 0.0;
    for (std::size_t j = 0; j < uniq.size(); ++j) {
        const double fy = f(uniq[j]);
        const double gy = g(uniq[j]);
        const double diff = fy - gy;
        if (j > 0 && ((prev_diff > 0.0 && diff < 0.0) || (prev_diff < 0.0 && diff > 0.0))) {
            const double xc = uniq[j - 1] + (uniq[j] - uniq[j - 1]) * prev_diff / (prev_diff - diff);
            if (xc > out.x.back() && xc < uniq[j]) {
                out.x.push_back(xc);
                out.y.push_back(std::max(f(xc), g(xc)));
            }
        }
        out.x.push_back(uniq[j]);
        out.y.push_back(std::max(fy, gy));
        prev_diff = diff;
    }
    return drop_collinear(out);
}

std::vector<EpigraphVertex> vertices_1d(const Rdf& rdf, double lo, double hi, double h_max,
                                        std::size_t& dropped) {
    const auto slopes = slope_intervals(rdf, h_max);
    const auto& pts = rdf.points();
    Pwl acc;
    bool any = false;
    for (std::size_t i = 0; i < rdf.size(); ++i) {
        if (!slopes[i]) {
            ++dropped;
            continue;
        }
        const auto [s_lo, s_hi] = *slopes[i];
        const auto ii = static_cast<Eigen::Index>(i);
        const double c = rdf.values()(ii) - rdf.widths()(ii);
        const double xi = pts[i](0);
        auto tent = [&](double q) { return c + (q >= xi ? s_lo : s_hi) * (q - xi); };
        Pwl f;
        f.x.push_back(lo);
        f.y.push_back(tent(lo));
        if (xi > lo && xi < hi) {
            f.x.push_back(xi);
            f.y.push_back(c);
        }
        f.x.push_back(hi);
        f.y.push_back(tent(hi));
        acc = any ? pointwise_max(acc, f) : f;
        any = true;
    }
    if (!any) {
        throw InconsistentData("fit_lce: no index admits a consistent slope");
    }
    std::vector<EpigraphVertex> out;
    for (std::size_t j = 0; j < acc.x.size(); ++j) {
        out.push_back({Vec::Constant(1, acc.x[j]), acc.y[j]});
    }
    return out;
}

struct Affine2 {
    detail::Pt2 a;
    double b;
    [[nodiscard]] double operator()(const detail::Pt2& p) const { return a.dot(p) + b; }
};

struct Cell {
    detail::Poly2 poly;
    Affine2 g;
};

// Restricts `poly` to { u(x) <= w(x) }.
detail::Poly2 clip_below(const detail::Poly2& poly, const Affine2& u, const Affine2& w, double tol) {
    const detail::Pt2 n = u.a - w.a;
    const double c = w.b - u.b;
    const double len = n.norm();
    if (len <= 1e-300) {
        return c >= -tol ? poly : detail::Poly2{};
    }
    return detail::clip(poly, n / len, c / len, tol);
}

std::vector<EpigraphVertex> vertices_2d(const Rdf& rdf, const ConvexBody& domain, double h_max,
                                        std::size_t& dropped) {
    const auto slopes = slope_polygons(rdf, h_max);
    detail::Poly2 dom;
    for (const auto& v : domain.vertices()) {
        dom.emplace_back(v(0), v(1));
    }
    dom = detail::ccw_order(dom);
    const auto [elo, ehi] = domain.extent();
    const double scale = (ehi - elo).cwiseAbs().maxCoeff();
    const double tol = 1e-12 * scale;
    const double area_tol = 1e-18 * scale * scale;

    std::vector<Cell> cells;
    std::vector<Cell> next;
    std::vector<Affine2> pieces;
    bool first = true;
    for (std::size_t i = 0; i < rdf.size(); ++i) {
        if (!slopes[i]) {
            ++dropped;
            continue;
        }
        const auto ii = static_cast<Eigen::Index>(i);
        const double c = rdf.values()(ii) - rdf.widths()(ii);
        const detail::Pt2 xi = rdf.points()[i].head<2>();
        pieces.clear();
        for (const auto& h : *slopes[i]) {
            bool dup = false;
            for (const auto& p : pieces) {
                if ((p.a - h).cwiseAbs().maxCoeff() <= 1e-12 * h_max) {
                    dup = true;
                }
            }
            if (!dup) {
                pieces.push_back({h, c - h.dot(xi)});
            }
        }
        // Min-diagram of f^i restricted to a polygon.
        auto split_min = [&](const detail::Poly2& region, std::vector<Cell>& out) {
            for (std::size_t v = 0; v < pieces.size(); ++v) {
                detail::Poly2 poly = region;
                for (std::size_t w = 0; w < pieces.size() && poly.size() >= 3; ++w) {
                    if (w != v) {
                        poly = clip_below(poly, pieces[v], pieces[w], tol);
                    }
                }
                if (poly.size() >= 3 && std::abs(detail::area(poly)) > area_tol) {
                    out.push_back({std::move(poly), pieces[v]});
                }
            }
        };
        if (first) {
            split_min(dom, cells);
            first = false;
            continue;
        }
        next.clear();
        for (auto& cell : cells) {
            // f^i - g is concave: nonnegative at every vertex means everywhere.
            bool all_above = true;
            bool some_piece_below = false;
            for (const auto& piece : pieces) {
                bool below_everywhere = true;
                for (const auto& p : cell.poly) {
                    const double diff = piece(p) - cell.g(p);
                    if (diff < 0.0) {
                        all_above = false;
                    }
                    if (diff >= -tol) {
                        below_everywhere = false;
                    }
                }
                if (below_everywhere) {
                    some_piece_below = true;
                    break;
                }
            }
            if (some_piece_below) {
                next.push_back(std::move(cell));
                continue;
            }
            if (all_above) {
                split_min(cell.poly, next);
                continue;
            }
            detail::Poly2 win = cell.poly;
            for (const auto& piece : pieces) {
                if (win.size() < 3) {
                    break;
                }
                win = clip_below(win, cell.g, piece, tol);
            }
            if (win.size() < 3 || std::abs(detail::area(win)) <= area_tol) {
                next.push_back(std::move(cell));
                continue;
            }
            split_min(win, next);
            detail::Poly2 rest = cell.poly;
            for (const auto& piece : pieces) {
                if (rest.size() < 3) {
                    break;
                }
                detail::Poly2 part = clip_below(rest, piece, cell.g, tol);
                if (part.size() >= 3 && std::abs(detail::area(part)) > area_tol) {
                    next.push_back({std::move(part), cell.g});
                }
                rest = clip_below(rest, cell.g, piece, tol);
            }
        }
        std::swap(cells, next);
    }
    if (first) {
        throw InconsistentData("fit_lce: no index admits a consistent slope");
    }
    // Cell labels can be wrong on slivers left by the clip tolerance, so each
    // vertex is valued by evaluating the extension directly.
    auto direct = [&](const detail::Pt2& p) {
        double best = -kInf;
        for (std::size_t i = 0; i < rdf.size(); ++i) {
            if (!slopes[i]) {
                continue;
            }
            const auto ii = static_cast<Eigen::Index>(i);
            const detail::Pt2 dx = p - rdf.points()[i].head<2>();
            double lo = kInf;
            for (const auto& h : *slopes[i]) {
                lo = std::min(lo, h.dot(dx));
            }
            best = std::max(best, rdf.values()(ii) - rdf.widths()(ii) + lo);
        }
        return best;
    };
    std::vector<EpigraphVertex> out;
    for (const auto& cell : cells) {
        for (const auto& p : cell.poly) {
            out.push_back({Vec(p), direct(p)});
        }
    }
    // The clamp produces features of width ~ spacing / 1e6 around data points.
    // Vertices closer than `radius` are merged into one carrying the smallest
    // value, which keeps every merged point below the graph.
    const double spacing = rdf.min_spacing();
    const double radius = 1e-5 * (spacing > 0.0 ? spacing : scale);
    std::sort(out.begin(), out.end(), [](const EpigraphVertex& u, const EpigraphVertex& w) {
        return lex_less(u.point, w.point);
    });
    std::vector<EpigraphVertex> merged;
    for (auto& v : out) {
        bool absorbed = false;
        for (std::size_t k = merged.size(); k-- > 0;) {
            if (v.point(0) - merged[k].point(0) > radius) {
                break;
            }
            if (std::abs(v.point(1) - merged[k].point(1)) <= radius) {
                merged[k].value = std::min(merged[k].value, v.value);
                absorbed = true;
                break;
            }
        }
        if (!absorbed) {
            merged.push_back(std::move(v));
        }
    }
    return merged;
}

// Number of vertices at which the maximizing index uses a clamped slope.
std::size_t count_clamped(const Rdf& rdf, const std::vector<EpigraphVertex>& verts, double h_max) {
    const Eigen::Index d = rdf.dim();
    const double edge = h_max * (1.0 - 1e-9);
    std::size_t count = 0;
    if (d == 1) {
        const auto slopes = slope_intervals(rdf, h_max);
        for (const auto& v : verts) {
            double best = -kInf;
            double slope = 0.0;
            for (std::size_t i = 0; i < rdf.size(); ++i) {
                if (!slopes[i]) continue;
                const auto ii = static_cast<Eigen::Index>(i);
                const double xi = rdf.points()[i](0);
                const double s = v.point(0) >= xi ? slopes[i]->first : slopes[i]->second;
                const double val = rdf.values()(ii) - rdf.widths()(ii) + s * (v.point(0) - xi);
                if (val > best) {
                    best = val;
                    slope = v.point(0) == xi ? 0.0 : s;
                }
            }
            count += std::abs(slope) >= edge ? 1 : 0;
        }
    } else if (d == 2) {
        const auto polys = slope_polygons(rdf, h_max);
        for (const auto& v : verts) {
            double best = -kInf;
            bool clamped = false;
            for (std::size_t i = 0; i < rdf.size(); ++i) {
                if (!polys[i]) continue;
                const auto ii = static_cast<Eigen::Index>(i);
                const Vec dx = v.point - rdf.points()[i];
                double inner = kInf;
                bool hit = false;
                for (const auto& h : *polys[i]) {
                    const double val = h.dot(dx);
                    if (val < inner) {
                        inner = val;
                        hit = h.cwiseAbs().maxCoeff() >= edge && dx.norm() > 0.0;
                    }
                }
                const double val = rdf.values()(ii) - rdf.widths()(ii) + inner;
                if (val > best) {
                    best = val;
                    clamped = hit;
                }
            }
            count += clamped ? 1 : 0;
        }
    }
    return count;
}

std::vector<Vec> sample_domain(const ConvexBody& domain, std::size_t count) {
    std::vector<Vec> out(domain.vertices());
    const auto [lo, hi] = domain.extent();
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t guard = 0;
    while (out.size() < count + domain.vertices().size() && guard < 100 * count) {
        ++guard;
        Vec x(lo.size());
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            x(k) = lo(k) + unit(rng) * (hi(k) - lo(k));
        }
        if (domain.contains(x)) {
            out.push_back(std::move(x));
        }
    }
    return out;
}

std::vector<Facet> supporting_facets(const std::vector<EpigraphVertex>& verts,
                                     const std::vector<Vec>& queries) {
    const auto d = verts.front().point.size();
    const auto n = static_cast<Eigen::Index>(verts.size());
    LpProblem lp;
    lp.a_ub.resize(n, d + 1);
    lp.b_ub.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        lp.a_ub.row(m).head(d) = verts[static_cast<std::size_t>(m)].point.transpose();
        lp.a_ub(m, d) = 1.0;
        lp.b_ub(m) = verts[static_cast<std::size_t>(m)].value;
    }
    lp.lower = Vec::Constant(d + 1, -kInf);
    lp.upper = Vec::Constant(d + 1, kInf);
    std::vector<Facet> out;
    for (const auto& q : queries) {
        lp.objective.resize(d + 1);
        lp.objective.head(d) = -q;
        lp.objective(d) = -1.0;
        const auto res = solve_lp(lp);
        if (res.status != LpStatus::Optimal) {
            continue;
        }
        Facet f{res.x.head(d), res.x(d)};
        bool dup = false;
        for (const auto& g : out) {
            if ((g.a - f.a).cwiseAbs().maxCoeff() <= 1e-9 && std::abs(g.b - f.b) <= 1e-9) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            out.push_back(std::move(f));
        }
    }
    return out;
}

}  // namespace

std::vector<EpigraphVertex> ftilde_min_vertices(const Rdf& rdf, const ConvexBody& domain,
                                                double h_max, std::size_t* dropped) {
    std::size_t drop = 0;
    std::vector<EpigraphVertex> out;
    if (rdf.dim() == 1) {
        const auto [lo, hi] = domain.extent();
        out = vertices_1d(rdf, lo(0), hi(0), h_max, drop);
    } else if (rdf.dim() == 2) {
        out = vertices_2d(rdf, domain, h_max, drop);
    } else {
        throw Unsupported("ftilde_min_vertices: exact mode needs d <= 2");
    }
    if (dropped != nullptr) {
        *dropped = drop;
    }
    return out;
}

LceModel fit_lce(const Rdf& rdf, const ConvexBody& fit_body, const LceOptions& options) {
    return fit_lce_on_domain(rdf, bounding_box(fit_body.mvee()), options);
}

LceModel fit_lce_on_domain(const Rdf& rdf, const ConvexBody& domain, const LceOptions& options) {
    if (rdf.size() == 0) {
        throw StructuralError("fit_lce: empty rdf");
    }
    if (rdf.dim() != domain.dim()) {
        throw StructuralError("fit_lce: rdf and domain dimensions differ");
    }
    LceModel model;
    model.domain = domain;
    model.h_max = options.h_max > 0.0 ? options.h_max : default_h_max(rdf);
    const auto d = rdf.dim();
    if (d <= 2) {
        model.vertices = ftilde_min_vertices(rdf, domain, model.h_max, &model.dropped);
        model.facets = d == 1 ? [&] {
            std::vector<double> x;
            std::vector<double> t;
            for (const auto& v : model.vertices) {
                x.push_back(v.point(0));
                t.push_back(v.value);
            }
            return lower_hull_1d(x, t);
        }()
                              : [&] {
                                    std::vector<Vec> p;
                                    std::vector<double> t;
                                    for (const auto& v : model.vertices) {
                                        p.push_back(v.point);
                                        t.push_back(v.value);
                                    }
                                    return lower_hull_2d(p, t);
                                }();
        model.clamped_vertices = count_clamped(rdf, model.vertices, model.h_max);
        return model;
    }
    if (!options.allow_approximate) {
        throw Unsupported("fit_lce: exact mode needs d <= 2");
    }
    model.approximate = true;
    auto samples = sample_domain(domain, options.approximate_samples);
    for (const auto& p : rdf.points()) {
        samples.push_back(p);
    }
    for (const auto& s : samples) {
        const auto ev = eval_ftilde_min(rdf, s, model.h_max);
        model.vertices.push_back({s, ev.value});
        model.clamped_vertices += ev.clamped ? 1 : 0;
        model.dropped = ev.dropped;
    }
    model.facets = supporting_facets(model.vertices, samples);
    return model;
}

double eval_lce_unchecked(const LceModel& model, const Vec& x) {
    double best = -kInf;
    for (const auto& f : model.facets) {
        best = std::max(best, f(x));
    }
    return best;
}

double eval_lce(const LceModel& model, const Vec& x) {
    if (x.size() != model.dim() || !model.domain.contains(x, 1e-7)) {
        throw DomainError("eval_lce: point outside the model domain");
    }
    return eval_lce_unchecked(model, x);
}

std::size_t active_facet(const LceModel& model, const Vec& x) {
    std::size_t arg = 0;
    double best = -kInf;
    for (std::size_t f = 0; f < model.facets.size(); ++f) {
        const double val = model.facets[f](x);
        if (val > best) {
            best = val;
            arg = f;
        }
    }
    return arg;
}

Vec lce_subgradient(const LceModel& model, const Vec& x) {
    return model.facets[active_facet(model, x)].a;
}

double brute_slce_oracle(const std::vector<Vec>& points, const std::vector<double>& values,
                         const Vec& x) {
    if (points.size() != values.size() || points.empty()) {
        throw StructuralError("brute_slce_oracle: need matching, nonempty samples");
    }
    const auto d = x.size();
    const auto n = static_cast<Eigen::Index>(points.size());
    LpProblem lp;
    lp.objective = Eigen::Map<const Vec>(values.data(), n);
    lp.a_eq.resize(d + 1, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        lp.a_eq.col(m).head(d) = points[static_cast<std::size_t>(m)];
        lp.a_eq(d, m) = 1.0;
    }
    lp.b_eq.resize(d + 1);
    lp.b_eq.head(d) = x;
    lp.b_eq(d) = 1.0;
    lp.a_ub.resize(0, n);
    lp.b_ub.resize(0);
    const auto res = solve_lp(lp);
    if (res.status == LpStatus::Infeasible) {
        throw DomainError("brute_slce_oracle: point outside the sample hull");
    }
    if (res.status != LpStatus::Optimal) {
        throw NumericalFailure("brute_slce_oracle: LP did not reach optimality");
    }
    return res.value;
}

nlohmann::json to_json(const LceModel& model) {
    auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    nlohmann::json j;
    j["dim"] = model.dim();
    nlohmann::json normals = nlohmann::json::array();
    for (Eigen::Index r = 0; r < model.domain.normals().rows(); ++r) {
        normals.push_back(vec(model.domain.normals().row(r).transpose()));
    }
    j["domain"] = {{"normals", normals}, {"offsets", vec(model.domain.offsets())}};
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : model.vertices) {
        verts.push_back({{"point", vec(v.point)}, {"value", v.value}});
    }
    j["vertices"] = verts;
    nlohmann::json facets = nlohmann::json::array();
    for (const auto& f : model.facets) {
        facets.push_back({{"a", vec(f.a)}, {"b", f.b}});
    }
    j["facets"] = facets;
    j["h_max"] = model.h_max;
    j["clamped_vertices"] = model.clamped_vertices;
    j["dropped"] = model.dropped;
    j["approximate"] = model.approximate;
    return j;
}

}  // namespace bco
