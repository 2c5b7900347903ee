#include "bco/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "bco/error.hpp"

namespace bco {

std::vector<Facet> lower_hull_1d(const std::vector<double>& x, const std::vector<double>& t) {
    if (x.size() != t.size() || x.empty()) {
        throw StructuralError("lower_hull_1d: need matching, nonempty inputs");
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && t[a] < t[b]);
    });
    std::vector<std::array<double, 2>> pts;
    for (const auto i : order) {
        if (!pts.empty() && pts.back()[0] == x[i]) {
            continue;  // same abscissa, larger value
        }
        pts.push_back({x[i], t[i]});
    }
    std::vector<std::array<double, 2>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            const double lhs = (a[0] - o[0]) * (p[1] - o[1]);
            const double rhs = (a[1] - o[1]) * (p[0] - o[0]);
            const double tol = 1e-12 * (std::abs(lhs) + std::abs(rhs));
            if (lhs - rhs <= tol) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(p);
    }
    std::vector<Facet> out;
    if (hull.size() == 1) {
        out.push_back({Vec::Zero(1), hull[0][1]});
        return out;
    }
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const double slope = (hull[i + 1][1] - hull[i][1]) / (hull[i + 1][0] - hull[i][0]);
        out.push_back({Vec::Constant(1, slope), hull[i][1] - slope * hull[i][0]});
    }
    return out;
}

namespace {

using P3 = Eigen::Vector3d;

struct Face {
    std::array<int, 3> v;
    P3 n;
    double c;
    bool alive;
};

Face make_face(const std::vector<P3>& pts, int a, int b, int c) {
    Face f{{a, b, c}, P3::Zero(), 0.0, true};
    const P3 n = (pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)])
                     .cross(pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
    const double len = n.norm();
    f.n = len > 0.0 ? P3(n / len) : n;
    f.c = f.n.dot(pts[static_cast<std::size_t>(a)]);
    return f;
}

std::uint64_t edge_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

std::vector<Facet> lower_hull_2d(const std::vector<Vec>& p, const std::vector<double>& t) {
    if (p.size() != t.size() || p.size() < 3) {
        throw StructuralError("lower_hull_2d: need at least three matching points");
    }
    // Normalize to the unit cube; lower-hull structure is invariant under
    // positive axis scalings.
    Eigen::Vector2d lo = p.front().head<2>();
    Eigen::Vector2d hi = lo;
    double tlo = t.front();
    double thi = t.front();
    for (std::size_t i = 0; i < p.size(); ++i) {
        lo = lo.cwiseMin(p[i].head<2>());
        hi = hi.cwiseMax(p[i].head<2>());
        tlo = std::min(tlo, t[i]);
        thi = std::max(thi, t[i]);
    }
    const Eigen::Vector2d span = (hi - lo).cwiseMax(1e-300);
    const double tspan = thi - tlo > 0.0 ? thi - tlo : 1.0;

    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<P3> raw;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Eigen::Vector2d q = (p[i].head<2>() - lo).cwiseQuotient(span);
        raw.emplace_back(q.x(), q.y(), (t[i] - tlo) / tspan);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t u, std::size_t w) {
        return raw[u].x() < raw[w].x() || (raw[u].x() == raw[w].x() && raw[u].y() < raw[w].y());
    });
    // Merge abscissae closer than kMerge, keeping the smallest value.
    constexpr double kMerge = 1e-9;
    std::vector<P3> pts;
    std::vector<std::size_t> source;
    for (const auto i : idx) {
        bool merged = false;
        for (std::size_t k = pts.size(); k-- > 0;) {
            if (raw[i].x() - pts[k].x() > kMerge) {
                break;
            }
            if (std::abs(raw[i].y() - pts[k].y()) <= kMerge) {
                if (raw[i].z() < pts[k].z()) {
                    pts[k].z() = raw[i].z();
                    source[k] = i;
                }
                merged = true;
                break;
            }
        }
        if (!merged) {
            pts.push_back(raw[i]);
            source.push_back(i);
        }
    }
    const int n = static_cast<int>(pts.size());
    if (n < 3) {
        throw StructuralError("lower_hull_2d: abscissae do not span the plane");
    }

    // Initial tetrahedron: two far-apart points, the point farthest from their
    // line, and an apex above the centroid.
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (const auto& q : pts) {
        centroid += q.head<2>();
    }
    centroid /= n;
    const int a = 0;
    int b = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double dist = (pts[static_cast<std::size_t>(i)].head<2>() - pts[0].head<2>()).squaredNorm();
        if (dist > best) {
            best = dist;
            b = i;
        }
    }
    int c = -1;
    best = 0.0;
    const Eigen::Vector2d ab = pts[static_cast<std::size_t>(b)].head<2>() - pts[0].head<2>();
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d ai = pts[static_cast<std::size_t>(i)].head<2>() - pts[0].head<2>();
        const double cr = std::abs(ab.x() * ai.y() - ab.y() * ai.x());
        if (cr > best) {
            best = cr;
            c = i;
        }
    }
    if (c < 0 || best <= 1e-12) {
        throw StructuralError("lower_hull_2d: abscissae are collinear");
    }
    const int apex = n;
    pts.emplace_back(centroid.x(), centroid.y(), 4.0);

    std::vector<Face> faces;
    std::unordered_map<std::uint64_t, std::size_t> owner;  // directed edge -> face
    auto add_face = [&](const Face& f) {
        for (int e = 0; e < 3; ++e) {
            owner[edge_key(f.v[static_cast<std::size_t>(e)], f.v[static_cast<std::size_t>((e + 1) % 3)])] =
                faces.size();
        }
        faces.push_back(f);
    };
    const P3 inner = 0.25 * (pts[static_cast<std::size_t>(a)] + pts[static_cast<std::size_t>(b)] +
                             pts[static_cast<std::size_t>(c)] + pts[static_cast<std::size_t>(apex)]);
    auto add_oriented = [&](int u, int v, int w) {
        Face f = make_face(pts, u, v, w);
        if (f.n.dot(inner) > f.c) {
            f = make_face(pts, u, w, v);
        }
        add_face(f);
    };
    add_oriented(a, b, c);
    add_oriented(a, b, apex);
    add_oriented(b, c, apex);
    add_oriented(c, a, apex);

    constexpr double kEps = 1e-11;
    std::vector<std::size_t> region;
    std::vector<char> in_region;
    std::vector<std::pair<int, int>> horizon;
    for (int i = 0; i < n; ++i) {
        if (i == a || i == b || i == c) {
            continue;
        }
        const P3& q = pts[static_cast<std::size_t>(i)];
        std::size_t seed = faces.size();
        double far = kEps;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (faces[f].alive) {
                const double dist = faces[f].n.dot(q) - faces[f].c;
                if (dist > far) {
                    far = dist;
                    seed = f;
                }
            }
        }
        if (seed == faces.size()) {
            continue;
        }
        // Connected visible region grown from the most visible face.
        in_region.assign(faces.size(), 0);
        region.assign(1, seed);
        in_region[seed] = 1;
        for (std::size_t r = 0; r < region.size(); ++r) {
            const auto v = faces[region[r]].v;
            for (int e = 0; e < 3; ++e) {
                const auto it = owner.find(edge_key(v[static_cast<std::size_t>((e + 1) % 3)], v[static_cast<std::size_t>(e)]));
                if (it == owner.end()) {
                    continue;
                }
                const std::size_t g = it->second;
                if (!in_region[g] && faces[g].alive && faces[g].n.dot(q) - faces[g].c > kEps) {
                    in_region[g] = 1;
                    region.push_back(g);
                }
            }
        }
        horizon.clear();
        for (const auto f : region) {
            const auto v = faces[f].v;
            for (int e = 0; e < 3; ++e) {
                const int u = v[static_cast<std::size_t>(e)];
                const int w = v[static_cast<std::size_t>((e + 1) % 3)];
                const auto it = owner.find(edge_key(w, u));
                if (it == owner.end() || !in_region[it->second]) {
                    horizon.emplace_back(u, w);
                }
            }
        }
        for (const auto f : region) {
            faces[f].alive = false;
            const auto v = faces[f].v;
            for (int e = 0; e < 3; ++e) {
                const auto key = edge_key(v[static_cast<std::size_t>(e)], v[static_cast<std::size_t>((e + 1) % 3)]);
                const auto it = owner.find(key);
                if (it != owner.end() && it->second == f) {
                    owner.erase(it);
                }
            }
        }
        for (const auto& [u, w] : horizon) {
            add_face(make_face(pts, u, w, i));
        }
        if (faces.size() > 50 * static_cast<std::size_t>(n) + 1000) {
            throw NumericalFailure("lower_hull_2d: hull construction diverged");
        }
    }

    std::vector<Facet> out;
    for (const auto& f : faces) {
        if (!f.alive || f.n.z() >= -1e-9 ||
            std::find(f.v.begin(), f.v.end(), apex) != f.v.end()) {
            continue;
        }
        Eigen::Matrix3d m;
        Eigen::Vector3d rhs;
        for (int r = 0; r < 3; ++r) {
            const auto s = source[static_cast<std::size_t>(f.v[static_cast<std::size_t>(r)])];
            m(r, 0) = p[s](0);
            m(r, 1) = p[s](1);
            m(r, 2) = 1.0;
            rhs(r) = t[s];
        }
        const Eigen::Vector3d sol = m.fullPivLu().solve(rhs);
        if (!sol.allFinite()) {
            continue;
        }
        Facet facet{sol.head<2>(), sol(2)};
        out.push_back(std::move(facet));
    }
    // Discard planes that cut below some input point; they can only come from
    // near-degenerate triangles.
    const double slack = 1e-9 * (1.0 + std::abs(tlo) + std::abs(thi));
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](const Facet& f) {
                                 for (std::size_t i = 0; i < p.size(); ++i) {
                                     if (f(p[i]) > t[i] + slack) {
                                         return true;
                                     }
                                 }
                                 return false;
                             }),
              out.end());
    // Merge coplanar triangles.
    std::sort(out.begin(), out.end(), [](const Facet& u, const Facet& w) {
        if (u.a(0) != w.a(0)) return u.a(0) < w.a(0);
        if (u.a(1) != w.a(1)) return u.a(1) < w.a(1);
        return u.b < w.b;
    });
    std::vector<Facet> merged;
    for (auto& f : out) {
        if (!merged.empty()) {
            const auto& g = merged.back();
            const double scale = 1.0 + g.a.cwiseAbs().maxCoeff() + std::abs(g.b);
            if ((f.a - g.a).cwiseAbs().maxCoeff() <= 1e-9 * scale && std::abs(f.b - g.b) <= 1e-9 * scale) {
                continue;
            }
        }
        merged.push_back(std::move(f));
    }
    return merged;
}

}  // namespace bco
