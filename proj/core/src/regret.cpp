#include "bco/regret.hpp"

#include <algorithm>
#include <cmath>

#include "bco/lp.hpp"

namespace bco {

namespace {

struct Probe {
    Vec point;
    double loss = kInf;
};

class Search {
  public:
    explicit Search(const GameRecord& rec) : rec_(rec) {}

    /// Evaluates x if it lies in K; keeps the running minimum.
    double probe(const Vec& x) {
        if (!rec_.body.contains(x)) {
            return kInf;
        }
        const double f = fixed_point_loss(rec_, x);
        if (f < best_.loss || (f == best_.loss && lex_before(x, best_.point))) {
            best_ = {x, f};
        }
        return f;
    }

    [[nodiscard]] const Probe& best() const { return best_; }

  private:
    static bool lex_before(const Vec& a, const Vec& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                            b.data() + b.size());
    }

    const GameRecord& rec_;
    Probe best_;
};

void golden_section(Search& s, double lo, double hi, int steps) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = s.probe(Vec::Constant(1, c));
    double fd = s.probe(Vec::Constant(1, d));
    for (int i = 0; i < steps; ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = s.probe(Vec::Constant(1, c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = s.probe(Vec::Constant(1, d));
        }
    }
}

void pattern_search(Search& s, double step, int halvings) {
    const Eigen::Index d = s.best().point.size();
    for (int i = 0; i < halvings; ++i) {
        bool moved = true;
        while (moved) {
            moved = false;
            const Probe start = s.best();
            for (Eigen::Index k = 0; k < d && !moved; ++k) {
                for (const double sign : {1.0, -1.0}) {
                    Vec x = start.point;
                    x(k) += sign * step;
                    if (s.probe(x) < start.loss) {
                        moved = true;
                        break;
                    }
                }
            }
        }
        step /= 2.0;
    }
}

}  // namespace

double fixed_point_loss(const GameRecord& record, const Vec& x) {
    double sum = 0.0;
    for (const auto& r : record.rounds) {
        sum += r.f(x);
    }
    return sum;
}

RegretReport compute_regret(const GameRecord& record, std::size_t resolution) {
    RegretReport rep;
    rep.resolution = std::max<std::size_t>(resolution, 1);
    const Eigen::Index d = record.body.dim();
    const auto [lo, hi] = record.body.extent();
    const Vec cell = (hi - lo) / static_cast<double>(rep.resolution);

    Search search(record);
    // Mesh in lexicographic order; the empirical Lipschitz constant comes from
    // differences along each axis between neighbouring mesh points in K.
    const auto per_axis = rep.resolution + 1;
    std::size_t total = 1;
    for (Eigen::Index k = 0; k < d; ++k) {
        total *= per_axis;
    }
    std::vector<double> values(total, kInf);
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rem = n;
        Vec x(d);
        for (Eigen::Index k = d - 1; k >= 0; --k) {
            idx[static_cast<std::size_t>(k)] = rem % per_axis;
            rem /= per_axis;
            x(k) = idx[static_cast<std::size_t>(k)] == rep.resolution
                       ? hi(k)
                       : lo(k) + static_cast<double>(idx[static_cast<std::size_t>(k)]) * cell(k);
        }
        values[n] = search.probe(x);
    }
    double lip = 0.0;
    std::size_t stride = 1;
    for (Eigen::Index k = d - 1; k >= 0; --k) {
        for (std::size_t n = 0; n < total; ++n) {
            if ((n / stride) % per_axis + 1 < per_axis && std::isfinite(values[n]) &&
                std::isfinite(values[n + stride]) && cell(k) > 0.0) {
                lip = std::max(lip, std::abs(values[n + stride] - values[n]) / cell(k));
            }
        }
        stride *= per_axis;
    }
    rep.mesh_gap = lip * cell.norm() / 2.0;

    if (!std::isfinite(search.best().loss)) {
        // No mesh point inside K: fall back on the MVEE center.
        search.probe(record.body.mvee().center());
    }
    if (d == 1) {
        const double c = search.best().point(0);
        golden_section(search, std::max(lo(0), c - cell(0)), std::min(hi(0), c + cell(0)), 20);
    } else {
        pattern_search(search, cell.minCoeff() / 2.0, 20);
    }

    rep.best_point = search.best().point;
    const auto t = record.rounds.size();
    rep.cum_loss.reserve(t);
    rep.cum_best.reserve(t);
    rep.curve.reserve(t);
    double cl = 0.0;
    double cb = 0.0;
    for (const auto& r : record.rounds) {
        cl += r.loss;
        cb += r.f(rep.best_point);
        rep.cum_loss.push_back(cl);
        rep.cum_best.push_back(cb);
        rep.curve.push_back(cl - cb);
    }
    rep.learner_loss = cl;
    rep.best_loss = cb;
    rep.regret = cl - cb;

    if (!record.epochs.empty() && !record.epochs.front().grid.empty()) {
        rep.grid_best_loss = kInf;
        for (const auto& g : record.epochs.front().grid) {
            const double f = fixed_point_loss(record, g);
            if (f < rep.grid_best_loss) {
                rep.grid_best_loss = f;
                rep.grid_best_point = g;
            }
        }
        rep.grid_regret = rep.learner_loss - rep.grid_best_loss;
    }
    return rep;
}

nlohmann::json to_json(const RegretReport& r) {
    auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    nlohmann::json j{{"learner_loss", r.learner_loss},
                     {"best_loss", r.best_loss},
                     {"best_point", vec(r.best_point)},
                     {"regret", r.regret},
                     {"rounds", r.curve.size()},
                     {"resolution", r.resolution},
                     {"mesh_gap", r.mesh_gap}};
    if (r.grid_best_point.size() > 0) {
        j["grid_best_loss"] = r.grid_best_loss;
        j["grid_best_point"] = vec(r.grid_best_point);
        j["grid_regret"] = r.grid_regret;
    }
    return j;
}

}  // namespace bco
