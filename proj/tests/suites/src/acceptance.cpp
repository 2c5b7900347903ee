#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "bco/audit.hpp"
#include "bco/exp3p.hpp"
#include "bco/grid.hpp"
#include "bco/lce.hpp"
#include "bco/mvee.hpp"
#include "bco/regret.hpp"
#include "bco_suites/harness.hpp"
#include "bco_suites/oracles.hpp"
#include "bco_suites/suites.hpp"

namespace bco::suites {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Args>
std::string cat(const Args&... args) {
    std::ostringstream os;
    os.precision(4);
    (os << ... << args);
    return os.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// ---------------------------------------------------------------- bandit

/// Row of losses for round t. Kind 0: Bernoulli arms; 1: the best arm switches
/// halfway; 2: adaptive, punishing the arm played most over the last 50 rounds.
Vec loss_row(int kind, std::uint64_t t, std::uint64_t horizon, std::mt19937_64& table,
             const std::vector<std::size_t>& recent) {
    const auto k = static_cast<Eigen::Index>(recent.size());
    Vec row(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double mean = 0.35 + 0.03 * static_cast<double>(j);
        switch (kind) {
            case 0:
                row(j) = uniform(table, 0.0, 1.0) < mean ? 1.0 : 0.0;
                break;
            case 1: {
                const bool first = 2 * t <= horizon;
                double m = 0.5;
                if (j == 0) {
                    m = first ? 0.2 : 0.8;
                } else if (j == 1) {
                    m = first ? 0.8 : 0.2;
                }
                row(j) = std::clamp(m + uniform(table, -0.1, 0.1), 0.0, 1.0);
                break;
            }
            default:
                row(j) = 0.4 + 0.02 * static_cast<double>(j);
        }
    }
    if (kind == 2) {
        const auto top = std::max_element(recent.begin(), recent.end()) - recent.begin();
        row(top) = 1.0;
    }
    return row;
}

void criterion_exp3_regret(CheckResult& r) {
    const std::size_t arms = 10;
    const std::uint64_t horizon = 10'000;
    const double delta = 0.01;
    const double tk = static_cast<double>(horizon * arms);
    const double bound = 8.0 * std::sqrt(tk * std::log(tk / delta));
    double worst = -kInf;
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int kind = static_cast<int>(seed % 3);
        std::mt19937_64 play(seed);
        std::mt19937_64 table(seed + 7919);
        Exp3State bandit(arms, delta);
        Vec cumulative = Vec::Zero(static_cast<Eigen::Index>(arms));
        std::vector<std::size_t> recent(arms, 0);
        std::vector<std::size_t> history;
        double learner = 0.0;
        for (std::uint64_t t = 1; t <= horizon; ++t) {
            const Vec row = loss_row(kind, t, horizon, table, recent);
            const auto a = bandit.sample(play);
            bandit.update(a, row(static_cast<Eigen::Index>(a)));
            learner += row(static_cast<Eigen::Index>(a));
            cumulative += row;
            history.push_back(a);
            ++recent[a];
            if (history.size() > 50) {
                --recent[history[history.size() - 51]];
            }
        }
        const double regret = learner - cumulative.minCoeff();
        worst = std::max(worst, regret);
        ok += regret <= bound ? 1 : 0;
    }
    r.pass = ok == 20;
    r.detail = cat(ok, "/20 seeds within bound ", bound, "; worst regret ", worst,
                   " (Bernoulli, switching and adaptive tables)");
}

void criterion_coverage(CheckResult& r) {
    const std::size_t arms = 10;
    const std::uint64_t horizon = 10'000;
    const double delta = 0.05;
    const int seeds = 40;
    int covered = 0;
    int covered_after_two = 0;
    std::uint64_t pairs = 0;
    std::uint64_t pairs_ok = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
        std::mt19937_64 play(static_cast<std::uint64_t>(seed));
        std::mt19937_64 table(static_cast<std::uint64_t>(seed) + 104729);
        Exp3State bandit(arms, delta);
        Vec truth = Vec::Zero(static_cast<Eigen::Index>(arms));
        bool all = true;
        bool late = true;
        for (std::uint64_t t = 1; t <= horizon; ++t) {
            Vec row(static_cast<Eigen::Index>(arms));
            for (Eigen::Index j = 0; j < row.size(); ++j) {
                const double mean = 0.3 + 0.4 * static_cast<double>(j) / 9.0;
                row(j) = std::clamp(mean + uniform(table, -0.5, 0.5), 0.0, 1.0);
            }
            const auto a = bandit.sample(play);
            bandit.update(a, row(static_cast<Eigen::Index>(a)));
            truth += row;
            for (Eigen::Index j = 0; j < row.size(); ++j) {
                const bool in = std::abs(truth(j) - bandit.values()(j)) <= bandit.widths()(j);
                ++pairs;
                pairs_ok += in ? 1 : 0;
                if (!in) {
                    all = false;
                    late = late && t <= 2;
                }
            }
        }
        covered += all ? 1 : 0;
        covered_after_two += late ? 1 : 0;
    }
    const double frac = static_cast<double>(covered) / seeds;
    r.pass = frac >= 1.0 - delta;
    r.known_limitation = !r.pass;
    r.detail = cat(covered, "/", seeds, " seeds covered at every round (need ",
                   (1.0 - delta) * seeds, "); ", covered_after_two, "/", seeds,
                   " from round 3 on; (arm, round) coverage ",
                   static_cast<double>(pairs_ok) / static_cast<double>(pairs),
                   ". Round-1 single-sample estimates K f fall outside v +- sigma once f > 0.81");
}

// -------------------------------------------------------------- envelope

/// Convex ground truths: bowl, max of affine pieces, kink, line.
struct Truth {
    int family = 0;
    Vec x0;
    double c = 0.0;
    double q = 1.0;
    std::vector<Vec> slopes;
    Vec line;

    [[nodiscard]] double operator()(const Vec& x) const {
        switch (family) {
            case 0:
                return c + q * (x - x0).squaredNorm();
            case 1: {
                double m = 0.0;
                for (const auto& a : slopes) {
                    m = std::max(m, a.dot(x - x0));
                }
                return c + m;
            }
            case 2:
                return c + q * (x - x0).norm();
            default:
                return c + line.dot(x);
        }
    }
};

Truth random_truth(std::mt19937_64& rng, Eigen::Index d, double lo, double hi) {
    Truth f;
    f.family = static_cast<int>(rng() % 4);
    f.x0 = Vec(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        f.x0(k) = uniform(rng, lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo));
    }
    const double span = hi - lo;
    f.q = uniform(rng, 0.2, 3.0) / (f.family == 0 ? span * span : span);
    f.c = uniform(rng, 0.0, 1.0);
    for (int m = 0; m < 3; ++m) {
        Vec a(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            a(k) = uniform(rng, -2.0, 2.0) / span;
        }
        f.slopes.push_back(a);
    }
    f.line = f.slopes.front();
    // Keeps the line non-negative on the box.
    f.c += f.line.cwiseAbs().sum() * std::max(std::abs(lo), std::abs(hi));
    return f;
}

void criterion_lce_1d(CheckResult& r) {
    std::mt19937_64 rng(20240611);
    const auto domain = ConvexBody::box(Vec::Zero(1), Vec::Ones(1));
    double worst_oracle = 0.0;
    double worst_convex = kInf;
    double worst_lower = -kInf;
    std::size_t oracle_fail = 0;
    std::size_t convex_fail = 0;
    std::size_t lower_fail = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const auto k = static_cast<std::size_t>(2 + rng() % 19);
        const Truth truth = random_truth(rng, 1, 0.0, 1.0);
        std::vector<double> xs;
        while (xs.size() < k) {
            const double x = uniform(rng, 0.0, 1.0);
            if (std::none_of(xs.begin(), xs.end(), [&](double y) { return std::abs(x - y) < 1e-3; })) {
                xs.push_back(x);
            }
        }
        std::vector<Vec> pts;
        Vec v(static_cast<Eigen::Index>(k));
        Vec s(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            pts.push_back(Vec::Constant(1, xs[i]));
            const auto ii = static_cast<Eigen::Index>(i);
            s(ii) = inst % 5 == 0 ? 0.0 : uniform(rng, 0.0, 0.1);
            v(ii) = truth(pts.back()) + uniform(rng, -1.0, 1.0) * s(ii);
        }
        const Rdf rdf(pts, v, s);
        const LceModel model = fit_lce(rdf, domain);
        auto f_lce = [&](const Vec& x) { return eval_lce(model, x); };

        // Oracle path: f~_min by its per-index LPs. Between consecutive data points
        // every per-index term is affine, so f~_min is convex and piecewise linear
        // there; its valleys sit next to the data points and can be 2 / h_max wide.
        // A convex function meeting its chord at the midpoint is affine on the
        // chord, so bisecting until that holds recovers every breakpoint.
        auto ft = [&](double x) { return eval_ftilde_min(rdf, Vec::Constant(1, x), model.h_max).value; };
        std::vector<Vec> samples;
        std::vector<double> values;
        auto keep = [&](double x, double y) {
            samples.push_back(Vec::Constant(1, x));
            values.push_back(y);
        };
        std::function<void(double, double, double, double, int)> refine =
            [&](double a, double fa, double b, double fb, int depth) {
                const double m = 0.5 * (a + b);
                const double fm = ft(m);
                if (depth == 0 || std::abs(fm - 0.5 * (fa + fb)) <= 1e-11 * (1.0 + std::abs(fa) + std::abs(fb))) {
                    return;
                }
                keep(m, fm);
                refine(a, fa, m, fm, depth - 1);
                refine(m, fm, b, fb, depth - 1);
            };
        std::vector<double> cuts{0.0, 1.0};
        cuts.insert(cuts.end(), xs.begin(), xs.end());
        std::sort(cuts.begin(), cuts.end());
        for (const double c : cuts) {
            keep(c, ft(c));
        }
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double a = cuts[c] + 1e-12;
            const double b = cuts[c + 1] - 1e-12;
            const double fa = ft(a);
            const double fb = ft(b);
            keep(a, fa);
            keep(b, fb);
            refine(a, fa, b, fb, 60);
        }
        for (int m = 0; m < 100; ++m) {
            const Vec x = Vec::Constant(1, uniform(rng, 0.0, 1.0));
            const double want = brute_slce_oracle(samples, values, x);
            const double err = std::abs(f_lce(x) - want) / std::max(1.0, std::abs(want));
            worst_oracle = std::max(worst_oracle, err);
            oracle_fail += err > 1e-4 ? 1 : 0;
        }
        for (int m = 0; m < 1000; ++m) {
            const double slack = oracle::midpoint_slack(f_lce, Vec::Constant(1, uniform(rng, 0.0, 1.0)),
                                                        Vec::Constant(1, uniform(rng, 0.0, 1.0)));
            worst_convex = std::min(worst_convex, slack);
            convex_fail += slack < -1e-9 ? 1 : 0;
        }
        for (int m = 0; m <= 1000; ++m) {
            const Vec x = Vec::Constant(1, m / 1000.0);
            const double excess = f_lce(x) - truth(x);
            worst_lower = std::max(worst_lower, excess);
            lower_fail += excess > 1e-6 ? 1 : 0;
        }
    }
    r.pass = oracle_fail == 0 && convex_fail == 0 && lower_fail == 0;
    r.detail = cat("oracle mismatches ", oracle_fail, " (worst ", worst_oracle, "), midpoint violations ",
                   convex_fail, " (min slack ", worst_convex, "), lower-bound violations ", lower_fail,
                   " (max F_LCE - F ", worst_lower, ")");
}

/// Lemma instance: lattice points of the box [-half, half]^d with
/// v - (8d^2 + 1) sigma >= 0 and F(x) in [v - sigma, v + sigma].
struct LemmaSetup {
    Eigen::Index d;
    int half;
    double radius;
};

void criterion_discretization(CheckResult& r) {
    std::mt19937_64 rng(314159);
    std::size_t counterexamples = 0;
    std::size_t probes = 0;
    double worst_ratio = kInf;
    std::string first;
    for (int inst = 0; inst < 50; ++inst) {
        // d = 1 uses the lemma's radius 2^{3d^2} = 8; d = 2 a scaled-down box and radius.
        const LemmaSetup setup = inst % 2 == 0 ? LemmaSetup{1, 16, 8.0} : LemmaSetup{2, 4, 2.0};
        const Eigen::Index d = setup.d;
        const double half = setup.half;
        const auto k = ConvexBody::box(Vec::Constant(d, -half), Vec::Constant(d, half));
        const Truth truth = random_truth(rng, d, -half, half);
        const double blow = 8.0 * static_cast<double>(d * d) + 3.0;

        std::vector<Vec> pts;
        const int side = 2 * setup.half + 1;
        const int total = d == 1 ? side : side * side;
        for (int n = 0; n < total; ++n) {
            Vec x(d);
            x(0) = n % side - setup.half;
            if (d == 2) {
                x(1) = n / side - setup.half;
            }
            pts.push_back(x);
        }
        Vec v(static_cast<Eigen::Index>(pts.size()));
        Vec s(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double f = truth(pts[static_cast<std::size_t>(i)]);
            s(i) = uniform(rng, 0.0, 1.0) * f / blow;
            v(i) = f + uniform(rng, -1.0, 1.0) * s(i);
            if (v(i) - (blow - 2.0) * s(i) < 0.0) {
                throw std::logic_error("lemma hypothesis broken by the generator");
            }
        }
        const LceModel model = fit_lce_on_domain(Rdf(pts, v, s), k);

        for (int m = 0; m < 20; ++m) {
            Vec y(d);
            for (Eigen::Index j = 0; j < d; ++j) {
                y(j) = uniform(rng, -half / 4.0, half / 4.0);
            }
            if (y.cwiseAbs().maxCoeff() + setup.radius > half) {
                continue;
            }
            double best = -kInf;
            auto probe = [&](const Vec& p) {
                if ((p - y).norm() <= setup.radius * (1.0 + 1e-12) && k.contains(p)) {
                    best = std::max(best, eval_lce(model, p));
                }
            };
            for (const auto& p : pts) {
                probe(p);
            }
            if (d == 1) {
                for (int j = 0; j <= 800; ++j) {
                    probe(Vec::Constant(1, y(0) - setup.radius + 2.0 * setup.radius * j / 800.0));
                }
            } else {
                for (int a = 0; a < 64; ++a) {
                    const double th = 2.0 * std::numbers::pi * a / 64.0;
                    for (int j = 0; j <= 20; ++j) {
                        const double rad = setup.radius * j / 20.0;
                        probe(y + rad * Vec{{std::cos(th), std::sin(th)}});
                    }
                }
            }
            ++probes;
            const double need = 0.5 * truth(y);
            worst_ratio = std::min(worst_ratio, best / std::max(need, 1e-300));
            if (best < need - 1e-6) {
                ++counterexamples;
                if (first.empty()) {
                    first = cat(" first at d=", d, " y=", y.transpose(), " F(y)=", truth(y),
                                " best F_LCE=", best);
                }
            }
        }
    }
    r.pass = counterexamples == 0;
    r.detail = cat(counterexamples, " counterexamples over ", probes,
                   " probes (d=1 radius 8 on [-16,16], d=2 radius 2 on [-4,4]^2); "
                   "min best/(F/2) ",
                   worst_ratio, first);
}

// -------------------------------------------------------------- geometry

/// Random rotated rectangle well inside [-1, 1]^2.
ConvexBody random_inner(std::mt19937_64& rng) {
    for (;;) {
        const double th = uniform(rng, 0.0, std::numbers::pi);
        const double a = uniform(rng, 0.15, 0.5);
        const double b = uniform(rng, 0.08, 0.35);
        const Vec c{{uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4)}};
        Mat n(4, 2);
        Vec off(4);
        const Vec u{{std::cos(th), std::sin(th)}};
        const Vec w{{-std::sin(th), std::cos(th)}};
        n.row(0) = u.transpose();
        n.row(1) = -u.transpose();
        n.row(2) = w.transpose();
        n.row(3) = -w.transpose();
        off << a + u.dot(c), a - u.dot(c), b + w.dot(c), b - w.dot(c);
        auto body = ConvexBody::from_halfspaces(n, off);
        if (std::all_of(body.vertices().begin(), body.vertices().end(),
                        [](const Vec& x) { return x.cwiseAbs().maxCoeff() < 0.95; })) {
            return body;
        }
    }
}

void criterion_grid_property(CheckResult& r) {
    std::mt19937_64 rng(8675309);
    const Eigen::Index d = 2;
    const double beta = 8.0;
    const double gamma = 3.0;
    const double alpha = 2.0 * (gamma + 1.0) * beta * beta * std::sqrt(static_cast<double>(d));
    const auto k = ConvexBody::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
    std::size_t fail[2] = {0, 0};
    std::size_t tried[2] = {0, 0};
    // Five K' bodies, 20 points per part each.
    for (int body = 0; body < 5; ++body) {
        const ConvexBody kp = random_inner(rng);
        const ScaledIntersection source(kp, k, beta);
        const GridLattice lattice(source.polytope().mvee(), alpha);
        const oracle::Ellipsoid e = oracle::logdet_mvee(kp.vertices()).ellipsoid;
        const auto [lo, hi] = kp.extent();

        auto exists = [&](const Vec& x, double stretch) {
            const Vec ideal = (e.center + stretch * x) / (1.0 + stretch);
            const Vec z0 = lattice.to_lattice(ideal).array().round();
            for (int i = -3; i <= 3; ++i) {
                for (int j = -3; j <= 3; ++j) {
                    const Vec g = lattice.from_lattice(z0 + Vec{{double(i), double(j)}});
                    if (source.contains(g) && e.minkowski(g + stretch * (g - x)) <= 1.0 / (2.0 * beta)) {
                        return true;
                    }
                }
            }
            return false;
        };
        for (int part = 0; part < 2; ++part) {
            int got = 0;
            while (got < 20) {
                const Vec x = part == 0
                                  ? Vec{{uniform(rng, lo(0), hi(0)), uniform(rng, lo(1), hi(1))}}
                                  : Vec{{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}};
                if (kp.contains(x) != (part == 0)) {
                    continue;
                }
                ++got;
                ++tried[part];
                const double stretch = part == 0 ? gamma : gamma / e.minkowski(x);
                fail[part] += exists(x, stretch) ? 0 : 1;
            }
        }
    }
    r.pass = fail[0] == 0 && fail[1] == 0;
    r.detail = cat("part 1: ", fail[0], "/", tried[0], " violations; part 2: ", fail[1], "/",
                   tried[1], " violations (alpha ", alpha, ")");
}

// -------------------------------------------------------------- learner

void criterion_volume_and_cap(CheckResult& r) {
    std::ostringstream os;
    os.precision(4);
    bool ok = true;
    for (const auto& run : {transition_run_1d(), transition_run_2d()}) {
        const GameRecord rec = run.play();
        const Eigen::Index d = rec.body.dim();
        const double bound = volume_decrease_bound(d);
        const double cap = 8.0 * static_cast<double>(d * d) * std::log(static_cast<double>(run.horizon));
        std::size_t moves = 0;
        std::size_t bad = 0;
        double worst = 0.0;
        std::map<std::size_t, std::size_t> per_generation;
        for (const auto& e : rec.epochs) {
            ++per_generation[e.generation];
            if (!e.cut || !e.cut->cut) {
                continue;
            }
            ++moves;
            const double before = oracle::logdet_mvee(e.body.vertices()).ellipsoid.volume();
            const double after = oracle::logdet_mvee(e.cut->body.vertices()).ellipsoid.volume();
            worst = std::max(worst, after / before);
            bad += after / before > bound * (1.0 + 1e-6) ? 1 : 0;
        }
        std::size_t longest = 0;
        for (const auto& [g, n] : per_generation) {
            longest = std::max(longest, n);
        }
        const bool run_ok = !rec.partial && moves > 0 && bad == 0 && static_cast<double>(longest) <= cap;
        ok = ok && run_ok;
        os << run.name << ": " << moves << " moves, worst volume ratio " << worst << " (bound "
           << bound << "), " << longest << " epochs in a generation (cap " << cap << ")"
           << (rec.partial ? " PARTIAL " + rec.error : "") << "; ";
    }
    r.pass = ok;
    r.detail = os.str();
}

void criterion_audits(CheckResult& r) {
    std::ostringstream os;
    os.precision(4);
    std::size_t total = 0;
    bool clean = true;
    for (const auto& run : audit_matrix(10'000, {1, 2})) {
        const GameRecord rec = run.play();
        const AuditReport audit = lemma_audit(rec, 100);
        const std::size_t v = audit.count("center") + audit.count("inside") + audit.count("outside");
        total += v;
        clean = clean && !rec.partial;
        if (v > 0 || rec.partial) {
            os << run.name << ": " << v << " violations; ";
        }
    }
    r.pass = clean && total == 0;
    os << total << " violations over 6 cells";
    r.detail = os.str();
}

void criterion_sublinear(CheckResult& r) {
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double avg[2] = {0.0, 0.0};
    const std::uint64_t horizons[2] = {1'000, 10'000};
    for (int h = 0; h < 2; ++h) {
        for (const auto seed : seeds) {
            const GameRecord rec = moving_valley_1d(horizons[h], seed).play();
            if (rec.partial) {
                throw std::runtime_error("game aborted: " + rec.error);
            }
            avg[h] += compute_regret(rec, 200).regret / static_cast<double>(horizons[h]);
        }
        avg[h] /= static_cast<double>(seeds.size());
    }
    const GameRecord a = moving_valley_1d(1'000, 1).play();
    const GameRecord b = moving_valley_1d(1'000, 1).play();
    bool same = a.rounds.size() == b.rounds.size();
    for (std::size_t t = 0; same && t < a.rounds.size(); ++t) {
        same = a.rounds[t].x == b.rounds[t].x && a.rounds[t].loss == b.rounds[t].loss;
    }
    const double ratio = avg[1] / avg[0];
    r.pass = same && ratio <= 0.6;
    r.detail = cat("average regret per round ", avg[0], " at T=1e3, ", avg[1], " at T=1e4, ratio ",
                   ratio, "; replay ", same ? "identical" : "DIFFERS");
}

void criterion_mvee(CheckResult& r) {
    std::mt19937_64 rng(4242);
    std::normal_distribution<double> normal;
    double worst_contain = 0.0;
    double worst_volume = 0.0;
    std::size_t fails = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const Eigen::Index d = 2 + inst % 2;
        const int n = static_cast<int>(d) + 1 + static_cast<int>(rng() % 40);
        Mat mix(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                mix(i, j) = normal(rng);
            }
        }
        mix += 0.5 * Mat::Identity(d, d);
        std::vector<Vec> pts;
        for (int i = 0; i < n; ++i) {
            Vec z(d);
            for (Eigen::Index j = 0; j < d; ++j) {
                z(j) = inst % 3 == 0 ? uniform(rng, -1.0, 1.0) : normal(rng);
            }
            pts.push_back(mix * z + Vec::Constant(d, 3.0));
        }
        const Ellipsoid lib = mvee(pts);
        const oracle::Ellipsoid check(lib.center(), lib.shape());
        double contain = 0.0;
        for (const auto& p : pts) {
            contain = std::max(contain, std::sqrt(check.gauge2(p)));
        }
        const double ref = oracle::logdet_mvee(pts).ellipsoid.volume();
        const double vol = std::abs(check.volume() / ref - 1.0);
        worst_contain = std::max(worst_contain, contain);
        worst_volume = std::max(worst_volume, vol);
        fails += (contain > 1.0 + 1e-6 || vol > 1e-4) ? 1 : 0;
    }
    r.pass = fails == 0;
    r.detail = cat(fails, "/50 failing; max gauge ", worst_contain, ", max relative volume gap ",
                   worst_volume);
}

}  // namespace

Report run_acceptance(const std::vector<int>& only) {
    struct Entry {
        int id;
        const char* name;
        void (*body)(CheckResult&);
        double time_limit;  // seconds, 0 for none
    };
    static const Entry entries[] = {
        {1, "EXP3.P regret bound", criterion_exp3_regret, 10.0},
        {2, "EXP3.P confidence coverage", criterion_coverage, 0.0},
        {3, "LCE against the brute-force envelope (d=1)", criterion_lce_1d, 30.0},
        {4, "discretization: F_LCE(y') >= F(y)/2 near y", criterion_discretization, 0.0},
        {5, "grid property, parts 1 and 2", criterion_grid_property, 0.0},
        {6, "volume decrease and epoch cap", criterion_volume_and_cap, 0.0},
        {7, "per-epoch lemma audits", criterion_audits, 300.0},
        {8, "end-to-end sublinearity", criterion_sublinear, 0.0},
        {9, "MVEE against the log-det oracle", criterion_mvee, 0.0},
    };
    Report out;
    for (const auto& e : entries) {
        if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) {
            continue;
        }
        CheckResult res = timed(cat("C", e.id), e.name, e.body);
        if (e.time_limit > 0.0 && res.seconds > e.time_limit) {
            res.pass = false;
            res.known_limitation = false;
            res.detail += cat("; over the ", e.time_limit, "s limit");
        }
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace bco::suites
