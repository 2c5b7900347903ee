#include "bco/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "bco/lp.hpp"

namespace bco {

namespace {

std::vector<double> as_vector(const Vec& v) {
    return {v.data(), v.data() + v.size()};
}

/// Shifted cumulative loss of one epoch.
class EpochLoss {
  public:
    EpochLoss(const GameRecord& rec, const EpochSummary& e) : rec_(rec), e_(e) {}

    double operator()(const Vec& x) const {
        double sum = 0.0;
        for (std::uint64_t t = e_.first_round; t <= e_.last_round; ++t) {
            sum += rec_.rounds[t - 1].f(x);
        }
        return sum - e_.shift;
    }

    /// Unshifted, for the coverage check against v and sigma.
    double raw(const Vec& x) const { return (*this)(x) + e_.shift; }

  private:
    const GameRecord& rec_;
    const EpochSummary& e_;
};

}  // namespace

std::size_t AuditReport::count(const std::string& bound) const {
    return static_cast<std::size_t>(std::count_if(
        violations.begin(), violations.end(), [&](const auto& v) { return v.bound == bound; }));
}

double volume_decrease_bound(Eigen::Index d) {
    return 1.0 - 1.0 / (8.0 * static_cast<double>(d));
}

AuditReport lemma_audit(const GameRecord& record, std::size_t samples) {
    AuditReport rep;
    rep.samples = samples;
    rep.epoch_cap = record.learner.tau_max;
    const auto& cfg = record.learner;
    const double ell = cfg.ell;
    const double g = cfg.gamma_ext;
    const Eigen::Index d = record.body.dim();

    std::seed_seq seq{record.seed, std::uint64_t{2}};
    std::mt19937_64 rng(seq);

    std::map<std::size_t, std::size_t> per_generation;
    for (std::size_t i = 0; i < record.epochs.size(); ++i) {
        const auto& e = record.epochs[i];
        ++per_generation[e.generation];
        rep.moves += e.end == "move" ? 1 : 0;
        rep.restarts += e.end == "restart" ? 1 : 0;

        EpochAudit a;
        a.epoch = e.epoch;
        a.generation = e.generation;
        a.first_round = e.first_round;
        a.last_round = e.last_round;
        a.end = e.end;
        a.min_inside = kInf;
        a.min_outside_ratio = kInf;

        if (e.cut && e.cut->cut) {
            a.volume_ratio = e.cut->body.mvee().volume() / e.body.mvee().volume();
            const double bound = volume_decrease_bound(d);
            if (a.volume_ratio > bound * (1.0 + 1e-6)) {
                rep.violations.push_back({i, "volume", e.cut->center, a.volume_ratio, bound,
                                          bound - a.volume_ratio});
            }
        }
        if (e.last_round < e.first_round || e.last_round == 0) {
            a.center_value = 0.0;
            rep.epochs.push_back(a);
            continue;
        }

        const EpochLoss f(record, e);
        const Vec center = e.body.mvee().center();
        a.center_value = f(center);
        if (a.center_value > 2.0 * ell) {
            rep.violations.push_back(
                {i, "center", center, a.center_value, 2.0 * ell, 2.0 * ell - a.center_value});
        }

        auto check = [&](const Vec& x) {
            const double val = f(x);
            if (e.body.contains(x)) {
                ++a.probes_inside;
                a.min_inside = std::min(a.min_inside, val);
                const double lim = -2.0 * ell / g;
                if (val < lim) {
                    rep.violations.push_back({i, "inside", x, val, lim, val - lim});
                }
            } else if (record.body.contains(x)) {
                ++a.probes_outside;
                const double gx = minkowski_distance(e.body, x);
                a.min_outside_ratio = std::min(a.min_outside_ratio, val / gx);
                const double lim = -2.0 * gx * ell / g;
                if (val < lim) {
                    rep.violations.push_back({i, "outside", x, val, lim, val - lim});
                }
            }
        };

        check(center);
        for (const auto& p : e.grid) {
            check(p);
        }
        for (std::size_t s = 0; s < samples; ++s) {
            check(sample_body(e.body, rng));
        }
        // K minus K_tau by rejection; gives up quietly when K_tau fills K.
        std::size_t found = 0;
        for (std::size_t tries = 0; found < samples && tries < 200 * samples; ++tries) {
            const Vec x = sample_body(record.body, rng);
            if (!e.body.contains(x)) {
                check(x);
                ++found;
            }
        }

        a.arms = e.grid.size();
        for (std::size_t k = 0; k < e.grid.size(); ++k) {
            const double truth = f.raw(e.grid[k]);
            const auto j = static_cast<Eigen::Index>(k);
            if (std::abs(truth - e.values(j)) <= e.widths(j)) {
                ++a.arms_covered;
            }
        }
        rep.epochs.push_back(a);
    }

    for (const auto& [gen, n] : per_generation) {
        rep.max_epochs_per_generation = std::max(rep.max_epochs_per_generation, n);
        if (n > rep.epoch_cap) {
            rep.violations.push_back({0, "epoch_cap", Vec(), static_cast<double>(n),
                                      static_cast<double>(rep.epoch_cap),
                                      static_cast<double>(rep.epoch_cap) - static_cast<double>(n)});
        }
    }
    return rep;
}

nlohmann::json to_json(const AuditReport& a) {
    auto finite = [](double x) -> nlohmann::json {
        if (std::isfinite(x)) {
            return x;
        }
        return nullptr;
    };
    auto epochs = nlohmann::json::array();
    for (const auto& e : a.epochs) {
        epochs.push_back({{"epoch", e.epoch},
                          {"generation", e.generation},
                          {"first_round", e.first_round},
                          {"last_round", e.last_round},
                          {"end", e.end},
                          {"probes_inside", e.probes_inside},
                          {"probes_outside", e.probes_outside},
                          {"center_value", e.center_value},
                          {"min_inside", finite(e.min_inside)},
                          {"min_outside_ratio", finite(e.min_outside_ratio)},
                          {"volume_ratio", e.volume_ratio},
                          {"arms", e.arms},
                          {"arms_covered", e.arms_covered}});
    }
    auto violations = nlohmann::json::array();
    for (const auto& v : a.violations) {
        violations.push_back({{"epoch", v.epoch},
                              {"bound", v.bound},
                              {"point", as_vector(v.point)},
                              {"value", v.value},
                              {"limit", v.limit},
                              {"slack", v.slack}});
    }
    return {{"ok", a.ok()},
            {"samples", a.samples},
            {"moves", a.moves},
            {"restarts", a.restarts},
            {"max_epochs_per_generation", a.max_epochs_per_generation},
            {"epoch_cap", a.epoch_cap},
            {"epochs", epochs},
            {"violations", violations}};
}

}  // namespace bco
