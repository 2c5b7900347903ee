#include "bco/adversary.hpp"

#include <cmath>
#include <set>

#include "bco/error.hpp"
#include "bco/lp.hpp"

namespace bco {

double LossFunction::operator()(const Vec& x) const {
    double raw = 0.0;
    switch (kind) {
        case LossKind::Affine:
            raw = a.dot(x) + b;
            break;
        case LossKind::Valley:
            raw = (x - a).norm();
            break;
        case LossKind::Quadratic:
            raw = (x - a).squaredNorm();
            break;
    }
    return scale * raw + offset;
}

double LossFunction::lipschitz(double radius) const {
    switch (kind) {
        case LossKind::Affine:
            return std::abs(scale) * a.norm();
        case LossKind::Valley:
            return std::abs(scale);
        case LossKind::Quadratic:
            return std::abs(scale) * 2.0 * radius;
    }
    return 0.0;
}

namespace {

const char* kind_name(LossKind k) {
    switch (k) {
        case LossKind::Affine:
            return "affine";
        case LossKind::Valley:
            return "valley";
        case LossKind::Quadratic:
            return "quadratic";
    }
    return "?";
}

std::vector<double> as_vector(const Vec& v) {
    return {v.data(), v.data() + v.size()};
}

Vec as_vec(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) {
        throw SpecError(field + ": expected an array of numbers");
    }
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw SpecError(field + ": expected an array of numbers");
        }
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

}  // namespace

nlohmann::json to_json(const LossFunction& f) {
    return {{"kind", kind_name(f.kind)},
            {"a", as_vector(f.a)},
            {"b", f.b},
            {"scale", f.scale},
            {"offset", f.offset}};
}

LossFunction loss_from_json(const nlohmann::json& j) {
    LossFunction f;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "affine") {
        f.kind = LossKind::Affine;
    } else if (kind == "valley") {
        f.kind = LossKind::Valley;
    } else if (kind == "quadratic") {
        f.kind = LossKind::Quadratic;
    } else {
        throw SpecError("loss.kind: unknown '" + kind + "'");
    }
    f.a = as_vec(j.at("a"), "loss.a");
    f.b = j.at("b").get<double>();
    f.scale = j.at("scale").get<double>();
    f.offset = j.at("offset").get<double>();
    return f;
}

const char* to_string(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::ObliviousLinear:
            return "oblivious_linear";
        case AdversaryKind::MovingValley:
            return "moving_valley";
        case AdversaryKind::Quadratic:
            return "quadratic";
        case AdversaryKind::AdaptiveChaser:
            return "adaptive_chaser";
    }
    return "?";
}

AdversaryKind adversary_kind_from_string(const std::string& s) {
    for (auto k : {AdversaryKind::ObliviousLinear, AdversaryKind::MovingValley,
                   AdversaryKind::Quadratic, AdversaryKind::AdaptiveChaser}) {
        if (s == to_string(k)) {
            return k;
        }
    }
    throw SpecError("adversary.kind: unknown '" + s + "'");
}

nlohmann::json to_json(const AdversarySpec& s) {
    nlohmann::json j;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
        case AdversaryKind::ObliviousLinear: {
            auto arr = nlohmann::json::array();
            for (const auto& g : s.slopes) {
                arr.push_back(as_vector(g));
            }
            j["slopes"] = arr;
            j["intercept"] = s.intercept;
            j["period"] = s.period;
            break;
        }
        case AdversaryKind::MovingValley:
            j["from"] = as_vector(s.from);
            j["to"] = as_vector(s.to);
            j["steps"] = s.steps;
            break;
        case AdversaryKind::Quadratic:
            j["center"] = as_vector(s.center);
            j["curvature"] = s.curvature;
            break;
        case AdversaryKind::AdaptiveChaser:
            j["from"] = as_vector(s.from);
            j["rate"] = s.rate;
            break;
    }
    return j;
}

AdversarySpec adversary_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw SpecError("adversary: expected an object");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw SpecError("adversary.kind: required string");
    }
    AdversarySpec s;
    s.kind = adversary_kind_from_string(j["kind"].get<std::string>());
    std::set<std::string> allowed{"kind"};
    switch (s.kind) {
        case AdversaryKind::ObliviousLinear:
            allowed.insert({"slopes", "intercept", "period"});
            break;
        case AdversaryKind::MovingValley:
            allowed.insert({"from", "to", "steps"});
            break;
        case AdversaryKind::Quadratic:
            allowed.insert({"center", "curvature"});
            break;
        case AdversaryKind::AdaptiveChaser:
            allowed.insert({"from", "rate"});
            break;
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw SpecError("adversary." + key + ": unknown key for kind " + to_string(s.kind));
        }
    }
    auto number = [&j](const std::string& key, double fallback) {
        if (!j.contains(key)) {
            return fallback;
        }
        if (!j[key].is_number()) {
            throw SpecError("adversary." + key + ": expected a number");
        }
        return j[key].get<double>();
    };
    auto count = [&j](const std::string& key, std::uint64_t fallback) {
        if (!j.contains(key)) {
            return fallback;
        }
        if (!j[key].is_number_integer() || j[key].get<std::int64_t>() <= 0) {
            throw SpecError("adversary." + key + ": expected a positive integer");
        }
        return j[key].get<std::uint64_t>();
    };
    auto required_vec = [&j](const std::string& key) {
        if (!j.contains(key)) {
            throw SpecError("adversary." + key + ": required");
        }
        return as_vec(j[key], "adversary." + key);
    };
    switch (s.kind) {
        case AdversaryKind::ObliviousLinear:
            if (!j.contains("slopes") || !j["slopes"].is_array() || j["slopes"].empty()) {
                throw SpecError("adversary.slopes: required non-empty array");
            }
            for (const auto& g : j["slopes"]) {
                s.slopes.push_back(as_vec(g, "adversary.slopes"));
            }
            s.intercept = number("intercept", 0.0);
            s.period = count("period", 1);
            break;
        case AdversaryKind::MovingValley:
            s.from = required_vec("from");
            s.to = j.contains("to") ? required_vec("to") : s.from;
            s.steps = count("steps", 1);
            break;
        case AdversaryKind::Quadratic:
            s.center = required_vec("center");
            s.curvature = number("curvature", 1.0);
            break;
        case AdversaryKind::AdaptiveChaser:
            s.from = required_vec("from");
            s.rate = number("rate", 0.0);
            break;
    }
    return s;
}

Vec sample_body(const ConvexBody& k, std::mt19937_64& rng) {
    const auto [lo, hi] = k.extent();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < 1'000'000; ++attempt) {
        Vec x(lo.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x(i) = lo(i) + (hi(i) - lo(i)) * unif(rng);
        }
        if (k.contains(x, 0.0)) {
            return x;
        }
    }
    throw NumericalFailure("sample_body: rejection sampling failed");
}

std::string check_loss(const LossFunction& f, const ConvexBody& k, std::mt19937_64& rng,
                       int count) {
    constexpr double tol = 1e-9;
    std::vector<Vec> pts = k.vertices();
    for (int i = 0; i < count; ++i) {
        pts.push_back(sample_body(k, rng));
    }
    for (const auto& x : pts) {
        const double v = f(x);
        if (!(v >= -tol && v <= 1.0 + tol)) {
            return "loss value " + std::to_string(v) + " outside [0,1]";
        }
    }
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
        const Vec mid = 0.5 * (pts[i] + pts[i + 1]);
        if (f(mid) > 0.5 * (f(pts[i]) + f(pts[i + 1])) + tol) {
            return "midpoint convexity fails";
        }
    }
    return {};
}

namespace {

// Range of the raw loss over K, bracketed by exact or safe bounds.
std::pair<double, double> raw_range(LossFunction f, const ConvexBody& k) {
    f.scale = 1.0;
    f.offset = 0.0;
    double lo = kInf;
    double hi = -kInf;
    for (const auto& v : k.vertices()) {
        lo = std::min(lo, f(v));
        hi = std::max(hi, f(v));
    }
    if (f.kind != LossKind::Affine) {
        // Convex with minimum 0 at a; the vertex minimum is only an upper bound.
        lo = k.contains(f.a, 0.0) ? 0.0 : std::min(lo, 0.0);
    }
    return {lo, hi};
}

// Keeps f when scale * raw already maps K into [0,1]; otherwise rescales
// the raw loss onto [0,1].
LossFunction normalized(LossFunction f, const ConvexBody& k) {
    const auto [lo, hi] = raw_range(f, k);
    if (f.scale * lo + f.offset >= 0.0 && f.scale * hi + f.offset <= 1.0) {
        return f;
    }
    if (hi - lo <= 0.0) {
        f.scale = 0.0;
        f.offset = 0.5;
        return f;
    }
    f.scale = 1.0 / (hi - lo);
    f.offset = -lo / (hi - lo);
    return f;
}

void require_dim(const Vec& v, const ConvexBody& k, const std::string& field) {
    if (v.size() != k.dim()) {
        throw SpecError("adversary." + field + ": dimension " + std::to_string(v.size()) +
                        " differs from the body's " + std::to_string(k.dim()));
    }
}

class ObliviousLinear final : public Adversary {
  public:
    ObliviousLinear(const AdversarySpec& s, const ConvexBody& k) : period_(s.period) {
        for (const auto& g : s.slopes) {
            require_dim(g, k, "slopes");
            LossFunction f;
            f.kind = LossKind::Affine;
            f.a = g;
            f.b = s.intercept;
            fns_.push_back(normalized(f, k));
        }
    }
    LossFunction next(std::uint64_t t, const std::vector<Vec>&) override {
        return fns_[((t - 1) / period_) % fns_.size()];
    }
    [[nodiscard]] bool adaptive() const override { return false; }
    [[nodiscard]] const std::vector<LossFunction>& functions() const { return fns_; }

  private:
    std::vector<LossFunction> fns_;
    std::uint64_t period_;
};

class MovingValley final : public Adversary {
  public:
    MovingValley(const AdversarySpec& s, const ConvexBody& k, std::uint64_t horizon)
        : horizon_(std::max<std::uint64_t>(horizon, 1)), steps_(s.steps) {
        require_dim(s.from, k, "from");
        require_dim(s.to, k, "to");
        for (std::uint64_t i = 0; i < steps_; ++i) {
            const double frac = steps_ > 1 ? static_cast<double>(i) / static_cast<double>(steps_ - 1) : 0.0;
            LossFunction f;
            f.kind = LossKind::Valley;
            f.a = s.from + frac * (s.to - s.from);
            fns_.push_back(normalized(f, k));
        }
    }
    LossFunction next(std::uint64_t t, const std::vector<Vec>&) override {
        const std::uint64_t phase = std::min(steps_ - 1, (t - 1) * steps_ / horizon_);
        return fns_[phase];
    }
    [[nodiscard]] bool adaptive() const override { return false; }
    [[nodiscard]] const std::vector<LossFunction>& functions() const { return fns_; }

  private:
    std::uint64_t horizon_;
    std::uint64_t steps_;
    std::vector<LossFunction> fns_;
};

class QuadraticBowl final : public Adversary {
  public:
    QuadraticBowl(const AdversarySpec& s, const ConvexBody& k) {
        require_dim(s.center, k, "center");
        if (!(s.curvature > 0.0) || !std::isfinite(s.curvature)) {
            throw SpecError("adversary.curvature: must be positive and finite");
        }
        LossFunction f;
        f.kind = LossKind::Quadratic;
        f.a = s.center;
        f.scale = s.curvature;
        f = normalized(f, k);
        fn_ = f;
    }
    LossFunction next(std::uint64_t, const std::vector<Vec>&) override { return fn_; }
    [[nodiscard]] bool adaptive() const override { return false; }
    [[nodiscard]] const LossFunction& function() const { return fn_; }

  private:
    LossFunction fn_;
};

// Linear loss rising toward where the learner has been playing.
class AdaptiveChaser final : public Adversary {
  public:
    AdaptiveChaser(const AdversarySpec& s, const ConvexBody& k)
        : body_(k), target_(s.from), rate_(s.rate) {
        require_dim(s.from, k, "from");
        if (!(s.rate >= 0.0 && s.rate <= 1.0)) {
            throw SpecError("adversary.rate: must lie in [0,1]");
        }
        mid_ = k.mvee().center();
    }
    LossFunction next(std::uint64_t t, const std::vector<Vec>& past) override {
        if (past.size() + 1 != t) {
            throw ContractViolation("AdaptiveChaser: history length differs from t - 1");
        }
        for (; seen_ < past.size(); ++seen_) {
            const double r = rate_ > 0.0 ? rate_ : 1.0 / static_cast<double>(seen_ + 1);
            target_ += r * (past[seen_] - target_);
        }
        Vec u = target_ - mid_;
        if (u.norm() <= 1e-12) {
            u = Vec::Unit(mid_.size(), 0);
        }
        u.normalize();
        double radius = 0.0;
        for (const auto& v : body_.vertices()) {
            radius = std::max(radius, std::abs(u.dot(v - mid_)));
        }
        LossFunction f;
        f.kind = LossKind::Affine;
        f.a = 0.5 * u / radius;
        f.b = 0.5 - f.a.dot(mid_);
        return f;
    }
    [[nodiscard]] bool adaptive() const override { return true; }

  private:
    ConvexBody body_;
    Vec target_;
    Vec mid_;
    double rate_;
    std::size_t seen_ = 0;
};

void verify(const LossFunction& f, const ConvexBody& k, std::mt19937_64& rng) {
    const auto why = check_loss(f, k, rng);
    if (!why.empty()) {
        throw SpecError("adversary: " + why);
    }
}

}  // namespace

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, const ConvexBody& k,
                                          std::uint64_t horizon, std::mt19937_64& rng) {
    switch (spec.kind) {
        case AdversaryKind::ObliviousLinear: {
            auto adv = std::make_unique<ObliviousLinear>(spec, k);
            for (const auto& f : adv->functions()) {
                verify(f, k, rng);
            }
            return adv;
        }
        case AdversaryKind::MovingValley: {
            auto adv = std::make_unique<MovingValley>(spec, k, horizon);
            for (const auto& f : adv->functions()) {
                verify(f, k, rng);
            }
            return adv;
        }
        case AdversaryKind::Quadratic: {
            auto adv = std::make_unique<QuadraticBowl>(spec, k);
            verify(adv->function(), k, rng);
            return adv;
        }
        case AdversaryKind::AdaptiveChaser: {
            auto adv = std::make_unique<AdaptiveChaser>(spec, k);
            AdaptiveChaser probe(spec, k);
            verify(probe.next(1, {}), k, rng);
            return adv;
        }
    }
    throw SpecError("adversary: unknown kind");
}

}  // namespace bco
