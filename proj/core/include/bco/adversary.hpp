#pragma once

#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <random>
#include <string>
#include <vector>

#include "bco/convex_body.hpp"

namespace bco {

enum class LossKind { Affine, Valley, Quadratic };

/// f(x) = scale * raw(x) + offset with raw one of
///   Affine:    <a, x> + b
///   Valley:    ||x - a||_2
///   Quadratic: ||x - a||_2^2
/// Fully describes one round's loss, so a record can re-evaluate it anywhere.
struct LossFunction {
    LossKind kind = LossKind::Affine;
    Vec a;
    double b = 0.0;
    double scale = 1.0;
    double offset = 0.0;

    [[nodiscard]] double operator()(const Vec& x) const;
    /// Lipschitz constant over a body contained in a ball of radius `radius` around `a`
    /// (used by Quadratic only).
    [[nodiscard]] double lipschitz(double radius) const;
};

[[nodiscard]] nlohmann::json to_json(const LossFunction& f);
[[nodiscard]] LossFunction loss_from_json(const nlohmann::json& j);

enum class AdversaryKind { ObliviousLinear, MovingValley, Quadratic, AdaptiveChaser };

[[nodiscard]] const char* to_string(AdversaryKind k);
/// Throws SpecError for an unknown name.
[[nodiscard]] AdversaryKind adversary_kind_from_string(const std::string& s);

/// Parameters per kind (unused fields are ignored):
///   ObliviousLinear: slopes (cycled, one per `period` rounds), intercept
///   MovingValley:    center moves from `from` to `to` in `steps` equal phases
///   Quadratic:       fixed `center`, `curvature`
///   AdaptiveChaser:  `rate` in (0,1] for an exponential average of past plays,
///                    0 for their running mean; `from` is the initial target
struct AdversarySpec {
    AdversaryKind kind = AdversaryKind::MovingValley;
    std::vector<Vec> slopes;
    double intercept = 0.0;
    std::uint64_t period = 1;
    Vec from;
    Vec to;
    std::uint64_t steps = 1;
    Vec center;
    double curvature = 1.0;
    double rate = 0.0;
};

[[nodiscard]] nlohmann::json to_json(const AdversarySpec& s);
/// Rejects unknown keys and malformed fields with SpecError.
[[nodiscard]] AdversarySpec adversary_from_json(const nlohmann::json& j);

/// Emits f_t from the plays x_1 .. x_{t-1}; never sees the learner's distribution.
///
/// Every emitted function is convex and maps K into [0,1]: raw losses whose
/// range over K already lies in [0,1] are kept, others are affinely rescaled
/// onto [0,1] and the factors are stored in the LossFunction.
class Adversary {
  public:
    virtual ~Adversary() = default;
    [[nodiscard]] virtual LossFunction next(std::uint64_t t, const std::vector<Vec>& past_plays) = 0;
    [[nodiscard]] virtual bool adaptive() const = 0;
};

/// Throws SpecError when the spec is inconsistent with K or an emitted function
/// fails the sampled convexity or range check.
[[nodiscard]] std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec,
                                                        const ConvexBody& k,
                                                        std::uint64_t horizon,
                                                        std::mt19937_64& rng);

/// Samples `count` points of K and checks f(K) within [0,1] and midpoint
/// convexity on as many pairs. Returns an empty string or a diagnostic.
[[nodiscard]] std::string check_loss(const LossFunction& f, const ConvexBody& k,
                                     std::mt19937_64& rng, int count = 200);

/// Uniform sample of K by rejection from its bounding box.
[[nodiscard]] Vec sample_body(const ConvexBody& k, std::mt19937_64& rng);

}  // namespace bco
