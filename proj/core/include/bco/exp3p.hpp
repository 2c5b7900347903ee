#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <random>

#include "bco/linalg.hpp"

namespace bco {

/// Rates of one doubling block.
struct Exp3Params {
    std::size_t arms = 1;
    double delta = 0.05;
    double eta = 1.0;
    std::uint64_t block = 1;  // T of the current block
    double gamma = 1.0;       // exploration rate, clamped to (0, 1]
    double alpha = 0.0;       // confidence width sqrt(ln(K T / delta))

    /// Rates for a block of length `block`.
    [[nodiscard]] static Exp3Params for_block(std::size_t arms, double delta, double eta,
                                              std::uint64_t block);
    /// Common initial log-weight eta * alpha * gamma * sqrt(T / K).
    [[nodiscard]] double initial_log_weight() const;
};

/// EXP3.P with cumulative importance-weighted estimates and widths.
///
/// Weights are kept as logarithms. The estimates v and widths sigma are
/// carried across block boundaries; only weights and rates reset.
class Exp3State {
  public:
    /// Throws StructuralError for zero arms or delta outside (0,1).
    Exp3State(std::size_t arms, double delta, double eta = 1.0);

    [[nodiscard]] const Exp3Params& params() const { return params_; }
    [[nodiscard]] std::size_t arms() const { return params_.arms; }
    [[nodiscard]] const Vec& log_weights() const { return log_w_; }
    /// Sums to one; every entry is at least gamma / K.
    [[nodiscard]] Vec distribution() const;
    [[nodiscard]] const Vec& values() const { return v_; }
    [[nodiscard]] const Vec& widths() const { return sigma_; }
    [[nodiscard]] std::uint64_t rounds() const { return rounds_; }
    [[nodiscard]] std::uint64_t round_in_block() const { return in_block_; }

    /// Draws an arm from distribution().
    template <class Rng>
    [[nodiscard]] std::size_t sample(Rng& rng) const {
        const Vec p = distribution();
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        return pick(p, unif(rng));
    }

    /// Applies one round. Throws ContractViolation unless loss is in [0,1]
    /// and `played` is a valid arm.
    void update(std::size_t played, double loss);

    [[nodiscard]] nlohmann::json snapshot() const;

  private:
    static std::size_t pick(const Vec& p, double u);
    void start_block(std::uint64_t block);

    Exp3Params params_;
    Vec log_w_;
    Vec v_;
    Vec sigma_;
    std::uint64_t rounds_ = 0;
    std::uint64_t in_block_ = 0;
};

}  // namespace bco
