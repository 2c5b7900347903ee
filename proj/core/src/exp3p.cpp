#include "bco/exp3p.hpp"

#include <cmath>

#include "bco/error.hpp"

namespace bco {

Exp3Params Exp3Params::for_block(std::size_t arms, double delta, double eta,
                                 std::uint64_t block) {
    Exp3Params p;
    p.arms = arms;
    p.delta = delta;
    p.eta = eta;
    p.block = block;
    const auto k = static_cast<double>(arms);
    const auto t = static_cast<double>(block);
    // ln K = 0 for a single arm; any rate is fine there since p = 1.
    p.gamma = arms > 1 ? std::min(1.0, std::sqrt(k * std::log(k) / t)) : 1.0;
    p.alpha = std::sqrt(std::log(k * t / delta));
    return p;
}

double Exp3Params::initial_log_weight() const {
    return eta * alpha * gamma * std::sqrt(static_cast<double>(block) / static_cast<double>(arms));
}

Exp3State::Exp3State(std::size_t arms, double delta, double eta) {
    if (arms == 0) {
        throw StructuralError("Exp3State: zero arms");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw StructuralError("Exp3State: delta must lie in (0,1)");
    }
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw StructuralError("Exp3State: eta must be finite and nonnegative");
    }
    params_.arms = arms;
    params_.delta = delta;
    params_.eta = eta;
    const auto k = static_cast<Eigen::Index>(arms);
    v_ = Vec::Zero(k);
    sigma_ = Vec::Zero(k);
    start_block(1);
}

void Exp3State::start_block(std::uint64_t block) {
    params_ = Exp3Params::for_block(params_.arms, params_.delta, params_.eta, block);
    log_w_ = Vec::Constant(static_cast<Eigen::Index>(params_.arms), params_.initial_log_weight());
    in_block_ = 0;
}

Vec Exp3State::distribution() const {
    const double top = log_w_.maxCoeff();
    const Vec w = (log_w_.array() - top).exp().matrix();
    const double k = static_cast<double>(params_.arms);
    Vec p = ((1.0 - params_.gamma) * w / w.sum()).array() + params_.gamma / k;
    return p / p.sum();
}

std::size_t Exp3State::pick(const Vec& p, double u) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        acc += p(j);
        if (u < acc) {
            return static_cast<std::size_t>(j);
        }
    }
    return static_cast<std::size_t>(p.size() - 1);
}

void Exp3State::update(std::size_t played, double loss) {
    if (played >= params_.arms) {
        throw ContractViolation("Exp3State::update: arm index out of range");
    }
    if (!(loss >= 0.0 && loss <= 1.0)) {
        throw ContractViolation("Exp3State::update: loss outside [0,1]");
    }
    const Vec p = distribution();
    const double k = static_cast<double>(params_.arms);
    const double root = std::sqrt(static_cast<double>(params_.block) * k);
    const auto j = static_cast<Eigen::Index>(played);
    for (Eigen::Index a = 0; a < p.size(); ++a) {
        const double gain = a == j ? (1.0 - loss) / p(a) : 0.0;
        log_w_(a) += params_.gamma / k * (gain + params_.eta * params_.alpha / (p(a) * root));
        sigma_(a) += params_.alpha / (p(a) * root);
    }
    v_(j) += loss / p(j);
    ++rounds_;
    if (++in_block_ == params_.block) {
        start_block(2 * params_.block);
    }
}

nlohmann::json Exp3State::snapshot() const {
    nlohmann::json j;
    j["arms"] = params_.arms;
    j["block"] = params_.block;
    j["gamma"] = params_.gamma;
    j["alpha"] = params_.alpha;
    j["rounds"] = rounds_;
    j["round_in_block"] = in_block_;
    j["v"] = std::vector<double>(v_.data(), v_.data() + v_.size());
    j["sigma"] = std::vector<double>(sigma_.data(), sigma_.data() + sigma_.size());
    return j;
}

}  // namespace bco
