#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <vector>

#include "bco/convex_body.hpp"
#include "bco/hull.hpp"
#include "bco/rdf.hpp"

namespace bco {

struct EpigraphVertex {
    Vec point;
    double value = 0.0;
};

/// Lower convex envelope of the minimal extension over a box domain.
///
/// F(x) = max_f <a_f, x> + b_f. Every facet lies below every epigraph vertex.
struct LceModel {
    ConvexBody domain;
    std::vector<EpigraphVertex> vertices;
    std::vector<Facet> facets;
    double h_max = 0.0;
    std::size_t clamped_vertices = 0;  // vertices whose maximizing slope hits the clamp
    std::size_t dropped = 0;           // indices with an empty slope set
    bool approximate = false;

    [[nodiscard]] Eigen::Index dim() const { return domain.dim(); }
    [[nodiscard]] bool clamped() const { return clamped_vertices > 0; }
};

struct LceOptions {
    double h_max = 0.0;                 // <= 0 selects default_h_max
    bool allow_approximate = true;      // d >= 3: sample instead of throwing Unsupported
    std::size_t approximate_samples = 256;
};

/// Fit-LCE over the bounding box of the MVEE of `fit_body`.
/// Exact for d <= 2. Throws InconsistentData when no index is feasible.
[[nodiscard]] LceModel fit_lce(const Rdf& rdf, const ConvexBody& fit_body,
                               const LceOptions& options = {});

/// Same, with the domain box supplied directly.
[[nodiscard]] LceModel fit_lce_on_domain(const Rdf& rdf, const ConvexBody& domain,
                                         const LceOptions& options = {});

/// Throws DomainError when x is outside the domain (tolerance 1e-7 relative).
[[nodiscard]] double eval_lce(const LceModel& model, const Vec& x);

/// Facet maximum without the domain check.
[[nodiscard]] double eval_lce_unchecked(const LceModel& model, const Vec& x);

/// Index of the first facet attaining the max at x.
[[nodiscard]] std::size_t active_facet(const LceModel& model, const Vec& x);

/// Normal of a facet attaining the max at x.
[[nodiscard]] Vec lce_subgradient(const LceModel& model, const Vec& x);

/// min sum lambda_m t_m  s.t.  sum lambda_m p_m = x, lambda in the simplex.
/// Throws DomainError when x is outside the convex hull of the samples.
[[nodiscard]] double brute_slce_oracle(const std::vector<Vec>& points,
                                       const std::vector<double>& values, const Vec& x);

/// Minimal extension over the whole domain as a vertex list: the points where
/// it is evaluated exactly to build the envelope (d <= 2).
[[nodiscard]] std::vector<EpigraphVertex> ftilde_min_vertices(const Rdf& rdf,
                                                              const ConvexBody& domain,
                                                              double h_max,
                                                              std::size_t* dropped = nullptr);

[[nodiscard]] nlohmann::json to_json(const LceModel& model);

}  // namespace bco
