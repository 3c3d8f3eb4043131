#pragma once

#include <cstddef>
#include <string_view>

#include "splitset/limit_process.hpp"
#include "splitset/nuisance.hpp"
#include "splitset/sample.hpp"
#include "splitset/stump.hpp"

namespace splitset {

enum class LinkKind { Identity, Logit, Log };

std::string_view link_name(LinkKind link) noexcept;
LinkKind parse_link(std::string_view name);

// Throws DomainError outside (0, 1) for logit and (0, inf) for log.
double apply_link(LinkKind link, double mean);

struct LinkedFit {
  double theta_l = 0.0;
  double theta_u = 0.0;
  double d = 0.0;
};

// Reports the mean-scale stump on the canonical-parameter scale. The split
// is unchanged.
LinkedFit transform_fit(const StumpFit& fit, LinkKind link);

// exp(log(beta_u / beta_l) +- |c2 / beta_u - c1 / beta_l| * delta).
Interval relative_risk_interval(double beta_l, double beta_u, double c1, double c2, double delta);

// Delta-method interval for beta_u / beta_l with delta from the Wald
// half-width. Throws Unstable (b <= 0) or DegenerateRatio.
Interval relative_risk_ci(const StumpFit& fit, const LimitParams& lp, std::size_t n, double alpha,
                          const QuantileTable& p_table);

}  // namespace splitset
