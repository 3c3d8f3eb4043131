#include "splitset/glm_link.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitset/confidence_sets.hpp"
#include "splitset/error.hpp"

namespace splitset {

std::string_view link_name(LinkKind link) noexcept {
  switch (link) {
    case LinkKind::Identity: return "identity";
    case LinkKind::Logit: return "logit";
    case LinkKind::Log: return "log";
  }
  return "unknown";
}

LinkKind parse_link(std::string_view name) {
  if (name == "identity") return LinkKind::Identity;
  if (name == "logit") return LinkKind::Logit;
  if (name == "log") return LinkKind::Log;
  fail(ErrorCode::InvalidArgument, "unknown link '" + std::string(name) + "'");
}

double apply_link(LinkKind link, double mean) {
  switch (link) {
    case LinkKind::Identity:
      return mean;
    case LinkKind::Logit:
      if (!(mean > 0.0 && mean < 1.0)) {
        fail(ErrorCode::DomainError,
             "logit link needs a level in (0, 1), got " + std::to_string(mean));
      }
      return std::log(mean / (1.0 - mean));
    case LinkKind::Log:
      if (!(mean > 0.0)) {
        fail(ErrorCode::DomainError, "log link needs a positive level, got " + std::to_string(mean));
      }
      return std::log(mean);
  }
  fail(ErrorCode::InvalidArgument, "unknown link");
}

LinkedFit transform_fit(const StumpFit& fit, LinkKind link) {
  return {apply_link(link, fit.beta_l), apply_link(link, fit.beta_u), fit.d_hat};
}

Interval relative_risk_interval(double beta_l, double beta_u, double c1, double c2, double delta) {
  if (!(beta_l > 0.0) || !(beta_u > 0.0)) {
    fail(ErrorCode::DomainError, "relative risk needs positive levels on both sides");
  }
  const double gl = c1 / beta_l;
  const double gu = c2 / beta_u;
  if (std::abs(gu - gl) <= 1e-12 * std::max({std::abs(gl), std::abs(gu), 1e-300})) {
    fail(ErrorCode::DegenerateRatio,
         "c1/beta_l equals c2/beta_u: the ratio estimate has a degenerate limit");
  }
  const double centre = std::log(beta_u / beta_l);
  const double half = std::abs(gu - gl) * delta;
  return {std::exp(centre - half), std::exp(centre + half)};
}

Interval relative_risk_ci(const StumpFit& fit, const LimitParams& lp, std::size_t n, double alpha,
                          const QuantileTable& p_table) {
  const double delta = wald_half_width(lp, n, alpha, p_table);
  return relative_risk_interval(fit.beta_l, fit.beta_u, lp.c1, lp.c2, delta);
}

}  // namespace splitset
