#include "splitset/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "splitset/error.hpp"
#include "splitset/glm_link.hpp"
#include "splitset/limit_process.hpp"
#include "splitset/simulation.hpp"
#include "splitset/stump.hpp"

namespace splitset {
namespace {

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = s.find(',');
    out.push_back(s.substr(0, c));
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

double parse_real(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(ErrorCode::InvalidArgument, what + ": '" + std::string(s) + "' is not a finite number");
  }
  return v;
}

std::size_t parse_count(std::string_view s, const std::string& what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::InvalidArgument, what + ": '" + std::string(s) + "' is not a count");
  }
  return v;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

NuisanceEstimates nuisance_for(const Sample& sample, double d, const CiOptions& o) {
  if (auto manual = parse_nuisance_spec(o.nuisance)) return *manual;
  NuisanceOptions opts;
  opts.bandwidth = parse_bandwidth(o.bandwidth);
  return estimate_nuisance(sample, d, opts);
}

ConfidenceSet stump_ci(const Sample& sample, const CiOptions& o, const Method method,
                       std::map<std::string, std::vector<double>>& extra) {
  const StumpProblem problem(sample, o.min_side);
  const StumpFit fit = problem.fit();
  const auto& p_table = embedded_table(LimitDistribution::ChernoffArgmax);
  const auto& q_table = embedded_table(LimitDistribution::MaxQ1);
  if (method == Method::Subsample) {
    const SubsampleSpec spec{o.gamma, o.subsamples, o.seed};
    return subsample_ci(problem.sorted_sample(), stump_estimator(o.min_side), spec, o.alpha,
                        o.min_side);
  }
  const LimitParams lp = limit_params(nuisance_for(sample, fit.d_hat, o), fit.beta_l, fit.beta_u);
  ConfidenceSet set;
  switch (method) {
    case Method::Wald: {
      const auto w = wald_cis(fit, lp, problem.size(), o.alpha, p_table);
      extra["beta_l_interval"] = {w.beta_l.lo, w.beta_l.hi};
      extra["beta_u_interval"] = {w.beta_u.lo, w.beta_u.hi};
      set = wald_set(fit, lp, problem.size(), o.alpha, p_table);
      break;
    }
    case Method::Rss1: set = rss1_set(problem, fit, lp, o.alpha, q_table); break;
    case Method::Rss2: set = rss2_set(problem, fit, lp, o.alpha, q_table); break;
    case Method::Pivot: set = pivot_set(problem, fit, lp, o.alpha, p_table); break;
    case Method::Subsample: break;
  }
  const LinkKind link = parse_link(o.link);
  if (link != LinkKind::Identity && !lp.instability_warning) {
    const Interval rr = relative_risk_ci(fit, lp, problem.size(), o.alpha, p_table);
    extra["relative_risk_interval"] = {rr.lo, rr.hi};
  }
  return set;
}

}  // namespace

ModelSpec parse_model(std::string_view text) {
  ModelSpec spec;
  if (text == "stump") return spec;
  if (text.substr(0, 5) != "poly:") {
    fail(ErrorCode::InvalidArgument,
         "model must be 'stump' or 'poly:kl,ku', got '" + std::string(text) + "'");
  }
  const auto parts = split_commas(text.substr(5));
  if (parts.size() != 2) fail(ErrorCode::InvalidArgument, "model 'poly:kl,ku' needs two degrees");
  spec.stump = false;
  spec.poly.degree_left = parse_count(parts[0], "left degree");
  spec.poly.degree_right = parse_count(parts[1], "right degree");
  return spec;
}

BandwidthPolicy parse_bandwidth(std::string_view text) {
  if (text == "cv") return CrossValidatedBandwidth{};
  if (text.substr(0, 6) == "fixed:") {
    BandwidthPolicy p = FixedBandwidth{parse_real(text.substr(6), "bandwidth")};
    validate(p);
    return p;
  }
  fail(ErrorCode::InvalidArgument,
       "bandwidth must be 'cv' or 'fixed:h', got '" + std::string(text) + "'");
}

std::optional<NuisanceEstimates> parse_nuisance_spec(std::string_view text) {
  if (text == "auto") return std::nullopt;
  if (text.substr(0, 7) != "manual:") {
    fail(ErrorCode::InvalidArgument,
         "nuisance must be 'auto' or 'manual:p,F,fprime,sigma2', got '" + std::string(text) + "'");
  }
  const auto parts = split_commas(text.substr(7));
  if (parts.size() != 4) {
    fail(ErrorCode::InvalidArgument, "manual nuisance needs four values: p,F,fprime,sigma2");
  }
  NuisanceEstimates n;
  n.density_at_d = parse_real(parts[0], "density");
  n.cdf_at_d = parse_real(parts[1], "cdf");
  n.fprime_at_d = parse_real(parts[2], "fprime");
  n.sigma2_at_d = parse_real(parts[3], "sigma2");
  return n;
}

FitReport build_fit_report(const Sample& sample, const FitOptions& options) {
  const ModelSpec model = parse_model(options.model);
  const LinkKind link = parse_link(options.link);
  NuisanceOptions nopts;
  nopts.bandwidth = parse_bandwidth(options.bandwidth);

  FitReport r;
  r.model = options.model;
  r.link = std::string(link_name(link));
  r.n = sample.size();
  if (model.stump) {
    const StumpFit fit = fit_stump(sample, options.min_side);
    r.d_hat = fit.d_hat;
    r.beta_l = fit.beta_l;
    r.beta_u = fit.beta_u;
    r.rss = fit.rss;
    r.n_left = fit.n_left;
  } else {
    const ParametricFit fit = fit_parametric(sample, model.poly, options.min_side);
    r.d_hat = fit.d_hat;
    r.beta_l = fit.left_value(fit.d_hat);
    r.beta_u = fit.right_value(fit.d_hat);
    r.rss = fit.rss;
    r.n_left = fit.n_left;
    r.coef_left = fit.coef_left;
    r.coef_right = fit.coef_right;
    try {
      const auto nuis = estimate_nuisance(sample, fit.d_hat, nopts);
      r.nuisance = nuis;
      const auto cal = parametric_calibration(fit, nuis, sample.size(), 0.05,
                                              embedded_table(LimitDistribution::MaxQ1));
      r.limits = {{"a", cal.a}, {"b0", cal.b0}, {"jump", cal.jump}, {"psi_slope", cal.psi_slope}};
    } catch (const Error& e) {
      r.warnings.push_back(std::string(error_code_name(e.code())) + ": " + e.what());
    }
  }
  r.theta_l = apply_link(link, r.beta_l);
  r.theta_u = apply_link(link, r.beta_u);

  if (model.stump) {
    try {
      const auto nuis = estimate_nuisance(sample, r.d_hat, nopts);
      r.nuisance = nuis;
      const auto lp = limit_params(nuis, r.beta_l, r.beta_u);
      r.limits = {{"a", lp.a}, {"b", lp.b}, {"b0", lp.b0}, {"c1", lp.c1}, {"c2", lp.c2}};
      if (lp.instability_warning) {
        r.warnings.push_back("Unstable: estimated b <= 0; Wald and RSS1 sets are unavailable");
      }
    } catch (const Error& e) {
      r.warnings.push_back(std::string(error_code_name(e.code())) + ": " + e.what());
    }
  }
  return r;
}

CiResult run_ci(const Sample& sample, const CiOptions& o) {
  check_alpha(o.alpha);
  const Method method = parse_method(o.method);
  const ModelSpec model = parse_model(o.model);
  parse_link(o.link);
  parse_bandwidth(o.bandwidth);
  parse_nuisance_spec(o.nuisance);

  CiResult result;
  std::map<std::string, std::vector<double>> extra;
  try {
    if (model.stump) {
      result.set = stump_ci(sample, o, method, extra);
    } else {
      if (method != Method::Rss2) {
        fail(ErrorCode::InvalidArgument, "polynomial working models support only rss2");
      }
      const ParametricProblem problem(sample, model.poly, o.min_side);
      const ParametricFit fit = problem.fit();
      result.set = rss2_ci_parametric(problem, fit, nuisance_for(sample, fit.d_hat, o), o.alpha,
                                      embedded_table(LimitDistribution::MaxQ1));
    }
  } catch (const Error& e) {
    throw Error(e.code(), std::string(method_name(method)) + ": " + e.what());
  }
  result.report = to_json(result.set,
                          {{"model", o.model}, {"link", o.link}, {"nuisance", o.nuisance}}, extra);
  return result;
}

std::string run_simulate(std::string_view scenario_json, std::string_view format) {
  if (format != "long" && format != "wide") {
    fail(ErrorCode::InvalidArgument, "format must be 'long' or 'wide'");
  }
  const auto scenarios = parse_scenarios(scenario_json);
  std::vector<CoverageReport> reports;
  reports.reserve(scenarios.size());
  for (const auto& s : scenarios) reports.push_back(run_coverage_experiment(s));
  return format == "long" ? format_report_long(reports) : format_report_wide(reports);
}

std::string run_quantiles(const QuantileOptions& o) {
  const LimitDistribution dist = parse_distribution(o.dist);
  std::vector<double> cdf;
  for (double level : o.levels) {
    if (!(level > 0.0 && level < 1.0)) {
      fail(ErrorCode::LevelOutOfRange, "levels must lie in (0, 1), got " + format_double(level));
    }
    cdf.push_back(1.0 - level);
  }
  std::sort(cdf.begin(), cdf.end());
  cdf.erase(std::unique(cdf.begin(), cdf.end()), cdf.end());

  if (o.regenerate) {
    ProcessSpec spec;
    spec.half_width = o.half_width;
    spec.step = o.step;
    spec.replications = o.reps;
    spec.seed = o.seed;
    validate(spec);
    const auto levels = cdf.empty() ? default_cdf_levels() : cdf;
    auto tables = simulate_tables(spec, levels);
    return format_table(dist == LimitDistribution::ChernoffArgmax ? tables.first : tables.second);
  }

  const QuantileTable& full = embedded_table(dist);
  if (cdf.empty()) return format_table(full);
  QuantileTable subset;
  subset.dist = dist;
  subset.provenance = full.provenance;
  for (double p : cdf) {
    subset.cdf_levels.push_back(p);
    subset.quantiles.push_back(full.at_cdf(p));
  }
  return format_table(subset);
}

}  // namespace splitset
