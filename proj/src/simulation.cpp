#include "splitset/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "splitset/error.hpp"
#include "splitset/io.hpp"
#include "splitset/limit_process.hpp"
#include "splitset/parallel.hpp"
#include "splitset/stump.hpp"

namespace splitset {
namespace {

constexpr std::uint64_t kDataStream = 0x64617461ULL;
constexpr std::uint64_t kRepStream = 0x726570ULL;
constexpr std::uint64_t kRepSubsampleStream = 0x7265707375ULL;
constexpr std::uint64_t kPilotStream = 0x70696c6f74ULL;
constexpr std::uint64_t kPilotSubsampleStream = 0x70696c7375ULL;

constexpr double kSlope = 15.0;

struct MethodOutcome {
  bool ok = false;
  std::string failure;
  bool covered = false;
  bool covered_full = false;
  double length = 0.0;
  double full_length = 0.0;
};

MethodOutcome outcome_of(const ConfidenceSet& set, double truth) {
  MethodOutcome o;
  o.ok = true;
  o.covered = set.longest_component.contains(truth);
  o.length = set.longest_component.length();
  const Interval hull = set.hull();
  o.covered_full = hull.contains(truth);
  o.full_length = hull.length();
  return o;
}

ConfidenceSet build_set(Method method, const StumpProblem& problem, const StumpFit& fit,
                        const std::optional<LimitParams>& lp, double alpha,
                        const SubsampleSpec& sub) {
  const auto& p_table = embedded_table(LimitDistribution::ChernoffArgmax);
  const auto& q_table = embedded_table(LimitDistribution::MaxQ1);
  if (method == Method::Subsample) {
    return subsample_ci(problem.sorted_sample(), stump_estimator(problem.min_side()), sub, alpha,
                        problem.min_side());
  }
  switch (method) {
    case Method::Wald: return wald_set(fit, *lp, problem.size(), alpha, p_table);
    case Method::Rss1: return rss1_set(problem, fit, *lp, alpha, q_table);
    case Method::Rss2: return rss2_set(problem, fit, *lp, alpha, q_table);
    case Method::Pivot: return pivot_set(problem, fit, *lp, alpha, p_table);
    case Method::Subsample: break;
  }
  fail(ErrorCode::InvalidArgument, "unsupported method");
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::string_view error_model_name(ErrorModel model) noexcept {
  switch (model) {
    case ErrorModel::Homoscedastic: return "homoscedastic";
    case ErrorModel::Heteroscedastic: return "heteroscedastic";
    case ErrorModel::Noiseless: return "noiseless";
  }
  return "unknown";
}

ErrorModel parse_error_model(std::string_view name) {
  for (ErrorModel m :
       {ErrorModel::Homoscedastic, ErrorModel::Heteroscedastic, ErrorModel::Noiseless}) {
    if (error_model_name(m) == name) return m;
  }
  fail(ErrorCode::ConfigError, "unknown error model '" + std::string(name) + "'");
}

double sigmoid_mean(double x) {
  const double z = kSlope * (x - 0.5);
  return 1.0 / (1.0 + std::exp(-z));
}

double sigmoid_slope(double x) {
  const double f = sigmoid_mean(x);
  return kSlope * f * (1.0 - f);
}

double error_variance(ErrorModel model, double x) {
  switch (model) {
    case ErrorModel::Homoscedastic: return 0.25;
    case ErrorModel::Heteroscedastic: return std::exp(-2.77 * x);
    case ErrorModel::Noiseless: return 0.0;
  }
  return 0.0;
}

Sample generate_sample(std::size_t n, ErrorModel model, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "sample size must be at least 2");
  Rng rng = make_rng(seed, kDataStream, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = unif(rng);
    const double e = normal(rng);
    y[i] = sigmoid_mean(x[i]) + std::sqrt(error_variance(model, x[i])) * e;
  }
  return Sample(std::move(x), std::move(y));
}

TrueModel true_limit_constants(ErrorModel model) {
  // Antiderivative of the logistic curve: log(1 + exp(15 (x - 0.5))) / 15.
  const double half = std::log1p(std::exp(-7.5));
  TrueModel t;
  t.d0 = 0.5;
  t.beta_l0 = 2.0 * (std::log(2.0) - half) / kSlope;
  t.beta_u0 = 2.0 * (7.5 + half - std::log(2.0)) / kSlope;
  t.nuisance.density_at_d = 1.0;
  t.nuisance.cdf_at_d = 0.5;
  t.nuisance.fprime_at_d = sigmoid_slope(0.5);
  t.nuisance.sigma2_at_d = std::max(kSigma2Floor, error_variance(model, 0.5));
  t.limits = limit_params(t.nuisance, t.beta_l0, t.beta_u0);
  return t;
}

std::string_view nuisance_mode_name(NuisanceMode mode) noexcept {
  return mode == NuisanceMode::TrueValues ? "true" : "estimated";
}

NuisanceMode parse_nuisance_mode(std::string_view name) {
  if (name == "true" || name == "true_values") return NuisanceMode::TrueValues;
  if (name == "estimated") return NuisanceMode::Estimated;
  fail(ErrorCode::ConfigError, "unknown nuisance mode '" + std::string(name) + "'");
}

std::vector<double> default_pilot_grid() { return {0.33, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

void validate(const Scenario& s) {
  if (s.n < 2) fail(ErrorCode::ConfigError, "n must be at least 2");
  if (s.reps < 1) fail(ErrorCode::ConfigError, "reps must be at least 1");
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) fail(ErrorCode::ConfigError, "alpha must lie in (0, 1)");
  if (s.methods.empty()) fail(ErrorCode::ConfigError, "methods must not be empty");
  if (s.gamma && !(*s.gamma > 0.0 && *s.gamma < 1.0)) {
    fail(ErrorCode::ConfigError, "gamma must lie in (0, 1)");
  }
  if (s.n_subsamples < 100) fail(ErrorCode::ConfigError, "subsamples must be at least 100");
  const bool wants_subsample =
      std::find(s.methods.begin(), s.methods.end(), Method::Subsample) != s.methods.end();
  if (wants_subsample && !s.gamma) {
    if (s.pilot_grid.empty()) fail(ErrorCode::ConfigError, "pilot_grid must not be empty");
    for (double g : s.pilot_grid) {
      if (!(g > 0.0 && g < 1.0)) fail(ErrorCode::ConfigError, "pilot_grid values must lie in (0, 1)");
    }
    if (s.pilot_reps < 100) fail(ErrorCode::ConfigError, "pilot_reps must be at least 100");
  }
}

std::size_t MethodStats::failure_count() const {
  std::size_t total = 0;
  for (const auto& [code, count] : failures) total += count;
  return total;
}

double MethodStats::coverage() const {
  return successes == 0 ? std::numeric_limits<double>::quiet_NaN()
                        : static_cast<double>(covered) / static_cast<double>(successes);
}

double MethodStats::full_coverage() const {
  return successes == 0 ? std::numeric_limits<double>::quiet_NaN()
                        : static_cast<double>(covered_full) / static_cast<double>(successes);
}

double MethodStats::mean_length() const {
  return successes == 0 ? std::numeric_limits<double>::quiet_NaN()
                        : total_length / static_cast<double>(successes);
}

double MethodStats::mean_full_length() const {
  return successes == 0 ? std::numeric_limits<double>::quiet_NaN()
                        : total_full_length / static_cast<double>(successes);
}

double MethodStats::coverage_se() const {
  const double p = coverage();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(successes));
}

const MethodStats& CoverageReport::stats(Method method) const {
  for (const auto& [m, s] : methods) {
    if (m == method) return s;
  }
  fail(ErrorCode::InvalidArgument,
       "method '" + std::string(method_name(method)) + "' was not part of the experiment");
}

NuisanceEstimator default_nuisance_estimator() {
  return [](const Sample& sample, double d) { return estimate_nuisance(sample, d); };
}

double select_block_exponent(const Scenario& scenario, const std::vector<double>& grid,
                             std::size_t pilot_reps, double alpha) {
  if (grid.empty()) fail(ErrorCode::InvalidArgument, "block exponent grid is empty");
  if (grid.size() == 1) return grid.front();
  if (pilot_reps < 100) fail(ErrorCode::InvalidArgument, "pilot_reps must be at least 100");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  const double truth = 0.5;

  // hits[r][g]: 1 covered, 0 missed, -1 failed.
  std::vector<std::vector<int>> hits(pilot_reps, std::vector<int>(grid.size(), -1));
  parallel_for(pilot_reps, [&](std::size_t r) {
    const Sample sample = generate_sample(scenario.n, scenario.error_model,
                                          stream_seed(scenario.seed, kPilotStream, r));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const SubsampleSpec spec{grid[g], scenario.n_subsamples,
                               stream_seed(scenario.seed, kPilotSubsampleStream, r)};
      try {
        const auto set = subsample_ci(sample, stump_estimator(), spec, alpha);
        hits[r][g] = set.longest_component.contains(truth) ? 1 : 0;
      } catch (const Error&) {
        hits[r][g] = -1;
      }
    }
  });

  std::optional<std::size_t> best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::size_t ok = 0;
    std::size_t covered = 0;
    for (std::size_t r = 0; r < pilot_reps; ++r) {
      if (hits[r][g] < 0) continue;
      ++ok;
      covered += static_cast<std::size_t>(hits[r][g]);
    }
    if (ok == 0) continue;
    const double gap =
        std::abs(static_cast<double>(covered) / static_cast<double>(ok) - (1.0 - alpha));
    if (!best || gap < best_gap || (gap == best_gap && grid[g] < grid[*best])) {
      best = g;
      best_gap = gap;
    }
  }
  if (!best) fail(ErrorCode::BlockTooSmall, "no block exponent produced a subsampling interval");
  return grid[*best];
}

CoverageReport run_coverage_experiment(const Scenario& scenario,
                                       const NuisanceEstimator& estimator) {
  validate(scenario);
  CoverageReport report;
  report.scenario = scenario;

  const bool wants_subsample = std::find(scenario.methods.begin(), scenario.methods.end(),
                                         Method::Subsample) != scenario.methods.end();
  double gamma = scenario.gamma.value_or(0.0);
  if (wants_subsample) {
    if (!scenario.gamma) {
      gamma = select_block_exponent(scenario, scenario.pilot_grid, scenario.pilot_reps,
                                    scenario.alpha);
    }
    report.selected_gamma = gamma;
  }

  const TrueModel truth = true_limit_constants(scenario.error_model);
  const std::size_t n_methods = scenario.methods.size();
  std::vector<std::vector<MethodOutcome>> outcomes(scenario.reps,
                                                   std::vector<MethodOutcome>(n_methods));

  parallel_for(scenario.reps, [&](std::size_t r) {
    auto& row = outcomes[r];
    auto fail_all = [&](const std::string& code) {
      for (auto& o : row) o.failure = code;
    };
    const Sample sample = generate_sample(scenario.n, scenario.error_model,
                                          stream_seed(scenario.seed, kRepStream, r));
    std::optional<StumpProblem> problem;
    StumpFit fit;
    try {
      problem.emplace(sample);
      fit = problem->fit();
    } catch (const Error& e) {
      fail_all(std::string(error_code_name(e.code())));
      return;
    }

    std::optional<LimitParams> lp;
    std::string lp_failure;
    if (scenario.nuisance_mode == NuisanceMode::TrueValues) {
      lp = truth.limits;
    } else {
      try {
        lp = limit_params(estimator(sample, fit.d_hat), fit.beta_l, fit.beta_u);
      } catch (const Error& e) {
        lp_failure = std::string(error_code_name(e.code()));
      }
    }

    const SubsampleSpec sub{gamma, scenario.n_subsamples,
                            stream_seed(scenario.seed, kRepSubsampleStream, r)};
    for (std::size_t j = 0; j < n_methods; ++j) {
      const Method method = scenario.methods[j];
      if (method != Method::Subsample && !lp) {
        row[j].failure = lp_failure;
        continue;
      }
      try {
        row[j] = outcome_of(build_set(method, *problem, fit, lp, scenario.alpha, sub), truth.d0);
      } catch (const Error& e) {
        row[j].failure = std::string(error_code_name(e.code()));
      }
    }
  });

  for (std::size_t j = 0; j < n_methods; ++j) {
    MethodStats stats;
    for (std::size_t r = 0; r < scenario.reps; ++r) {
      const auto& o = outcomes[r][j];
      if (!o.ok) {
        ++stats.failures[o.failure];
        continue;
      }
      ++stats.successes;
      stats.covered += o.covered ? 1 : 0;
      stats.covered_full += o.covered_full ? 1 : 0;
      stats.total_length += o.length;
      stats.total_full_length += o.full_length;
    }
    report.methods.emplace_back(scenario.methods[j], std::move(stats));
  }
  return report;
}

std::string format_report_long(const std::vector<CoverageReport>& reports) {
  std::ostringstream out;
  out << "n\terror_model\tnuisance\tmethod\treps\tsuccesses\tfailures\tcoverage\tcoverage_se"
         "\tmean_length\tfull_coverage\tmean_full_length\tgamma\n";
  for (const auto& rep : reports) {
    const auto& s = rep.scenario;
    for (const auto& [method, st] : rep.methods) {
      out << s.n << '\t' << error_model_name(s.error_model) << '\t'
          << nuisance_mode_name(s.nuisance_mode) << '\t' << method_name(method) << '\t' << s.reps
          << '\t' << st.successes << '\t' << st.failure_count() << '\t' << fmt(st.coverage())
          << '\t' << fmt(st.coverage_se()) << '\t' << fmt(st.mean_length()) << '\t'
          << fmt(st.full_coverage()) << '\t' << fmt(st.mean_full_length()) << '\t'
          << (method == Method::Subsample && rep.selected_gamma ? fmt(*rep.selected_gamma)
                                                                : std::string("NA"))
          << '\n';
    }
  }
  return out.str();
}

std::string format_report_wide(const std::vector<CoverageReport>& reports) {
  const Method order[] = {Method::Subsample, Method::Wald, Method::Rss1, Method::Rss2,
                          Method::Pivot};
  std::vector<Method> present;
  for (Method m : order) {
    for (const auto& rep : reports) {
      const bool has = std::any_of(rep.methods.begin(), rep.methods.end(),
                                   [m](const auto& p) { return p.first == m; });
      if (has) {
        present.push_back(m);
        break;
      }
    }
  }
  std::ostringstream out;
  out << "n\terror_model\tnuisance";
  for (Method m : present) {
    out << '\t' << method_name(m) << "_coverage\t" << method_name(m) << "_length\t"
        << method_name(m) << "_failures";
  }
  out << '\n';
  for (const auto& rep : reports) {
    const auto& s = rep.scenario;
    out << s.n << '\t' << error_model_name(s.error_model) << '\t'
        << nuisance_mode_name(s.nuisance_mode);
    for (Method m : present) {
      const auto it = std::find_if(rep.methods.begin(), rep.methods.end(),
                                   [m](const auto& p) { return p.first == m; });
      if (it == rep.methods.end()) {
        out << "\tNA\tNA\tNA";
      } else {
        out << '\t' << fmt(it->second.coverage()) << '\t' << fmt(it->second.mean_length())
            << '\t' << it->second.failure_count();
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string reproduce_table(const std::vector<Scenario>& rows) {
  std::vector<CoverageReport> reports;
  reports.reserve(rows.size());
  for (const auto& s : rows) reports.push_back(run_coverage_experiment(s));
  return format_report_wide(reports);
}

}  // namespace splitset
