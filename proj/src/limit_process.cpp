#include "splitset/limit_process.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include "quantile_tables_data.hpp"
#include "splitset/error.hpp"
#include "splitset/parallel.hpp"

namespace splitset {
namespace {

constexpr std::uint64_t kProcessStream = 0x70726f63657373ULL;

// Walks both halves of the path outward from 0. `stride` selects the
// coarse subgrid evaluated alongside the full grid.
void walk_path(Rng& rng, double a, double b, double h, std::size_t steps, std::size_t stride,
               ArgmaxMax& full, ArgmaxMax& coarse) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(h);
  double w_neg = 0.0;
  double w_pos = 0.0;
  full = {0.0, 0.0};
  coarse = {0.0, 0.0};
  for (std::size_t k = 1; k <= steps; ++k) {
    w_neg += sd * normal(rng);
    w_pos += sd * normal(rng);
    const double t = static_cast<double>(k) * h;
    const double drift = b * t * t;
    const double q_neg = a * w_neg - drift;
    const double q_pos = a * w_pos - drift;
    if (q_neg > full.max) full = {-t, q_neg};
    if (q_pos > full.max) full = {t, q_pos};
    if (k % stride == 0) {
      if (q_neg > coarse.max) coarse = {-t, q_neg};
      if (q_pos > coarse.max) coarse = {t, q_pos};
    }
  }
}

std::size_t step_count(double half_width, double step) {
  return static_cast<std::size_t>(std::llround(half_width / step));
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(ErrorCode::ParseError,
         "quantile table line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void validate(const ProcessSpec& spec) {
  if (!(spec.a > 0.0) || !(spec.b > 0.0)) {
    fail(ErrorCode::InvalidArgument, "process scale a and curvature b must be positive");
  }
  const double needed = 3.0 * std::pow(spec.a / spec.b, 2.0 / 3.0);
  if (!(spec.half_width >= needed)) {
    fail(ErrorCode::InvalidArgument,
         "half width T must be at least 3 (a/b)^(2/3) = " + std::to_string(needed));
  }
  if (!(spec.step > 0.0) || !(spec.step <= spec.half_width / 1000.0)) {
    fail(ErrorCode::InvalidArgument, "grid step h must lie in (0, T/1000]");
  }
  if (spec.replications < 10000) {
    fail(ErrorCode::InvalidArgument, "at least 10^4 replications are required");
  }
}

std::vector<ArgmaxMax> simulate_argmax_max(const ProcessSpec& spec) {
  validate(spec);
  const std::size_t steps = step_count(spec.half_width, spec.step);
  std::vector<ArgmaxMax> out(spec.replications);
  parallel_for(spec.replications, [&](std::size_t r) {
    Rng rng = make_rng(spec.seed, kProcessStream, r);
    ArgmaxMax coarse;
    walk_path(rng, spec.a, spec.b, spec.step, steps, 1, out[r], coarse);
  });
  return out;
}

NestedGridDraws simulate_argmax_max_nested(const ProcessSpec& spec) {
  validate(spec);
  const std::size_t steps = 2 * step_count(spec.half_width, spec.step);
  NestedGridDraws out;
  out.fine.resize(spec.replications);
  out.coarse.resize(spec.replications);
  parallel_for(spec.replications, [&](std::size_t r) {
    Rng rng = make_rng(spec.seed, kProcessStream, r);
    walk_path(rng, spec.a, spec.b, spec.step / 2.0, steps, 2, out.fine[r], out.coarse[r]);
  });
  return out;
}

std::string_view distribution_name(LimitDistribution dist) noexcept {
  return dist == LimitDistribution::ChernoffArgmax ? "chernoff_argmax" : "maxq1";
}

LimitDistribution parse_distribution(std::string_view name) {
  if (name == "chernoff" || name == "chernoff_argmax") return LimitDistribution::ChernoffArgmax;
  if (name == "maxq1") return LimitDistribution::MaxQ1;
  fail(ErrorCode::InvalidArgument, "unknown distribution '" + std::string(name) + "'");
}

double QuantileTable::at_cdf(double p) const {
  if (cdf_levels.empty()) fail(ErrorCode::LevelOutOfRange, "quantile table is empty");
  constexpr double kSlack = 1e-12;
  if (!(p >= cdf_levels.front() - kSlack && p <= cdf_levels.back() + kSlack)) {
    fail(ErrorCode::LevelOutOfRange,
         "cumulative level " + std::to_string(p) + " lies outside the tabulated range [" +
             std::to_string(cdf_levels.front()) + ", " + std::to_string(cdf_levels.back()) + "]");
  }
  if (p <= cdf_levels.front()) return quantiles.front();
  if (p >= cdf_levels.back()) return quantiles.back();
  const auto it = std::upper_bound(cdf_levels.begin(), cdf_levels.end(), p);
  const std::size_t j = static_cast<std::size_t>(it - cdf_levels.begin());
  const double p0 = cdf_levels[j - 1];
  const double p1 = cdf_levels[j];
  const double w = (p - p0) / (p1 - p0);
  return quantiles[j - 1] + w * (quantiles[j] - quantiles[j - 1]);
}

std::vector<double> default_cdf_levels() {
  const double lower[] = {0.001, 0.0025, 0.005, 0.0075, 0.01, 0.015, 0.02, 0.025, 0.03,
                          0.04,  0.05,   0.06,  0.07,   0.075, 0.08, 0.09, 0.1,   0.125,
                          0.15,  0.175,  0.2,   0.25,   0.3,  0.35, 0.4,  0.45};
  std::vector<double> levels(std::begin(lower), std::end(lower));
  levels.push_back(0.5);
  for (auto it = std::rbegin(lower); it != std::rend(lower); ++it) {
    // Round to the nearest 1e-6 so 1 - p prints cleanly.
    levels.push_back(std::round((1.0 - *it) * 1e6) / 1e6);
  }
  return levels;
}

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::LevelOutOfRange, "probability outside [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

QuantileTable make_table(LimitDistribution dist, std::vector<double> draws,
                         std::span<const double> cdf_levels, const TableProvenance& provenance) {
  std::sort(draws.begin(), draws.end());
  QuantileTable table;
  table.dist = dist;
  table.provenance = provenance;
  table.cdf_levels.assign(cdf_levels.begin(), cdf_levels.end());
  table.quantiles.reserve(cdf_levels.size());
  for (double p : cdf_levels) table.quantiles.push_back(empirical_quantile(draws, p));
  return table;
}

std::pair<QuantileTable, QuantileTable> simulate_tables(const ProcessSpec& spec,
                                                        std::span<const double> cdf_levels) {
  if (spec.a != 1.0 || spec.b != 1.0) {
    fail(ErrorCode::InvalidArgument, "quantile tables are built for the standardised process");
  }
  const auto draws = simulate_argmax_max(spec);
  std::vector<double> argmaxes;
  std::vector<double> maxes;
  argmaxes.reserve(draws.size());
  maxes.reserve(draws.size());
  for (const auto& d : draws) {
    argmaxes.push_back(d.argmax);
    maxes.push_back(d.max);
  }
  const TableProvenance prov{false, spec.seed, spec.replications, spec.half_width, spec.step};
  return {make_table(LimitDistribution::ChernoffArgmax, std::move(argmaxes), cdf_levels, prov),
          make_table(LimitDistribution::MaxQ1, std::move(maxes), cdf_levels, prov)};
}

const QuantileTable& embedded_table(LimitDistribution dist) {
  static const auto build = [](LimitDistribution which, const detail::EmbeddedTableData& data) {
    QuantileTable t;
    t.dist = which;
    t.cdf_levels.assign(data.cdf_levels, data.cdf_levels + data.size);
    t.quantiles.assign(data.quantiles, data.quantiles + data.size);
    t.provenance = {true, data.seed, data.replications, data.half_width, data.step};
    return t;
  };
  static const QuantileTable chernoff =
      build(LimitDistribution::ChernoffArgmax, detail::kEmbeddedChernoff);
  static const QuantileTable maxq1 = build(LimitDistribution::MaxQ1, detail::kEmbeddedMaxQ1);
  return dist == LimitDistribution::ChernoffArgmax ? chernoff : maxq1;
}

double chernoff_quantile(double alpha_half, const QuantileTable& table) {
  if (table.dist != LimitDistribution::ChernoffArgmax) {
    fail(ErrorCode::InvalidArgument, "expected a Chernoff (argmax) quantile table");
  }
  if (!(alpha_half > 0.0 && alpha_half < 1.0)) {
    fail(ErrorCode::LevelOutOfRange, "alpha/2 must lie in (0, 1)");
  }
  return table.at_cdf(1.0 - alpha_half);
}

double maxq1_quantile(double alpha, const QuantileTable& table) {
  if (table.dist != LimitDistribution::MaxQ1) {
    fail(ErrorCode::InvalidArgument, "expected a max-Q1 quantile table");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::LevelOutOfRange, "alpha must lie in (0, 1)");
  return table.at_cdf(1.0 - alpha);
}

std::string format_table(const QuantileTable& table) {
  std::ostringstream out;
  const auto& p = table.provenance;
  out << "# dist=" << distribution_name(table.dist)
      << " source=" << (p.embedded ? "embedded" : "simulated") << " seed=" << p.seed
      << " reps=" << p.replications << " T=" << format_number(p.half_width)
      << " h=" << format_number(p.step) << "\n";
  out << "level\tquantile\n";
  for (std::size_t i = table.cdf_levels.size(); i-- > 0;) {
    const double upper = std::round((1.0 - table.cdf_levels[i]) * 1e9) / 1e9;
    out << format_number(upper) << "\t" << format_number(table.quantiles[i]) << "\n";
  }
  return out.str();
}

QuantileTable parse_table(std::string_view text) {
  QuantileTable table;
  bool have_dist = false;
  bool have_header = false;
  std::vector<std::pair<double, double>> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields{std::string(line.substr(1))};
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "dist") {
          table.dist = parse_distribution(value);
          have_dist = true;
        } else if (key == "source") {
          table.provenance.embedded = value == "embedded";
        } else if (key == "seed") {
          table.provenance.seed = std::stoull(value);
        } else if (key == "reps") {
          table.provenance.replications = std::stoull(value);
        } else if (key == "T") {
          table.provenance.half_width = parse_number(value, line_no);
        } else if (key == "h") {
          table.provenance.step = parse_number(value, line_no);
        }
      }
      continue;
    }
    if (!have_header) {
      if (line != "level\tquantile") {
        fail(ErrorCode::ParseError, "quantile table header must be 'level<TAB>quantile'");
      }
      have_header = true;
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail(ErrorCode::ParseError, "quantile table line " + std::to_string(line_no) + " lacks a tab");
    }
    const double level = parse_number(line.substr(0, tab), line_no);
    const double q = parse_number(line.substr(tab + 1), line_no);
    if (!(level > 0.0 && level < 1.0)) {
      fail(ErrorCode::ParseError, "quantile table line " + std::to_string(line_no) +
                                      ": level outside (0, 1)");
    }
    rows.emplace_back(1.0 - level, q);
  }
  if (!have_dist) fail(ErrorCode::ParseError, "quantile table lacks a dist= provenance field");
  if (rows.empty()) fail(ErrorCode::ParseError, "quantile table has no rows");
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].first > rows[i - 1].first)) {
      fail(ErrorCode::ParseError, "quantile table has duplicate levels");
    }
    if (i > 0 && rows[i].second < rows[i - 1].second) {
      fail(ErrorCode::ParseError, "quantile table is not monotone");
    }
    table.cdf_levels.push_back(rows[i].first);
    table.quantiles.push_back(rows[i].second);
  }
  return table;
}

}  // namespace splitset
