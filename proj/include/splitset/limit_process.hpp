#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace splitset {

// Grid simulation of Q(t) = a W(t) - b t^2 on [-T, T] with two-sided
// standard Brownian motion W, W(0) = 0.
struct ProcessSpec {
  double a = 1.0;
  double b = 1.0;
  double half_width = 3.0;  // T
  double step = 5e-4;       // h
  std::size_t replications = 200000;
  std::uint64_t seed = 20070611;
};

// Throws InvalidArgument unless T >= 3 (a/b)^(2/3), h <= T/1000 and R >= 10^4.
void validate(const ProcessSpec& spec);

struct ArgmaxMax {
  double argmax = 0.0;
  double max = 0.0;
};

// One (argmax, max) pair per replication. Grid ties go to the smaller |t|,
// then to the negative side. Replication r draws from its own stream, so
// the output is independent of thread scheduling.
std::vector<ArgmaxMax> simulate_argmax_max(const ProcessSpec& spec);

// Same paths sampled on two nested grids: `fine` uses step h/2 and
// `coarse` keeps every other fine point (step h).
struct NestedGridDraws {
  std::vector<ArgmaxMax> fine;
  std::vector<ArgmaxMax> coarse;
};
NestedGridDraws simulate_argmax_max_nested(const ProcessSpec& spec);

enum class LimitDistribution { ChernoffArgmax, MaxQ1 };

std::string_view distribution_name(LimitDistribution dist) noexcept;
LimitDistribution parse_distribution(std::string_view name);

struct TableProvenance {
  bool embedded = false;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  double half_width = 0.0;
  double step = 0.0;
};

// Quantiles of a limit distribution indexed by cumulative probability.
struct QuantileTable {
  LimitDistribution dist = LimitDistribution::ChernoffArgmax;
  std::vector<double> cdf_levels;  // strictly increasing in (0, 1)
  std::vector<double> quantiles;   // nondecreasing
  TableProvenance provenance;

  // Linear interpolation in the cdf level; LevelOutOfRange outside the table.
  double at_cdf(double p) const;
};

// Cumulative levels tabulated by default (symmetric about 1/2).
std::vector<double> default_cdf_levels();

// Type-7 (linear interpolation) quantile of already sorted values.
double empirical_quantile(std::span<const double> sorted, double p);

QuantileTable make_table(LimitDistribution dist, std::vector<double> draws,
                         std::span<const double> cdf_levels, const TableProvenance& provenance);

// Both tables from one simulation of the standardised process (a = b = 1).
std::pair<QuantileTable, QuantileTable> simulate_tables(const ProcessSpec& spec,
                                                        std::span<const double> cdf_levels);

// Tables shipped with the library (generated by tools/gen_quantile_tables).
const QuantileTable& embedded_table(LimitDistribution dist);

// Upper alpha_half quantile of argmax_t {W(t) - t^2}.
double chernoff_quantile(double alpha_half, const QuantileTable& table);

// Upper alpha quantile of max_t {W(t) - t^2}.
double maxq1_quantile(double alpha, const QuantileTable& table);

// Plain-text table: a provenance comment line, a "level<TAB>quantile"
// header, then one row per upper-tail level in increasing order.
std::string format_table(const QuantileTable& table);
QuantileTable parse_table(std::string_view text);

}  // namespace splitset
