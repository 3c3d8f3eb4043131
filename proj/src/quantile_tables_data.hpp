#pragma once

#include <cstddef>
#include <cstdint>

namespace splitset::detail {

struct EmbeddedTableData {
  const double* cdf_levels;
  const double* quantiles;
  std::size_t size;
  std::uint64_t seed;
  std::size_t replications;
  double half_width;
  double step;
};

extern const EmbeddedTableData kEmbeddedChernoff;
extern const EmbeddedTableData kEmbeddedMaxQ1;

}  // namespace splitset::detail
