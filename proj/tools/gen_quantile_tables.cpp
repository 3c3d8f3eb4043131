// Writes src/quantile_tables_data.cpp from a fresh simulation of the
// standardised limit process.
//
//   gen_quantile_tables <output.cpp> [reps] [seed]

#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>

#include "splitset/io.hpp"
#include "splitset/limit_process.hpp"

namespace {

std::string array_literal(const char* name, const std::vector<double>& v) {
  std::ostringstream out;
  out << "const double " << name << "[] = {\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << (i % 4 == 0 ? "    " : " ") << splitset::format_double(v[i]) << ",";
    if (i % 4 == 3 || i + 1 == v.size()) out << "\n";
  }
  out << "};\n";
  return out.str();
}

std::string table_entry(const char* name, const char* quantiles,
                        const splitset::QuantileTable& t) {
  const auto& p = t.provenance;
  std::ostringstream out;
  out << "const EmbeddedTableData " << name << " = {kLevels, " << quantiles << ", "
      << t.cdf_levels.size() << ", " << p.seed << "u, " << p.replications << ", "
      << splitset::format_double(p.half_width) << ", " << splitset::format_double(p.step)
      << "};\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <output.cpp> [reps] [seed]\n", argv[0]);
    return 2;
  }
  try {
    splitset::ProcessSpec spec;
    if (argc > 2) spec.replications = std::stoull(argv[2]);
    if (argc > 3) spec.seed = std::stoull(argv[3]);
    const auto levels = splitset::default_cdf_levels();
    const auto [chernoff, maxq1] = splitset::simulate_tables(spec, levels);

    std::ostringstream out;
    out << "// Generated by tools/gen_quantile_tables: T=" << splitset::format_double(spec.half_width)
        << " h=" << splitset::format_double(spec.step) << " reps=" << spec.replications
        << " seed=" << spec.seed << ".\n";
    out << "#include \"quantile_tables_data.hpp\"\n\n";
    out << "namespace splitset::detail {\nnamespace {\n\n";
    out << array_literal("kLevels", levels) << "\n";
    out << array_literal("kChernoff", chernoff.quantiles) << "\n";
    out << array_literal("kMaxQ1", maxq1.quantiles) << "\n";
    out << "}  // namespace\n\n";
    out << table_entry("kEmbeddedChernoff", "kChernoff", chernoff);
    out << table_entry("kEmbeddedMaxQ1", "kMaxQ1", maxq1);
    out << "\n}  // namespace splitset::detail\n";
    splitset::write_text_file(argv[1], out.str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
