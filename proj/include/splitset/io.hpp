#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitset/confidence_sets.hpp"
#include "splitset/sample.hpp"
#include "splitset/simulation.hpp"

namespace splitset {

// Shortest representation that reads back to the same double; "nan",
// "inf" and "-inf" for non-finite values.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// Two columns with header "x,y". ParseError names the offending line.
Sample parse_csv(std::string_view text);
Sample read_csv(const std::string& path);
std::string format_csv(const Sample& sample);
void write_csv(const std::string& path, const Sample& sample);

struct FitReport {
  std::string model = "stump";
  std::string link = "identity";
  std::size_t n = 0;
  double d_hat = 0.0;
  double beta_l = 0.0;
  double beta_u = 0.0;
  double theta_l = 0.0;  // link-transformed levels
  double theta_u = 0.0;
  double rss = 0.0;
  std::size_t n_left = 0;
  std::vector<double> coef_left;   // polynomial models only
  std::vector<double> coef_right;
  std::optional<NuisanceEstimates> nuisance;
  std::map<std::string, double> limits;
  std::vector<std::string> warnings;

  bool operator==(const FitReport&) const;
};

std::string to_json(const FitReport& report);
FitReport fit_report_from_json(std::string_view text);

// Extra top-level fields are merged into the object.
std::string to_json(const ConfidenceSet& set, const std::map<std::string, std::string>& context,
                    const std::map<std::string, std::vector<double>>& extra = {});

// A single scenario object or an array of them. Unknown keys raise
// ConfigError naming the key.
std::vector<Scenario> parse_scenarios(std::string_view json_text);

}  // namespace splitset
