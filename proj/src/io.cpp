#include "splitset/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "splitset/error.hpp"

namespace splitset {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_cell(std::string_view cell, std::size_t line, const char* column) {
  cell = trim(cell);
  const std::string where = "line " + std::to_string(line) + ", column " + column;
  if (cell.empty()) fail(ErrorCode::ParseError, where + ": missing value");
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    fail(ErrorCode::ParseError, where + ": '" + std::string(cell) + "' is not a number");
  }
  if (!std::isfinite(v)) fail(ErrorCode::ParseError, where + ": value is not finite");
  return v;
}

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double read_number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::numeric_limits<double>::quiet_NaN();
  return it->get<double>();
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::IoError, "failed writing '" + path + "'");
}

Sample parse_csv(std::string_view text) {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (!header_seen) {
      if (comma == std::string_view::npos || trim(line.substr(0, comma)) != "x" ||
          trim(line.substr(comma + 1)) != "y") {
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected header \"x,y\"");
      }
      header_seen = true;
      continue;
    }
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      fail(ErrorCode::ParseError,
           "line " + std::to_string(line_no) + ": expected exactly two comma-separated values");
    }
    x.push_back(parse_cell(line.substr(0, comma), line_no, "x"));
    y.push_back(parse_cell(line.substr(comma + 1), line_no, "y"));
  }
  if (!header_seen) fail(ErrorCode::ParseError, "empty input: expected header \"x,y\"");
  if (x.size() < 2) {
    fail(ErrorCode::DegenerateSample, "need at least 2 data rows, found " + std::to_string(x.size()));
  }
  return Sample(std::move(x), std::move(y));
}

Sample read_csv(const std::string& path) { return parse_csv(read_text_file(path)); }

std::string format_csv(const Sample& sample) {
  std::string out = "x,y\n";
  const auto xs = sample.x();
  const auto ys = sample.y();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out += format_double(xs[i]);
    out += ',';
    out += format_double(ys[i]);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const Sample& sample) {
  write_text_file(path, format_csv(sample));
}

bool FitReport::operator==(const FitReport& o) const {
  auto same_vec = [](const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!same(a[i], b[i])) return false;
    }
    return true;
  };
  if (nuisance.has_value() != o.nuisance.has_value()) return false;
  if (nuisance && !(same(nuisance->density_at_d, o.nuisance->density_at_d) &&
                    same(nuisance->cdf_at_d, o.nuisance->cdf_at_d) &&
                    same(nuisance->fprime_at_d, o.nuisance->fprime_at_d) &&
                    same(nuisance->sigma2_at_d, o.nuisance->sigma2_at_d))) {
    return false;
  }
  if (limits.size() != o.limits.size()) return false;
  for (const auto& [k, v] : limits) {
    const auto it = o.limits.find(k);
    if (it == o.limits.end() || !same(v, it->second)) return false;
  }
  return model == o.model && link == o.link && n == o.n && same(d_hat, o.d_hat) &&
         same(beta_l, o.beta_l) && same(beta_u, o.beta_u) && same(theta_l, o.theta_l) &&
         same(theta_u, o.theta_u) && same(rss, o.rss) && n_left == o.n_left &&
         same_vec(coef_left, o.coef_left) && same_vec(coef_right, o.coef_right) &&
         warnings == o.warnings;
}

std::string to_json(const FitReport& r) {
  json j;
  j["model"] = r.model;
  j["link"] = r.link;
  j["n"] = r.n;
  j["d_hat"] = number(r.d_hat);
  j["n_left"] = r.n_left;
  j["levels"] = {{"beta_l", number(r.beta_l)}, {"beta_u", number(r.beta_u)}};
  j["linked_levels"] = {{"theta_l", number(r.theta_l)}, {"theta_u", number(r.theta_u)}};
  j["rss"] = number(r.rss);
  if (!r.coef_left.empty() || !r.coef_right.empty()) {
    j["coefficients"] = {{"left", r.coef_left}, {"right", r.coef_right}};
  }
  if (r.nuisance) {
    j["nuisance"] = {{"density", number(r.nuisance->density_at_d)},
                     {"cdf", number(r.nuisance->cdf_at_d)},
                     {"fprime", number(r.nuisance->fprime_at_d)},
                     {"sigma2", number(r.nuisance->sigma2_at_d)}};
  }
  json lim = json::object();
  for (const auto& [k, v] : r.limits) lim[k] = number(v);
  j["limits"] = lim;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

FitReport fit_report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    FitReport r;
    r.model = j.at("model").get<std::string>();
    r.link = j.at("link").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.d_hat = read_number(j, "d_hat");
    r.n_left = j.at("n_left").get<std::size_t>();
    r.beta_l = read_number(j.at("levels"), "beta_l");
    r.beta_u = read_number(j.at("levels"), "beta_u");
    r.theta_l = read_number(j.at("linked_levels"), "theta_l");
    r.theta_u = read_number(j.at("linked_levels"), "theta_u");
    r.rss = read_number(j, "rss");
    if (j.contains("coefficients")) {
      r.coef_left = j["coefficients"].at("left").get<std::vector<double>>();
      r.coef_right = j["coefficients"].at("right").get<std::vector<double>>();
    }
    if (j.contains("nuisance")) {
      const auto& nj = j["nuisance"];
      r.nuisance = NuisanceEstimates{read_number(nj, "density"), read_number(nj, "cdf"),
                                     read_number(nj, "fprime"), read_number(nj, "sigma2")};
    }
    for (const auto& [k, v] : j.at("limits").items()) {
      r.limits[k] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("malformed fit report: ") + e.what());
  }
}

std::string to_json(const ConfidenceSet& set, const std::map<std::string, std::string>& context,
                    const std::map<std::string, std::vector<double>>& extra) {
  json j;
  for (const auto& [k, v] : context) j[k] = v;
  j["method"] = std::string(method_name(set.method));
  j["level"] = number(set.level);
  j["point_estimate"] = number(set.point_estimate);
  json comps = json::array();
  for (const auto& c : set.accepted) comps.push_back({number(c.lo), number(c.hi)});
  j["accepted"] = comps;
  j["longest_component"] = {number(set.longest_component.lo), number(set.longest_component.hi)};
  json diag = json::object();
  for (const auto& [k, v] : set.diagnostics) diag[k] = number(v);
  j["diagnostics"] = diag;
  for (const auto& [k, v] : extra) {
    json arr = json::array();
    for (double d : v) arr.push_back(number(d));
    j[k] = arr;
  }
  return j.dump(2) + "\n";
}

namespace {

template <typename T>
T get_field(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::ConfigError, "scenario key '" + key + "' has the wrong type");
  }
}

Scenario parse_one_scenario(const json& j) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, "each scenario must be an object");
  static const std::set<std::string> known = {
      "n",     "reps",       "error_model", "methods",    "alpha",     "nuisance",
      "seed",  "gamma",      "subsamples",  "pilot_grid", "pilot_reps"};
  Scenario s;
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(ErrorCode::ConfigError, "unknown scenario key '" + key + "'");
    if (key == "n") {
      s.n = get_field<std::size_t>(value, key);
    } else if (key == "reps") {
      s.reps = get_field<std::size_t>(value, key);
    } else if (key == "error_model") {
      s.error_model = parse_error_model(get_field<std::string>(value, key));
    } else if (key == "methods") {
      s.methods.clear();
      for (const auto& m : get_field<std::vector<std::string>>(value, key)) {
        try {
          s.methods.push_back(parse_method(m));
        } catch (const Error& e) {
          fail(ErrorCode::ConfigError, "scenario key 'methods': " + std::string(e.what()));
        }
      }
    } else if (key == "alpha") {
      s.alpha = get_field<double>(value, key);
    } else if (key == "nuisance") {
      s.nuisance_mode = parse_nuisance_mode(get_field<std::string>(value, key));
    } else if (key == "seed") {
      s.seed = get_field<std::uint64_t>(value, key);
    } else if (key == "gamma") {
      if (!value.is_null()) s.gamma = get_field<double>(value, key);
    } else if (key == "subsamples") {
      s.n_subsamples = get_field<std::size_t>(value, key);
    } else if (key == "pilot_grid") {
      s.pilot_grid = get_field<std::vector<double>>(value, key);
    } else if (key == "pilot_reps") {
      s.pilot_reps = get_field<std::size_t>(value, key);
    }
  }
  validate(s);
  return s;
}

}  // namespace

std::vector<Scenario> parse_scenarios(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("scenario file is not valid JSON: ") + e.what());
  }
  std::vector<Scenario> out;
  if (j.is_array()) {
    if (j.empty()) fail(ErrorCode::ConfigError, "scenario list is empty");
    for (const auto& item : j) out.push_back(parse_one_scenario(item));
  } else {
    out.push_back(parse_one_scenario(j));
  }
  return out;
}

}  // namespace splitset
