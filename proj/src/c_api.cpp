#include "splitset/splitset.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "splitset/commands.hpp"
#include "splitset/error.hpp"
#include "splitset/io.hpp"
#include "splitset/stump.hpp"

struct splitset_text {
  std::string data;
};

struct splitset_sample {
  splitset::Sample sample;
};

struct splitset_confidence_set {
  splitset::ConfidenceSet set;
  std::string report;
};

namespace {

thread_local std::string t_last_error;

splitset_status status_of(splitset::ErrorCode code) {
  return static_cast<splitset_status>(static_cast<int>(code) + 1);
}

template <typename F>
splitset_status guarded(F&& body) {
  try {
    body();
    return SPLITSET_OK;
  } catch (const splitset::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return SPLITSET_E_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SPLITSET_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) splitset::fail(splitset::ErrorCode::InvalidArgument, what);
}

std::string str_or(const char* s, const char* fallback) { return s ? s : fallback; }

constexpr splitset::ErrorCode kAllCodes[] = {
    splitset::ErrorCode::InvalidArgument,    splitset::ErrorCode::ParseError,
    splitset::ErrorCode::ConfigError,        splitset::ErrorCode::IoError,
    splitset::ErrorCode::DegenerateSample,   splitset::ErrorCode::EmptySide,
    splitset::ErrorCode::DegenerateLevels,   splitset::ErrorCode::TooFewPoints,
    splitset::ErrorCode::NonpositiveEstimate, splitset::ErrorCode::SingularDesign,
    splitset::ErrorCode::Unstable,           splitset::ErrorCode::EmptySet,
    splitset::ErrorCode::LevelOutOfRange,    splitset::ErrorCode::BlockTooSmall,
    splitset::ErrorCode::BlockTooLarge,      splitset::ErrorCode::DomainError,
    splitset::ErrorCode::DegenerateRatio,
};

const splitset::ErrorCode* code_of(splitset_status status) {
  for (const auto& c : kAllCodes) {
    if (status_of(c) == status) return &c;
  }
  return nullptr;
}

}  // namespace

extern "C" {

const char* splitset_version(void) { return "0.1.0"; }

const char* splitset_status_name(splitset_status status) {
  if (status == SPLITSET_OK) return "Ok";
  if (const auto* c = code_of(status)) return splitset::error_code_name(*c).data();
  return "Internal";
}

int splitset_status_exit_code(splitset_status status) {
  if (status == SPLITSET_OK) return 0;
  const auto* c = code_of(status);
  if (!c) return 1;
  switch (splitset::error_category(*c)) {
    case splitset::ErrorCategory::Usage: return 2;
    case splitset::ErrorCategory::Data: return 3;
    case splitset::ErrorCategory::Numeric: return 4;
  }
  return 1;
}

const char* splitset_last_error(void) { return t_last_error.c_str(); }

const char* splitset_text_data(const splitset_text* text) {
  return text ? text->data.c_str() : "";
}

size_t splitset_text_size(const splitset_text* text) { return text ? text->data.size() : 0; }

void splitset_text_destroy(splitset_text* text) { delete text; }

splitset_status splitset_write_text_file(const char* path, const splitset_text* text) {
  return guarded([&] {
    require(path && text, "path and text must not be null");
    splitset::write_text_file(path, text->data);
  });
}

splitset_status splitset_sample_create(const double* x, const double* y, size_t n,
                                       splitset_sample** out) {
  return guarded([&] {
    require(out && (n == 0 || (x && y)), "null argument");
    *out = nullptr;
    std::vector<double> xs(x, x + n);
    std::vector<double> ys(y, y + n);
    *out = new splitset_sample{splitset::Sample(std::move(xs), std::move(ys))};
  });
}

splitset_status splitset_sample_read_csv(const char* path, splitset_sample** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    *out = new splitset_sample{splitset::read_csv(path)};
  });
}

splitset_status splitset_sample_write_csv(const splitset_sample* sample, const char* path) {
  return guarded([&] {
    require(sample && path, "null argument");
    splitset::write_csv(path, sample->sample);
  });
}

size_t splitset_sample_size(const splitset_sample* sample) {
  return sample ? sample->sample.size() : 0;
}

void splitset_sample_destroy(splitset_sample* sample) { delete sample; }

splitset_status splitset_fit_stump(const splitset_sample* sample, size_t min_side,
                                   splitset_stump_fit* out) {
  return guarded([&] {
    require(sample && out, "null argument");
    const auto f = splitset::fit_stump(sample->sample, min_side);
    *out = {f.d_hat, f.beta_l, f.beta_u, f.rss, f.n_left};
  });
}

void splitset_fit_options_init(splitset_fit_options* options) {
  if (!options) return;
  *options = {"stump", "identity", 1, "cv"};
}

splitset_status splitset_fit_report(const splitset_sample* sample,
                                    const splitset_fit_options* options, splitset_text** out) {
  return guarded([&] {
    require(sample && options && out, "null argument");
    *out = nullptr;
    splitset::FitOptions o;
    o.model = str_or(options->model, "stump");
    o.link = str_or(options->link, "identity");
    o.min_side = options->min_side;
    o.bandwidth = str_or(options->bandwidth, "cv");
    *out = new splitset_text{splitset::to_json(splitset::build_fit_report(sample->sample, o))};
  });
}

void splitset_ci_options_init(splitset_ci_options* options) {
  if (!options) return;
  *options = {"rss2", 0.05, 0.6, 1000, 1, "auto", "cv", 1, "stump", "identity"};
}

splitset_status splitset_ci(const splitset_sample* sample, const splitset_ci_options* options,
                            splitset_confidence_set** out) {
  return guarded([&] {
    require(sample && options && out, "null argument");
    *out = nullptr;
    splitset::CiOptions o;
    o.method = str_or(options->method, "rss2");
    o.alpha = options->alpha;
    o.gamma = options->gamma;
    o.subsamples = options->subsamples;
    o.seed = options->seed;
    o.nuisance = str_or(options->nuisance, "auto");
    o.bandwidth = str_or(options->bandwidth, "cv");
    o.min_side = options->min_side;
    o.model = str_or(options->model, "stump");
    o.link = str_or(options->link, "identity");
    auto r = splitset::run_ci(sample->sample, o);
    *out = new splitset_confidence_set{std::move(r.set), std::move(r.report)};
  });
}

size_t splitset_cs_component_count(const splitset_confidence_set* set) {
  return set ? set->set.accepted.size() : 0;
}

splitset_status splitset_cs_component(const splitset_confidence_set* set, size_t i, double* lo,
                                      double* hi) {
  return guarded([&] {
    require(set && lo && hi, "null argument");
    require(i < set->set.accepted.size(), "component index out of range");
    *lo = set->set.accepted[i].lo;
    *hi = set->set.accepted[i].hi;
  });
}

void splitset_cs_longest(const splitset_confidence_set* set, double* lo, double* hi) {
  if (!set) return;
  if (lo) *lo = set->set.longest_component.lo;
  if (hi) *hi = set->set.longest_component.hi;
}

double splitset_cs_point_estimate(const splitset_confidence_set* set) {
  return set ? set->set.point_estimate : 0.0;
}

const char* splitset_cs_report(const splitset_confidence_set* set) {
  return set ? set->report.c_str() : "";
}

void splitset_cs_destroy(splitset_confidence_set* set) { delete set; }

splitset_status splitset_simulate_json(const char* json, const char* format, splitset_text** out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = nullptr;
    *out = new splitset_text{splitset::run_simulate(json, str_or(format, "long"))};
  });
}

splitset_status splitset_simulate_file(const char* path, const char* format, splitset_text** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    const std::string text = splitset::read_text_file(path);
    *out = new splitset_text{splitset::run_simulate(text, str_or(format, "long"))};
  });
}

void splitset_quantile_options_init(splitset_quantile_options* options) {
  if (!options) return;
  const splitset::QuantileOptions d;
  *options = {"chernoff", nullptr, 0, 0, d.reps, d.half_width, d.step, d.seed};
}

splitset_status splitset_quantiles(const splitset_quantile_options* options, splitset_text** out) {
  return guarded([&] {
    require(options && out, "null argument");
    require(options->n_levels == 0 || options->levels, "levels must not be null");
    *out = nullptr;
    splitset::QuantileOptions o;
    o.dist = str_or(options->dist, "chernoff");
    if (options->n_levels > 0) o.levels.assign(options->levels, options->levels + options->n_levels);
    o.regenerate = options->regenerate != 0;
    o.reps = options->reps;
    o.half_width = options->half_width;
    o.step = options->step;
    o.seed = options->seed;
    *out = new splitset_text{splitset::run_quantiles(o)};
  });
}

}  // extern "C"
