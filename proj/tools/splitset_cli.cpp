#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitset/splitset.h"

namespace {

int report_failure(splitset_status status) {
  std::fprintf(stderr, "error: %s: %s\n", splitset_status_name(status), splitset_last_error());
  return splitset_status_exit_code(status);
}

int emit(splitset_text* text, const std::string& out_path) {
  splitset_status st = SPLITSET_OK;
  if (out_path.empty()) {
    std::fwrite(splitset_text_data(text), 1, splitset_text_size(text), stdout);
  } else {
    st = splitset_write_text_file(out_path.c_str(), text);
  }
  splitset_text_destroy(text);
  return st == SPLITSET_OK ? 0 : report_failure(st);
}

struct SampleHandle {
  splitset_sample* ptr = nullptr;
  ~SampleHandle() { splitset_sample_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-point estimation and confidence sets for stump and two-phase models"};
  app.require_subcommand(1);

  std::string input;
  std::string model = "stump";
  std::string link = "identity";
  std::size_t min_side = 1;
  std::string bandwidth = "cv";

  auto* fit = app.add_subcommand("fit", "Fit a split model and print a JSON report");
  fit->add_option("input", input, "CSV file with header x,y")->required();
  fit->add_option("--model", model, "stump or poly:kl,ku");
  fit->add_option("--link", link, "identity, logit or log");
  fit->add_option("--min-side", min_side, "Minimum observations on each side");
  fit->add_option("--bandwidth", bandwidth, "cv or fixed:h");

  std::string method = "rss2";
  double alpha = 0.05;
  double gamma = 0.6;
  std::size_t subsamples = 1000;
  std::uint64_t seed = 1;
  std::string nuisance = "auto";

  auto* ci = app.add_subcommand("ci", "Confidence set for the split point");
  ci->add_option("input", input, "CSV file with header x,y")->required();
  ci->add_option("--method", method, "wald, rss1, rss2, pivot or subsample");
  ci->add_option("--alpha", alpha, "1 - confidence level");
  ci->add_option("--gamma", gamma, "Block exponent for subsampling");
  ci->add_option("--subsamples", subsamples, "Number of subsamples");
  ci->add_option("--seed", seed, "Subsampling seed");
  ci->add_option("--nuisance", nuisance, "auto or manual:p,F,fprime,sigma2");
  ci->add_option("--bandwidth", bandwidth, "cv or fixed:h");
  ci->add_option("--min-side", min_side, "Minimum observations on each side");
  ci->add_option("--model", model, "stump or poly:kl,ku");
  ci->add_option("--link", link, "identity, logit or log");

  std::string config;
  std::string out_path;
  std::string format = "long";

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo coverage experiment");
  sim->add_option("config", config, "JSON scenario file")->required();
  sim->add_option("--out", out_path, "Write the TSV table here instead of stdout");
  sim->add_option("--format", format, "long or wide");

  std::string dist = "chernoff";
  std::vector<double> levels;
  bool regenerate = false;
  splitset_quantile_options qopts;
  splitset_quantile_options_init(&qopts);
  std::size_t reps = qopts.reps;
  double half_width = qopts.half_width;
  double step = qopts.step;
  std::uint64_t qseed = qopts.seed;

  auto* quant = app.add_subcommand("quantiles", "Print or regenerate a limit quantile table");
  quant->set_help_flag("--help", "Print this help message and exit");
  quant->add_option("--dist", dist, "chernoff or maxq1");
  quant->add_option("--levels", levels, "Upper-tail levels")->delimiter(',');
  quant->add_option("--reps", reps, "Replications when regenerating");
  quant->add_option("--T", half_width, "Half-width of the simulation window");
  quant->add_option("--h", step, "Grid step");
  quant->add_option("--seed", qseed, "Simulation seed");
  quant->add_flag("--regenerate", regenerate, "Simulate instead of using the embedded table");
  quant->add_option("--out", out_path, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: InvalidArgument: %s\n", e.what());
    return 2;
  }

  if (fit->parsed() || ci->parsed()) {
    SampleHandle sample;
    splitset_status st = splitset_sample_read_csv(input.c_str(), &sample.ptr);
    if (st != SPLITSET_OK) return report_failure(st);

    if (fit->parsed()) {
      splitset_fit_options o;
      splitset_fit_options_init(&o);
      o.model = model.c_str();
      o.link = link.c_str();
      o.min_side = min_side;
      o.bandwidth = bandwidth.c_str();
      splitset_text* text = nullptr;
      st = splitset_fit_report(sample.ptr, &o, &text);
      if (st != SPLITSET_OK) return report_failure(st);
      return emit(text, "");
    }

    splitset_ci_options o;
    splitset_ci_options_init(&o);
    o.method = method.c_str();
    o.alpha = alpha;
    o.gamma = gamma;
    o.subsamples = subsamples;
    o.seed = seed;
    o.nuisance = nuisance.c_str();
    o.bandwidth = bandwidth.c_str();
    o.min_side = min_side;
    o.model = model.c_str();
    o.link = link.c_str();
    splitset_confidence_set* set = nullptr;
    st = splitset_ci(sample.ptr, &o, &set);
    if (st != SPLITSET_OK) return report_failure(st);
    std::fputs(splitset_cs_report(set), stdout);
    splitset_cs_destroy(set);
    return 0;
  }

  splitset_text* text = nullptr;
  splitset_status st = SPLITSET_OK;
  if (sim->parsed()) {
    st = splitset_simulate_file(config.c_str(), format.c_str(), &text);
  } else {
    qopts.dist = dist.c_str();
    qopts.levels = levels.data();
    qopts.n_levels = levels.size();
    qopts.regenerate = regenerate ? 1 : 0;
    qopts.reps = reps;
    qopts.half_width = half_width;
    qopts.step = step;
    qopts.seed = qseed;
    st = splitset_quantiles(&qopts, &text);
  }
  if (st != SPLITSET_OK) return report_failure(st);
  return emit(text, out_path);
}
