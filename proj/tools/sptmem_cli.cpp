// sptmem: edge-qubit memory experiments on the disordered cluster chain.
//
//   sptmem_cli run      --J 0.1 --delta 1.5 --realization_index 3 [config flags]
//   sptmem_cli sweep    [--config cfg.json] [config flags]
//   sptmem_cli analyze  --results_dir results --quantity I_z [--out dir]
//   sptmem_cli validate [config flags]
//
// Config flags use the ExperimentConfig field names and override --config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sptmem/ensemble.hpp"
#include "sptmem/errors.hpp"
#include "sptmem/validation.hpp"

using namespace sptmem;
using json = nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResume = 3;

struct ConfigFlags {
  std::string config_path;
  std::optional<int> n_sites;
  std::optional<std::vector<double>> J_list;
  std::optional<std::vector<double>> delta_list;
  std::optional<int> n_realizations;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<int> sample_stride;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::string> bulk_spec;
  std::optional<std::vector<double>> thresholds;
  std::optional<std::string> output_dir;
  bool dump_channels = false;
  std::optional<std::string> encoding_pair;
  std::optional<double> krylov_tolerance;
  std::optional<int> max_krylov_dim;
  std::optional<int> threads;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--n_sites", n_sites);
    app->add_option("--J_list", J_list)->delimiter(',');
    app->add_option("--delta_list", delta_list)->delimiter(',');
    app->add_option("--n_realizations", n_realizations);
    app->add_option("--t_max", t_max);
    app->add_option("--dt", dt);
    app->add_option("--sample_stride", sample_stride);
    app->add_option("--master_seed", master_seed);
    app->add_option("--bulk_spec", bulk_spec, "all-up | all-plus");
    app->add_option("--thresholds", thresholds, "integrity,coherent_info")->delimiter(',')->expected(2);
    app->add_option("--output_dir", output_dir);
    app->add_flag("--dump_channels", dump_channels);
    app->add_option("--encoding_pair", encoding_pair, "both-edges | left-edge");
    app->add_option("--krylov_tolerance", krylov_tolerance);
    app->add_option("--max_krylov_dim", max_krylov_dim);
    app->add_option("--threads", threads);
  }

  ExperimentConfig resolve() const {
    json j = json::object();
    if (!config_path.empty()) j = load_config(config_path);
    if (n_sites) j["n_sites"] = *n_sites;
    if (J_list) j["J_list"] = *J_list;
    if (delta_list) j["delta_list"] = *delta_list;
    if (n_realizations) j["n_realizations"] = *n_realizations;
    if (t_max) j["t_max"] = *t_max;
    if (dt) j["dt"] = *dt;
    if (sample_stride) j["sample_stride"] = *sample_stride;
    if (master_seed) j["master_seed"] = *master_seed;
    if (bulk_spec) j["bulk_spec"] = BulkSpec::parse(*bulk_spec);
    if (thresholds) j["thresholds"] = {{"integrity", (*thresholds)[0]}, {"coherent_info", (*thresholds)[1]}};
    if (output_dir) j["output_dir"] = *output_dir;
    if (dump_channels) j["dump_channels"] = true;
    if (encoding_pair) j["encoding_pair"] = *encoding_pair;
    if (krylov_tolerance) j["krylov_tolerance"] = *krylov_tolerance;
    if (max_krylov_dim) j["max_krylov_dim"] = *max_krylov_dim;
    if (threads) j["threads"] = *threads;
    ExperimentConfig cfg = j.get<ExperimentConfig>();
    cfg.validate();
    return cfg;
  }
};

int cmd_run(const ExperimentConfig& cfg, double J, double delta, int index, const std::string& out) {
  const ResultRecord rec = run_realization(cfg, J, delta, index);
  if (rec.error) {
    fmt::print(stderr, "realization {} (J={}, delta={}) failed: {}\n", index, J, delta, *rec.error);
    return kExitValidation;
  }
  std::string text = std::string(kResultsHeader) + "\n";
  for (const auto& row : rec.rows) text += format_row(row) + "\n";
  if (out.empty()) {
    fmt::print("{}", text);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError(fmt::format("cannot write {}", out));
    f << text;
  }
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  const SweepSummary s = run_sweep(cfg);
  fmt::print("scheduled {} skipped {} completed {} failed {}\nresults: {}\n", s.scheduled, s.skipped,
             s.completed, s.failed, s.results_csv.string());
  return 0;
}

int cmd_validate(const ExperimentConfig& cfg) {
  bool ok = true;
  for (const auto& r : validate(cfg)) {
    fmt::print("{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-qubit memory of the disordered cluster chain"};
  app.require_subcommand(1);

  ConfigFlags run_flags, sweep_flags, validate_flags;

  auto* run = app.add_subcommand("run", "single disorder realization; metric rows to stdout or --out");
  run_flags.attach(run);
  double run_J = 0.1, run_delta = 1.0;
  int run_index = 0;
  std::string run_out;
  run->add_option("--J", run_J);
  run->add_option("--delta", run_delta);
  run->add_option("--realization_index", run_index);
  run->add_option("--out", run_out, "CSV path");

  auto* sweep = app.add_subcommand("sweep", "(J, delta, realization) grid into output_dir");
  sweep_flags.attach(sweep);

  auto* an = app.add_subcommand("analyze", "recovery-fraction tables from a sweep directory");
  std::string results_dir = "results", an_out, quantity = "I_z";
  std::vector<double> tau_grid, t_grid;
  std::optional<double> tau_star;
  int trace_samples = 15;
  an->add_option("--results_dir", results_dir);
  an->add_option("--quantity", quantity, "I_x | I_y | I_z | coherent_info");
  an->add_option("--tau_grid", tau_grid)->delimiter(',');
  an->add_option("--t_grid", t_grid)->delimiter(',');
  an->add_option("--tau_star", tau_star);
  an->add_option("--trace_samples", trace_samples);
  an->add_option("--out", an_out, "output directory (default <results_dir>/analysis_<quantity>)");

  auto* val = app.add_subcommand("validate", "invariant suite at N <= 8");
  validate_flags.attach(val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags.resolve(), run_J, run_delta, run_index, run_out);
    if (*sweep) return cmd_sweep(sweep_flags.resolve());
    if (*val) return cmd_validate(validate_flags.resolve());
    if (*an) {
      AnalyzeOptions opts;
      opts.quantity = parse_quantity(quantity);
      opts.tau_grid = tau_grid;
      opts.t_grid = t_grid;
      opts.tau_star = tau_star;
      opts.trace_samples = trace_samples;
      const AnalysisTables tables = analyze(results_dir, opts);
      const std::string out = an_out.empty() ? results_dir + "/analysis_" + quantity : an_out;
      write_analysis(tables, out);
      fmt::print("wrote analysis tables for {} (tau* = {}) to {}\n", quantity, tables.tau_star, out);
      return 0;
    }
  } catch (const ResumeConflict& e) {
    fmt::print(stderr, "resume conflict: {}\n", e.what());
    return kExitResume;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  }
  return 0;
}
