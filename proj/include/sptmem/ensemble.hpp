#pragma once

// Experiment orchestration: per-realization pipeline, parameter sweeps with
// resumable on-disk results, and recovery-fraction analysis tables.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sptmem/evolution.hpp"
#include "sptmem/infometrics.hpp"
#include "sptmem/model.hpp"
#include "sptmem/tomography.hpp"

namespace sptmem {

inline constexpr const char* kResultsHeader =
    "realization_index,J,delta,t,I_x,I_y,I_z,coherent_info,tp_error,choi_min_eig";

struct Thresholds {
  double integrity = 0.7;
  double coherent_info = 1.2;
};

struct ExperimentConfig {
  int n_sites = 14;
  std::vector<double> J_list{0.1, 0.075, 0.05, 0.025};
  std::vector<double> delta_list{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
  int n_realizations = 100;
  double t_max = 2000.0;
  double dt = 0.1;
  int sample_stride = 10;
  std::uint64_t master_seed = 20200415;
  BulkSpec bulk_spec;
  Thresholds thresholds;
  std::string output_dir = "results";
  bool dump_channels = false;
  EncodingPair encoding_pair = EncodingPair::both_edges;
  double krylov_tolerance = 1e-9;
  int max_krylov_dim = 30;
  /// Worker threads for sweeps; does not affect results.
  int threads = 1;

  void validate() const;
  IntegratorConfig integrator() const;
  SamplingSchedule schedule() const;
  /// The fields that determine results (everything except output_dir,
  /// threads and dump_channels).
  nlohmann::json identity_json() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Missing fields keep their defaults; unknown fields are a ConfigError.
void from_json(const nlohmann::json& j, ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

struct MetricRow {
  int realization_index = 0;
  double J = 0.0;
  double delta = 0.0;
  double t = 0.0;
  double I_x = 0.0;
  double I_y = 0.0;
  double I_z = 0.0;
  double coherent_info = 0.0;
  double tp_error = 0.0;
  double choi_min_eig = 0.0;
};

std::string format_row(const MetricRow& r);
MetricRow parse_row(const std::string& line);

struct ResultRecord {
  double J = 0.0;
  double delta = 0.0;
  DisorderRealization disorder;
  std::vector<MetricRow> rows;
  std::vector<ChannelMatrix> channels;  // only when dump_channels
  std::optional<std::string> error;
};

/// Disorder -> H -> 16-input tomography -> E_t at every sample -> metrics.
/// Failures are captured in ResultRecord::error.
ResultRecord run_realization(const ExperimentConfig& cfg, double J, double delta,
                             int realization_index);

nlohmann::json manifest_json(const ExperimentConfig& cfg);

struct SweepSummary {
  std::size_t scheduled = 0;
  std::size_t skipped = 0;  // already complete on disk
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::filesystem::path results_csv;
};

/// Runs the (J, delta, realization) grid into cfg.output_dir:
///   manifest.json, parts/*.csv (one per realization), results.csv (merged,
///   sorted by J, delta in config order then realization), failures.csv.
/// Completed parts are skipped, so an interrupted sweep resumes. Throws
/// ResumeConflict if an existing manifest was written by another config.
SweepSummary run_sweep(const ExperimentConfig& cfg);

/// All rows of a results CSV.
std::vector<MetricRow> read_results(const std::filesystem::path& csv);

enum class Quantity { I_x, I_y, I_z, coherent_info };
std::string to_string(Quantity q);
Quantity parse_quantity(const std::string& s);
double value_of(const MetricRow& r, Quantity q);

struct AnalyzeOptions {
  Quantity quantity = Quantity::I_z;
  std::vector<double> tau_grid;        // empty: default grid for the quantity
  std::vector<double> t_grid;          // empty: every sampled time
  std::optional<double> tau_star;      // empty: configured threshold
  int trace_samples = 15;
};

struct RecoveryCurve {
  double J = 0.0;
  double delta = 0.0;
  std::vector<double> x;  // t or tau
  std::vector<double> fraction;
};

struct TraceSample {
  double J = 0.0;
  double delta = 0.0;
  std::vector<int> realizations;
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values[sample][time]
  std::vector<double> mean;
};

struct AnalysisTables {
  Quantity quantity = Quantity::I_z;
  double tau_star = 0.0;
  double t_final = 0.0;
  std::vector<double> J_list;
  std::vector<double> delta_list;
  std::vector<RecoveryCurve> vs_t;
  std::vector<RecoveryCurve> vs_tau;
  std::vector<std::vector<double>> heatmap;  // heatmap[delta][J], NaN where no data
  std::vector<TraceSample> traces;
};

/// Recovery statistics from a sweep directory (manifest.json + results.csv).
AnalysisTables analyze(const std::filesystem::path& results_dir, const AnalyzeOptions& opts);
/// Writes recovery_vs_t.csv, recovery_vs_tau.csv, heatmap.csv and
/// traces_sample.csv into out_dir.
void write_analysis(const AnalysisTables& tables, const std::filesystem::path& out_dir);

}  // namespace sptmem
