#include "sptmem/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sptmem/errors.hpp"

#ifndef SPTMEM_VERSION
#define SPTMEM_VERSION "unknown"
#endif

namespace sptmem {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  ModelParams{n_sites, 0.0, 0.0, master_seed}.validate();
  if (J_list.empty()) throw ConfigError("J_list is empty");
  if (delta_list.empty()) throw ConfigError("delta_list is empty");
  for (double d : delta_list) {
    if (!(d >= 0.0)) throw ConfigError(fmt::format("negative disorder width {}", d));
  }
  for (const auto* list : {&J_list, &delta_list}) {
    auto sorted = *list;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("J_list and delta_list must not contain duplicates");
    }
  }
  if (n_realizations < 1) throw ConfigError("n_realizations must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (bulk_spec.kind == BulkSpec::Kind::fixed_product &&
      static_cast<int>(bulk_spec.sites.size()) != n_sites - 4) {
    throw ConfigError(fmt::format("fixed-product bulk_spec needs {} site states", n_sites - 4));
  }
  integrator().validate();
  schedule().validate(dt);
}

IntegratorConfig ExperimentConfig::integrator() const {
  IntegratorConfig c;
  c.dt = dt;
  c.krylov_tolerance = krylov_tolerance;
  c.max_krylov_dim = max_krylov_dim;
  return c;
}

SamplingSchedule ExperimentConfig::schedule() const { return {t_max, sample_stride}; }

json ExperimentConfig::identity_json() const {
  json j = *this;
  j.erase("output_dir");
  j.erase("threads");
  j.erase("dump_channels");
  return j;
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"n_sites", c.n_sites},
           {"J_list", c.J_list},
           {"delta_list", c.delta_list},
           {"n_realizations", c.n_realizations},
           {"t_max", c.t_max},
           {"dt", c.dt},
           {"sample_stride", c.sample_stride},
           {"master_seed", c.master_seed},
           {"bulk_spec", c.bulk_spec},
           {"thresholds", {{"integrity", c.thresholds.integrity},
                           {"coherent_info", c.thresholds.coherent_info}}},
           {"output_dir", c.output_dir},
           {"dump_channels", c.dump_channels},
           {"encoding_pair", to_string(c.encoding_pair)},
           {"krylov_tolerance", c.krylov_tolerance},
           {"max_krylov_dim", c.max_krylov_dim},
           {"threads", c.threads}};
}

void from_json(const json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n_sites") c.n_sites = v.get<int>();
      else if (key == "J_list") c.J_list = v.get<std::vector<double>>();
      else if (key == "delta_list") c.delta_list = v.get<std::vector<double>>();
      else if (key == "n_realizations") c.n_realizations = v.get<int>();
      else if (key == "t_max") c.t_max = v.get<double>();
      else if (key == "dt") c.dt = v.get<double>();
      else if (key == "sample_stride") c.sample_stride = v.get<int>();
      else if (key == "master_seed") c.master_seed = v.get<std::uint64_t>();
      else if (key == "bulk_spec") c.bulk_spec = v.get<BulkSpec>();
      else if (key == "thresholds") {
        if (v.contains("integrity")) c.thresholds.integrity = v["integrity"].get<double>();
        if (v.contains("coherent_info")) c.thresholds.coherent_info = v["coherent_info"].get<double>();
      } else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "dump_channels") c.dump_channels = v.get<bool>();
      else if (key == "encoding_pair") c.encoding_pair = parse_encoding_pair(v.get<std::string>());
      else if (key == "krylov_tolerance") c.krylov_tolerance = v.get<double>();
      else if (key == "max_krylov_dim") c.max_krylov_dim = v.get<int>();
      else if (key == "threads") c.threads = v.get<int>();
      else throw ConfigError(fmt::format("unknown config field '{}'", key));
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.what()));
  }
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config {}", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("cannot parse {}: {}", path.string(), e.what()));
  }
  return j.get<ExperimentConfig>();
}

// ---------------------------------------------------------------------------
// Rows

std::string format_row(const MetricRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{}", r.realization_index, r.J, r.delta, r.t, r.I_x,
                     r.I_y, r.I_z, r.coherent_info, r.tp_error, r.choi_min_eig);
}

MetricRow parse_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  if (f.size() != 10) throw ConfigError(fmt::format("malformed results row '{}'", line));
  MetricRow r;
  try {
    r.realization_index = std::stoi(f[0]);
    double* dst[] = {&r.J, &r.delta, &r.t, &r.I_x, &r.I_y, &r.I_z, &r.coherent_info, &r.tp_error,
                     &r.choi_min_eig};
    for (std::size_t k = 0; k < 9; ++k) *dst[k] = std::stod(f[k + 1]);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("malformed results row '{}'", line));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pipeline

ResultRecord run_realization(const ExperimentConfig& cfg, double J, double delta,
                             int realization_index) {
  ResultRecord rec;
  rec.J = J;
  rec.delta = delta;
  try {
    const ModelParams params{cfg.n_sites, J, delta, cfg.master_seed};
    rec.disorder = sample_disorder(params, realization_index);
    const WeightedPauliSum h = build_hamiltonian(params, rec.disorder);
    const InputSetResult tomo = run_input_set(h, cfg.bulk_spec, cfg.integrator(), cfg.schedule());
    rec.rows.reserve(tomo.times.size());
    for (std::size_t k = 0; k < tomo.times.size(); ++k) {
      const ChannelMatrix ch = assemble_channel(tomo.edge_states[k]);
      const CptpReport cptp = validate_cptp(ch);
      const auto integrities = directed_integrities(ch, cfg.encoding_pair);
      MetricRow row;
      row.realization_index = realization_index;
      row.J = J;
      row.delta = delta;
      row.t = tomo.times[k];
      row.I_x = integrities[0];
      row.I_y = integrities[1];
      row.I_z = integrities[2];
      row.coherent_info = coherent_information(ch);
      row.tp_error = cptp.tp_error;
      row.choi_min_eig = cptp.choi_min_eigenvalue;
      rec.rows.push_back(row);
      if (cfg.dump_channels) rec.channels.push_back(ch);
    }
  } catch (const std::exception& e) {
    rec.rows.clear();
    rec.channels.clear();
    rec.error = fmt::format("J={} delta={} realization={}: {}", J, delta, realization_index, e.what());
  }
  return rec;
}

json manifest_json(const ExperimentConfig& cfg) {
  json realizations = json::array();
  for (double delta : cfg.delta_list) {
    for (int r = 0; r < cfg.n_realizations; ++r) {
      const auto d = sample_disorder({cfg.n_sites, 0.0, delta, cfg.master_seed}, r);
      json e = d;
      e["delta"] = delta;
      realizations.push_back(std::move(e));
    }
  }
  json conv = conventions_json();
  conv["encoding_pair"] = to_string(cfg.encoding_pair);
  conv["bulk_spec"] = cfg.bulk_spec;
  conv["seeding"] = "derived_seed = splitmix64(splitmix64(master_seed) ^ index); mt19937_64; "
                    "h_j = delta * ((x >> 11) * 2^-53 - 1/2), j = 2..N-1";
  conv["integrator"] = "krylov (Lanczos, full reorthogonalization)";
  return json{{"code_version", SPTMEM_VERSION},
              {"config", cfg.identity_json()},
              {"conventions", conv},
              {"results_header", kResultsHeader},
              {"realizations", realizations}};
}

namespace {

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Job {
  std::size_t j_idx;
  std::size_t d_idx;
  int realization;
};

std::string part_stem(const Job& job) {
  return fmt::format("J{}_D{}_r{:05d}", job.j_idx, job.d_idx, job.realization);
}

}  // namespace

SweepSummary run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path root(cfg.output_dir);
  const fs::path parts = root / "parts";
  fs::create_directories(parts);
  if (cfg.dump_channels) fs::create_directories(root / "channels");

  const json manifest = manifest_json(cfg);
  const fs::path manifest_path = root / "manifest.json";
  if (fs::exists(manifest_path)) {
    json existing;
    try {
      existing = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
      throw ResumeConflict(fmt::format("unreadable manifest {}: {}", manifest_path.string(), e.what()));
    }
    if (existing.value("config", json()) != manifest["config"]) {
      throw ResumeConflict(fmt::format("{} was written by a different configuration",
                                       manifest_path.string()));
    }
  } else {
    write_atomically(manifest_path, manifest.dump(2) + "\n");
  }

  std::vector<Job> all;
  for (std::size_t j = 0; j < cfg.J_list.size(); ++j) {
    for (std::size_t d = 0; d < cfg.delta_list.size(); ++d) {
      for (int r = 0; r < cfg.n_realizations; ++r) all.push_back({j, d, r});
    }
  }
  SweepSummary summary;
  summary.scheduled = all.size();
  std::vector<Job> todo;
  for (const auto& job : all) {
    if (fs::exists(parts / (part_stem(job) + ".csv"))) {
      ++summary.skipped;
    } else {
      todo.push_back(job);
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0}, failed{0};
  std::mutex error_mutex;
  std::exception_ptr fatal;
  auto worker = [&] {
    for (std::size_t k = next++; k < todo.size(); k = next++) {
      const Job& job = todo[k];
      try {
        const double J = cfg.J_list[job.j_idx];
        const double delta = cfg.delta_list[job.d_idx];
        const ResultRecord rec = run_realization(cfg, J, delta, job.realization);
        const std::string stem = part_stem(job);
        if (rec.error) {
          write_atomically(parts / (stem + ".err"), *rec.error + "\n");
          ++failed;
          continue;
        }
        if (cfg.dump_channels) {
          json dump{{"conventions", conventions_json()},
                    {"J", J},
                    {"delta", delta},
                    {"realization_index", job.realization},
                    {"samples", json::array()}};
          for (const auto& ch : rec.channels) {
            dump["samples"].push_back({{"t", ch.t},
                                       {"channel", matrix_to_json(ch.m)},
                                       {"choi", matrix_to_json(channel_to_choi(ch).rho)}});
          }
          write_atomically(root / "channels" / (stem + ".json"), dump.dump() + "\n");
        }
        std::string body;
        for (const auto& row : rec.rows) body += format_row(row) + "\n";
        write_atomically(parts / (stem + ".csv"), body);
        fs::remove(parts / (stem + ".err"));
        ++completed;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);
  summary.completed = completed;
  summary.failed = failed;

  // Deterministic merge in grid order.
  std::string merged = std::string(kResultsHeader) + "\n";
  std::string failures = "J,delta,realization_index,message\n";
  for (const auto& job : all) {
    const std::string stem = part_stem(job);
    if (fs::exists(parts / (stem + ".csv"))) {
      merged += read_file(parts / (stem + ".csv"));
    } else if (fs::exists(parts / (stem + ".err"))) {
      std::string msg = read_file(parts / (stem + ".err"));
      msg.erase(std::remove(msg.begin(), msg.end(), '\n'), msg.end());
      std::replace(msg.begin(), msg.end(), '"', '\'');
      failures += fmt::format("{},{},{},\"{}\"\n", cfg.J_list[job.j_idx], cfg.delta_list[job.d_idx],
                              job.realization, msg);
    }
  }
  summary.results_csv = root / "results.csv";
  write_atomically(summary.results_csv, merged);
  write_atomically(root / "failures.csv", failures);
  return summary;
}

std::vector<MetricRow> read_results(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ConfigError(fmt::format("cannot open {}", csv.string()));
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw ConfigError(fmt::format("{} does not start with the results header", csv.string()));
  }
  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(parse_row(line));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Analysis

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::I_x: return "I_x";
    case Quantity::I_y: return "I_y";
    case Quantity::I_z: return "I_z";
    case Quantity::coherent_info: return "coherent_info";
  }
  return "?";
}

Quantity parse_quantity(const std::string& s) {
  for (Quantity q : {Quantity::I_x, Quantity::I_y, Quantity::I_z, Quantity::coherent_info}) {
    if (s == to_string(q)) return q;
  }
  throw ConfigError(fmt::format("unknown quantity '{}' (I_x, I_y, I_z, coherent_info)", s));
}

double value_of(const MetricRow& r, Quantity q) {
  switch (q) {
    case Quantity::I_x: return r.I_x;
    case Quantity::I_y: return r.I_y;
    case Quantity::I_z: return r.I_z;
    case Quantity::coherent_info: return r.coherent_info;
  }
  return 0.0;
}

namespace {

std::vector<double> default_tau_grid(Quantity q) {
  std::vector<double> g;
  if (q == Quantity::coherent_info) {
    for (int k = 0; k <= 40; ++k) g.push_back(-2.0 + 0.1 * k);
  } else {
    for (int k = 0; k <= 20; ++k) g.push_back(0.05 * k);
  }
  return g;
}

std::size_t index_of(const std::vector<double>& v, double x, const char* what) {
  const auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) {
    throw ConfigError(fmt::format("results contain {} = {} absent from the manifest", what, x));
  }
  return static_cast<std::size_t>(it - v.begin());
}

}  // namespace

AnalysisTables analyze(const fs::path& results_dir, const AnalyzeOptions& opts) {
  const fs::path manifest_path = results_dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ConfigError(fmt::format("no manifest.json in {}", results_dir.string()));
  }
  json manifest = json::parse(read_file(manifest_path));
  ExperimentConfig cfg = manifest.at("config").get<ExperimentConfig>();
  const auto rows = read_results(results_dir / "results.csv");

  AnalysisTables out;
  out.quantity = opts.quantity;
  out.J_list = cfg.J_list;
  out.delta_list = cfg.delta_list;
  out.tau_star = opts.tau_star.value_or(opts.quantity == Quantity::coherent_info
                                            ? cfg.thresholds.coherent_info
                                            : cfg.thresholds.integrity);
  const std::vector<double> tau_grid = opts.tau_grid.empty() ? default_tau_grid(opts.quantity) : opts.tau_grid;

  // series[j][d][realization] -> (times, values)
  using Series = std::pair<std::vector<double>, std::vector<double>>;
  std::vector<std::vector<std::map<int, Series>>> series(
      cfg.J_list.size(), std::vector<std::map<int, Series>>(cfg.delta_list.size()));
  for (const auto& r : rows) {
    auto& s = series[index_of(cfg.J_list, r.J, "J")][index_of(cfg.delta_list, r.delta, "delta")][r.realization_index];
    s.first.push_back(r.t);
    s.second.push_back(value_of(r, opts.quantity));
  }

  // Cells without any realization stay NaN rather than reading as "nothing recovered".
  out.heatmap.assign(cfg.delta_list.size(),
                     std::vector<double>(cfg.J_list.size(), std::numeric_limits<double>::quiet_NaN()));
  std::optional<std::vector<double>> common_grid;
  for (std::size_t j = 0; j < cfg.J_list.size(); ++j) {
    for (std::size_t d = 0; d < cfg.delta_list.size(); ++d) {
      const auto& by_real = series[j][d];
      if (by_real.empty()) continue;
      std::vector<std::vector<double>> traces;
      const std::vector<double>& grid = by_real.begin()->second.first;
      if (!common_grid) common_grid = grid;
      for (const auto& [idx, s] : by_real) {
        if (s.first != *common_grid) {
          throw ConfigError(fmt::format("realization {} at J={} delta={} is on a different time grid",
                                        idx, cfg.J_list[j], cfg.delta_list[d]));
        }
        traces.push_back(s.second);
      }
      const double J = cfg.J_list[j], delta = cfg.delta_list[d];
      out.t_final = grid.back();

      const RecoveryStats at_star = recovery_fraction(traces, out.tau_star, grid, to_string(opts.quantity));
      RecoveryCurve vs_t{J, delta, {}, {}};
      if (opts.t_grid.empty()) {
        vs_t.x = grid;
        vs_t.fraction = at_star.fraction;
      } else {
        for (double t : opts.t_grid) {
          // Survival value at the last sampled time <= t.
          const auto it = std::upper_bound(grid.begin(), grid.end(), t + 1e-9);
          if (it == grid.begin()) continue;
          vs_t.x.push_back(t);
          vs_t.fraction.push_back(at_star.fraction[static_cast<std::size_t>(it - grid.begin()) - 1]);
        }
      }
      out.vs_t.push_back(std::move(vs_t));

      RecoveryCurve vs_tau{J, delta, {}, {}};
      for (double tau : tau_grid) {
        vs_tau.x.push_back(tau);
        vs_tau.fraction.push_back(recovery_fraction(traces, tau, grid).fraction.back());
      }
      out.vs_tau.push_back(std::move(vs_tau));
      out.heatmap[d][j] = at_star.fraction.back();

      TraceSample ts{J, delta, {}, grid, {}, std::vector<double>(grid.size(), 0.0)};
      for (const auto& [idx, s] : by_real) {
        if (static_cast<int>(ts.realizations.size()) >= opts.trace_samples) break;
        ts.realizations.push_back(idx);
        ts.values.push_back(s.second);
      }
      for (const auto& v : ts.values) {
        for (std::size_t k = 0; k < v.size(); ++k) ts.mean[k] += v[k] / static_cast<double>(ts.values.size());
      }
      out.traces.push_back(std::move(ts));
    }
  }
  return out;
}

void write_analysis(const AnalysisTables& tables, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const std::string q = to_string(tables.quantity);
  {
    std::string s = "quantity,tau,J,delta,t,fraction\n";
    for (const auto& c : tables.vs_t) {
      for (std::size_t k = 0; k < c.x.size(); ++k) {
        s += fmt::format("{},{},{},{},{},{}\n", q, tables.tau_star, c.J, c.delta, c.x[k], c.fraction[k]);
      }
    }
    write_atomically(out_dir / "recovery_vs_t.csv", s);
  }
  {
    std::string s = "quantity,t,J,delta,tau,fraction\n";
    for (const auto& c : tables.vs_tau) {
      for (std::size_t k = 0; k < c.x.size(); ++k) {
        s += fmt::format("{},{},{},{},{},{}\n", q, tables.t_final, c.J, c.delta, c.x[k], c.fraction[k]);
      }
    }
    write_atomically(out_dir / "recovery_vs_tau.csv", s);
  }
  {
    std::string s = "delta";
    for (double J : tables.J_list) s += fmt::format(",{}", J);
    s += "\n";
    for (std::size_t d = 0; d < tables.delta_list.size(); ++d) {
      s += fmt::format("{}", tables.delta_list[d]);
      for (double f : tables.heatmap[d]) s += fmt::format(",{}", f);
      s += "\n";
    }
    write_atomically(out_dir / "heatmap.csv", s);
  }
  {
    std::string s = "quantity,J,delta,series,t,value\n";
    for (const auto& ts : tables.traces) {
      for (std::size_t r = 0; r < ts.values.size(); ++r) {
        for (std::size_t k = 0; k < ts.times.size(); ++k) {
          s += fmt::format("{},{},{},{},{},{}\n", q, ts.J, ts.delta, ts.realizations[r], ts.times[k],
                           ts.values[r][k]);
        }
      }
      for (std::size_t k = 0; k < ts.times.size(); ++k) {
        s += fmt::format("{},{},{},mean,{},{}\n", q, ts.J, ts.delta, ts.times[k], ts.mean[k]);
      }
    }
    write_atomically(out_dir / "traces_sample.csv", s);
  }
}

}  // namespace sptmem
