// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   acceptance [work_dir] [--only name]
//
// work_dir holds the sweeps (kept afterwards for inspection); default is a
// fresh directory under the system temp path.

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "sptmem/ensemble.hpp"
#include "sptmem/errors.hpp"
#include "sptmem/infometrics.hpp"
#include "sptmem/validation.hpp"

using namespace sptmem;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes, fixed.
constexpr double kIdentityTol = 1e-7;
constexpr double kPropagatorTol = 1e-8;
constexpr double kTomographyTol = 1e-8;
constexpr double kCptpTol = 1e-6;
constexpr double kDpiSlack = 1e-7;
constexpr int kDpiPairs = 100;

constexpr int kTrendSites = 10;
constexpr int kTrendRealizations = 20;
constexpr double kTrendTmax = 200.0;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CheckResult check_measures() {
  CheckResult r{"measure_unit_tests", true, ""};
  const auto metric = check_metric_properties(20251);
  if (!metric.passed) {
    r.passed = false;
    r.detail = metric.detail;
    return r;
  }
  // Survival fixtures on t = 0..8 with tau = 0.7.
  const std::vector<double> t_grid{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const auto constant = [&](double v) { return std::vector<double>(t_grid.size(), v); };
  auto dip = constant(0.95);
  dip[5] = 0.6;
  std::vector<std::string> bad;
  const auto all_one = recovery_fraction({constant(1), constant(1), constant(1)}, 0.7, t_grid);
  for (double f : all_one.fraction) {
    if (f != 1.0) bad.push_back("all-one");
  }
  const auto survival = recovery_fraction({constant(1), constant(0.9), dip, constant(0.8)}, 0.7, t_grid);
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (survival.fraction[k] != (t_grid[k] < 5 ? 1.0 : 0.75)) bad.push_back(fmt::format("dip@{}", t_grid[k]));
  }
  const auto strict = recovery_fraction({constant(0.9), constant(0.8), constant(0.71), constant(0.69)}, 0.7, t_grid);
  for (double f : strict.fraction) {
    if (f != 0.75) bad.push_back("strict");
  }
  if (recovery_fraction({constant(0.7)}, 0.7, t_grid).fraction.front() != 0.0) bad.push_back("at-threshold");
  if (!bad.empty()) {
    r.passed = false;
    r.detail = fmt::format("recovery fixtures failed: {}", fmt::join(bad, ","));
    return r;
  }
  r.detail = metric.detail + "; recovery fixtures exact";
  return r;
}

double final_fraction(const AnalysisTables& t, double J, double delta) {
  for (const auto& c : t.vs_t) {
    if (c.J == J && c.delta == delta) {
      if (c.x.empty() || c.x.back() != kTrendTmax) {
        throw ContractViolation(fmt::format("no sample at t = {} for J={} delta={}", kTrendTmax, J, delta));
      }
      return c.fraction.back();
    }
  }
  throw ContractViolation(fmt::format("no recovery curve for J={} delta={}", J, delta));
}

ExperimentConfig trend_config(const fs::path& out, std::vector<double> J, std::vector<double> deltas) {
  ExperimentConfig cfg;
  cfg.n_sites = kTrendSites;
  cfg.n_realizations = kTrendRealizations;
  cfg.t_max = kTrendTmax;
  cfg.J_list = std::move(J);
  cfg.delta_list = std::move(deltas);
  cfg.output_dir = out.string();
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return cfg;
}

std::vector<CheckResult> check_trends(const fs::path& work) {
  const auto main_dir = work / "trend_J0.1";
  const auto weak_dir = work / "trend_J0.025";
  std::vector<CheckResult> out;
  for (const auto& cfg : {trend_config(main_dir, {0.1}, {0.5, 1.5, 2.0, 3.0}),
                          trend_config(weak_dir, {0.025}, {1.5})}) {
    const auto s = run_sweep(cfg);
    if (s.failed != 0) {
      const std::string msg = fmt::format("{} realizations failed in {}", s.failed, cfg.output_dir);
      return {{"trend_z_disorder", false, msg}, {"trend_y_disorder", false, msg}, {"trend_coherent_info_J", false, msg}};
    }
  }
  const auto z = analyze(main_dir, AnalyzeOptions{Quantity::I_z, {}, {}, std::nullopt, 15});
  const auto y = analyze(main_dir, AnalyzeOptions{Quantity::I_y, {}, {}, std::nullopt, 15});
  const auto c_strong = analyze(main_dir, AnalyzeOptions{Quantity::coherent_info, {}, {}, std::nullopt, 15});
  const auto c_weak = analyze(weak_dir, AnalyzeOptions{Quantity::coherent_info, {}, {}, std::nullopt, 15});
  write_analysis(z, main_dir / "analysis_I_z");
  write_analysis(y, main_dir / "analysis_I_y");
  write_analysis(c_strong, main_dir / "analysis_coherent_info");
  write_analysis(c_weak, weak_dir / "analysis_coherent_info");

  const double z05 = final_fraction(z, 0.1, 0.5), z15 = final_fraction(z, 0.1, 1.5), z30 = final_fraction(z, 0.1, 3.0);
  out.push_back({"trend_z_disorder", z05 <= z15 && z15 <= z30,
                 fmt::format("F_Iz(200, tau={}) at J=0.1: delta 0.5 -> {:.3f}, 1.5 -> {:.3f}, 3.0 -> {:.3f}",
                             z.tau_star, z05, z15, z30)});
  const double y05 = final_fraction(y, 0.1, 0.5), y20 = final_fraction(y, 0.1, 2.0);
  out.push_back({"trend_y_disorder", y05 > y20,
                 fmt::format("F_Iy(200, tau={}) at J=0.1: delta 0.5 -> {:.3f}, 2.0 -> {:.3f}", y.tau_star, y05,
                             y20)});
  const double c_hi = final_fraction(c_strong, 0.1, 1.5), c_lo = final_fraction(c_weak, 0.025, 1.5);
  out.push_back({"trend_coherent_info_J", c_lo >= c_hi,
                 fmt::format("F_C(200, tau={}) at delta=1.5: J=0.025 -> {:.3f}, J=0.1 -> {:.3f}",
                             c_weak.tau_star, c_lo, c_hi)});
  return out;
}

CheckResult check_determinism(const fs::path& work) {
  ExperimentConfig base;
  base.n_sites = 7;
  base.J_list = {0.1, 0.05};
  base.delta_list = {0.5, 2.0};
  base.n_realizations = 4;
  base.t_max = 20.0;
  base.master_seed = 77;

  std::vector<std::string> bytes;
  for (int threads : {1, 4, 1}) {
    auto cfg = base;
    cfg.threads = threads;
    cfg.output_dir = (work / fmt::format("determinism_{}_{}", threads, bytes.size())).string();
    fs::remove_all(cfg.output_dir);
    const auto s = run_sweep(cfg);
    if (s.failed != 0) return {"determinism", false, fmt::format("{} realizations failed", s.failed)};
    bytes.push_back(slurp(s.results_csv));
  }
  const bool same = bytes[0] == bytes[1] && bytes[0] == bytes[2];
  return {"determinism", same && !bytes[0].empty(),
          fmt::format("results.csv ({} bytes) with 1, 4, 1 workers: {}", bytes[0].size(),
                      same ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work;
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else {
      work = a;
    }
  }
  if (work.empty()) work = fs::temp_directory_path() / "sptmem_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  using Check = std::pair<std::string, std::function<std::vector<CheckResult>()>>;
  const std::vector<Check> checks{
      {"identity_channel", [] { return std::vector{check_identity_channel(8, {0.5, 3.0}, 5, 100.0, kIdentityTol, 11)}; }},
      {"propagator_oracle", [] { return std::vector{check_propagator_oracle(6, 0.1, 1.0, 10.0, kPropagatorTol, 12)}; }},
      {"tomography_oracle", [] { return std::vector{check_tomography_oracle(6, 0.1, 1.0, 20, kTomographyTol, 13)}; }},
      {"cptp", [] {
         return std::vector{check_cptp(8, 0.1, 1.0, 10, {1.0, 10.0, 50.0}, kDpiPairs, kCptpTol, kDpiSlack, 14)};
       }},
      {"measure_unit_tests", [] { return std::vector{check_measures()}; }},
      {"trend", [&] { return check_trends(work); }},
      {"determinism", [&] { return std::vector{check_determinism(work)}; }},
  };

  int failures = 0;
  for (const auto& [name, run] : checks) {
    if (!only.empty() && only != name) continue;
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> results;
    try {
      results = run();
    } catch (const std::exception& e) {
      results = {{name, false, fmt::format("exception: {}", e.what())}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& r : results) {
      if (!r.passed) ++failures;
      std::cout << fmt::format("{} {}: {} [{:.1f} s]\n", r.passed ? "PASS" : "FAIL", r.name, r.detail, secs);
      std::cout.flush();
    }
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed\n"
                              : fmt::format("{} acceptance criteria failed\n", failures));
  return failures == 0 ? 0 : 1;
}
