#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlslab/harness/config.hpp"

namespace nlslab::harness {

enum ExitCode : int { kExitOk = 0, kExitCrash = 1, kExitConfig = 2, kExitBlowUp = 3 };

/// Constants of the bootstrap displays.  The defaults are heuristic: the
/// analysis fixes them only up to implicit constants.
struct BootstrapConstants {
  double C1 = 1.0;
  double C2 = 1.0;
  double d = 0.25;
  double c = 0.0;
  double theta = 0.25;
};

struct BootstrapResult {
  double R = 0.0;
  double M = 1.0;  // exact power of two, may exceed any integer type
  int log2_M = 0;
  double T0 = 1.0;
  int log2_T0 = 0;  // T0 = 2^{log2_T0}
};

/// R = sqrt(C1) |u0|_{H^s}; M is the smallest power of two with
/// C2 M^{-d} (2R)^2 < 1/4, T0 the largest 2^{-m} <= 1 with
/// C2 T0^theta (M^c (2R)^2 + (2R)^4) < 1/4.
BootstrapResult bootstrap_params(double u0_norm_hs, const BootstrapConstants& k);

/// Initial data on a grid of N modes as described by the data section.
///
/// random: coefficients g_n <n>^{-(sobolev + 1)} with g_n ~ CN(0, 1) drawn in
/// order n = -band..band (real part first) from mt19937_64(seed), then scaled
/// to L^2 norm `norm`.  hs_not_l2: <m>^{tail_exponent} for |m| <= N/2 - 1.
SpectralField initial_data(const DataConfig& data, int N);

/// Values the "auto" fields resolve to.
struct Resolved {
  double alpha = 0.0;
  int M = 0;
  double c = 0.0;
  double hs_norm = 0.0;
  std::vector<std::string> auto_fields;
  std::vector<std::string> warnings;
};
Resolved resolve(const ExperimentConfig& cfg);

struct AprioriRow {
  double amplitude = 0.0;
  double T = 0.0;
  bool skipped = false;
  double e_s = 0.0;
  double f_s_alpha = 0.0;
  double n_s_alpha = 0.0;
  double f_free = 0.0;
  /// F / |u0|_{H^s}
  double f_over_data = 0.0;
  /// F / (E + N)
  double k1_ratio = 0.0;
  /// N / (T^theta F^3)
  double k2_ratio = 0.0;
  /// (E^2 - |u0|^2) / (C2 (T^theta M^c F^4 + M^-d F^4 + T^theta F^6))
  double k3_ratio = 0.0;
  /// F(u) / F(S(t) u0)
  double nonlinear_to_linear = 0.0;
  /// Ledger energy change over |u0|_{H^s}^2.
  double energy_drift = 0.0;
  /// |f_over_data(2N) / f_over_data(N) - 1|, when refinement ran.
  std::optional<double> refinement_change;
};

struct AprioriReport {
  std::vector<AprioriRow> rows;
  /// Observations, never assertions: non-monotone columns, unstable refinement.
  std::vector<std::string> flags;
  std::vector<std::string> warnings;
};

AprioriReport apriori_experiment(const ExperimentConfig& cfg);

struct RunContext {
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: leave the OpenMP default
};

/// Result of one experiment: file name -> content, plus the exit code.
struct RunOutput {
  int exit_code = kExitOk;
  std::map<std::string, std::string> files;
  std::string message;
};

/// Runs the configured experiment without touching the filesystem.
/// `report.json` depends only on the config (and seed); timings and versions
/// go to `run_metadata.json`.  Config and input errors give kExitConfig with
/// no files.
RunOutput execute(const ExperimentConfig& cfg, const RunContext& ctx = {});

/// execute(), then atomic writes into `out_dir` (created if needed).
int run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, const RunContext& ctx = {});

/// Loads the config file and runs it into its configured output directory.
int run(const std::string& config_path);

}  // namespace nlslab::harness
