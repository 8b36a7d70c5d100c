#pragma once

// Experiment configuration.  A config is a YAML mapping; every section and
// key is optional except where noted, and any key not listed below is an
// error (reported with its line and column).
//
//   experiment: solve | gauge-check | ledger | norms | strichartz |
//               resonance-audit | oscillation | apriori | bootstrap
//   equation:  {model: wick, sign: defocusing, gamma: 2.0}
//   grid:      {N: 64, dt: 1.0e-3, T: 1.0, record_every: 1}
//   params:    {s: -0.0625, alpha: auto, M: auto, epsilon: 1.0e-3, b: 0.5}
//   data:      {kind: random, seed: 0, sobolev: 1.0, norm: 1.0, band: 0,
//               n: 1, A: [re, im], modes: [{n: .., A: ..}, ..], tail_exponent: -0.5}
//   output:    {directory: out, formats: [json, csv], trajectory: true}
//   resonance: {radius: 64, symbol_radius: 0}
//   oscillation: {cutoffs: [8, 16, 32, 64, 128], tail_exponent: -0.5, T: 1.0, dt: 5.0e-5}
//   strichartz: {samples: 50, band: 8, T: 1.0, dt: 1.0e-3}
//   apriori:   {amplitudes: [0.1, 0.2, 0.4], horizons: [0.05, 0.1], refine: true}
//   bootstrap: {C1: 1, C2: 1, d: 0.25, theta: 0.25, c: auto}
//
// data.kind is one of zero, single_mode (n, A), two_mode (modes), random
// (seed, sobolev, norm, band) or hs_not_l2 (tail_exponent).  A is a number or
// a [re, im] pair.  band: 0 means the full grid band.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlslab/dynamics.hpp"

namespace nlslab::harness {

inline constexpr int kSchemaVersion = 1;

/// Parse or validation failure; line and column are 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = 0, int column = 0);
  const std::string& field() const noexcept { return field_; }
  /// The message without location prefix.
  const std::string& message() const noexcept { return message_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string field_;
  std::string message_;
  int line_;
  int column_;
};

enum class Experiment {
  Solve,
  GaugeCheck,
  Ledger,
  Norms,
  Strichartz,
  ResonanceAudit,
  Oscillation,
  Apriori,
  Bootstrap
};
std::string to_string(Experiment e);
/// Throws ConfigError for unknown names.
Experiment parse_experiment(const std::string& name);
const std::vector<Experiment>& all_experiments();

enum class DataKind { Zero, SingleMode, TwoMode, Random, HsNotL2 };
std::string to_string(DataKind k);

struct ModeAmplitude {
  int n = 1;
  complex A{1.0, 0.0};
};

struct DataConfig {
  DataKind kind = DataKind::Random;
  std::vector<ModeAmplitude> modes;  // single_mode: one entry, two_mode: two
  std::uint64_t seed = 0;
  double sobolev = 1.0;
  double norm = 1.0;
  int band = 0;
  double tail_exponent = -0.5;
};

struct GridConfig {
  int N = 64;
  double dt = 1e-3;
  double T = 1.0;
  int record_every = 1;
};

struct ParamsConfig {
  double s = -0.0625;
  std::optional<double> alpha;  // empty: auto
  std::optional<int> M;         // empty: auto
  double epsilon = 1e-3;
  double b = 0.5;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool trajectory = true;
};

struct ResonanceConfig {
  int radius = 64;
  int symbol_radius = 0;
};

struct OscillationConfig {
  std::vector<int> cutoffs{8, 16, 32, 64, 128};
  double tail_exponent = -0.5;
  double T = 1.0;
  double dt = 5e-5;
};

struct StrichartzConfig {
  int samples = 50;
  int band = 8;
  double T = 1.0;
  double dt = 1e-3;
};

struct AprioriConfig {
  std::vector<double> amplitudes{0.1, 0.2, 0.4};
  std::vector<double> horizons{0.05, 0.1};
  bool refine = true;
};

struct BootstrapConfig {
  double C1 = 1.0;
  double C2 = 1.0;
  double d = 0.25;
  double theta = 0.25;
  std::optional<double> c;  // empty: c(s)
};

struct ExperimentConfig {
  std::optional<Experiment> experiment;
  EquationSpec equation = EquationSpec::wick();
  GridConfig grid;
  ParamsConfig params;
  DataConfig data;
  OutputConfig output;
  ResonanceConfig resonance;
  OscillationConfig oscillation;
  StrichartzConfig strichartz;
  AprioriConfig apriori;
  BootstrapConfig bootstrap;

  /// Range and consistency checks shared by the parser and programmatic use.
  void validate() const;
  /// Config as JSON (itself valid YAML and accepted by parse_config).  The
  /// output directory is left out: it says where, not what.
  nlohmann::ordered_json to_json() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");
ExperimentConfig load_config(const std::string& path);

}  // namespace nlslab::harness
