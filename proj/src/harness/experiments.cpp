#include "nlslab/harness/experiments.hpp"

#include <fftw3.h>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <random>
#include <sstream>

#include "nlslab/energy.hpp"
#include "nlslab/errors.hpp"
#include "nlslab/gauge.hpp"
#include "nlslab/harness/io.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/resonance.hpp"

namespace nlslab::harness {

namespace {

using J = nlohmann::ordered_json;
constexpr const char* kVersion = "0.1.0";

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// JSON null for non-finite values (JSON has no inf/nan).
J num(double x) { return std::isfinite(x) ? J(x) : J(nullptr); }

SpectralField embed(const SpectralField& f, int N) {
  SpectralField out{TorusGrid(N)};
  const int K = std::min(f.grid().max_mode(), out.grid().max_mode());
  for (int n = -K; n <= K; ++n) out.set(n, f[n]);
  return out;
}

NormSpec norm_spec(const ExperimentConfig& cfg, const Resolved& r, double T) {
  NormSpec spec;
  spec.s = cfg.params.s;
  spec.b = cfg.params.b;
  spec.alpha = r.alpha;
  spec.T = T;
  return spec;
}

SolveOptions solve_options(const ExperimentConfig& cfg) {
  SolveOptions so;
  so.record_every = cfg.grid.record_every;
  return so;
}

/// Everything an experiment hands back besides the report skeleton.
struct Outcome {
  J results;
  std::map<std::string, std::string> files;
  std::vector<std::string> warnings;
  J timings = J::object();
};

Outcome run_solve(const ExperimentConfig& cfg, const Resolved&) {
  Outcome out;
  const SpectralField u0 = initial_data(cfg.data, cfg.grid.N);
  const Trajectory traj = solve(u0, cfg.equation, cfg.grid.T, cfg.grid.dt, solve_options(cfg));
  const double m0 = mass(traj.front()), m1 = mass(traj.back());
  J r;
  r["steps"] = std::llround(cfg.grid.T / cfg.grid.dt);
  r["recorded"] = traj.size();
  r["mass_initial"] = m0;
  r["mass_final"] = m1;
  r["mass_drift"] = m0 > 0.0 ? J(m1 / m0 - 1.0) : J(nullptr);
  r["hs_norm_initial"] = sobolev_norm(traj.front(), cfg.params.s);
  r["hs_norm_final"] = sobolev_norm(traj.back(), cfg.params.s);
  if (cfg.data.kind == DataKind::SingleMode) {
    // u_n(t) = A e^{i (n^p + sg (1 - gamma) |A|^2) t}
    const auto& m = cfg.data.modes.front();
    const double rate = dispersion(m.n, cfg.equation.dispersion_exponent()) +
                        cfg.equation.sign_factor() * (1.0 - cfg.equation.renormalization()) * std::norm(m.A);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      worst = std::max(worst, std::abs(traj.state(i)[m.n] - m.A * std::polar(1.0, rate * traj.times()[i])));
    }
    const complex final_value = traj.back()[m.n];
    r["closed_form"] = {{"n", m.n},
                        {"phase_rate", rate},
                        {"final", {final_value.real(), final_value.imag()}},
                        {"max_error", worst}};
  }
  out.results = r;
  if (cfg.output.csv) {
    CsvTable summary({"t", "mass", "hs_norm"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
      summary.add_row({traj.times()[i], mass(traj.state(i)), sobolev_norm(traj.state(i), cfg.params.s)});
    }
    out.files["summary.csv"] = summary.str();
    if (cfg.output.trajectory) out.files["trajectory.csv"] = trajectory_csv(traj);
  }
  return out;
}

Outcome run_gauge_check(const ExperimentConfig& cfg, const Resolved&) {
  Outcome out;
  const SpectralField u0 = initial_data(cfg.data, cfg.grid.N);
  const double r1 = gauge_equivalence_residual(u0, cfg.grid.T, cfg.grid.dt, cfg.equation.sign);
  const double r2 = gauge_equivalence_residual(u0, cfg.grid.T, 0.5 * cfg.grid.dt, cfg.equation.sign);
  out.results = {{"residual_dt", r1},
                 {"residual_half_dt", r2},
                 {"observed_order", r2 > 0.0 && r1 > 0.0 ? num(std::log2(r1 / r2)) : J(nullptr)}};
  return out;
}

Outcome run_ledger(const ExperimentConfig& cfg, const Resolved& res) {
  Outcome out;
  const SpectralField u0 = initial_data(cfg.data, cfg.grid.N);
  const Trajectory traj = solve(u0, cfg.equation, cfg.grid.T, cfg.grid.dt, solve_options(cfg));
  const auto led = ledger(traj, cfg.params.s, res.M);
  const double scale = std::max({std::abs(led.delta_E), std::abs(led.r4M), 1e-12});
  out.results = {{"s", led.s},
                 {"M", led.M},
                 {"delta_E", led.delta_E},
                 {"r4M", led.r4M},
                 {"lambda4M_T", led.lambda4M_T},
                 {"lambda4M_0", led.lambda4M_0},
                 {"r6M_I", led.r6M_I},
                 {"r6M_II", led.r6M_II},
                 {"residual", led.residual()},
                 {"relative_residual", std::abs(led.residual()) / scale},
                 {"max_imag_fraction", led.max_imag_fraction},
                 {"solver", {{"method", "integrating-factor RK4"},
                             {"N", cfg.grid.N},
                             {"dt", cfg.grid.dt},
                             {"T", cfg.grid.T},
                             {"record_every", cfg.grid.record_every}}}};
  if (cfg.output.csv) {
    const auto li = ledger_integrands(traj, cfg.params.s, res.M);
    CsvTable table({"t", "r4", "six_I", "six_II"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
      table.add_row({traj.times()[i], li.r4[i], li.six_I[i], li.six_II[i]});
    }
    out.files["ledger_integrands.csv"] = table.str();
  }
  return out;
}

Outcome run_norms(const ExperimentConfig& cfg, const Resolved& res) {
  Outcome out;
  const SpectralField u0 = initial_data(cfg.data, cfg.grid.N);
  const Trajectory traj = solve(u0, cfg.equation, cfg.grid.T, cfg.grid.dt);
  const NormSpec spec = norm_spec(cfg, res, cfg.grid.T);
  out.warnings = spec.warnings();
  const auto st = short_time_norms(traj, spec);
  J blocks = J::array();
  CsvTable table({"k", "lambda", "F_k", "N_k"});
  for (std::size_t i = 0; i < st.k.size(); ++i) {
    const double lambda = std::exp2(std::floor(spec.alpha * st.k[i]));
    blocks.push_back({{"k", st.k[i]}, {"lambda", lambda}, {"F_k", st.fk[i]}, {"N_k", st.nk[i]}});
    table.add_row({double(st.k[i]), lambda, st.fk[i], st.nk[i]});
  }
  out.results = {{"s", spec.s},
                 {"b", spec.b},
                 {"alpha", spec.alpha},
                 {"F_s_alpha", st.f_s_alpha},
                 {"N_s_alpha", st.n_s_alpha},
                 {"E_s", st.e_s},
                 {"sup_hs", st.sup_hs},
                 {"hs_norm_initial", sobolev_norm(u0, spec.s)},
                 {"blocks", blocks}};
  if (cfg.output.csv) out.files["norms_blocks.csv"] = table.str();
  return out;
}

J stats_json(const StrichartzStats& st) {
  return {{"p", st.p},       {"count", st.ratios.size()}, {"skipped", st.skipped},
          {"max", st.max},   {"mean", st.mean},           {"median", st.median},
          {"q90", st.q90}};
}

Outcome run_strichartz(const ExperimentConfig& cfg, const Resolved&) {
  Outcome out;
  const auto& sc = cfg.strichartz;
  const int N = 2 * sc.band + 2;
  std::vector<Trajectory> samples;
  for (int i = 0; i < sc.samples; ++i) {
    DataConfig d;
    d.kind = DataKind::Random;
    d.seed = cfg.data.seed + static_cast<std::uint64_t>(i);
    d.sobolev = cfg.data.sobolev;
    d.norm = 1.0;
    samples.push_back(free_trajectory(initial_data(d, N), sc.T, sc.dt, cfg.equation));
  }
  const auto p4 = strichartz_probe(samples, 4);
  const auto p6 = strichartz_probe(samples, 6);

  // |1 + e^{i(x+t)}|_{L^4}^4 over T x [0, 2 pi] is 6 (2 pi)^2.
  SpectralField phi{TorusGrid(4)};
  phi.set(0, 1.0);
  phi.set(1, 1.0);
  const double two_pi = 2.0 * std::acos(-1.0);
  const double exact = 6.0 * two_pi * two_pi;
  const double value = std::pow(lp_norm(free_trajectory(phi, two_pi, two_pi / 2000.0,
                                                        EquationSpec::wick()), 4), 4) * two_pi;
  out.results = {{"samples", sc.samples},
                 {"band", sc.band},
                 {"p4", stats_json(p4)},
                 {"p6", stats_json(p6)},
                 {"exact_value_check", {{"value", value}, {"expected", exact}, {"abs_error", std::abs(value - exact)}}}};
  if (cfg.output.csv) {
    CsvTable table({"sample", "band_length", "ratio_p4", "ratio_p6"});
    for (std::size_t i = 0; i < p4.ratios.size(); ++i) {
      table.add_row({double(i), double(p4.band_lengths[i]), p4.ratios[i], p6.ratios[i]});
    }
    out.files["strichartz.csv"] = table.str();
  }
  return out;
}

Outcome run_resonance(const ExperimentConfig& cfg, const Resolved&) {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  const auto rep = verify_identities(cfg.resonance.radius);
  out.timings["identities_s"] = seconds_since(start);
  out.results["identities"] = J::parse(to_json(rep));
  if (cfg.resonance.symbol_radius > 0) {
    start = std::chrono::steady_clock::now();
    J cases = J::array();
    CsvTable table({"case", "count", "max_ratio"});
    int idx = 0;
    for (const auto& c : symbol_bound_probe(cfg.resonance.symbol_radius, cfg.params.s)) {
      cases.push_back({{"case", to_string(c.which)},
                       {"count", c.count},
                       {"max_ratio", c.max_ratio},
                       {"argmax", c.argmax}});
      table.add_row({double(idx++), double(c.count), c.max_ratio});
    }
    out.timings["symbol_probe_s"] = seconds_since(start);
    out.results["symbol_probe"] = {{"radius", cfg.resonance.symbol_radius}, {"s", cfg.params.s}, {"cases", cases}};
    if (cfg.output.csv) out.files["symbol_probe.csv"] = table.str();
  }
  return out;
}

Outcome run_oscillation(const ExperimentConfig& cfg, const Resolved&) {
  Outcome out;
  OscillationOptions opt;
  opt.cutoffs = cfg.oscillation.cutoffs;
  opt.tail_exponent = cfg.oscillation.tail_exponent;
  opt.T = cfg.oscillation.T;
  opt.dt = cfg.oscillation.dt;
  opt.sign = cfg.equation.sign;
  opt.test_function = SpaceTimeTestFunction::standard(opt.T);
  const auto res = oscillation_experiment(opt);
  J rows = J::array();
  J times = J::array();
  CsvTable table({"n", "flux", "pairing_abs", "pairing_wick_abs", "mass_drift"});
  for (const auto& r : res.rows) {
    rows.push_back({{"n", r.n},
                    {"flux", r.flux},
                    {"pairing_abs", r.pairing_abs},
                    {"pairing_wick_abs", r.pairing_wick_abs},
                    {"mass_drift", r.mass_drift}});
    times.push_back({{"n", r.n}, {"runtime_s", r.runtime_s}});
    table.add_row({double(r.n), r.flux, r.pairing_abs, r.pairing_wick_abs, r.mass_drift});
  }
  out.timings["cutoffs"] = times;
  const auto& first = res.rows.front();
  const auto& last = res.rows.back();
  out.results = {{"rows", rows},
                 {"flux_increase", last.flux - first.flux},
                 {"pairing_ratio_last_first", first.pairing_abs > 0 ? num(last.pairing_abs / first.pairing_abs) : J(nullptr)}};
  out.warnings = res.warnings;
  if (cfg.output.csv) out.files["oscillation.csv"] = table.str();
  return out;
}

Outcome run_apriori(const ExperimentConfig& cfg, const Resolved& res) {
  Outcome out;
  const auto rep = apriori_experiment(cfg);
  J rows = J::array();
  CsvTable table({"amplitude", "T", "E_s", "F_s_alpha", "N_s_alpha", "F_free", "f_over_data",
                  "k1_ratio", "k2_ratio", "k3_ratio", "nonlinear_to_linear", "energy_drift",
                  "refinement_change"});
  for (const auto& r : rep.rows) {
    J row = {{"amplitude", r.amplitude}, {"T", r.T}, {"skipped", r.skipped}};
    if (!r.skipped) {
      row["E_s"] = r.e_s;
      row["F_s_alpha"] = r.f_s_alpha;
      row["N_s_alpha"] = r.n_s_alpha;
      row["F_free"] = r.f_free;
      row["f_over_data"] = num(r.f_over_data);
      row["k1_ratio"] = num(r.k1_ratio);
      row["k2_ratio"] = num(r.k2_ratio);
      row["k3_ratio"] = num(r.k3_ratio);
      row["nonlinear_to_linear"] = num(r.nonlinear_to_linear);
      row["energy_drift"] = num(r.energy_drift);
      row["refinement_change"] = r.refinement_change ? num(*r.refinement_change) : J(nullptr);
    }
    rows.push_back(row);
    const double nan = std::nan("");
    table.add_row({r.amplitude, r.T, r.skipped ? nan : r.e_s, r.skipped ? nan : r.f_s_alpha,
                   r.skipped ? nan : r.n_s_alpha, r.skipped ? nan : r.f_free,
                   r.skipped ? nan : r.f_over_data, r.skipped ? nan : r.k1_ratio,
                   r.skipped ? nan : r.k2_ratio, r.skipped ? nan : r.k3_ratio,
                   r.skipped ? nan : r.nonlinear_to_linear, r.skipped ? nan : r.energy_drift,
                   r.refinement_change.value_or(nan)});
  }
  const auto boot = bootstrap_params(res.hs_norm, {cfg.bootstrap.C1, cfg.bootstrap.C2, cfg.bootstrap.d,
                                                   res.c, cfg.bootstrap.theta});
  out.results = {{"rows", rows},
                 {"flags", rep.flags},
                 {"M", res.M},
                 {"alpha", res.alpha},
                 {"bootstrap_T0_base_data", boot.T0},
                 {"heuristic_constants", true}};
  out.warnings = rep.warnings;
  if (cfg.output.csv) out.files["apriori.csv"] = table.str();
  return out;
}

Outcome run_bootstrap(const ExperimentConfig& cfg, const Resolved& res) {
  Outcome out;
  const BootstrapConstants k{cfg.bootstrap.C1, cfg.bootstrap.C2, cfg.bootstrap.d, res.c, cfg.bootstrap.theta};
  const auto b = bootstrap_params(res.hs_norm, k);
  const double R2 = 4.0 * b.R * b.R;
  out.results = {
      {"heuristic", true},
      {"note", "C1, C2, d and theta are configuration defaults, not derived constants"},
      {"s", cfg.params.s},
      {"hs_norm", res.hs_norm},
      {"R", b.R},
      {"constants", {{"C1", k.C1}, {"C2", k.C2}, {"d", k.d}, {"c", k.c}, {"theta", k.theta}}},
      {"M", b.M},
      {"log2_M", b.log2_M},
      {"T0", b.T0},
      {"log2_T0", b.log2_T0},
      {"display_a", k.C2 * std::pow(b.M, -k.d) * R2},
      {"display_b", k.C2 * std::pow(b.T0, k.theta) * (std::pow(b.M, k.c) * R2 + R2 * R2)}};
  return out;
}

Outcome dispatch(const ExperimentConfig& cfg, const Resolved& res) {
  switch (*cfg.experiment) {
    case Experiment::Solve: return run_solve(cfg, res);
    case Experiment::GaugeCheck: return run_gauge_check(cfg, res);
    case Experiment::Ledger: return run_ledger(cfg, res);
    case Experiment::Norms: return run_norms(cfg, res);
    case Experiment::Strichartz: return run_strichartz(cfg, res);
    case Experiment::ResonanceAudit: return run_resonance(cfg, res);
    case Experiment::Oscillation: return run_oscillation(cfg, res);
    case Experiment::Apriori: return run_apriori(cfg, res);
    case Experiment::Bootstrap: return run_bootstrap(cfg, res);
  }
  throw ConfigError("experiment", "unhandled experiment");
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

BootstrapResult bootstrap_params(double u0_norm_hs, const BootstrapConstants& k) {
  if (!(k.C1 > 0 && k.C2 > 0 && k.d > 0 && k.theta > 0 && k.c >= 0)) {
    throw ParameterError("bootstrap_params: constants must be positive (c nonnegative)");
  }
  if (!(u0_norm_hs >= 0.0)) throw ParameterError("bootstrap_params: norm must be nonnegative");
  BootstrapResult b;
  b.R = std::sqrt(k.C1) * u0_norm_hs;
  const double R2 = 4.0 * b.R * b.R;
  int m = 0;
  while (!(k.C2 * std::exp2(-k.d * m) * R2 < 0.25)) {
    if (++m > 1023) throw RangeError("bootstrap_params: M exceeds the double range");
  }
  b.log2_M = m;
  b.M = std::ldexp(1.0, m);
  const double Mc = std::exp2(k.c * m);
  int t = 0;
  while (!(k.C2 * std::exp2(-k.theta * t) * (Mc * R2 + R2 * R2) < 0.25)) {
    if (++t > 1074) throw RangeError("bootstrap_params: T0 below the double range");
  }
  b.log2_T0 = -t;
  b.T0 = std::ldexp(1.0, -t);
  return b;
}

SpectralField initial_data(const DataConfig& data, int N) {
  const TorusGrid grid(N);
  SpectralField f(grid);
  const int K = grid.max_mode();
  switch (data.kind) {
    case DataKind::Zero: break;
    case DataKind::SingleMode:
    case DataKind::TwoMode:
      for (const auto& m : data.modes) {
        if (!grid.contains(m.n)) throw ParameterError("initial_data: mode outside the band");
        f.set(m.n, m.A);
      }
      break;
    case DataKind::Random: {
      const int band = data.band > 0 ? std::min(data.band, K) : K;
      std::mt19937_64 rng(data.seed);
      std::normal_distribution<double> g(0.0, std::sqrt(0.5));
      for (int n = -band; n <= band; ++n) {
        const double re = g(rng);
        const double im = g(rng);
        f.set(n, complex(re, im) * std::pow(bracket(n), -(data.sobolev + 1.0)));
      }
      const double m = std::sqrt(mass(f));
      if (m > 0.0) f *= complex(data.norm / m);
      break;
    }
    case DataKind::HsNotL2:
      for (int n = -K; n <= K; ++n) f.set(n, std::pow(bracket(n), data.tail_exponent));
      break;
  }
  return f;
}

Resolved resolve(const ExperimentConfig& cfg) {
  Resolved r;
  r.alpha = cfg.params.alpha.value_or(alpha(cfg.params.s, cfg.params.epsilon));
  if (!cfg.params.alpha) r.auto_fields.push_back("params.alpha");
  r.c = cfg.bootstrap.c.value_or(c_exponent(cfg.params.s, cfg.params.epsilon));
  if (!cfg.bootstrap.c) r.auto_fields.push_back("bootstrap.c");
  r.hs_norm = sobolev_norm(initial_data(cfg.data, cfg.grid.N), cfg.params.s);
  const int K = cfg.grid.N / 2 - 1;
  if (cfg.params.M) {
    r.M = *cfg.params.M;
  } else {
    r.auto_fields.push_back("params.M");
    const auto b = bootstrap_params(r.hs_norm, {cfg.bootstrap.C1, cfg.bootstrap.C2, cfg.bootstrap.d, r.c,
                                                cfg.bootstrap.theta});
    if (b.M > K) {
      r.M = K;
      std::ostringstream msg;
      msg << "bootstrap M = 2^" << b.log2_M << " exceeds the band; using M = " << K;
      r.warnings.push_back(msg.str());
    } else {
      r.M = static_cast<int>(b.M);
    }
  }
  return r;
}

AprioriReport apriori_experiment(const ExperimentConfig& cfg) {
  if (!(cfg.params.s > -0.125 && cfg.params.s < 0.0)) {
    throw ParameterError("apriori_experiment: s must lie in (-1/8, 0)");
  }
  const Resolved res = resolve(cfg);
  AprioriReport rep;
  const SpectralField base = initial_data(cfg.data, cfg.grid.N);
  const double base_norm = sobolev_norm(base, cfg.params.s);
  const auto& bc = cfg.bootstrap;

  for (double T : cfg.apriori.horizons) {
    const NormSpec spec = norm_spec(cfg, res, T);
    for (double amp : cfg.apriori.amplitudes) {
      AprioriRow row;
      row.amplitude = amp;
      row.T = T;
      if (amp == 0.0 || base_norm == 0.0) {
        row.skipped = true;
        rep.rows.push_back(row);
        continue;
      }
      const SpectralField u0 = base * complex(amp / base_norm);
      const Trajectory traj = solve(u0, cfg.equation, T, cfg.grid.dt);
      const auto st = short_time_norms(traj, spec);
      const auto free_st = short_time_norms(free_trajectory(u0, T, cfg.grid.dt, cfg.equation), spec);
      const auto led = ledger(traj, cfg.params.s, res.M);
      row.e_s = st.e_s;
      row.f_s_alpha = st.f_s_alpha;
      row.n_s_alpha = st.n_s_alpha;
      row.f_free = free_st.f_s_alpha;
      const double F = st.f_s_alpha, E = st.e_s, Nn = st.n_s_alpha;
      const double Tt = std::pow(T, bc.theta), Mm = static_cast<double>(std::max(res.M, 1));
      row.f_over_data = F / amp;
      row.k1_ratio = F / (E + Nn);
      row.k2_ratio = Nn / (Tt * F * F * F);
      row.k3_ratio = (E * E - amp * amp) /
                     (bc.C2 * (Tt * std::pow(Mm, res.c) * std::pow(F, 4) + std::pow(Mm, -bc.d) * std::pow(F, 4) +
                               Tt * std::pow(F, 6)));
      row.nonlinear_to_linear = F / free_st.f_s_alpha;
      row.energy_drift = led.delta_E / (amp * amp);
      if (cfg.apriori.refine) {
        const SpectralField fine = embed(u0, 2 * cfg.grid.N);
        const auto st2 = short_time_norms(solve(fine, cfg.equation, T, cfg.grid.dt), spec);
        row.refinement_change = std::abs(st2.f_s_alpha / amp / row.f_over_data - 1.0);
        if (*row.refinement_change > 0.05) {
          std::ostringstream msg;
          msg << "f_over_data changes by " << 100.0 * *row.refinement_change << "% when N doubles (amplitude "
              << amp << ", T " << T << ")";
          rep.flags.push_back(msg.str());
        }
      }
      rep.rows.push_back(row);
    }
  }

  // Monotonicity in amplitude at each horizon, per column.
  const std::vector<std::pair<const char*, double AprioriRow::*>> columns{
      {"f_over_data", &AprioriRow::f_over_data},
      {"k1_ratio", &AprioriRow::k1_ratio},
      {"nonlinear_to_linear", &AprioriRow::nonlinear_to_linear}};
  for (double T : cfg.apriori.horizons) {
    for (const auto& [name, member] : columns) {
      std::vector<double> vals;
      for (const auto& r : rep.rows) {
        if (r.T == T && !r.skipped) vals.push_back(r.*member);
      }
      bool up = true, down = true;
      for (std::size_t i = 1; i < vals.size(); ++i) {
        up = up && vals[i] >= vals[i - 1];
        down = down && vals[i] <= vals[i - 1];
      }
      if (vals.size() > 2 && (up || down)) {
        std::ostringstream msg;
        msg << name << " is monotone " << (up ? "increasing" : "decreasing") << " in amplitude at T = " << T;
        rep.flags.push_back(msg.str());
      }
    }
  }
  return rep;
}

RunOutput execute(const ExperimentConfig& cfg_in, const RunContext& ctx) {
  RunOutput out;
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  ExperimentConfig cfg = cfg_in;
  if (ctx.seed) cfg.data.seed = *ctx.seed;
  if (ctx.threads > 0) omp_set_num_threads(ctx.threads);

  Resolved res;
  try {
    if (!cfg.experiment) throw ConfigError("experiment", "no experiment selected");
    cfg.validate();
    res = resolve(cfg);
  } catch (const std::exception& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    return out;
  }

  // The echoed config carries resolved values, so it reruns as is.
  ExperimentConfig echo = cfg;
  echo.params.alpha = res.alpha;
  echo.params.M = res.M;
  echo.bootstrap.c = res.c;

  J report;
  report["schema_version"] = kSchemaVersion;
  report["experiment"] = to_string(*cfg.experiment);
  J timings = J::object();
  std::vector<std::string> warnings;
  try {
    Outcome o = dispatch(cfg, res);
    report["status"] = "ok";
    report["results"] = o.results;
    for (auto& w : o.warnings) warnings.push_back(w);
    out.files = std::move(o.files);
    timings = o.timings;
  } catch (const BlowUpError& e) {
    report["status"] = "blow_up";
    report["results"] = nullptr;
    report["failure"] = {{"kind", "blow_up"}, {"step", e.step()}, {"message", e.what()}};
    out.exit_code = kExitBlowUp;
    out.message = e.what();
    out.files.clear();
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
    out.files.clear();
    return out;
  } catch (const std::invalid_argument& e) {
    // ParameterError and DimensionError: the inputs are inadmissible.
    out.exit_code = kExitConfig;
    out.message = e.what();
    out.files.clear();
    return out;
  } catch (const ResolutionError& e) {
    std::ostringstream msg;
    msg << e.what() << " (required dt " << e.required_dt() << ")";
    out.exit_code = kExitConfig;
    out.message = msg.str();
    out.files.clear();
    return out;
  }
  report["warnings"] = warnings;
  report["config"] = echo.to_json();
  out.files["report.json"] = report.dump(2) + "\n";

  J meta;
  meta["schema_version"] = kSchemaVersion;
  meta["tool"] = "nlslab";
  meta["version"] = kVersion;
  meta["compiler"] = __VERSION__;
  meta["fftw"] = std::string(fftw_version);
  meta["openmp_max_threads"] = omp_get_max_threads();
  meta["seed"] = cfg.data.seed;
  meta["auto_fields"] = res.auto_fields;
  // Kept out of the report: a rerun from the echoed config has no auto fields.
  meta["resolution_notes"] = res.warnings;
  meta["started_utc"] = started;
  meta["wall_time_s"] = seconds_since(start);
  meta["timings"] = timings;
  out.files["run_metadata.json"] = meta.dump(2) + "\n";
  return out;
}

int run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, const RunContext& ctx) {
  RunOutput out = execute(cfg, ctx);
  if (!out.message.empty()) std::cerr << "nlslab: " << out.message << "\n";
  if (out.files.empty()) return out.exit_code;
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, content] : out.files) atomic_write(out_dir / name, content);
  return out.exit_code;
}

int run(const std::string& config_path) {
  try {
    const ExperimentConfig cfg = load_config(config_path);
    return run(cfg, cfg.output.directory);
  } catch (const ConfigError& e) {
    std::cerr << "nlslab: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace nlslab::harness
