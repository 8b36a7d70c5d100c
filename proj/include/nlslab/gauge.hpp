#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/dynamics.hpp"

namespace nlslab {

/// Multiplies every state by e^{-i sg gamma t mu0}, mu0 the mass at t = 0.
/// A solution of the gamma0-renormalized equation becomes a solution of the
/// (gamma0 + gamma)-renormalized one; gamma -> -gamma inverts the map.
Trajectory gauge_transform(const Trajectory& traj, double gamma, Sign sign);

/// max_t |G(u_cubic)(t) - u_wick(t)|_{L^2}, both solved from u0 with the
/// same step.
double gauge_equivalence_residual(const SpectralField& u0, double T, double dt,
                                  Sign sign = Sign::Defocusing);

/// Separable test function phi(x, t) = f(x) b(t), f given by Fourier
/// coefficients.
struct SpaceTimeTestFunction {
  std::vector<std::pair<int, complex>> spatial;
  std::function<double(double)> profile;

  /// (1 + cos x) exp(1 - 1/(1 - r^2)), r = 2t/T - 1, supported in (0, T).
  static SpaceTimeTestFunction standard(double T);
  static SpaceTimeTestFunction zero();

  /// int_T u(x) f(x) dx = 2 pi sum_n u_n f_{-n}.
  complex spatial_pairing(const SpectralField& u) const;
};

/// M_n = sum_{|m| <= n} <m>^{2 tail}.
double tail_flux(double tail_exponent, int n);

/// Coefficients <m>^{tail} for |m| <= n on a band of 2n + 2 modes.
SpectralField tail_data(double tail_exponent, int n);

struct OscillationOptions {
  double tail_exponent = -0.5;
  std::vector<int> cutoffs{8, 16, 32, 64, 128};
  double T = 1.0;
  double dt = 1e-5;
  Sign sign = Sign::Defocusing;
  /// Global phase e^{i theta} applied to the data.
  double phase = 0.0;
  SpaceTimeTestFunction test_function = SpaceTimeTestFunction::standard(1.0);
};

struct OscillationRow {
  int n;
  double flux;
  /// |iint u_n phi| for the cubic solution u_n.
  double pairing_abs;
  /// |iint v_n phi| for the renormalized solution v_n = e^{-2 i sg t M_n} u_n.
  double pairing_wick_abs;
  double mass_drift;
  double runtime_s;
};

struct OscillationResult {
  std::vector<OscillationRow> rows;
  std::vector<std::string> warnings;
};

/// For each cutoff n solves the cubic equation from P_{<=n} u0 and pairs the
/// solution with the test function over [0, T].  Rows follow cutoff order.
OscillationResult oscillation_experiment(const OscillationOptions& options);

/// |int_0^T e^{2 i sg M t} <u, phi(t)> dt| for a frozen field u, by composite
/// Simpson on `intervals` (even) panels.
double frozen_pairing(const SpectralField& u, const SpaceTimeTestFunction& phi, double M,
                      double T, std::size_t intervals, Sign sign = Sign::Defocusing);

}  // namespace nlslab
