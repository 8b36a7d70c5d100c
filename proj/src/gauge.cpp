#include "nlslab/gauge.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "nlslab/errors.hpp"
#include "nlslab/quadrature.hpp"

namespace nlslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

EquationSpec shifted_spec(const EquationSpec& spec, double gamma, Sign sign) {
  const double total = spec.renormalization() + gamma;
  if (spec.dispersion_exponent() == 4) {
    if (total == 0.0) return {Model::FourthOrderNLS, sign, 0.0};
    if (total == 2.0) return {Model::WickFourthOrderNLS, sign, 2.0};
    throw ParameterError("gauge_transform: fourth-order family only has gamma in {0, 2}");
  }
  if (total == 0.0) return EquationSpec::cubic(sign);
  if (total == 2.0) return EquationSpec::wick(sign);
  return EquationSpec::gamma_family(total, sign);
}

}  // namespace

Trajectory gauge_transform(const Trajectory& traj, double gamma, Sign sign) {
  const double mu0 = mass(traj.front());
  const double rate = -static_cast<int>(sign) * gamma * mu0;
  std::vector<SpectralField> states;
  states.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    states.push_back(traj.state(i) * std::polar(1.0, rate * traj.times()[i]));
  }
  return Trajectory(traj.times(), std::move(states), shifted_spec(traj.spec(), gamma, sign));
}

double gauge_equivalence_residual(const SpectralField& u0, double T, double dt, Sign sign) {
  const Trajectory cubic = solve(u0, EquationSpec::cubic(sign), T, dt);
  const Trajectory wick = solve(u0, EquationSpec::wick(sign), T, dt);
  const Trajectory gauged = gauge_transform(cubic, 2.0, sign);
  double worst = 0.0;
  for (std::size_t i = 0; i < wick.size(); ++i) {
    worst = std::max(worst, std::sqrt(mass(gauged.state(i) - wick.state(i))));
  }
  return worst;
}

SpaceTimeTestFunction SpaceTimeTestFunction::standard(double T) {
  if (!(T > 0.0)) throw ParameterError("SpaceTimeTestFunction: T must be positive");
  SpaceTimeTestFunction phi;
  phi.spatial = {{0, 1.0}, {1, 0.5}, {-1, 0.5}};
  phi.profile = [T](double t) {
    const double r = 2.0 * t / T - 1.0;
    return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
  };
  return phi;
}

SpaceTimeTestFunction SpaceTimeTestFunction::zero() {
  return {{}, [](double) { return 0.0; }};
}

complex SpaceTimeTestFunction::spatial_pairing(const SpectralField& u) const {
  complex acc{};
  for (const auto& [n, c] : spatial) {
    if (u.grid().contains(-n)) acc += u[-n] * c;
  }
  return kTwoPi * acc;
}

double tail_flux(double tail_exponent, int n) {
  double acc = 0.0;
  for (int m = -n; m <= n; ++m) acc += std::pow(1.0 + double(m) * m, tail_exponent);
  return acc;
}

SpectralField tail_data(double tail_exponent, int n) {
  if (n < 0) throw ParameterError("tail_data: cutoff must be nonnegative");
  SpectralField f(TorusGrid(2 * n + 2));
  for (int m = -n; m <= n; ++m) f.set(m, std::pow(1.0 + double(m) * m, 0.5 * tail_exponent));
  return f;
}

OscillationResult oscillation_experiment(const OscillationOptions& opt) {
  if (opt.cutoffs.empty()) throw ParameterError("oscillation_experiment: no cutoffs");
  for (std::size_t i = 0; i < opt.cutoffs.size(); ++i) {
    if (opt.cutoffs[i] < 1 || (i > 0 && opt.cutoffs[i] <= opt.cutoffs[i - 1])) {
      throw ParameterError("oscillation_experiment: cutoffs must be positive and increasing");
    }
  }
  if (!(opt.tail_exponent >= -0.5 && opt.tail_exponent < 0.0)) {
    throw ParameterError("oscillation_experiment: tail exponent must lie in [-1/2, 0)");
  }
  const double top_flux = tail_flux(opt.tail_exponent, opt.cutoffs.back());
  // Ten samples per period of e^{2 i M t} at the largest cutoff.
  const double needed = kTwoPi / (2.0 * top_flux * 10.0);
  if (opt.dt > needed) {
    std::ostringstream msg;
    msg << "oscillation_experiment: dt = " << opt.dt << " undersamples the gauge phase; need dt <= "
        << needed;
    throw ResolutionError(msg.str(), needed);
  }

  const double sg = static_cast<int>(opt.sign);
  OscillationResult result;
  result.rows.resize(opt.cutoffs.size());
  const int count = static_cast<int>(opt.cutoffs.size());

  // Exceptions may not leave an OpenMP region; the first one is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < count; ++c) {
    try {
    const auto start = std::chrono::steady_clock::now();
    const int n = opt.cutoffs[static_cast<std::size_t>(c)];
    const SpectralField u0 = tail_data(opt.tail_exponent, n) * std::polar(1.0, opt.phase);
    const double flux = mass(u0);
    std::vector<complex> cubic_vals, wick_vals;
    SolveOptions so;
    so.observer = [&](std::size_t, double t, const SpectralField& u) {
      const complex p = opt.test_function.profile(t) * opt.test_function.spatial_pairing(u);
      cubic_vals.push_back(p);
      wick_vals.push_back(p * std::polar(1.0, -2.0 * sg * flux * t));
    };
    const double ratio = opt.T / opt.dt;
    so.record_every = static_cast<int>(std::llround(ratio));
    const Trajectory traj = solve(u0, EquationSpec::cubic(opt.sign), opt.T, opt.dt, so);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.rows[static_cast<std::size_t>(c)] = {n,
                                                flux,
                                                std::abs(simpson(cubic_vals, opt.dt)),
                                                std::abs(simpson(wick_vals, opt.dt)),
                                                mass(traj.back()) / flux - 1.0,
                                                elapsed};
    } catch (...) {
#pragma omp critical(oscillation_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const double prev = result.rows[i - 1].flux, cur = result.rows[i].flux;
    if (cur < 1.01 * prev) {
      std::ostringstream msg;
      msg << "flux grows by less than 1% between cutoffs " << result.rows[i - 1].n << " and "
          << result.rows[i].n << " (" << prev << " -> " << cur << ")";
      result.warnings.push_back(msg.str());
    }
  }
  return result;
}

double frozen_pairing(const SpectralField& u, const SpaceTimeTestFunction& phi, double M,
                      double T, std::size_t intervals, Sign sign) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw ParameterError("frozen_pairing: intervals must be even and >= 2");
  }
  const double h = T / static_cast<double>(intervals);
  const complex base = phi.spatial_pairing(u);
  const double sg = static_cast<int>(sign);
  std::vector<complex> vals(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double t = h * static_cast<double>(i);
    vals[i] = phi.profile(t) * base * std::polar(1.0, 2.0 * sg * M * t);
  }
  return std::abs(simpson(vals, h));
}

}  // namespace nlslab
