#include "nlslab/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "nlslab/errors.hpp"

namespace nlslab {

double EquationSpec::renormalization() const {
  switch (model) {
    case Model::CubicNLS:
    case Model::FourthOrderNLS:
      return 0.0;
    case Model::WickNLS:
    case Model::WickFourthOrderNLS:
      return 2.0;
    case Model::GammaNLS:
      return gamma;
  }
  return 0.0;
}

int EquationSpec::dispersion_exponent() const {
  return model == Model::FourthOrderNLS || model == Model::WickFourthOrderNLS ? 4 : 2;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::CubicNLS: return "cubic";
    case Model::WickNLS: return "wick";
    case Model::GammaNLS: return "gamma";
    case Model::FourthOrderNLS: return "fourth_order";
    case Model::WickFourthOrderNLS: return "wick_fourth_order";
  }
  return "unknown";
}

std::string to_string(Sign s) { return s == Sign::Defocusing ? "defocusing" : "focusing"; }

Model parse_model(const std::string& name) {
  for (Model m : {Model::CubicNLS, Model::WickNLS, Model::GammaNLS, Model::FourthOrderNLS,
                  Model::WickFourthOrderNLS}) {
    if (to_string(m) == name) return m;
  }
  throw ParameterError("unknown model '" + name +
                       "' (expected cubic, wick, gamma, fourth_order, wick_fourth_order)");
}

Sign parse_sign(const std::string& name) {
  if (name == "defocusing" || name == "+") return Sign::Defocusing;
  if (name == "focusing" || name == "-") return Sign::Focusing;
  throw ParameterError("unknown sign '" + name + "' (expected defocusing or focusing)");
}

Trajectory::Trajectory(std::vector<double> times, std::vector<SpectralField> states,
                       EquationSpec spec)
    : times_(std::move(times)), states_(std::move(states)), spec_(spec) {
  if (times_.size() < 2) throw DimensionError("Trajectory: need at least two instants");
  if (times_.size() != states_.size()) {
    throw DimensionError("Trajectory: times and states differ in length");
  }
  const double h = times_[1] - times_[0];
  if (h == 0.0) throw ParameterError("Trajectory: zero time step");
  const double scale = std::max(std::abs(times_.front()), std::abs(times_.back())) + std::abs(h);
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (std::abs((times_[i] - times_[i - 1]) - h) > 1e-12 * scale) {
      throw ParameterError("Trajectory: non-uniform time spacing at index " + std::to_string(i));
    }
    if (!(states_[i].grid() == states_[0].grid())) {
      throw DimensionError("Trajectory: states on different grids");
    }
  }
}

NonlinearityParts nonlinearity(const SpectralField& field, const EquationSpec& spec) {
  const TorusGrid& grid = field.grid();
  const double mu = mass(field);
  SpectralField cubic = cubic_product(field);
  SpectralField res(grid);
  const int K = grid.max_mode();
  for (int n = -K; n <= K; ++n) res.set(n, std::norm(field[n]) * field[n]);
  SpectralField nonres = cubic - field * complex(2.0 * mu) + res;
  SpectralField mean_term = field * complex(spec.renormalization() * mu);
  SpectralField total = cubic - mean_term;
  return {std::move(nonres), std::move(res), std::move(mean_term), std::move(total), mu};
}

SpectralField nonlinear_field(const SpectralField& field, const EquationSpec& spec) {
  SpectralField out = cubic_product(field);
  const double shift = spec.renormalization() * mass(field);
  if (shift != 0.0) out -= field * complex(shift);
  out *= complex(0.0, spec.sign_factor());
  return out;
}

SpectralField rhs(const SpectralField& interaction_state, double t, const EquationSpec& spec) {
  const int p = spec.dispersion_exponent();
  const SpectralField u = free_evolve(interaction_state, t, p);
  return free_evolve(nonlinear_field(u, spec), -t, p);
}

namespace {

bool all_finite(const SpectralField& f) {
  for (const auto& c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

/// Free phases e^{i n^p tau} for tau = h and h/2, reused across steps.
class StepPhases {
 public:
  StepPhases(const TorusGrid& grid, double h, int p) : K_(grid.max_mode()) {
    for (int n = -K_; n <= K_; ++n) {
      full_.push_back(std::polar(1.0, dispersion(n, p) * h));
      half_.push_back(std::polar(1.0, dispersion(n, p) * 0.5 * h));
    }
  }
  SpectralField full(const SpectralField& f) const { return apply(f, full_); }
  SpectralField half(const SpectralField& f) const { return apply(f, half_); }

 private:
  SpectralField apply(const SpectralField& f, const std::vector<complex>& ph) const {
    SpectralField out(f.grid());
    for (int n = -K_; n <= K_; ++n) out.set(n, f[n] * ph[static_cast<std::size_t>(n + K_)]);
    return out;
  }
  int K_;
  std::vector<complex> full_, half_;
};

/// One integrating-factor RK4 step of signed length h.
SpectralField if_rk4_step(const SpectralField& u, double h, const StepPhases& E,
                          const EquationSpec& spec) {
  const complex half_h(0.5 * h);
  const SpectralField k1 = nonlinear_field(u, spec);
  const SpectralField k2 = nonlinear_field(E.half(u + k1 * half_h), spec);
  const SpectralField k3 = nonlinear_field(E.half(u) + k2 * half_h, spec);
  const SpectralField k4 = nonlinear_field(E.full(u) + E.half(k3) * complex(h), spec);
  SpectralField incr = E.full(k1) + E.half(k2 + k3) * complex(2.0) + k4;
  return E.full(u) + incr * complex(h / 6.0);
}

}  // namespace

Trajectory solve(const SpectralField& u0, const EquationSpec& spec, double T, double dt,
                 const SolveOptions& options) {
  if (!(dt > 0.0)) throw ParameterError("solve: dt must be positive");
  if (options.record_every < 1) throw ParameterError("solve: record_every must be >= 1");
  const double ratio = std::abs(T) / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << "solve: T/dt = " << ratio << " is not an integer";
    throw ParameterError(msg.str());
  }
  if (steps == 0) throw ParameterError("solve: T must be nonzero");
  const auto stride = static_cast<std::size_t>(options.record_every);
  if (steps % stride != 0) {
    throw ParameterError("solve: step count must be a multiple of record_every");
  }
  const double h = T > 0 ? dt : -dt;
  const double mass0 = mass(u0);

  std::vector<double> times{0.0};
  std::vector<SpectralField> states{u0};
  times.reserve(steps / stride + 1);
  states.reserve(steps / stride + 1);

  const StepPhases phases(u0.grid(), h, spec.dispersion_exponent());
  SpectralField u = u0;
  if (options.observer) options.observer(0, 0.0, u);
  for (std::size_t i = 1; i <= steps; ++i) {
    u = if_rk4_step(u, h, phases, spec);
    if (!all_finite(u)) {
      throw BlowUpError("solve: non-finite coefficient at step " + std::to_string(i), i);
    }
    if (mass0 > 0.0) {
      const double drift = std::abs(mass(u) / mass0 - 1.0);
      if (drift > options.max_mass_drift) {
        std::ostringstream msg;
        msg << "solve: relative mass drift " << drift << " at step " << i << " (t = " << i * h
            << ")";
        throw BlowUpError(msg.str(), i);
      }
    }
    if (options.observer) options.observer(i, static_cast<double>(i) * h, u);
    if (i % stride == 0) {
      times.push_back(static_cast<double>(i) * h);
      states.push_back(u);
    }
  }
  return Trajectory(std::move(times), std::move(states), spec);
}

Trajectory solve_symmetric(const SpectralField& u0, const EquationSpec& spec, double T, double dt,
                           const SolveOptions& options) {
  const Trajectory back = solve(u0, spec, -std::abs(T), dt, options);
  const Trajectory fwd = solve(u0, spec, std::abs(T), dt, options);
  std::vector<double> times;
  std::vector<SpectralField> states;
  for (std::size_t i = back.size(); i-- > 1;) {
    times.push_back(back.times()[i]);
    states.push_back(back.state(i));
  }
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    times.push_back(fwd.times()[i]);
    states.push_back(fwd.state(i));
  }
  return Trajectory(std::move(times), std::move(states), spec);
}

Trajectory interaction_frame(const Trajectory& traj, int direction) {
  const int p = traj.spec().dispersion_exponent();
  std::vector<SpectralField> states;
  states.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    states.push_back(free_evolve(traj.state(i), -direction * traj.times()[i], p));
  }
  return Trajectory(traj.times(), std::move(states), traj.spec());
}

Trajectory nonlinearity_trajectory(const Trajectory& traj) {
  std::vector<SpectralField> states;
  states.reserve(traj.size());
  for (const auto& u : traj.states()) states.push_back(nonlinearity(u, traj.spec()).total);
  return Trajectory(traj.times(), std::move(states), traj.spec());
}

}  // namespace nlslab
