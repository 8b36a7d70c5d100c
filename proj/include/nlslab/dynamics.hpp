#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nlslab/spectral.hpp"

namespace nlslab {

enum class Model { CubicNLS, WickNLS, GammaNLS, FourthOrderNLS, WickFourthOrderNLS };

/// +1 is the defocusing sign (i u_t - u_xx + |u|^2 u = 0), -1 focusing.
enum class Sign : int { Defocusing = 1, Focusing = -1 };

/// One member of the cubic NLS family
///   i u_t - u_xx + sg (|u|^2 - gamma mu(u)) u = 0        (p = 2)
///   i u_t + u_xxxx + sg (|u|^2 - gamma mu(u)) u = 0      (p = 4)
/// with mu(u) the averaged mass.  In Fourier variables both read
///   d/dt u_n = i n^p u_n + i sg F[(|u|^2 - gamma mu) u]_n.
struct EquationSpec {
  Model model = Model::WickNLS;
  Sign sign = Sign::Defocusing;
  double gamma = 2.0;  // read only for GammaNLS

  /// Renormalization constant: 0 (cubic), 2 (Wick) or `gamma`.
  double renormalization() const;
  int dispersion_exponent() const;
  int sign_factor() const { return static_cast<int>(sign); }

  static EquationSpec cubic(Sign s = Sign::Defocusing) { return {Model::CubicNLS, s, 0.0}; }
  static EquationSpec wick(Sign s = Sign::Defocusing) { return {Model::WickNLS, s, 2.0}; }
  static EquationSpec gamma_family(double g, Sign s = Sign::Defocusing) {
    return {Model::GammaNLS, s, g};
  }
};

std::string to_string(Model m);
std::string to_string(Sign s);
Model parse_model(const std::string& name);
Sign parse_sign(const std::string& name);

/// Uniformly sampled solution history on a single grid.
class Trajectory {
 public:
  Trajectory(std::vector<double> times, std::vector<SpectralField> states, EquationSpec spec);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<SpectralField>& states() const noexcept { return states_; }
  const SpectralField& state(std::size_t i) const { return states_.at(i); }
  const SpectralField& front() const { return states_.front(); }
  const SpectralField& back() const { return states_.back(); }
  const EquationSpec& spec() const noexcept { return spec_; }
  const TorusGrid& grid() const { return states_.front().grid(); }
  std::size_t size() const noexcept { return times_.size(); }
  /// Signed sample spacing.
  double dt() const { return times_[1] - times_[0]; }

 private:
  std::vector<double> times_;
  std::vector<SpectralField> states_;
  EquationSpec spec_;
};

/// Split of the cubic nonlinearity of one state.
///
///   |u|^2 u = nonres + 2 mu u - res,    total = (|u|^2 - gamma mu) u
///
/// nonres sums n2 != n1, n3; res is the diagonal |u_n|^2 u_n; mean_term is
/// gamma mu u.
struct NonlinearityParts {
  SpectralField nonres;
  SpectralField res;
  SpectralField mean_term;
  SpectralField total;
  double mass;
};

NonlinearityParts nonlinearity(const SpectralField& field, const EquationSpec& spec);

/// Lab-frame nonlinear vector field i sg (|u|^2 - gamma mu) u.
SpectralField nonlinear_field(const SpectralField& field, const EquationSpec& spec);

/// d/dt of the interaction variable a = S(-t) u at time t, given a(t).
SpectralField rhs(const SpectralField& interaction_state, double t, const EquationSpec& spec);

struct SolveOptions {
  /// Store every k-th step (the last step is always reached exactly).
  int record_every = 1;
  /// Abort when |mass(u) / mass(u0) - 1| exceeds this.
  double max_mass_drift = 1e-2;
  /// Called with (step, t, state) for the initial state and after every step.
  std::function<void(std::size_t, double, const SpectralField&)> observer;
};

/// Integrates from t = 0 to t = T (T may be negative) with step |dt|.
///
/// Integrating-factor RK4: classical RK4 on the interaction representation,
/// with the frame re-anchored at every step so the n^p phases are applied
/// exactly over intervals of length at most dt.  Stability guidance: keep
/// |dt| * max|Phi| modest, where |Phi| <= 8 K^2 for band |n| <= K.
Trajectory solve(const SpectralField& u0, const EquationSpec& spec, double T, double dt,
                 const SolveOptions& options = {});

/// Trajectory on [-T, T] assembled from a backward and a forward solve.
Trajectory solve_symmetric(const SpectralField& u0, const EquationSpec& spec, double T, double dt,
                           const SolveOptions& options = {});

/// Removes (direction = +1) or restores (direction = -1) the free phase:
/// a_n(t) = e^{-i t n^p} u_n(t).
Trajectory interaction_frame(const Trajectory& traj, int direction = 1);

/// Trajectory of the renormalized nonlinearity (|u|^2 - gamma mu) u.
Trajectory nonlinearity_trajectory(const Trajectory& traj);

}  // namespace nlslab
