#pragma once

// Fourier analysis on the circle T = R / 2piZ.
//
// Coefficients follow the averaged-integral normalization
//   u(x) = sum_n u_n e^{inx},   u_n = (1/2pi) int u(x) e^{-inx} dx,
// so that Parseval reads (1/2pi) int |u|^2 = sum |u_n|^2.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace nlslab {

using complex = std::complex<double>;

/// Japanese bracket <n> = sqrt(1 + n^2).
inline double bracket(double n) { return std::sqrt(1.0 + n * n); }

/// Retained mode band and physical sampling for one discretization of T.
///
/// The band is n in [-N/2, N/2) with the n = -N/2 slot held at zero, so the
/// effective band is symmetric: |n| <= N/2 - 1.  Cubic products are formed on
/// n_phys >= 2N - 3 points, which makes truncation back to the band exact.
class TorusGrid {
 public:
  explicit TorusGrid(int n_modes);
  TorusGrid(int n_modes, int n_phys);

  int n_modes() const noexcept { return n_modes_; }
  int n_phys() const noexcept { return n_phys_; }
  /// Largest |n| carried by the band.
  int max_mode() const noexcept { return n_modes_ / 2 - 1; }
  int min_slot() const noexcept { return -n_modes_ / 2; }
  bool contains(int n) const noexcept { return n >= -max_mode() && n <= max_mode(); }
  /// Storage index of mode n (valid for n in [-N/2, N/2)).
  std::size_t slot(int n) const noexcept { return static_cast<std::size_t>(n + n_modes_ / 2); }
  double point(int j) const;

  /// Smallest admissible n_phys for a band of n_modes.
  static int min_phys(int n_modes) noexcept { return 2 * n_modes - 3; }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int n_modes_;
  int n_phys_;
};

/// Fourier coefficients of a band-limited function on T.
class SpectralField {
 public:
  explicit SpectralField(const TorusGrid& grid);
  SpectralField(const TorusGrid& grid, std::vector<complex> coeffs);

  const TorusGrid& grid() const noexcept { return grid_; }

  complex operator[](int n) const { return coeffs_[grid_.slot(n)]; }
  /// Sets a coefficient; writes to the n = -N/2 slot are ignored.
  void set(int n, complex value);
  std::span<const complex> coeffs() const noexcept { return coeffs_; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(complex factor);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, complex c) { return a *= c; }
  friend SpectralField operator*(complex c, SpectralField a) { return a *= c; }

 private:
  TorusGrid grid_;
  std::vector<complex> coeffs_;
};

/// Physical samples u(x_j), j < n_phys, to band coefficients (truncating).
SpectralField to_spectral(const TorusGrid& grid, std::span<const complex> samples);

/// Band coefficients to physical samples on the n_phys grid.
std::vector<complex> to_physical(const SpectralField& field);

/// Samples on an arbitrary uniform grid of n_points >= 2 * max_mode + 1.
std::vector<complex> to_physical(const SpectralField& field, int n_points);

/// Dealiased cubic |u|^2 u, truncated back to the band.
SpectralField cubic_product(const SpectralField& field);

enum class DyadicMode { Exact, AtMost, AtLeast };

/// Dyadic frequency block I_k = {2^{k-1} <= |n| < 2^k}, I_0 = {0}.
bool in_dyadic_block(int n, int k);
/// Index k of the dyadic block containing n.
int dyadic_index(int n);

/// Sharp Littlewood-Paley projection P_k, P_{<=k} or P_{>=k}.
SpectralField project_dyadic(const SpectralField& field, int k, DyadicMode mode = DyadicMode::Exact);

/// Sharp projection onto |n| <= cutoff.
SpectralField project_low(const SpectralField& field, int cutoff);

/// Free propagator S(t): u_n -> e^{i n^p t} u_n with p in {2, 4}.
SpectralField free_evolve(const SpectralField& field, double t, int dispersion_exponent);

/// Linear phase n^p as a double.
double dispersion(int n, int dispersion_exponent);

/// (sum <n>^{2s} |u_n|^2)^{1/2}.
double sobolev_norm(const SpectralField& field, double s);

/// sum |u_n|^2, i.e. the averaged integral of |u|^2.
double mass(const SpectralField& field);

/// Smooth Littlewood-Paley cutoffs.
///
/// eta0 is even, equal to 1 on [-5/4, 5/4] and supported in [-8/5, 8/5]; the
/// transition is the standard exp(-1/x) smooth step.
namespace cutoff {

inline constexpr double kPlateau = 5.0 / 4.0;
inline constexpr double kSupport = 8.0 / 5.0;

double eta0(double xi);
/// eta(xi) = eta0(xi) - eta0(2 xi).
double eta(double xi);
/// eta_j(xi) = eta(2^{-j} xi).
double eta_j(int j, double xi);
/// eta_{<=J} = eta0(2^{-J} xi).
double eta_leq(int j, double xi);
/// Modulation bin weight: eta0 for j = 0 and eta_j for j >= 1.
double bin(int j, double xi);

}  // namespace cutoff

}  // namespace nlslab
