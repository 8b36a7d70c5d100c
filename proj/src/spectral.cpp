#include "nlslab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlslab/errors.hpp"
#include "nlslab/fft.hpp"

namespace nlslab {

TorusGrid::TorusGrid(int n_modes) : TorusGrid(n_modes, 2 * n_modes) {}

TorusGrid::TorusGrid(int n_modes, int n_phys) : n_modes_(n_modes), n_phys_(n_phys) {
  if (n_modes < 2 || n_modes % 2 != 0) {
    throw ParameterError("TorusGrid: n_modes must be a positive even integer, got " +
                         std::to_string(n_modes));
  }
  if (n_phys < min_phys(n_modes)) {
    throw ParameterError("TorusGrid: n_phys = " + std::to_string(n_phys) +
                         " aliases cubic products; need at least " +
                         std::to_string(min_phys(n_modes)));
  }
}

double TorusGrid::point(int j) const { return 2.0 * std::numbers::pi * j / n_phys_; }

SpectralField::SpectralField(const TorusGrid& grid)
    : grid_(grid), coeffs_(static_cast<std::size_t>(grid.n_modes())) {}

SpectralField::SpectralField(const TorusGrid& grid, std::vector<complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(grid.n_modes())) {
    throw DimensionError("SpectralField: expected " + std::to_string(grid.n_modes()) +
                         " coefficients, got " + std::to_string(coeffs_.size()));
  }
  coeffs_[0] = 0.0;
}

void SpectralField::set(int n, complex value) {
  if (n == grid_.min_slot()) return;
  coeffs_.at(grid_.slot(n)) = value;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw DimensionError("SpectralField: grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw DimensionError("SpectralField: grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(complex factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

namespace {

std::size_t wrap(int n, int len) { return static_cast<std::size_t>(((n % len) + len) % len); }

SpectralField truncate(const TorusGrid& grid, const std::vector<complex>& dft, int len) {
  SpectralField out(grid);
  const double scale = 1.0 / len;
  const int K = grid.max_mode();
  for (int n = -K; n <= K; ++n) out.set(n, dft[wrap(n, len)] * scale);
  return out;
}

}  // namespace

SpectralField to_spectral(const TorusGrid& grid, std::span<const complex> samples) {
  const int len = grid.n_phys();
  if (samples.size() != static_cast<std::size_t>(len)) {
    throw DimensionError("to_spectral: expected " + std::to_string(len) + " samples, got " +
                         std::to_string(samples.size()));
  }
  std::vector<complex> dft(samples.size());
  fft::forward(samples, dft);
  return truncate(grid, dft, len);
}

std::vector<complex> to_physical(const SpectralField& field, int n_points) {
  const int K = field.grid().max_mode();
  if (n_points < 2 * K + 1) {
    throw DimensionError("to_physical: " + std::to_string(n_points) +
                         " points cannot resolve the band");
  }
  std::vector<complex> spec(static_cast<std::size_t>(n_points));
  for (int n = -K; n <= K; ++n) spec[wrap(n, n_points)] = field[n];
  std::vector<complex> samples(spec.size());
  fft::backward(spec, samples);
  return samples;
}

std::vector<complex> to_physical(const SpectralField& field) {
  return to_physical(field, field.grid().n_phys());
}

SpectralField cubic_product(const SpectralField& field) {
  const TorusGrid& grid = field.grid();
  auto u = to_physical(field);
  for (auto& v : u) v *= std::norm(v);
  return to_spectral(grid, u);
}

bool in_dyadic_block(int n, int k) {
  const long long a = std::llabs(n);
  if (k == 0) return a == 0;
  return a >= (1LL << (k - 1)) && a < (1LL << k);
}

int dyadic_index(int n) {
  unsigned a = static_cast<unsigned>(std::abs(n));
  int k = 0;
  while (a != 0) {
    a >>= 1;
    ++k;
  }
  return k;
}

SpectralField project_dyadic(const SpectralField& field, int k, DyadicMode mode) {
  if (k < 0) throw ParameterError("project_dyadic: k must be nonnegative");
  SpectralField out(field.grid());
  const int K = field.grid().max_mode();
  for (int n = -K; n <= K; ++n) {
    const int kn = dyadic_index(n);
    const bool keep = mode == DyadicMode::Exact    ? kn == k
                      : mode == DyadicMode::AtMost ? kn <= k
                                                   : kn >= k;
    if (keep) out.set(n, field[n]);
  }
  return out;
}

SpectralField project_low(const SpectralField& field, int cutoff) {
  SpectralField out(field.grid());
  const int K = field.grid().max_mode();
  for (int n = -K; n <= K; ++n) {
    if (std::abs(n) <= cutoff) out.set(n, field[n]);
  }
  return out;
}

double dispersion(int n, int dispersion_exponent) {
  const double m = static_cast<double>(n) * n;
  return dispersion_exponent == 2 ? m : m * m;
}

SpectralField free_evolve(const SpectralField& field, double t, int dispersion_exponent) {
  if (dispersion_exponent != 2 && dispersion_exponent != 4) {
    throw ParameterError("free_evolve: dispersion exponent must be 2 or 4, got " +
                         std::to_string(dispersion_exponent));
  }
  SpectralField out(field.grid());
  const int K = field.grid().max_mode();
  for (int n = -K; n <= K; ++n) {
    out.set(n, field[n] * std::polar(1.0, dispersion(n, dispersion_exponent) * t));
  }
  return out;
}

double sobolev_norm(const SpectralField& field, double s) {
  double acc = 0.0;
  const int K = field.grid().max_mode();
  for (int n = -K; n <= K; ++n) acc += std::pow(1.0 + double(n) * n, s) * std::norm(field[n]);
  return std::sqrt(acc);
}

double mass(const SpectralField& field) {
  double acc = 0.0;
  for (const auto& c : field.coeffs()) acc += std::norm(c);
  return acc;
}

namespace cutoff {
namespace {

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

double eta0(double xi) {
  return 1.0 - smooth_step((std::abs(xi) - kPlateau) / (kSupport - kPlateau));
}

double eta(double xi) { return eta0(xi) - eta0(2.0 * xi); }

double eta_j(int j, double xi) { return eta(std::ldexp(xi, -j)); }

double eta_leq(int j, double xi) { return eta0(std::ldexp(xi, -j)); }

double bin(int j, double xi) { return j == 0 ? eta0(xi) : eta_j(j, xi); }

}  // namespace cutoff

}  // namespace nlslab
