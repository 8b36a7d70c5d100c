#pragma once

#include <cmath>
#include <random>

#include "nlslab/spectral.hpp"

namespace testing_support {

/// Random band-limited field with coefficients ~ CN(0,1) <n>^{-decay}, scaled to `norm`.
inline nlslab::SpectralField random_field(const nlslab::TorusGrid& grid, unsigned seed,
                                          double decay = 1.0, double norm = 1.0,
                                          int band = -1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  nlslab::SpectralField f(grid);
  const int K = band < 0 ? grid.max_mode() : band;
  for (int n = -K; n <= K; ++n) {
    const double w = std::pow(1.0 + double(n) * n, -0.5 * decay);
    f.set(n, nlslab::complex(g(rng), g(rng)) * w);
  }
  const double m = std::sqrt(nlslab::mass(f));
  if (m > 0) f *= nlslab::complex(norm / m);
  return f;
}

inline double max_abs_diff(const nlslab::SpectralField& a, const nlslab::SpectralField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    e = std::max(e, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  }
  return e;
}

}  // namespace testing_support
