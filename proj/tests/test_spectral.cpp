#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlslab/errors.hpp"
#include "nlslab/spectral.hpp"
#include "oracles/direct_sums.hpp"
#include "test_support.hpp"

using namespace nlslab;
using testing_support::max_abs_diff;
using testing_support::random_field;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(TorusGrid, RejectsOddOrAliasingSizes) {
  EXPECT_THROW(TorusGrid(7), ParameterError);
  EXPECT_THROW(TorusGrid(0), ParameterError);
  EXPECT_THROW(TorusGrid(16, 24), ParameterError);  // 3N/2 aliases a cubic
  EXPECT_NO_THROW(TorusGrid(16, 29));
  EXPECT_EQ(TorusGrid(16).n_phys(), 32);
  EXPECT_EQ(TorusGrid(16).max_mode(), 7);
}

TEST(Transforms, ConstantAndPureMode) {
  TorusGrid grid(16);
  std::vector<complex> c(grid.n_phys(), complex(2.5, -1.0));
  auto f = to_spectral(grid, c);
  EXPECT_NEAR(std::abs(f[0] - complex(2.5, -1.0)), 0.0, 1e-14);
  for (int n = 1; n <= grid.max_mode(); ++n) EXPECT_NEAR(std::abs(f[n]), 0.0, 1e-14);

  std::vector<complex> e(grid.n_phys());
  for (int j = 0; j < grid.n_phys(); ++j) e[j] = std::polar(1.0, grid.point(j));
  auto g = to_spectral(grid, e);
  EXPECT_NEAR(std::abs(g[1] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(g[0]), 0.0, 1e-14);
}

TEST(Transforms, SizeMismatchThrows) {
  TorusGrid grid(16);
  std::vector<complex> bad(5);
  EXPECT_THROW(to_spectral(grid, bad), DimensionError);
}

TEST(Transforms, RoundTripAndParseval) {
  for (int N : {32, 64, 128, 256, 512, 1024}) {
    TorusGrid grid(N);
    auto f = random_field(grid, 11u + N, 0.5);
    auto samples = to_physical(f);
    double l2 = 0.0;
    for (auto v : samples) l2 += std::norm(v);
    l2 /= grid.n_phys();
    EXPECT_NEAR(l2, mass(f), 1e-12 * mass(f)) << N;
    auto back = to_spectral(grid, samples);
    EXPECT_LT(max_abs_diff(back, f), 1e-12) << N;
    auto again = to_physical(back);
    double err = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
      err = std::max(err, std::abs(again[j] - samples[j]));
      ref = std::max(ref, std::abs(samples[j]));
    }
    EXPECT_LT(err, 1e-12 * ref) << N;
  }
}

TEST(Transforms, ForwardMatchesNaiveDft) {
  TorusGrid grid(8);
  std::vector<complex> samples(grid.n_phys());
  for (int j = 0; j < grid.n_phys(); ++j) {
    samples[j] = complex(std::sin(3.0 * j), std::cos(1.0 + j * j));
  }
  auto f = to_spectral(grid, samples);
  for (int n = -3; n <= 3; ++n) {
    EXPECT_LT(std::abs(f[n] - oracle::dft_coefficient(samples, n)), 1e-14);
  }
}

TEST(SpectralField, MinusNyquistSlotStaysZero) {
  TorusGrid grid(8);
  SpectralField f(grid);
  f.set(-4, 1.0);
  EXPECT_EQ(f[-4], complex(0.0));
  SpectralField g(grid, std::vector<complex>(8, complex(1.0)));
  EXPECT_EQ(g[-4], complex(0.0));
}

TEST(CubicProduct, MatchesTripleConvolution) {
  for (int N : {8, 16, 32}) {
    TorusGrid grid(N);
    auto f = random_field(grid, 3u * N, 0.0);
    oracle::Modes m;
    for (int n = -grid.max_mode(); n <= grid.max_mode(); ++n) m[n] = f[n];
    auto ref = oracle::triple_convolution(m, grid.max_mode(), false);
    auto got = cubic_product(f);
    for (int n = -grid.max_mode(); n <= grid.max_mode(); ++n) {
      EXPECT_LT(std::abs(got[n] - oracle::at(ref, n)), 1e-12) << N << " " << n;
    }
  }
}

TEST(Dyadic, BlocksAndPartition) {
  TorusGrid grid(32);
  SpectralField f(grid);
  f.set(3, 1.0);
  EXPECT_LT(max_abs_diff(project_dyadic(f, 2), f), 1e-15);
  EXPECT_EQ(mass(project_dyadic(f, 1)), 0.0);

  auto g = random_field(grid, 5u);
  SpectralField sum(grid);
  for (int k = 0; k <= 5; ++k) {
    auto pk = project_dyadic(g, k);
    sum += pk;
    for (int l = 0; l < k; ++l) {
      auto pl = project_dyadic(g, l);
      complex ip = 0.0;
      for (int n = -15; n <= 15; ++n) ip += pk[n] * std::conj(pl[n]);
      EXPECT_EQ(ip, complex(0.0));
    }
  }
  EXPECT_LT(max_abs_diff(sum, g), 1e-15);
  EXPECT_LT(max_abs_diff(project_dyadic(g, 3, DyadicMode::AtMost) +
                             project_dyadic(g, 4, DyadicMode::AtLeast),
                         g),
            1e-15);
  EXPECT_THROW(project_dyadic(g, -1), ParameterError);
}

TEST(FreeEvolve, PhaseGroupAndIsometry) {
  TorusGrid grid(16);
  SpectralField f(grid);
  f.set(1, 1.0);
  auto g = free_evolve(f, kPi, 2);
  EXPECT_NEAR(std::abs(g[1] - complex(-1.0)), 0.0, 1e-15);
  EXPECT_LT(max_abs_diff(free_evolve(f, 0.0, 2), f), 1e-16);
  EXPECT_THROW(free_evolve(f, 1.0, 3), ParameterError);

  auto r = random_field(grid, 9u);
  for (int p : {2, 4}) {
    auto a = free_evolve(free_evolve(r, 0.3, p), 0.45, p);
    auto b = free_evolve(r, 0.75, p);
    EXPECT_LT(max_abs_diff(a, b), 1e-12);
    EXPECT_NEAR(sobolev_norm(free_evolve(r, 1.7, p), -0.3), sobolev_norm(r, -0.3), 1e-14);
  }
}

TEST(SobolevNorm, Values) {
  TorusGrid grid(8);
  SpectralField f(grid);
  f.set(0, 1.0);
  EXPECT_DOUBLE_EQ(sobolev_norm(f, -3.0), 1.0);
  SpectralField g(grid);
  g.set(1, 1.0);
  EXPECT_NEAR(sobolev_norm(g, 1.0), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(sobolev_norm(SpectralField(grid), 0.5), 0.0);

  auto r = random_field(TorusGrid(64), 2u);
  double prev = 0.0;
  for (double s = -1.0; s <= 1.0; s += 0.25) {
    const double v = sobolev_norm(r, s);
    EXPECT_GE(v, prev);
    EXPECT_GE(v, std::abs(r[0]));
    prev = v;
  }
}

TEST(Cutoffs, SupportPlateauAndTelescoping) {
  EXPECT_EQ(cutoff::eta0(0.0), 1.0);
  EXPECT_EQ(cutoff::eta0(1.25), 1.0);
  EXPECT_EQ(cutoff::eta0(-1.25), 1.0);
  EXPECT_EQ(cutoff::eta0(1.6), 0.0);
  EXPECT_GT(cutoff::eta0(1.4), 0.0);
  EXPECT_LT(cutoff::eta0(1.4), 1.0);
  for (int j = 1; j <= 6; ++j) {
    const double lo = 0.625 * std::ldexp(1.0, j), hi = 1.6 * std::ldexp(1.0, j);
    for (double xi = -3 * hi; xi <= 3 * hi; xi += hi / 97.0) {
      if (std::abs(xi) < lo || std::abs(xi) > hi) EXPECT_EQ(cutoff::eta_j(j, xi), 0.0);
    }
  }
  for (int J = 1; J <= 6; ++J) {
    for (double xi = -200.0; xi <= 200.0; xi += 0.173) {
      double sum = 0.0;
      for (int j = 1; j <= J; ++j) sum += cutoff::eta_j(j, xi);
      EXPECT_NEAR(sum, cutoff::eta_leq(J, xi) - cutoff::eta0(xi), 1e-14);
      EXPECT_NEAR(sum + cutoff::bin(0, xi), cutoff::eta_leq(J, xi), 1e-14);
    }
  }
}
