#include <gtest/gtest.h>

#include <cmath>

#include "nlslab/errors.hpp"
#include "nlslab/gauge.hpp"
#include "oracles/oscillatory.hpp"
#include "test_support.hpp"

using namespace nlslab;
using testing_support::max_abs_diff;
using testing_support::random_field;

TEST(GaugeTransform, IdentityInverseAndNorms) {
  TorusGrid g(32);
  auto traj = solve(random_field(g, 4u), EquationSpec::cubic(), 0.1, 1e-3);
  auto same = gauge_transform(traj, 0.0, Sign::Defocusing);
  for (std::size_t i = 0; i < traj.size(); ++i) EXPECT_EQ(max_abs_diff(same.state(i), traj.state(i)), 0.0);

  auto there = gauge_transform(traj, 2.0, Sign::Defocusing);
  EXPECT_EQ(there.spec().model, Model::WickNLS);
  auto back = gauge_transform(there, -2.0, Sign::Defocusing);
  EXPECT_EQ(back.spec().model, Model::CubicNLS);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_LT(max_abs_diff(back.state(i), traj.state(i)), 1e-14);
    for (double s : {-0.5, 0.0, 1.0}) {
      EXPECT_NEAR(sobolev_norm(there.state(i), s), sobolev_norm(traj.state(i), s), 1e-14);
    }
  }
  EXPECT_EQ(gauge_transform(traj, 0.5, Sign::Focusing).spec().model, Model::GammaNLS);
}

TEST(GaugeTransform, SingleModeCubicBecomesWickClosedForm) {
  TorusGrid g(16);
  const complex A(0.9, -0.2);
  SpectralField u0(g);
  u0.set(2, A);
  auto gauged = gauge_transform(solve(u0, EquationSpec::cubic(), 1.0, 1e-3), 2.0, Sign::Defocusing);
  double err = 0.0;
  for (std::size_t i = 0; i < gauged.size(); ++i) {
    const double t = gauged.times()[i];
    err = std::max(err, std::abs(gauged.state(i)[2] - A * std::polar(1.0, (4.0 - std::norm(A)) * t)));
  }
  EXPECT_LT(err, 1e-9);
}

TEST(GaugeEquivalence, Residuals) {
  TorusGrid g(16);
  EXPECT_EQ(gauge_equivalence_residual(SpectralField(g), 0.1, 1e-2), 0.0);
  SpectralField one(g);
  one.set(1, 1.0);
  EXPECT_LT(gauge_equivalence_residual(one, 1.0, 1e-3), 1e-9);
  EXPECT_LT(gauge_equivalence_residual(one, 1.0, 1e-3, Sign::Focusing), 1e-9);
}

TEST(GaugeEquivalence, RandomDataFourthOrder) {
  TorusGrid g(128);
  const auto u0 = random_field(g, 128u, 2.0);
  const double r1 = gauge_equivalence_residual(u0, 1.0, 1e-3);
  EXPECT_LT(r1, 1e-6);
  const auto big = random_field(TorusGrid(32), 5u, 2.0, 3.0);
  const double c1 = gauge_equivalence_residual(big, 1.0, 4e-3);
  const double c2 = gauge_equivalence_residual(big, 1.0, 2e-3);
  EXPECT_GE(c1 / c2, 12.0);
  EXPECT_LE(c1 / c2, 20.0);
}

TEST(TailFlux, GrowsLogarithmically) {
  EXPECT_NEAR(tail_flux(-0.5, 0), 1.0, 1e-15);
  EXPECT_NEAR(tail_flux(-0.5, 1), 1.0 + std::sqrt(2.0), 1e-15);
  double prev = 0.0, prev_gap = 1e9;
  for (int n = 8; n <= 1 << 14; n *= 2) {
    const double M = tail_flux(-0.5, n);
    EXPECT_GT(M, prev);
    const double gap = std::abs(M - 2.0 * std::log(double(n)));
    EXPECT_LT(gap, prev_gap + 1e-12);  // M_n - 2 ln n settles to a constant
    prev = M;
    prev_gap = gap;
  }
  EXPECT_GT(tail_flux(-0.5, 128) - tail_flux(-0.5, 8), 1.5);
  auto d = tail_data(-0.5, 8);
  EXPECT_EQ(d.grid().n_modes(), 18);
  EXPECT_NEAR(mass(d), tail_flux(-0.5, 8), 1e-13);
}

TEST(FrozenPairing, MatchesOscillatoryQuadrature) {
  TorusGrid g(8);
  auto u = random_field(g, 17u);
  const auto phi = SpaceTimeTestFunction::standard(1.0);
  const complex base = phi.spatial_pairing(u);
  std::vector<double> values;
  for (double M : {2.0, 5.0, 11.0, 23.0}) {
    const auto exact = std::abs(base) * std::abs(oracle::fourier_integral(phi.profile, 2.0 * M, 0.0, 1.0));
    const double got = frozen_pairing(u, phi, M, 1.0, 20000);
    EXPECT_NEAR(got, exact, 1e-10 * std::max(1.0, exact));
    values.push_back(got);
  }
  // Bump transforms decay, though not monotonically.
  EXPECT_LT(values.back(), 0.1 * values.front());
  EXPECT_THROW(frozen_pairing(u, phi, 1.0, 1.0, 7), ParameterError);
}

TEST(Oscillation, SmallRunProperties) {
  OscillationOptions opt;
  opt.cutoffs = {2, 4, 8};
  opt.dt = 1e-4;
  const auto res = oscillation_experiment(opt);
  ASSERT_EQ(res.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(res.rows[i].flux, tail_flux(-0.5, opt.cutoffs[i]), 1e-12);
    EXPECT_LT(std::abs(res.rows[i].mass_drift), 1e-8);
    if (i > 0) EXPECT_GT(res.rows[i].flux, res.rows[i - 1].flux);
  }
  EXPECT_TRUE(res.warnings.empty());

  auto rotated = opt;
  rotated.phase = 1.234;
  const auto r2 = oscillation_experiment(rotated);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(r2.rows[i].pairing_abs, res.rows[i].pairing_abs, 1e-10);
    EXPECT_NEAR(r2.rows[i].pairing_wick_abs, res.rows[i].pairing_wick_abs, 1e-10);
  }

  auto zero = opt;
  zero.test_function = SpaceTimeTestFunction::zero();
  for (const auto& row : oscillation_experiment(zero).rows) {
    EXPECT_EQ(row.pairing_abs, 0.0);
    EXPECT_EQ(row.pairing_wick_abs, 0.0);
  }
}

TEST(Oscillation, Validation) {
  OscillationOptions opt;
  opt.cutoffs = {8, 4};
  EXPECT_THROW(oscillation_experiment(opt), ParameterError);
  opt.cutoffs = {4, 8};
  opt.tail_exponent = -0.8;
  EXPECT_THROW(oscillation_experiment(opt), ParameterError);
  opt.tail_exponent = -0.5;
  opt.dt = 0.1;
  EXPECT_THROW(oscillation_experiment(opt), ResolutionError);
}
