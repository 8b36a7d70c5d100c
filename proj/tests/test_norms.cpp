#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlslab/errors.hpp"
#include "nlslab/norms.hpp"
#include "oracles/oscillatory.hpp"
#include "test_support.hpp"

using namespace nlslab;
using testing_support::random_field;

namespace {

constexpr double kPi = std::numbers::pi;

/// Spectrum on one mode, F(sigma_m) = f(sigma_m) for sigma in [-R, R).
template <typename F>
SpaceTimeSpectrum tabulated(int mode, double dsigma, double R, F&& f) {
  const auto length = 2 * static_cast<std::size_t>(std::llround(R / dsigma));
  std::vector<complex> row(length);
  for (std::size_t m = 0; m < length; ++m) {
    row[m] = f((static_cast<double>(m) - static_cast<double>(length / 2)) * dsigma);
  }
  return SpaceTimeSpectrum({mode}, dsigma, {std::move(row)}, 2);
}

}  // namespace

TEST(Window, ShapesAndSupport) {
  const auto e = Window::eta0(2.0, 1.0);
  EXPECT_DOUBLE_EQ(e.half_width, 0.8);
  EXPECT_DOUBLE_EQ(e(1.0), 1.0);
  EXPECT_EQ(e(1.81), 0.0);
  const auto b = Window::bump(0.0, 2.0);
  EXPECT_DOUBLE_EQ(b(0.0), 1.0);
  EXPECT_EQ(b(2.0), 0.0);
  const auto r = Window::rect(-1.0, 3.0);
  EXPECT_DOUBLE_EQ(r.center, 1.0);
  EXPECT_EQ(r(3.0), 1.0);
  EXPECT_EQ(r(3.01), 0.0);
  EXPECT_THROW(Window::rect(1.0, 1.0), ParameterError);
}

TEST(SpacetimeTransform, FreeModeIsWindowTransformTimesAmplitude) {
  TorusGrid g(8);
  SpectralField phi(g);
  const complex A(0.7, -0.4);
  phi.set(3, A);
  const auto traj = free_trajectory(phi, 2.0, 1e-3);
  const auto w = Window::bump(1.0, 0.8);
  const auto sp = spacetime_transform(traj, w);
  std::size_t row = 0;
  while (sp.modes()[row] != 3) ++row;
  double worst = 0.0;
  for (std::size_t m = 0; m < sp.length(); m += 97) {
    const double sigma = sp.sigma(m);
    if (std::abs(sigma) > 40.0) continue;
    const complex expect =
        A * oracle::fourier_integral([&](double t) { return w(t); }, -sigma, w.lo(), w.hi()) /
        std::sqrt(2.0 * kPi);
    worst = std::max(worst, std::abs(sp.at(row, m) - expect));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(SpacetimeTransform, PlancherelIsExact) {
  TorusGrid g(16);
  const auto traj = solve(random_field(g, 11u), EquationSpec::wick(), 1.0, 1e-3);
  const auto w = Window::bump(0.5, 0.45);
  const auto sp = spacetime_transform(traj, w);
  const auto frame = interaction_frame(traj);
  double direct = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double wt = w(traj.times()[i]);
    direct += wt * wt * mass(frame.state(i)) * traj.dt();
  }
  EXPECT_NEAR(sp.energy(), direct, 1e-10 * direct);
}

TEST(SpacetimeTransform, BlockRestrictionKeepsOnlyBlockModes) {
  TorusGrid g(32);
  const auto traj = free_trajectory(random_field(g, 3u), 1.0, 1e-4);
  const auto sp = spacetime_transform(traj, Window::bump(0.5, 0.5), 3);
  for (int n : sp.modes()) EXPECT_TRUE(in_dyadic_block(n, 3)) << n;
  EXPECT_EQ(sp.modes().size(), 8u);
  const auto all = spacetime_transform(traj, Window::bump(0.5, 0.5));
  EXPECT_NEAR(all.restrict_block(3).energy(), sp.energy(), 1e-12);
}

TEST(SpacetimeTransform, ResolutionGuard) {
  TorusGrid g(32);
  const auto traj = free_trajectory(random_field(g, 5u), 1.0, 1e-2);
  const auto w = Window::bump(0.5, 0.5);
  try {
    spacetime_transform(traj, w);
    FAIL() << "expected ResolutionError";
  } catch (const ResolutionError& e) {
    EXPECT_DOUBLE_EQ(e.required_dt(), max_transform_dt(15, 2, w));
  }
  // Low blocks alone are resolved at the same dt.
  EXPECT_NO_THROW(spacetime_transform(traj, w, 1));
  // A window holding fewer than eight samples underflows.
  EXPECT_THROW(spacetime_transform(traj, Window::bump(0.5, 0.02), 0), ResolutionError);
  EXPECT_THROW(spacetime_transform(traj, Window::bump(0.9, 0.5), 0), ParameterError);
  EXPECT_NO_THROW(spacetime_transform(traj, Window::bump(0.9, 0.5), 0, Extension::Free));
}

TEST(SpacetimeTransform, FreeExtensionMatchesLongerTrajectory) {
  TorusGrid g(8);
  const auto phi = random_field(g, 8u);
  const auto short_traj = free_trajectory(phi, 1.0, 1e-3);
  const auto long_traj = free_trajectory(phi, 2.0, 1e-3);
  const auto w = Window::bump(1.0, 0.6);
  const auto a = spacetime_transform(short_traj, w, -1, Extension::Free);
  const auto b = spacetime_transform(long_traj, w);
  ASSERT_EQ(a.length(), b.length());
  double worst = 0.0;
  for (std::size_t r = 0; r < a.modes().size(); ++r) {
    for (std::size_t m = 0; m < a.length(); ++m) worst = std::max(worst, std::abs(a.at(r, m) - b.at(r, m)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(XsbNorm, GaussianClosedForm) {
  const auto sp = tabulated(2, 1e-3, 20.0, [](double s) { return std::exp(-0.5 * s * s); });
  // int (1 + s^2) e^{-s^2} ds = 3 sqrt(pi) / 2
  const double expect = std::sqrt(std::pow(5.0, 0.3) * 1.5 * std::sqrt(kPi));
  EXPECT_NEAR(xsb_norm(sp, 0.3, 1.0), expect, 1e-8);
  EXPECT_NEAR(xsb_norm(sp, 0.0, 0.0), std::sqrt(std::sqrt(kPi)), 1e-8);
}

TEST(XkNorm, TwoPlateausGiveWeightedSum) {
  const double ds = 1e-3;
  // Unit masses on the plateaus of bins 3 and 5, where the bin weight is 1.
  auto plateau = [&](double lo, double hi) {
    const double count = std::floor((hi - lo) / ds - 1.0);
    return std::make_pair(lo + ds, 1.0 / std::sqrt(count * ds));
  };
  const auto [a0, av] = plateau(6.4, 10.0);
  const auto [b0, bv] = plateau(25.6, 40.0);
  const auto sp = tabulated(1, ds, 64.0, [&](double s) {
    if (s >= a0 - 1e-9 && s < 10.0 - ds) return complex(av);
    if (s >= b0 - 1e-9 && s < 40.0 - ds) return complex(bv);
    return complex{};
  });
  const auto x = xk_norm(sp, 1, 0.5);
  EXPECT_NEAR(x.value, std::pow(2.0, 1.5) + std::pow(2.0, 2.5), 1e-2);
  EXPECT_EQ(x.j_max, 5);
  EXPECT_EQ(x.tail, 0.0);
  // Modes outside the block do not count.
  EXPECT_EQ(xk_norm(sp, 2, 0.5).value, 0.0);
}

TEST(XkNorm, DominatesEveryBinAndReducesOnOneBin) {
  const auto sp = tabulated(0, 1e-3, 50.0, [](double s) { return std::exp(-0.1 * s * s); });
  const auto x = xk_norm(sp, 0, 0.5);
  for (int j = 0; j <= x.j_max; ++j) {
    const auto bj = sp.weighted([j](double s) { return cutoff::bin(j, s); });
    EXPECT_GE(x.value, std::exp2(0.5 * j) * std::sqrt(bj.energy()) - 1e-14);
  }
  const auto low = tabulated(0, 1e-3, 50.0, [](double s) { return std::abs(s) < 1.0 ? 1.0 : 0.0; });
  EXPECT_NEAR(xk_norm(low, 0, 0.5).value, std::sqrt(low.energy()), 1e-14);
}

TEST(Xk1Inequality, RandomSpectraRespectConstant) {
  double worst = 0.0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    TorusGrid g(16);
    const auto traj = solve(random_field(g, seed, 1.0, 0.5 + 0.1 * seed), EquationSpec::cubic(),
                            0.5, 1e-3);
    for (int k = 0; k <= 4; ++k) {
      const auto sp = spacetime_transform(traj, Window::eta0(std::exp2(seed % 3), 0.25), k,
                                          Extension::Free);
      worst = std::max(worst, xk1_ratio(sp, k));
    }
  }
  EXPECT_GT(worst, 0.5);
  EXPECT_LE(worst, kXk1Constant + 1e-6);
}

TEST(Xk1Inequality, PlateauNearlySaturates) {
  double best = 0.0;
  for (double thr = 0.05; thr < 1.0; thr += 0.05) best = std::max(best, xk1_plateau_ratio(thr));
  EXPECT_GE(best, 0.9 * kXk1Constant);
  EXPECT_LE(best, kXk1Constant);
  EXPECT_GE(xk1_plateau_ratio(0.9), 0.9 * kXk1Constant);
}

TEST(ModulationEnergy, FreeSolutionsConcentrateAtLowModulation) {
  TorusGrid g(16);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto traj = free_trajectory(random_field(g, seed), 8.0, 2e-3);
    const auto sp = spacetime_transform(traj, Window::bump(4.0, 4.0));
    ASSERT_LT(sp.window().bandwidth(), 1.0);
    EXPECT_GE(modulation_energy_fraction(sp, 2), 0.99);
  }
}

TEST(EnergyNorm, SingleModeAndTimeIndependenceForFreeFlow) {
  TorusGrid g(32);
  SpectralField phi(g);
  const complex A(0.3, 0.4);
  phi.set(5, A);
  const double s = -0.25;
  EXPECT_NEAR(energy_norm(free_trajectory(phi, 1.0, 1e-2), s), std::exp2(3 * s) * std::abs(A), 1e-15);
  const auto u0 = random_field(g, 21u);
  const double e1 = energy_norm(free_trajectory(u0, 0.5, 1e-2), s);
  const double e2 = energy_norm(free_trajectory(u0, 2.0, 1e-2), s);
  EXPECT_NEAR(e1, e2, 1e-14);
}

TEST(EnergyNorm, UsesInstantNearestZeroForBlockZero) {
  TorusGrid g(8);
  SpectralField u0(g);
  u0.set(0, 1.0);
  auto traj = solve_symmetric(u0 + random_field(g, 2u, 1.0, 0.1), EquationSpec::wick(), 0.2, 1e-3);
  std::size_t origin = 0;
  while (traj.times()[origin] != 0.0) ++origin;
  const double e = energy_norm(traj, 0.0);
  EXPECT_GE(e, std::abs(traj.state(origin)[0]));
}

TEST(LpNorm, L4ExactValue) {
  TorusGrid g(4);
  SpectralField phi(g);
  phi.set(0, 1.0);
  phi.set(1, 1.0);
  const double T = 2.0 * kPi;
  const auto traj = free_trajectory(phi, T, T / 2000.0);
  // Normalized dx/(2 pi): multiply by 2 pi to get the Lebesgue integral.
  EXPECT_NEAR(std::pow(lp_norm(traj, 4), 4) * 2.0 * kPi, 6.0 * (2.0 * kPi) * (2.0 * kPi), 1e-8);
  EXPECT_THROW(lp_norm(traj, 3), ParameterError);
}

TEST(LpNorm, L4MatchesPhysicalQuadrature) {
  TorusGrid g(8);
  const auto traj = solve(random_field(g, 9u), EquationSpec::wick(), 0.2, 1e-3);
  // Brute force in x on a much finer grid than needed.
  std::vector<double> slice;
  for (const auto& u : traj.states()) {
    const auto x = to_physical(u, 257);
    double acc = 0.0;
    for (const auto& v : x) acc += std::pow(std::norm(v), 2);
    slice.push_back(acc / 257.0);
  }
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < slice.size(); ++i) integral += 0.5 * (slice[i] + slice[i + 1]) * traj.dt();
  EXPECT_NEAR(std::pow(lp_norm(traj, 4), 4), integral, 1e-6 * integral);
}

TEST(Strichartz, L6SingleModeRatioIsTimeRoot) {
  TorusGrid g(8);
  SpectralField phi(g);
  phi.set(2, complex(0.0, 1.5));
  std::vector<Trajectory> samples{free_trajectory(phi, 0.5, 1e-3), free_trajectory(phi, 1.0, 1e-3)};
  samples.push_back(free_trajectory(SpectralField(g), 1.0, 1e-3));
  const auto st = strichartz_probe(samples, 6);
  ASSERT_EQ(st.ratios.size(), 2u);
  EXPECT_EQ(st.skipped, 1u);
  EXPECT_NEAR(st.ratios[0], std::pow(0.5, 1.0 / 6.0), 1e-12);
  EXPECT_NEAR(st.ratios[1], 1.0, 1e-12);
  EXPECT_EQ(st.band_lengths[0], 1);
  EXPECT_DOUBLE_EQ(st.max, 1.0);
  EXPECT_THROW(strichartz_probe(samples, 5), ParameterError);
}

TEST(Strichartz, L4RatioIsFiniteAndReportsBands) {
  TorusGrid g(8);
  std::vector<Trajectory> samples;
  for (unsigned seed = 0; seed < 4; ++seed) samples.push_back(free_trajectory(random_field(g, seed), 1.0, 1e-3));
  const auto st = strichartz_probe(samples, 4);
  ASSERT_EQ(st.ratios.size(), 4u);
  for (double r : st.ratios) {
    EXPECT_GT(r, 0.0);
    EXPECT_TRUE(std::isfinite(r));
  }
  EXPECT_EQ(st.band_lengths[0], 7);
  EXPECT_LE(st.median, st.q90);
  EXPECT_LE(st.q90, st.max);
}

TEST(ShortTimeNorms, RefiningCentresChangesLittle) {
  TorusGrid g(16);
  const auto traj = solve(random_field(g, 13u, 2.0, 0.5), EquationSpec::wick(), 1.0, 1e-3);
  NormSpec spec;
  const auto a = short_time_norms(traj, spec, 1);
  const auto b = short_time_norms(traj, spec, 2);
  ASSERT_EQ(a.fk.size(), 4u);
  EXPECT_NEAR(a.f_s_alpha, b.f_s_alpha, 0.01 * b.f_s_alpha);
  EXPECT_NEAR(a.n_s_alpha, b.n_s_alpha, 0.01 * b.n_s_alpha);
  EXPECT_LE(a.f_s_alpha, b.f_s_alpha * (1.0 + 1e-12));
  EXPECT_GT(a.n_s_alpha, 0.0);
  EXPECT_DOUBLE_EQ(a.e_s, energy_norm(traj, spec.s));
}

TEST(ShortTimeNorms, ZeroDataGivesZeroNorms) {
  TorusGrid g(8);
  const auto st = short_time_norms(free_trajectory(SpectralField(g), 1.0, 1e-3), NormSpec{});
  EXPECT_EQ(st.f_s_alpha, 0.0);
  EXPECT_EQ(st.n_s_alpha, 0.0);
  EXPECT_EQ(st.e_s, 0.0);
}

TEST(NormSpec, WarnsForLargeAlpha) {
  EXPECT_TRUE(NormSpec{}.warnings().empty());
  NormSpec wide;
  wide.alpha = 1.5;
  EXPECT_EQ(wide.warnings().size(), 1u);
}

TEST(EmbeddingProbe, RatiosStayBelowConstant) {
  TorusGrid g(16);
  std::vector<Trajectory> corpus;
  for (unsigned seed = 0; seed < 3; ++seed) {
    corpus.push_back(solve(random_field(g, seed, 1.5, 0.7), EquationSpec::wick(), 0.5, 1e-3));
  }
  for (const auto& row : embedding_probe(corpus, NormSpec{})) {
    EXPECT_LE(row.xk1_ratio, kXk1Constant + 1e-6);
    EXPECT_GT(row.hs_over_f, 0.0);
  }
}
