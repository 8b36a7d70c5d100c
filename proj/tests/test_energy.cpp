#include <gtest/gtest.h>

#include <cmath>

#include "nlslab/energy.hpp"
#include "nlslab/errors.hpp"
#include "oracles/energy_oracle.hpp"
#include "test_support.hpp"

using namespace nlslab;
using testing_support::random_field;

namespace {

oracle::Coeff coeffs_of(const SpectralField& f) {
  const int K = f.grid().max_mode();
  return [f, K](int n) { return std::abs(n) <= K ? f[n] : complex{}; };
}

struct OracleLedger {
  double r4, lambda_T, lambda_0, I, II;
};

OracleLedger oracle_ledger(const Trajectory& traj, double s, int M) {
  const int B = traj.grid().max_mode();
  const int p = traj.spec().dispersion_exponent();
  const double sg = traj.spec().sign_factor();
  std::vector<double> r4, I, II;
  for (const auto& u : traj.states()) {
    const auto q = oracle::quartic_terms(coeffs_of(u), B, M, s, p, true);
    r4.push_back(0.5 * sg * q.low_psi.imag());  // -(i/2) sg z  has real part  (sg/2) Im z
    I.push_back(2.0 * q.six_I.imag());
    II.push_back(-2.0 * q.six_II.imag());
  }
  const double h = traj.dt();
  const auto l0 = oracle::quartic_terms(coeffs_of(traj.front()), B, M, s, p, false);
  const auto l1 = oracle::quartic_terms(coeffs_of(traj.back()), B, M, s, p, false);
  return {oracle::simpson_even(r4, h), 0.5 * sg * l1.high_k.real(), 0.5 * sg * l0.high_k.real(),
          oracle::simpson_even(I, h), oracle::simpson_even(II, h)};
}

SpectralField two_mode(const TorusGrid& g) {
  SpectralField f(g);
  f.set(1, 1.0);
  f.set(2, 1.0);
  return f;
}

}  // namespace

TEST(Exponents, Values) {
  EXPECT_DOUBLE_EQ(c_exponent(-0.125, 0.0), 0.125);
  EXPECT_DOUBLE_EQ(c_exponent(-0.05), 0.0);
  EXPECT_DOUBLE_EQ(c_exponent(-0.125), 0.126);
  EXPECT_DOUBLE_EQ(alpha(-0.1), 0.401);
  EXPECT_DOUBLE_EQ(alpha(-0.1, 0.0), 0.4);
}

TEST(R4M, VanishingCases) {
  TorusGrid g(16);
  auto traj = solve(random_field(g, 3u), EquationSpec::wick(), 0.05, 1e-3);
  EXPECT_EQ(r4M(traj, 0.0, 5), 0.0);
  EXPECT_EQ(r4M(traj, -0.2, 0), 0.0);
  SpectralField one(g);
  one.set(3, 0.8);
  auto single = solve(one, EquationSpec::wick(), 0.05, 1e-3);
  // Unexcited modes carry FFT roundoff (~1e-17), so quartic sums sit near 1e-34.
  EXPECT_LT(std::abs(r4M(single, -0.2, 7)), 1e-25);
  EXPECT_THROW(r4M(traj, -0.2, 8), ParameterError);
}

TEST(R4M, TwoModeMatchesBruteForce) {
  TorusGrid g(10);
  const double T = 0.1, dt = 1e-3;
  auto traj = solve(two_mode(g), EquationSpec::wick(), T, dt);
  auto fine = solve(two_mode(g), EquationSpec::wick(), T, dt / 10);
  const auto ref = oracle_ledger(fine, -1.0 / 16, 4);
  EXPECT_NEAR(r4M(traj, -1.0 / 16, 4), ref.r4, 1e-8);
  EXPECT_NE(ref.r4, 0.0);
}

TEST(R4M, InteractionRepresentationAgrees) {
  for (auto spec : {EquationSpec::wick(), EquationSpec{Model::FourthOrderNLS, Sign::Focusing, 0}}) {
    TorusGrid g(8);
    auto traj = solve(random_field(g, 12u), spec, 0.05, 1e-4);
    const int M = g.max_mode();
    EXPECT_NEAR(r4M(traj, -0.3, M), r4M_interaction(traj, -0.3, M), 1e-10);
  }
}

TEST(R4M, ShellsAddUp) {
  TorusGrid g(16);
  auto traj = solve(random_field(g, 31u, 0.5), EquationSpec::wick(), 0.02, 1e-3);
  const double s = -0.2;
  const int B = g.max_mode();
  // Shell m: quadruples with max |n_j| == m, by direct enumeration.
  double total = 0.0;
  for (int m = 1; m <= 5; ++m) {
    std::vector<double> vals;
    for (const auto& u : traj.states()) {
      const auto in = oracle::quartic_terms(coeffs_of(u), B, m, s, 2, false).low_psi;
      const auto below = oracle::quartic_terms(coeffs_of(u), B, m - 1, s, 2, false).low_psi;
      vals.push_back(0.5 * (in - below).imag());
    }
    total += oracle::simpson_even(vals, traj.dt());
    EXPECT_NEAR(r4M(traj, s, m), total, 1e-13);
  }
}

TEST(Lambda4M, BasicsAndOracle) {
  TorusGrid g(16);
  SpectralField f(g);
  f.set(1, 1.0);
  f.set(5, 3.0);
  const auto ref = oracle::quartic_terms(coeffs_of(f), 7, 2, -0.125, 2, false);
  EXPECT_NEAR(lambda4M(f, -0.125, 2), 0.5 * ref.high_k.real(), 1e-12);

  auto r = random_field(g, 5u, 0.0);
  const auto rr = oracle::quartic_terms(coeffs_of(r), 7, 2, -0.125, 2, false);
  const double value = lambda4M(r, -0.125, 2);
  EXPECT_NEAR(value, 0.5 * rr.high_k.real(), 1e-12);
  EXPECT_NE(value, 0.0);
  EXPECT_LT(std::abs(rr.high_k.imag()), 1e-12 * std::abs(rr.high_k));
  EXPECT_NEAR(lambda4M(r * std::polar(1.0, 0.7), -0.125, 2), value, 1e-13);
  EXPECT_NEAR(lambda4M(r, -0.125, 2, EquationSpec::cubic(Sign::Focusing)), -value, 1e-15);
  EXPECT_EQ(lambda4M(r, 0.0, 2), 0.0);
  EXPECT_EQ(lambda4M(r, -0.125, 7), 0.0);
  EXPECT_EQ(lambda4M(r, -0.125, 40), 0.0);
}

TEST(R6M, VanishingCases) {
  TorusGrid g(16);
  auto traj = solve(random_field(g, 3u), EquationSpec::wick(), 0.02, 1e-3);
  const auto zero = r6M(traj, 0.0, 3);
  EXPECT_EQ(zero.I, 0.0);
  EXPECT_EQ(zero.II, 0.0);
  SpectralField one(g);
  one.set(-2, 1.1);
  const auto single = r6M(solve(one, EquationSpec::wick(), 0.02, 1e-3), -0.3, 1);
  EXPECT_LT(std::abs(single.I), 1e-25);
  EXPECT_LT(std::abs(single.II), 1e-25);
}

TEST(EnergyTerms, SmallBandsMatchBruteForce) {
  const double T = 0.1, dt = 1e-3, s = -1.0 / 16;
  for (auto spec : {EquationSpec::wick(), EquationSpec::cubic(Sign::Focusing)}) {
    TorusGrid g(8);
    const auto u0 = random_field(g, 99u, 0.0, 1.0);
    auto traj = solve(u0, spec, T, dt);
    auto fine = solve(u0, spec, T, dt / 10);
    const int M = 2;
    const auto ref = oracle_ledger(fine, s, M);
    const auto six = r6M(traj, s, M);
    EXPECT_NEAR(r4M(traj, s, M), ref.r4, 1e-7);
    EXPECT_NEAR(lambda4M(traj.back(), s, M, spec), ref.lambda_T, 1e-7);
    EXPECT_NEAR(lambda4M(traj.front(), s, M, spec), ref.lambda_0, 1e-7);
    EXPECT_NEAR(six.I, ref.I, 1e-7);
    EXPECT_NEAR(six.II, ref.II, 1e-7);
    EXPECT_NE(six.I, 0.0);
    EXPECT_NE(six.II, 0.0);
  }
}

TEST(Ledger, ClosesOnRandomData) {
  TorusGrid g(32);
  auto traj = solve(random_field(g, 2024u, 1.0), EquationSpec::wick(), 0.1, 1e-4);
  const auto L = ledger(traj, -1.0 / 16, 8);
  const double scale = std::max({std::abs(L.delta_E), std::abs(L.r4M), 1e-12});
  EXPECT_LT(std::abs(L.residual()), 1e-6 * scale);
  EXPECT_LT(L.max_imag_fraction, 1e-10);
  EXPECT_GT(std::abs(L.lambda4M_T - L.lambda4M_0), 1e-8);
}

TEST(Ledger, TrivialCases) {
  TorusGrid g(16);
  auto traj = solve(random_field(g, 8u), EquationSpec::wick(), 0.05, 1e-3);
  EXPECT_LT(std::abs(ledger(traj, 0.0, 3).residual()), 1e-10);
  SpectralField one(g);
  one.set(4, complex(0.3, 0.9));
  const auto L = ledger(solve(one, EquationSpec::cubic(), 0.05, 1e-3), -0.4, 2);
  for (double v : {L.r4M, L.lambda4M_0, L.lambda4M_T, L.r6M_I, L.r6M_II}) {
    EXPECT_LT(std::abs(v), 1e-25);
  }
  EXPECT_LT(std::abs(L.delta_E), 1e-14);
}

TEST(Ledger, ResidualShrinksAtFourthOrder) {
  TorusGrid g(16);
  const auto u0 = random_field(g, 7u, 0.0, 1.0);
  for (auto spec : {EquationSpec::wick(), EquationSpec::cubic(Sign::Focusing),
                    EquationSpec::gamma_family(0.7)}) {
    const double r1 = std::abs(ledger(solve(u0, spec, 0.2, 4e-3), -0.2, 2).residual());
    const double r2 = std::abs(ledger(solve(u0, spec, 0.2, 2e-3), -0.2, 2).residual());
    EXPECT_GT(r1 / r2, 10.0) << to_string(spec.model);
  }
}

TEST(Ledger, FourthOrderModelCloses) {
  TorusGrid g(8);
  const auto u0 = random_field(g, 7u, 0.0, 1.0);
  auto traj = solve(u0, EquationSpec{Model::WickFourthOrderNLS, Sign::Focusing, 0}, 0.2, 1e-4);
  const auto L = ledger(traj, -0.2, 2);
  EXPECT_LT(std::abs(L.residual()), 1e-10 * std::abs(L.delta_E));
}

TEST(SymbolBoundProbe, ZeroSymbolAndStability) {
  for (const auto& c : symbol_bound_probe(16, 0.0)) EXPECT_EQ(c.max_ratio, 0.0);
  const auto a = symbol_bound_probe(64, -0.125);
  const auto b = symbol_bound_probe(128, -0.125);
  const double ca = a[static_cast<int>(SymbolCase::BothClose)].max_ratio;
  const double cb = b[static_cast<int>(SymbolCase::BothClose)].max_ratio;
  EXPECT_GT(ca, 0.0);
  EXPECT_TRUE(std::isfinite(cb));
  EXPECT_LT(std::abs(cb / ca - 1.0), 0.1);
  for (const auto& c : b) {
    EXPECT_TRUE(std::isfinite(c.max_ratio));
    if (c.which != SymbolCase::Other) EXPECT_GT(c.count, 0u);
  }
  EXPECT_THROW(symbol_bound_probe(129, -0.1), ParameterError);
}
