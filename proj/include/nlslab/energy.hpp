#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nlslab/dynamics.hpp"

namespace nlslab {

// Modified-energy bookkeeping for the H^s norm.
//
// All quartic sums run over the non-resonant zero-sum set
//   S = { n1 - n2 + n3 - n4 = 0,  n2 != n1, n3 }
// inside the grid band, with X = u_{n1} conj(u_{n2}) u_{n3} conj(u_{n4}),
// Psi = Psi_s and K = Psi / Phi_p, Phi_p = n4^p - n1^p + n2^p - n3^p.
// With sg the nonlinearity sign the Galerkin flow satisfies
//
//   |u(T)|_{H^s}^2 - |u(0)|_{H^s}^2 = R4M + Lambda(T) - Lambda(0) + I + II
//
//   R4M    = -(i/2) sg int sum_{S, all |n_j| <= M} Psi X
//   Lambda = (sg/2) sum_{S, max |n_j| > M} K X
//   I      = -2 int Re(i sum_{S, max |n_j| > M} K N(u)_{n1} conj(u2) u3 conj(u4))
//   II     = +2 int Re(i sum_{S, max |n_j| > M} K |u1|^2 u1 conj(u2) u3 conj(u4))
//
// where N is the non-resonant cubic.  I and II do not depend on sg or on the
// renormalization constant.

struct ModifiedEnergyLedger {
  double s = 0.0;
  int M = 0;
  double delta_E = 0.0;
  double r4M = 0.0;
  double lambda4M_T = 0.0;
  double lambda4M_0 = 0.0;
  double r6M_I = 0.0;
  double r6M_II = 0.0;
  /// Largest |imaginary part| / |sum| met while assembling the real entries.
  double max_imag_fraction = 0.0;

  double residual() const {
    return delta_E - (r4M + lambda4M_T - lambda4M_0 + r6M_I + r6M_II);
  }
};

struct SexticRemainder {
  double I = 0.0;
  double II = 0.0;
};

/// Requires 0 <= M <= band; M = band gives the full quartic term.
double r4M(const Trajectory& traj, double s, int M);

/// r4M evaluated from the interaction variables a_n = e^{-i n^p t} u_n as
/// -(i/2) sg int sum Psi e^{-i Phi_p t} a1 conj(a2) a3 conj(a4).
double r4M_interaction(const Trajectory& traj, double s, int M);

/// Boundary term; zero when M covers the band.
double lambda4M(const SpectralField& field, double s, int M,
                const EquationSpec& spec = EquationSpec::wick());

SexticRemainder r6M(const Trajectory& traj, double s, int M);

ModifiedEnergyLedger ledger(const Trajectory& traj, double s, int M);

/// Per-instant integrands of r4M, I and II on the trajectory's time grid.
struct LedgerIntegrands {
  std::vector<double> r4;
  std::vector<double> six_I;
  std::vector<double> six_II;
};
LedgerIntegrands ledger_integrands(const Trajectory& traj, double s, int M);

/// c(s) = max(-1/2 - 5s + eps, 0).
double c_exponent(double s, double eps = 1e-3);
/// alpha = -4s + eps.
double alpha(double s, double eps = 1e-3);

/// Mean-value regimes for |Psi_s| over non-resonant quadruples.
enum class SymbolCase { BothClose, OneFarCloseLow, OneFarCloseComparable, BothFar, Other };
std::string to_string(SymbolCase c);

struct SymbolCaseStats {
  SymbolCase which;
  std::uint64_t count = 0;
  double max_ratio = 0.0;
  std::array<std::int64_t, 4> argmax{};
};

/// Sweeps non-resonant zero-sum quadruples with |n_i| <= radius (<= 128) and
/// reports max |Psi_s| / bound per regime.  With d1 = |n4 - n1|,
/// d3 = |n4 - n3| (roles of n1 and n3 exchangeable), x << y meaning 16x < y
/// and ~ meaning within a factor 4:
///   BothClose              d1, d3 << n1*                bound <n1*>^{2s-2} |Phi|
///   OneFarCloseLow         d1 ~ n1* >> d3, d3 << n3*    bound <n3*>^{2s-1} d3
///   OneFarCloseComparable  d1 ~ n1* >> d3, d3 ~ n3*     bound <n4*>^{2s}
///   BothFar                d1, d3 ~ n1*                 bound <n4*>^{2s}
std::vector<SymbolCaseStats> symbol_bound_probe(int radius, double s);

}  // namespace nlslab
