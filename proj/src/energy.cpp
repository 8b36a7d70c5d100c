#include "nlslab/energy.hpp"

#include <algorithm>
#include <cmath>

#include "nlslab/errors.hpp"
#include "nlslab/quadrature.hpp"
#include "nlslab/resonance.hpp"

namespace nlslab {

namespace {

/// Tables indexed by n + K.
struct BandTables {
  int K;
  int p;
  std::vector<double> weight;  // <n>^{2s}
  std::vector<double> power;   // n^p

  BandTables(int band, double s, int exponent) : K(band), p(exponent) {
    for (int n = -K; n <= K; ++n) {
      weight.push_back(std::pow(1.0 + double(n) * n, s));
      power.push_back(dispersion(n, p));
    }
  }
};

struct QuarticSums {
  complex low_psi;  // sum_{all <= M} Psi X
  complex high_k;   // sum_{max > M} K X
  complex six_I;    // sum_{max > M} K N_{n1} conj(u2) u3 conj(u4)
  complex six_II;   // sum_{max > M} K |u1|^2 u1 conj(u2) u3 conj(u4)
};

/// One pass over the non-resonant zero-sum set of the band.
/// `nonres` may be null when the sextic sums are not needed.
QuarticSums quartic_sums(const SpectralField& u, const SpectralField* nonres,
                         const BandTables& tab, int M) {
  const int K = tab.K;
  const std::size_t W = static_cast<std::size_t>(2 * K + 1);
  std::vector<complex> c(W), cc(W), nr(W), rs(W);
  for (int n = -K; n <= K; ++n) {
    const auto i = static_cast<std::size_t>(n + K);
    c[i] = u[n];
    cc[i] = std::conj(u[n]);
    rs[i] = std::norm(u[n]) * u[n];
    if (nonres) nr[i] = (*nonres)[n];
  }
  std::vector<QuarticSums> rows(W);
  for (int n1 = -K; n1 <= K; ++n1) {
    const auto i1 = static_cast<std::size_t>(n1 + K);
    complex low{}, high{}, six1{}, six2{};
    for (int n2 = -K; n2 <= K; ++n2) {
      if (n2 == n1) continue;
      const auto i2 = static_cast<std::size_t>(n2 + K);
      const int lo3 = std::max(-K, -K - n1 + n2);
      const int hi3 = std::min(K, K - n1 + n2);
      for (int n3 = lo3; n3 <= hi3; ++n3) {
        if (n3 == n2) continue;
        const int n4 = n1 - n2 + n3;
        const auto i3 = static_cast<std::size_t>(n3 + K);
        const auto i4 = static_cast<std::size_t>(n4 + K);
        const double psi = tab.weight[i1] - tab.weight[i2] + tab.weight[i3] - tab.weight[i4];
        if (psi == 0.0) continue;
        const complex tail = cc[i2] * c[i3] * cc[i4];
        const int top = std::max({std::abs(n1), std::abs(n2), std::abs(n3), std::abs(n4)});
        if (top <= M) {
          low += psi * (c[i1] * tail);
        } else {
          const double phase = tab.power[i4] - tab.power[i1] + tab.power[i2] - tab.power[i3];
          const double k = psi / phase;
          high += k * (c[i1] * tail);
          if (nonres) {
            six1 += k * (nr[i1] * tail);
            six2 += k * (rs[i1] * tail);
          }
        }
      }
    }
    rows[i1] = {low, high, six1, six2};
  }
  std::vector<complex> a(W), b(W), d(W), e(W);
  for (std::size_t i = 0; i < W; ++i) {
    a[i] = rows[i].low_psi;
    b[i] = rows[i].high_k;
    d[i] = rows[i].six_I;
    e[i] = rows[i].six_II;
  }
  return {pairwise_sum(a), pairwise_sum(b), pairwise_sum(d), pairwise_sum(e)};
}

void check_cap(const Trajectory& traj, int M, const char* who) {
  if (M < 0 || M > traj.grid().max_mode()) {
    throw ParameterError(std::string(who) + ": M = " + std::to_string(M) +
                         " must lie in [0, band = " + std::to_string(traj.grid().max_mode()) +
                         "]");
  }
}

double imag_fraction(complex z, bool expect_real) {
  const double mag = std::abs(z);
  if (mag < 1e-300) return 0.0;
  return std::abs(expect_real ? z.imag() : z.real()) / mag;
}

struct Assembled {
  LedgerIntegrands integrands;
  double max_imag_fraction = 0.0;
};

Assembled assemble(const Trajectory& traj, double s, int M, bool sextic) {
  const EquationSpec& spec = traj.spec();
  const BandTables tab(traj.grid().max_mode(), s, spec.dispersion_exponent());
  const double sg = spec.sign_factor();
  const std::size_t T = traj.size();
  Assembled out;
  out.integrands.r4.assign(T, 0.0);
  out.integrands.six_I.assign(T, 0.0);
  out.integrands.six_II.assign(T, 0.0);
  std::vector<double> frac(T, 0.0);
  const complex i(0.0, 1.0);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < T; ++k) {
    const SpectralField& u = traj.state(k);
    SpectralField nonres(u.grid());
    if (sextic) nonres = nonlinearity(u, spec).nonres;
    const QuarticSums q = quartic_sums(u, sextic ? &nonres : nullptr, tab, M);
    out.integrands.r4[k] = (-0.5 * sg * (i * q.low_psi)).real();
    out.integrands.six_I[k] = -2.0 * (i * q.six_I).real();
    out.integrands.six_II[k] = 2.0 * (i * q.six_II).real();
    frac[k] = imag_fraction(q.low_psi, false);
  }
  out.max_imag_fraction = *std::max_element(frac.begin(), frac.end());
  return out;
}

}  // namespace

LedgerIntegrands ledger_integrands(const Trajectory& traj, double s, int M) {
  check_cap(traj, M, "ledger_integrands");
  return assemble(traj, s, M, true).integrands;
}

double r4M(const Trajectory& traj, double s, int M) {
  check_cap(traj, M, "r4M");
  const auto a = assemble(traj, s, M, false);
  return simpson(a.integrands.r4, traj.dt());
}

double r4M_interaction(const Trajectory& traj, double s, int M) {
  check_cap(traj, M, "r4M_interaction");
  const Trajectory frame = interaction_frame(traj);
  const int p = traj.spec().dispersion_exponent();
  const double sg = traj.spec().sign_factor();
  std::vector<double> values(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const SpectralField& a = frame.state(k);
    const double t = frame.times()[k];
    complex acc{};
    for (int n1 = -M; n1 <= M; ++n1) {
      for (int n2 = -M; n2 <= M; ++n2) {
        for (int n3 = -M; n3 <= M; ++n3) {
          const int n4 = n1 - n2 + n3;
          if (n2 == n1 || n2 == n3 || std::abs(n4) > M) continue;
          const auto q = FrequencyQuadruple(n1, n2, n3, n4);
          const double ph = static_cast<double>(interaction_phase(q, p));
          acc += psi_symbol(q, s) * std::polar(1.0, -ph * t) *
                 (a[n1] * std::conj(a[n2]) * a[n3] * std::conj(a[n4]));
        }
      }
    }
    values[k] = (-0.5 * sg * (complex(0.0, 1.0) * acc)).real();
  }
  return simpson(values, traj.dt());
}

double lambda4M(const SpectralField& field, double s, int M, const EquationSpec& spec) {
  if (M < 0) throw ParameterError("lambda4M: M must be nonnegative");
  if (M >= field.grid().max_mode()) return 0.0;
  const BandTables tab(field.grid().max_mode(), s, spec.dispersion_exponent());
  const QuarticSums q = quartic_sums(field, nullptr, tab, M);
  return 0.5 * spec.sign_factor() * q.high_k.real();
}

SexticRemainder r6M(const Trajectory& traj, double s, int M) {
  check_cap(traj, M, "r6M");
  const auto a = assemble(traj, s, M, true);
  return {simpson(a.integrands.six_I, traj.dt()), simpson(a.integrands.six_II, traj.dt())};
}

ModifiedEnergyLedger ledger(const Trajectory& traj, double s, int M) {
  check_cap(traj, M, "ledger");
  const auto a = assemble(traj, s, M, true);
  ModifiedEnergyLedger L;
  L.s = s;
  L.M = M;
  const double e0 = sobolev_norm(traj.front(), s);
  const double e1 = sobolev_norm(traj.back(), s);
  L.delta_E = (e1 - e0) * (e1 + e0);
  L.r4M = simpson(a.integrands.r4, traj.dt());
  L.r6M_I = simpson(a.integrands.six_I, traj.dt());
  L.r6M_II = simpson(a.integrands.six_II, traj.dt());
  L.max_imag_fraction = a.max_imag_fraction;
  if (M < traj.grid().max_mode()) {
    const BandTables tab(traj.grid().max_mode(), s, traj.spec().dispersion_exponent());
    const double sg = traj.spec().sign_factor();
    const complex l0 = quartic_sums(traj.front(), nullptr, tab, M).high_k;
    const complex l1 = quartic_sums(traj.back(), nullptr, tab, M).high_k;
    L.lambda4M_0 = 0.5 * sg * l0.real();
    L.lambda4M_T = 0.5 * sg * l1.real();
    L.max_imag_fraction =
        std::max({L.max_imag_fraction, imag_fraction(l0, true), imag_fraction(l1, true)});
  }
  return L;
}

double c_exponent(double s, double eps) { return std::max(-0.5 - 5.0 * s + eps, 0.0); }

double alpha(double s, double eps) { return -4.0 * s + eps; }

std::string to_string(SymbolCase c) {
  switch (c) {
    case SymbolCase::BothClose: return "both_close";
    case SymbolCase::OneFarCloseLow: return "one_far_close_low";
    case SymbolCase::OneFarCloseComparable: return "one_far_close_comparable";
    case SymbolCase::BothFar: return "both_far";
    case SymbolCase::Other: return "other";
  }
  return "unknown";
}

std::vector<SymbolCaseStats> symbol_bound_probe(int radius, double s) {
  if (radius < 1 || radius > 128) {
    throw ParameterError("symbol_bound_probe: radius must lie in [1, 128]");
  }
  constexpr int kCases = 5;
  const int R = radius;
  const auto br = [](double n) { return std::sqrt(1.0 + n * n); };
  std::vector<std::array<SymbolCaseStats, kCases>> rows(static_cast<std::size_t>(2 * R + 1));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < 2 * R + 1; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    for (int c = 0; c < kCases; ++c) row[c].which = static_cast<SymbolCase>(c);
    const std::int64_t n1 = i - R;
    for (std::int64_t n2 = -R; n2 <= R; ++n2) {
      for (std::int64_t n3 = -R; n3 <= R; ++n3) {
        const std::int64_t n4 = n1 - n2 + n3;
        if (n4 < -R || n4 > R || n4 == n1 || n4 == n3) continue;
        const FrequencyQuadruple q(n1, n2, n3, n4);
        const auto m = q.sorted_moduli();
        const std::int64_t d1 = std::abs(n4 - n1), d3 = std::abs(n4 - n3);
        const double psi = std::abs(psi_symbol(q, s));
        SymbolCase which = SymbolCase::Other;
        double bound = 0.0;
        const auto far_close = [&](std::int64_t far, std::int64_t close) {
          return comparable(far, m[0]) && dominates(far, close);
        };
        if (dominates(m[0], d1) && dominates(m[0], d3)) {
          which = SymbolCase::BothClose;
          bound = std::pow(br(double(m[0])), 2 * s - 2) * std::abs(double(phi(q)));
        } else if (far_close(d1, d3) || far_close(d3, d1)) {
          const std::int64_t close = far_close(d1, d3) ? d3 : d1;
          if (dominates(m[2], close)) {
            which = SymbolCase::OneFarCloseLow;
            bound = std::pow(br(double(m[2])), 2 * s - 1) * double(close);
          } else if (comparable(close, m[2])) {
            which = SymbolCase::OneFarCloseComparable;
            bound = std::pow(br(double(m[3])), 2 * s);
          }
        } else if (comparable(d1, m[0]) && comparable(d3, m[0])) {
          which = SymbolCase::BothFar;
          bound = std::pow(br(double(m[3])), 2 * s);
        }
        auto& st = row[static_cast<int>(which)];
        ++st.count;
        const double ratio = bound > 0.0 ? psi / bound : 0.0;
        if (ratio > st.max_ratio) {
          st.max_ratio = ratio;
          st.argmax = q.values();
        }
      }
    }
  }

  std::vector<SymbolCaseStats> out(kCases);
  for (int c = 0; c < kCases; ++c) out[c].which = static_cast<SymbolCase>(c);
  for (const auto& row : rows) {
    for (int c = 0; c < kCases; ++c) {
      out[c].count += row[c].count;
      if (row[c].max_ratio > out[c].max_ratio) {
        out[c].max_ratio = row[c].max_ratio;
        out[c].argmax = row[c].argmax;
      }
    }
  }
  return out;
}

}  // namespace nlslab
