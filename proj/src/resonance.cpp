#include "nlslab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "nlslab/errors.hpp"

namespace nlslab {

namespace {

__extension__ using i128 = __int128;

std::int64_t narrow(i128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw RangeError(std::string(what) + ": value exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

void guard(const FrequencyQuadruple& q, std::int64_t limit, const char* what) {
  for (auto n : q.values()) {
    if (n > limit || n < -limit) {
      throw RangeError(std::string(what) + ": |n_i| = " + std::to_string(n < 0 ? -n : n) +
                       " exceeds " + std::to_string(limit));
    }
  }
}

i128 phi_quadratic(i128 n1, i128 n2, i128 n3, i128 n) { return n * n - n1 * n1 + n2 * n2 - n3 * n3; }
i128 phi_factored(i128 n1, i128 n3, i128 n) { return 2 * (n - n1) * (n - n3); }

i128 phi4_quartic(i128 n1, i128 n2, i128 n3, i128 n) {
  const auto q = [](i128 x) { return x * x * x * x; };
  return -q(n) + q(n1) - q(n2) + q(n3);
}
i128 phi4_factored(i128 n1, i128 n2, i128 n3, i128 n) {
  const i128 w = n1 * n1 + n2 * n2 + n3 * n3 + n * n + 2 * (n1 + n3) * (n1 + n3);
  return -(n - n1) * (n - n3) * w;
}

}  // namespace

FrequencyQuadruple::FrequencyQuadruple(std::int64_t n1, std::int64_t n2, std::int64_t n3,
                                       std::int64_t n4)
    : n_{n1, n2, n3, n4} {
  if (static_cast<i128>(n1) - n2 + n3 - n4 != 0) {
    throw ParameterError("FrequencyQuadruple: n1 - n2 + n3 - n4 must vanish");
  }
}

FrequencyQuadruple FrequencyQuadruple::completing(std::int64_t n1, std::int64_t n2,
                                                  std::int64_t n3) {
  return {n1, n2, n3, narrow(static_cast<i128>(n1) - n2 + n3, "FrequencyQuadruple")};
}

std::array<std::int64_t, 4> FrequencyQuadruple::sorted_moduli() const {
  std::array<std::int64_t, 4> m{};
  for (int i = 0; i < 4; ++i) m[i] = n_[i] < 0 ? -n_[i] : n_[i];
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

std::int64_t phi(const FrequencyQuadruple& q) {
  guard(q, kPhiRange, "phi");
  const i128 a = phi_quadratic(q.n1(), q.n2(), q.n3(), q.n4());
  const i128 b = phi_factored(q.n1(), q.n3(), q.n4());
  if (a != b) throw RangeError("phi: quadratic and factored forms disagree");
  return narrow(a, "phi");
}

std::int64_t phi4(const FrequencyQuadruple& q) {
  guard(q, kPhi4Range, "phi4");
  const i128 a = phi4_quartic(q.n1(), q.n2(), q.n3(), q.n4());
  const i128 b = phi4_factored(q.n1(), q.n2(), q.n3(), q.n4());
  if (a != b) throw RangeError("phi4: quartic and factored forms disagree");
  return narrow(a, "phi4");
}

std::int64_t interaction_phase(const FrequencyQuadruple& q, int p) {
  if (p == 2) return phi(q);
  if (p == 4) return -phi4(q);
  throw ParameterError("interaction_phase: exponent must be 2 or 4");
}

double psi_symbol(const FrequencyQuadruple& q, double s) {
  const auto w = [s](std::int64_t n) {
    const double x = static_cast<double>(n);
    return std::pow(1.0 + x * x, s);
  };
  return w(q.n1()) - w(q.n2()) + w(q.n3()) - w(q.n4());
}

std::uint64_t IdentityReport::total_failures() const {
  std::uint64_t t = 0;
  for (auto c : failures_per_check) t += c;
  return t;
}

IdentityReport verify_identities(int radius) {
  if (radius < 0 || radius > 256) {
    throw ParameterError("verify_identities: radius must lie in [0, 256]");
  }
  const int R = radius;
  const int width = 2 * R + 1;
  std::vector<IdentityReport> rows(static_cast<std::size_t>(width));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < width; ++i) {
    const i128 n1 = i - R;
    IdentityReport& row = rows[static_cast<std::size_t>(i)];
    for (i128 n2 = -R; n2 <= R; ++n2) {
      for (i128 n3 = -R; n3 <= R; ++n3) {
        const i128 n = n1 - n2 + n3;
        if (n < -R || n > R) continue;
        ++row.quadruples_checked;
        const i128 p2 = phi_quadratic(n1, n2, n3, n);
        const i128 p4 = phi4_quartic(n1, n2, n3, n);
        const bool resonant = n == n1 || n == n3;
        const bool ok[5] = {p2 == phi_factored(n1, n3, n), p4 == phi4_factored(n1, n2, n3, n),
                            (p2 == 0) == resonant, (p4 == 0) == resonant,
                            (p4 < 0 ? -p4 : p4) >= (p2 < 0 ? -p2 : p2)};
        for (int c = 0; c < 5; ++c) {
          if (ok[c]) continue;
          ++row.failures_per_check[static_cast<std::size_t>(c)];
          if (row.failures.size() < IdentityReport::kMaxListedFailures) {
            row.failures.push_back({static_cast<char>('a' + c),
                                    {static_cast<std::int64_t>(n1), static_cast<std::int64_t>(n2),
                                     static_cast<std::int64_t>(n3), static_cast<std::int64_t>(n)}});
          }
        }
      }
    }
  }

  IdentityReport out;
  out.radius = radius;
  for (const auto& row : rows) {
    out.quadruples_checked += row.quadruples_checked;
    for (int c = 0; c < 5; ++c) out.failures_per_check[c] += row.failures_per_check[c];
    for (const auto& f : row.failures) {
      if (out.failures.size() < IdentityReport::kMaxListedFailures) out.failures.push_back(f);
    }
  }
  return out;
}

std::string to_json(const IdentityReport& report) {
  static constexpr const char* kNames[5] = {"phi_factorization", "phi4_factorization",
                                            "phi_resonance_set", "phi4_resonance_set",
                                            "phi4_dominates_phi"};
  nlohmann::ordered_json j;
  j["radius"] = report.radius;
  j["quadruples_checked"] = report.quadruples_checked;
  nlohmann::ordered_json counts;
  for (int c = 0; c < 5; ++c) counts[kNames[c]] = report.failures_per_check[c];
  j["failures_per_check"] = counts;
  j["total_failures"] = report.total_failures();
  auto list = nlohmann::ordered_json::array();
  for (const auto& f : report.failures) {
    list.push_back({{"check", std::string(1, f.check)}, {"quadruple", f.quadruple}});
  }
  j["failures"] = list;
  return j.dump(2);
}

std::string to_string(SupportCase c) {
  switch (c) {
    case SupportCase::HighPairMixed: return "i";
    case SupportCase::HighPairAligned: return "ii";
    case SupportCase::ThreeHigh: return "iii";
    case SupportCase::NearlyEqual: return "iv";
    case SupportCase::Generic: return "generic";
    case SupportCase::Resonant: return "resonant";
  }
  return "unknown";
}

bool comparable(std::int64_t a, std::int64_t b) { return 4 * a >= b && 4 * b >= a; }
bool dominates(std::int64_t a, std::int64_t b) { return a > 16 * b; }

SupportClass classify_support(const FrequencyQuadruple& q, double s) {
  guard(q, kPhiRange, "classify_support");
  const std::int64_t ph = phi(q);
  const double psi = psi_symbol(q, s);
  if (ph == 0) return {SupportCase::Resonant, 0, 0.0, 0.0, psi};

  std::array<std::int64_t, 4> m{};
  for (int i = 0; i < 4; ++i) m[i] = std::abs(q.values()[i]);
  const double top = static_cast<double>(q.max_modulus());
  const double aphi = std::abs(static_cast<double>(ph));
  const auto result = [&](SupportCase c, double cmp) {
    return SupportClass{c, ph, cmp, cmp > 0 ? aphi / cmp : 0.0, psi};
  };
  // Pair (hi1, hi2) comparable and both dominating (lo1, lo2).
  const auto high_pair = [&](int h1, int h2, int l1, int l2) {
    return comparable(m[h1], m[h2]) && dominates(m[h1], m[l1]) && dominates(m[h1], m[l2]) &&
           dominates(m[h2], m[l1]) && dominates(m[h2], m[l2]);
  };

  // Indices 0..3 are n1, n2, n3, n4.  Mixed pairs: one of {n1, n3}, one of {n2, n4}.
  static constexpr int kMixed[4][4] = {{2, 3, 0, 1}, {0, 3, 2, 1}, {2, 1, 0, 3}, {0, 1, 2, 3}};
  for (const auto& p : kMixed) {
    if (high_pair(p[0], p[1], p[2], p[3])) {
      const auto lo = std::abs(static_cast<double>(q.values()[p[2]] - q.values()[p[3]]));
      return result(SupportCase::HighPairMixed, top * lo);
    }
  }
  if (high_pair(3, 1, 0, 2) || high_pair(0, 2, 3, 1)) {
    return result(SupportCase::HighPairAligned, top * top);
  }
  for (int low = 0; low < 4; ++low) {
    bool ok = true;
    for (int a = 0; a < 4 && ok; ++a) {
      if (a == low) continue;
      ok = dominates(m[a], m[low]);
      for (int b = a + 1; b < 4 && ok; ++b) {
        if (b != low) ok = comparable(m[a], m[b]);
      }
    }
    if (ok) return result(SupportCase::ThreeHigh, top * top);
  }
  if (dominates(q.max_modulus(), std::abs(ph))) return result(SupportCase::NearlyEqual, top);
  return result(SupportCase::Generic, 0.0);
}

}  // namespace nlslab
