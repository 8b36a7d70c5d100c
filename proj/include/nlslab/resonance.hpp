#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nlslab {

/// (n1, n2, n3, n4) with n1 - n2 + n3 - n4 = 0.  n4 plays the role of the
/// output frequency n.
class FrequencyQuadruple {
 public:
  FrequencyQuadruple(std::int64_t n1, std::int64_t n2, std::int64_t n3, std::int64_t n4);
  /// Completes n4 = n1 - n2 + n3.
  static FrequencyQuadruple completing(std::int64_t n1, std::int64_t n2, std::int64_t n3);

  std::int64_t n1() const noexcept { return n_[0]; }
  std::int64_t n2() const noexcept { return n_[1]; }
  std::int64_t n3() const noexcept { return n_[2]; }
  std::int64_t n4() const noexcept { return n_[3]; }
  const std::array<std::int64_t, 4>& values() const noexcept { return n_; }

  /// |n_i| in decreasing order: n1* >= n2* >= n3* >= n4*.
  std::array<std::int64_t, 4> sorted_moduli() const;
  std::int64_t max_modulus() const { return sorted_moduli()[0]; }
  bool resonant() const noexcept { return n_[3] == n_[0] || n_[3] == n_[2]; }

 private:
  std::array<std::int64_t, 4> n_;
};

inline constexpr std::int64_t kPhiRange = std::int64_t{1} << 30;
inline constexpr std::int64_t kPhi4Range = std::int64_t{1} << 15;

/// Phi = n^2 - n1^2 + n2^2 - n3^2 = 2 (n - n1)(n - n3), n = n4.
/// Both forms are evaluated; RangeError if |n_i| > 2^30.
std::int64_t phi(const FrequencyQuadruple& q);

/// Phi_4 = -n^4 + n1^4 - n2^4 + n3^4
///       = -(n - n1)(n - n3)(n1^2 + n2^2 + n3^2 + n^2 + 2 (n1 + n3)^2).
/// RangeError if |n_i| > 2^15.
std::int64_t phi4(const FrequencyQuadruple& q);

/// Phase n4^p - n1^p + n2^p - n3^p of the order-p interaction (p in {2, 4}).
std::int64_t interaction_phase(const FrequencyQuadruple& q, int p);

/// Psi_s = <n1>^{2s} - <n2>^{2s} + <n3>^{2s} - <n4>^{2s}.
double psi_symbol(const FrequencyQuadruple& q, double s);

struct IdentityFailure {
  char check;  // 'a'..'e'
  std::array<std::int64_t, 4> quadruple;
};

struct IdentityReport {
  int radius = 0;
  std::uint64_t quadruples_checked = 0;
  /// Failure counts for checks a..e.
  std::array<std::uint64_t, 5> failures_per_check{};
  /// Up to kMaxListedFailures examples, ordered by (n1, n2, n3).
  std::vector<IdentityFailure> failures;
  std::uint64_t total_failures() const;

  static constexpr std::size_t kMaxListedFailures = 64;
};

/// Exhaustive sweep of all zero-sum quadruples in the box |n_i| <= radius:
///   a  quadratic and factored Phi agree
///   b  quartic and factored Phi_4 agree
///   c  Phi = 0 iff n = n1 or n = n3
///   d  Phi_4 = 0 iff n = n1 or n = n3
///   e  |Phi_4| >= |Phi|
/// radius must lie in [0, 256].
IdentityReport verify_identities(int radius);

std::string to_json(const IdentityReport& report);

/// Case labels of the frequency-support classifier.
enum class SupportCase { HighPairMixed, HighPairAligned, ThreeHigh, NearlyEqual, Generic, Resonant };

/// Short label: "i", "ii", "iii", "iv", "generic", "resonant".
std::string to_string(SupportCase c);

/// a ~ b iff a/4 <= b <= 4a;  a >> b iff a > 16 b.
bool comparable(std::int64_t a, std::int64_t b);
bool dominates(std::int64_t a, std::int64_t b);

struct SupportClass {
  SupportCase which;
  std::int64_t phi;
  /// The size |Phi| is compared against in this case:
  ///   i    n1* |difference of the two low frequencies|
  ///   ii   (n1*)^2
  ///   iii  (n1*)^2
  ///   iv   n1*
  /// and 0 for generic or resonant quadruples.
  double comparison;
  /// |Phi| / comparison (0 when comparison is 0).
  double ratio;
  double psi;
};

/// Cases, with n = n4 and a ~ b, a >> b as above:
///   i    one of {n1, n3} ~ one of {n, n2}, both >> the remaining two
///   ii   |n| ~ |n2| >> |n1|, |n3|  or  |n1| ~ |n3| >> |n|, |n2|
///   iii  three mutually comparable moduli >> the fourth
///   iv   n1* >> |Phi|
SupportClass classify_support(const FrequencyQuadruple& q, double s);

}  // namespace nlslab
