#pragma once

#include <span>
#include <vector>

namespace nlslab {

/// Composite Simpson rule on uniformly spaced samples.
///
/// An odd number of intervals is closed with the Simpson 3/8 rule on the last
/// three intervals; two samples fall back to the trapezoid rule.
template <typename T>
T simpson(std::span<const T> values, double h) {
  const std::size_t n = values.size();
  if (n < 2) return T{};
  if (n == 2) return 0.5 * h * (values[0] + values[1]);
  const std::size_t intervals = n - 1;
  std::size_t even_end = intervals % 2 == 0 ? intervals : intervals - 3;
  T acc{};
  if (even_end >= 2) {
    T inner{};
    for (std::size_t i = 1; i < even_end; ++i) inner += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
    acc = (h / 3.0) * (values[0] + inner + values[even_end]);
  } else {
    even_end = 0;
  }
  if (even_end != intervals) {
    const std::size_t a = even_end;
    acc += (3.0 * h / 8.0) *
           (values[a] + 3.0 * values[a + 1] + 3.0 * values[a + 2] + values[a + 3]);
  }
  return acc;
}

template <typename T>
T simpson(const std::vector<T>& values, double h) {
  return simpson(std::span<const T>(values), h);
}

/// Running composite integral: entry i approximates the integral over [t_0, t_i].
/// Even i use Simpson; odd i use Simpson on [t_0, t_{i-3}] plus a 3/8 tail.
template <typename T>
std::vector<T> cumulative_simpson(std::span<const T> values, double h) {
  std::vector<T> out(values.size(), T{});
  for (std::size_t i = 1; i < values.size(); ++i) out[i] = simpson(values.first(i + 1), h);
  return out;
}

/// Pairwise (tree) summation: deterministic and order-independent of threading.
template <typename T>
T pairwise_sum(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T acc{};
    for (const auto& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

}  // namespace nlslab
