#include "nlslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nlslab/errors.hpp"

namespace nlslab::fft {
namespace {

// FFTW plans are created once per length; planning is not thread-safe but
// fftw_execute_dft on an existing plan is.
struct Plan {
  explicit Plan(int n) {
    std::vector<complex> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, flags);
    bwd = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, flags);
  }
  ~Plan() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  fftw_plan fwd{};
  fftw_plan bwd{};
};

const Plan& plan_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Plan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  return *slot;
}

void run(std::span<const complex> in, std::span<complex> out, bool is_forward) {
  if (in.size() != out.size() || in.empty()) {
    throw DimensionError("fft: input and output lengths must match and be nonzero");
  }
  const Plan& p = plan_for(static_cast<int>(in.size()));
  // FFTW does not write to the input of an out-of-place c2c transform.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  if (in.data() == out.data()) {
    std::vector<complex> tmp(in.begin(), in.end());
    src = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_execute_dft(is_forward ? p.fwd : p.bwd, src, dst);
    return;
  }
  fftw_execute_dft(is_forward ? p.fwd : p.bwd, src, dst);
}

}  // namespace

void forward(std::span<const complex> in, std::span<complex> out) { run(in, out, true); }

void backward(std::span<const complex> in, std::span<complex> out) { run(in, out, false); }

}  // namespace nlslab::fft
