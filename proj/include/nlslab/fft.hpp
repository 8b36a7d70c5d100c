#pragma once

#include <complex>
#include <span>

namespace nlslab::fft {

using complex = std::complex<double>;

/// Unnormalized forward DFT: out[k] = sum_j in[j] e^{-2 pi i jk/n}.
void forward(std::span<const complex> in, std::span<complex> out);

/// Unnormalized backward DFT: out[j] = sum_k in[k] e^{+2 pi i jk/n}.
void backward(std::span<const complex> in, std::span<complex> out);

}  // namespace nlslab::fft
