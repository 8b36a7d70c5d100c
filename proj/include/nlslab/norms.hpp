#pragma once

#include <string>
#include <vector>

#include "nlslab/dynamics.hpp"

namespace nlslab {

// Space-time norms on [t0, t1] x T.
//
// Spectra are stored in modulation coordinates: for mode n
//   F(n, sigma) = (1/sqrt(2 pi)) int e^{-i sigma t} w(t) a_n(t) dt,
// with a_n = e^{-i n^p t} u_n the interaction variable, so sigma = tau - n^p.
// The discrete transform is a zero-padded FFT of the samples; it satisfies
//   sum_m |F(n, sigma_m)|^2 dsigma = dt sum_k |w(t_k) a_n(t_k)|^2
// exactly.

enum class TaperKind { Eta0, Bump, Rect };

/// Time taper centred at `center`, vanishing for |t - center| > half_width.
struct Window {
  TaperKind kind = TaperKind::Bump;
  double center = 0.0;
  double half_width = 1.0;

  /// eta0(lambda (t - center)); support half-width 8 / (5 lambda).
  static Window eta0(double lambda, double center);
  static Window bump(double center, double half_width);
  static Window rect(double t0, double t1);

  double operator()(double t) const;
  double lo() const { return center - half_width; }
  double hi() const { return center + half_width; }
  /// Rough angular bandwidth of the taper's transform.
  double bandwidth() const;
};

/// How samples outside the trajectory are obtained.
enum class Extension { None, Free };

class SpaceTimeSpectrum {
 public:
  SpaceTimeSpectrum(std::vector<int> modes, double dsigma, std::vector<std::vector<complex>> data,
                    int dispersion_exponent, Window window = {});

  const std::vector<int>& modes() const noexcept { return modes_; }
  double dsigma() const noexcept { return dsigma_; }
  std::size_t length() const noexcept { return length_; }
  /// sigma_m for storage index m (natural order, zero frequency at length/2).
  double sigma(std::size_t m) const;
  /// Largest |sigma| on the grid.
  double sigma_max() const;
  complex at(std::size_t mode_index, std::size_t m) const { return data_[mode_index][m]; }
  const std::vector<complex>& row(std::size_t mode_index) const { return data_[mode_index]; }
  int dispersion_exponent() const noexcept { return p_; }
  const Window& window() const noexcept { return window_; }

  /// sum_n sum_m |F|^2 dsigma.
  double energy() const;
  /// Copy restricted to the modes of the dyadic block I_k.
  SpaceTimeSpectrum restrict_block(int k) const;
  /// Copy with F multiplied by g(sigma).
  template <typename G>
  SpaceTimeSpectrum weighted(G&& g) const {
    SpaceTimeSpectrum out = *this;
    for (auto& row : out.data_) {
      for (std::size_t m = 0; m < length_; ++m) row[m] *= g(sigma(m));
    }
    return out;
  }

 private:
  std::vector<int> modes_;
  double dsigma_;
  std::size_t length_;
  std::vector<std::vector<complex>> data_;
  int p_;
  Window window_;
};

/// Windowed transform of every mode (or of block I_k when k >= 0).
///
/// Guards the sampling: pi/dt >= n_max^p + 2^J with 2^J >= 4 (n_max^p + bandwidth),
/// n_max the largest mode kept; ResolutionError names the required dt.
/// With Extension::None the window must lie inside the trajectory's interval;
/// Extension::Free continues the trajectory by the free flow on both sides.
SpaceTimeSpectrum spacetime_transform(const Trajectory& traj, const Window& window, int k = -1,
                                      Extension ext = Extension::None, int pad_factor = 4);

/// Largest dt accepted by spacetime_transform for this band and window.
double max_transform_dt(int n_max, int dispersion_exponent, const Window& window);

/// (sum_n <n>^{2s} sum_m <sigma_m>^{2b} |F|^2 dsigma)^{1/2}.
double xsb_norm(const SpaceTimeSpectrum& sp, double s, double b);

struct XkNorm {
  double value = 0.0;
  /// Highest modulation bin fully inside the sigma grid.
  int j_max = 0;
  /// 2^{(j_max + 1) b} |(1 - eta0(2^{-j_max} sigma)) F|, the part beyond bin j_max.
  double tail = 0.0;
};

/// sum_j 2^{j b} |bin_j(sigma) F|_{l^2 L^2} over the modes of I_k; bin 0 is eta0.
XkNorm xk_norm(const SpaceTimeSpectrum& sp, int k, double b = 0.5);

/// |int |F(n, sigma)| dsigma|_{l^2_n} / |F|_{X_k}; 0 for the zero spectrum.
double xk1_ratio(const SpaceTimeSpectrum& sp, int k);

/// Fraction of energy weighted by eta0(2^{-j} sigma)^2.
double modulation_energy_fraction(const SpaceTimeSpectrum& sp, int j);

struct NormSpec {
  double s = -0.05;
  double b = 0.5;
  double alpha = 0.201;
  double T = 1.0;

  /// Non-empty when alpha leaves the small-alpha regime (alpha > 1).
  std::vector<std::string> warnings() const;
};

struct ShortTimeNorms {
  std::vector<int> k;
  std::vector<double> fk;
  std::vector<double> nk;
  double f_s_alpha = 0.0;
  double n_s_alpha = 0.0;
  double e_s = 0.0;
  double sup_hs = 0.0;
};

/// F_k = sup_{t_c} |eta0(lambda_k (t - t_c)) P_k u|_{X_k},  lambda_k = 2^{floor(alpha k)},
/// with t_c on a grid of spacing 1/(4 lambda_k) over the trajectory's interval and
/// free continuation outside it.  N_k applies the weight (sigma + i lambda_k)^{-1}
/// to the renormalized nonlinearity (|u|^2 - gamma mu) u.  F^{s,alpha},
/// N^{s,alpha} are the l^2 sums with weights 2^{sk}.
/// E^s(T)^2 = |P_0 u(0)|^2 + sum_{k>=1} sup_t 2^{2sk} |P_k u(t)|^2 over stored instants.
ShortTimeNorms short_time_norms(const Trajectory& traj, const NormSpec& spec,
                                int tc_refinement = 1);

/// E^s(T) alone.
double energy_norm(const Trajectory& traj, double s);

/// |u|_{L^p(T x I)} with normalized dx/(2 pi): exact trigonometric quadrature
/// in x, Simpson in t.
double lp_norm(const Trajectory& traj, int p);

/// S(t) phi sampled on [0, T].
Trajectory free_trajectory(const SpectralField& phi, double T, double dt,
                           const EquationSpec& spec = EquationSpec::wick());

struct StrichartzStats {
  int p = 4;
  std::vector<double> ratios;
  /// Frequency band length per sample (max n - min n + 1 of the data support).
  std::vector<int> band_lengths;
  std::size_t skipped = 0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double q90 = 0.0;
};

/// p = 4: |u|_{L^4} / |u|_{X^{0,3/8}} on the sample's interval (Rect window).
/// p = 6: |u|_{L^6} / |u(0)|_{L^2}.  Zero samples are skipped.
StrichartzStats strichartz_probe(const std::vector<Trajectory>& samples, int p);

struct EmbeddingRow {
  double xk1_ratio = 0.0;  // max over blocks k
  double hs_over_f = 0.0;  // sup_t |u(t)|_{H^s} / F^{s,alpha}
};

/// Constant of the discrete inequality |int |f| dsigma|_{l^2} <= C |f|_{X_k}.
inline constexpr double kXk1Constant = 1.7888543819998317;  // sqrt(16/5)

/// xk1_ratio of the single-mode plateau f = 1{eta0(sigma) >= threshold}.
/// Thresholds in [0.8, 0.95] reach about 0.91 kXk1Constant.
double xk1_plateau_ratio(double threshold, double dsigma = 1e-4);

std::vector<EmbeddingRow> embedding_probe(const std::vector<Trajectory>& corpus,
                                          const NormSpec& spec);

}  // namespace nlslab
