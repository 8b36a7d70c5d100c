#include "nlslab/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "nlslab/errors.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/quadrature.hpp"

namespace nlslab {

namespace {

constexpr double kPi = std::numbers::pi;

double bump(double r) { return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0; }

std::vector<int> block_modes(int K, int k) {
  std::vector<int> modes;
  for (int n = -K; n <= K; ++n) {
    if (k < 0 || in_dyadic_block(n, k)) modes.push_back(n);
  }
  return modes;
}

/// Transform of an interaction-frame trajectory.
SpaceTimeSpectrum transform_frame(const Trajectory& frame, const Window& w,
                                  const std::vector<int>& modes, Extension ext, int pad_factor,
                                  int p) {
  const double dt = frame.dt();
  if (!(dt > 0.0)) throw ParameterError("spacetime_transform: trajectory must run forward in time");
  if (pad_factor < 1) throw ParameterError("spacetime_transform: pad_factor must be >= 1");
  const double t0 = frame.times().front();
  const double t1 = frame.times().back();
  const double slack = 1e-9 * dt;
  if (ext == Extension::None && (w.lo() < t0 - slack || w.hi() > t1 + slack)) {
    std::ostringstream msg;
    msg << "spacetime_transform: window [" << w.lo() << ", " << w.hi()
        << "] leaves the trajectory interval [" << t0 << ", " << t1 << "]";
    throw ParameterError(msg.str());
  }
  const auto k_lo = static_cast<long long>(std::ceil((w.lo() - t0) / dt - 1e-9));
  const auto k_hi = static_cast<long long>(std::floor((w.hi() - t0) / dt + 1e-9));
  const long long count = k_hi - k_lo + 1;
  if (count < 8) {
    std::ostringstream msg;
    msg << "spacetime_transform: window of width " << 2 * w.half_width << " holds only " << count
        << " samples";
    throw ResolutionError(msg.str(), 2.0 * w.half_width / 8.0);
  }
  int n_max = 0;
  for (int n : modes) n_max = std::max(n_max, std::abs(n));
  const double dt_max = max_transform_dt(n_max, p, w);
  if (dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "spacetime_transform: dt = " << dt << " cannot resolve modulations up to n_max^p + 2^J"
        << " for n_max = " << n_max << "; need dt <= " << dt_max;
    throw ResolutionError(msg.str(), dt_max);
  }

  const auto L = std::bit_ceil(static_cast<std::size_t>(pad_factor) * static_cast<std::size_t>(count));
  const double dsigma = 2.0 * kPi / (static_cast<double>(L) * dt);
  const double t_first = t0 + static_cast<double>(k_lo) * dt;
  const long long last = static_cast<long long>(frame.size()) - 1;

  std::vector<double> taper(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) taper[i] = w(t_first + static_cast<double>(i) * dt);

  std::vector<std::vector<complex>> data(modes.size(), std::vector<complex>(L));
  std::vector<complex> signal(L), spectrum(L);
  const double scale = dt / std::sqrt(2.0 * kPi);
  for (std::size_t r = 0; r < modes.size(); ++r) {
    const int n = modes[r];
    std::fill(signal.begin(), signal.end(), complex{});
    for (long long i = 0; i < count; ++i) {
      const long long idx = std::clamp(k_lo + i, 0LL, last);
      signal[static_cast<std::size_t>(i)] = taper[i] * frame.state(static_cast<std::size_t>(idx))[n];
    }
    fft::forward(signal, spectrum);
    for (std::size_t m = 0; m < L; ++m) {
      const long long shifted = static_cast<long long>(m) - static_cast<long long>(L / 2);
      const double sigma = static_cast<double>(shifted) * dsigma;
      const std::size_t src = static_cast<std::size_t>((shifted + static_cast<long long>(L)) %
                                                       static_cast<long long>(L));
      data[r][m] = scale * std::polar(1.0, -sigma * t_first) * spectrum[src];
    }
  }
  return SpaceTimeSpectrum(modes, dsigma, std::move(data), p, w);
}

int top_bin(double sigma_max) {
  int j = 0;
  while (cutoff::kSupport * std::ldexp(1.0, j + 1) <= sigma_max) ++j;
  return j;
}


}  // namespace

Window Window::eta0(double lambda, double center) {
  if (!(lambda > 0.0)) throw ParameterError("Window::eta0: lambda must be positive");
  return {TaperKind::Eta0, center, cutoff::kSupport / lambda};
}

Window Window::bump(double center, double half_width) {
  if (!(half_width > 0.0)) throw ParameterError("Window::bump: half_width must be positive");
  return {TaperKind::Bump, center, half_width};
}

Window Window::rect(double t0, double t1) {
  if (!(t1 > t0)) throw ParameterError("Window::rect: empty interval");
  return {TaperKind::Rect, 0.5 * (t0 + t1), 0.5 * (t1 - t0)};
}

double Window::operator()(double t) const {
  const double r = (t - center) / half_width;
  switch (kind) {
    case TaperKind::Eta0: return cutoff::eta0(r * cutoff::kSupport);
    case TaperKind::Bump: return nlslab::bump(r);
    case TaperKind::Rect: return std::abs(r) <= 1.0 + 1e-12 ? 1.0 : 0.0;
  }
  return 0.0;
}

double Window::bandwidth() const {
  return kind == TaperKind::Eta0 ? cutoff::kSupport / half_width : 1.0 / half_width;
}

SpaceTimeSpectrum::SpaceTimeSpectrum(std::vector<int> modes, double dsigma,
                                     std::vector<std::vector<complex>> data,
                                     int dispersion_exponent, Window window)
    : modes_(std::move(modes)),
      dsigma_(dsigma),
      length_(data.empty() ? 0 : data.front().size()),
      data_(std::move(data)),
      p_(dispersion_exponent),
      window_(window) {
  if (modes_.size() != data_.size()) {
    throw DimensionError("SpaceTimeSpectrum: one row per mode required");
  }
  for (const auto& r : data_) {
    if (r.size() != length_) throw DimensionError("SpaceTimeSpectrum: ragged rows");
  }
  if (!(dsigma_ > 0.0)) throw ParameterError("SpaceTimeSpectrum: dsigma must be positive");
}

double SpaceTimeSpectrum::sigma(std::size_t m) const {
  return (static_cast<double>(m) - static_cast<double>(length_ / 2)) * dsigma_;
}

double SpaceTimeSpectrum::sigma_max() const { return static_cast<double>(length_ / 2) * dsigma_; }

double SpaceTimeSpectrum::energy() const {
  std::vector<double> rows;
  for (const auto& r : data_) {
    double acc = 0.0;
    for (const auto& v : r) acc += std::norm(v);
    rows.push_back(acc * dsigma_);
  }
  return pairwise_sum(rows);
}

SpaceTimeSpectrum SpaceTimeSpectrum::restrict_block(int k) const {
  std::vector<int> modes;
  std::vector<std::vector<complex>> data;
  for (std::size_t r = 0; r < modes_.size(); ++r) {
    if (in_dyadic_block(modes_[r], k)) {
      modes.push_back(modes_[r]);
      data.push_back(data_[r]);
    }
  }
  if (modes.empty()) return SpaceTimeSpectrum({0}, dsigma_, {std::vector<complex>(length_)}, p_, window_);
  return SpaceTimeSpectrum(std::move(modes), dsigma_, std::move(data), p_, window_);
}

double max_transform_dt(int n_max, int dispersion_exponent, const Window& window) {
  const double np = dispersion(n_max, dispersion_exponent);
  const double need = 4.0 * (np + window.bandwidth());
  const double top = std::exp2(std::max(0.0, std::ceil(std::log2(need))));
  return kPi / (np + top);
}

SpaceTimeSpectrum spacetime_transform(const Trajectory& traj, const Window& window, int k,
                                      Extension ext, int pad_factor) {
  const int p = traj.spec().dispersion_exponent();
  return transform_frame(interaction_frame(traj), window, block_modes(traj.grid().max_mode(), k),
                         ext, pad_factor, p);
}

double xsb_norm(const SpaceTimeSpectrum& sp, double s, double b) {
  std::vector<double> rows;
  for (std::size_t r = 0; r < sp.modes().size(); ++r) {
    double acc = 0.0;
    for (std::size_t m = 0; m < sp.length(); ++m) {
      acc += std::pow(1.0 + sp.sigma(m) * sp.sigma(m), b) * std::norm(sp.at(r, m));
    }
    rows.push_back(std::pow(1.0 + double(sp.modes()[r]) * sp.modes()[r], s) * acc * sp.dsigma());
  }
  return std::sqrt(pairwise_sum(rows));
}

XkNorm xk_norm(const SpaceTimeSpectrum& sp, int k, double b) {
  XkNorm out;
  out.j_max = top_bin(sp.sigma_max());
  std::vector<double> bins(static_cast<std::size_t>(out.j_max) + 1, 0.0);
  double tail = 0.0;
  for (std::size_t r = 0; r < sp.modes().size(); ++r) {
    if (!in_dyadic_block(sp.modes()[r], k)) continue;
    for (std::size_t m = 0; m < sp.length(); ++m) {
      const double a = std::norm(sp.at(r, m));
      if (a == 0.0) continue;
      const double sigma = sp.sigma(m);
      for (int j = 0; j <= out.j_max; ++j) {
        const double w = cutoff::bin(j, sigma);
        bins[static_cast<std::size_t>(j)] += w * w * a;
      }
      const double rest = 1.0 - cutoff::eta_leq(out.j_max, sigma);
      tail += rest * rest * a;
    }
  }
  for (int j = 0; j <= out.j_max; ++j) {
    out.value += std::exp2(j * b) * std::sqrt(bins[static_cast<std::size_t>(j)] * sp.dsigma());
  }
  out.tail = std::exp2((out.j_max + 1) * b) * std::sqrt(tail * sp.dsigma());
  return out;
}

double xk1_ratio(const SpaceTimeSpectrum& sp, int k) {
  double num = 0.0;
  for (std::size_t r = 0; r < sp.modes().size(); ++r) {
    if (!in_dyadic_block(sp.modes()[r], k)) continue;
    double l1 = 0.0;
    for (std::size_t m = 0; m < sp.length(); ++m) l1 += std::abs(sp.at(r, m));
    l1 *= sp.dsigma();
    num += l1 * l1;
  }
  const double den = xk_norm(sp, k, 0.5).value;
  return den > 0.0 ? std::sqrt(num) / den : 0.0;
}

double modulation_energy_fraction(const SpaceTimeSpectrum& sp, int j) {
  double inside = 0.0, total = 0.0;
  for (std::size_t r = 0; r < sp.modes().size(); ++r) {
    for (std::size_t m = 0; m < sp.length(); ++m) {
      const double a = std::norm(sp.at(r, m));
      const double w = cutoff::eta_leq(j, sp.sigma(m));
      inside += w * w * a;
      total += a;
    }
  }
  return total > 0.0 ? inside / total : 0.0;
}

std::vector<std::string> NormSpec::warnings() const {
  std::vector<std::string> w;
  if (alpha > 1.0) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " exceeds 1; windows shrink faster than the dyadic scale";
    w.push_back(msg.str());
  }
  return w;
}

double energy_norm(const Trajectory& traj, double s) {
  const int K = traj.grid().max_mode();
  const int kmax = dyadic_index(K);
  std::vector<double> sup(static_cast<std::size_t>(kmax) + 1, 0.0);
  std::size_t origin = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (std::abs(traj.times()[i]) < std::abs(traj.times()[origin])) origin = i;
    std::vector<double> block(sup.size(), 0.0);
    for (int n = -K; n <= K; ++n) block[static_cast<std::size_t>(dyadic_index(n))] += std::norm(traj.state(i)[n]);
    for (std::size_t k = 1; k < sup.size(); ++k) sup[k] = std::max(sup[k], block[k]);
  }
  double acc = std::norm(traj.state(origin)[0]);
  for (int k = 1; k <= kmax; ++k) acc += std::exp2(2.0 * s * k) * sup[static_cast<std::size_t>(k)];
  return std::sqrt(acc);
}

ShortTimeNorms short_time_norms(const Trajectory& traj, const NormSpec& spec, int tc_refinement) {
  if (tc_refinement < 1) throw ParameterError("short_time_norms: tc_refinement must be >= 1");
  if (!(traj.dt() > 0.0)) throw ParameterError("short_time_norms: trajectory must run forward");
  const int p = traj.spec().dispersion_exponent();
  const Trajectory frame = interaction_frame(traj);
  const Trajectory nl_frame = interaction_frame(nonlinearity_trajectory(traj));
  const int K = traj.grid().max_mode();
  const int kmax = dyadic_index(K);
  const double t0 = traj.times().front(), t1 = traj.times().back();

  ShortTimeNorms out;
  out.fk.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  out.nk.assign(out.fk.size(), 0.0);
  for (int k = 0; k <= kmax; ++k) out.k.push_back(k);

  // Exceptions may not leave an OpenMP region; the first one is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k <= kmax; ++k) {
    try {
    const double lambda = std::exp2(std::floor(spec.alpha * k));
    const double spacing = 1.0 / (4.0 * lambda * tc_refinement);
    const auto steps = static_cast<long long>(std::ceil((t1 - t0) / spacing - 1e-9));
    const auto modes = block_modes(K, k);
    double fk = 0.0, nk = 0.0;
    for (long long i = 0; i <= steps; ++i) {
      const double tc = std::min(t1, t0 + static_cast<double>(i) * spacing);
      const Window w = Window::eta0(lambda, tc);
      const auto sp = transform_frame(frame, w, modes, Extension::Free, 4, p);
      fk = std::max(fk, xk_norm(sp, k, spec.b).value);
      const auto sn = transform_frame(nl_frame, w, modes, Extension::Free, 4, p)
                          .weighted([lambda](double sigma) { return 1.0 / complex(sigma, lambda); });
      nk = std::max(nk, xk_norm(sn, k, spec.b).value);
    }
    out.fk[static_cast<std::size_t>(k)] = fk;
    out.nk[static_cast<std::size_t>(k)] = nk;
    } catch (...) {
#pragma omp critical(short_time_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  double fs = 0.0, ns = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    const double w = std::exp2(2.0 * spec.s * k);
    fs += w * out.fk[static_cast<std::size_t>(k)] * out.fk[static_cast<std::size_t>(k)];
    ns += w * out.nk[static_cast<std::size_t>(k)] * out.nk[static_cast<std::size_t>(k)];
  }
  out.f_s_alpha = std::sqrt(fs);
  out.n_s_alpha = std::sqrt(ns);
  out.e_s = energy_norm(traj, spec.s);
  for (const auto& u : traj.states()) out.sup_hs = std::max(out.sup_hs, sobolev_norm(u, spec.s));
  return out;
}

double lp_norm(const Trajectory& traj, int p) {
  if (p < 2 || p % 2 != 0) throw ParameterError("lp_norm: p must be an even integer >= 2");
  const int K = traj.grid().max_mode();
  const int points = p * K + 2;
  std::vector<double> slice(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto samples = to_physical(traj.state(i), points);
    std::vector<double> vals(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) vals[j] = std::pow(std::norm(samples[j]), p / 2);
    slice[i] = pairwise_sum(vals) / points;
  }
  return std::pow(std::abs(simpson(slice, traj.dt())), 1.0 / p);
}

Trajectory free_trajectory(const SpectralField& phi, double T, double dt, const EquationSpec& spec) {
  const double ratio = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (!(dt > 0.0) || steps == 0 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
    throw ParameterError("free_trajectory: T must be a positive multiple of dt");
  }
  std::vector<double> times;
  std::vector<SpectralField> states;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    times.push_back(t);
    states.push_back(free_evolve(phi, t, spec.dispersion_exponent()));
  }
  return Trajectory(std::move(times), std::move(states), spec);
}

StrichartzStats strichartz_probe(const std::vector<Trajectory>& samples, int p) {
  if (p != 4 && p != 6) throw ParameterError("strichartz_probe: p must be 4 or 6");
  StrichartzStats st;
  st.p = p;
  for (const auto& traj : samples) {
    const double m0 = mass(traj.front());
    if (m0 == 0.0) {
      ++st.skipped;
      continue;
    }
    double ratio = 0.0;
    if (p == 4) {
      const auto sp = spacetime_transform(traj, Window::rect(traj.times().front(), traj.times().back()));
      ratio = lp_norm(traj, 4) / xsb_norm(sp, 0.0, 3.0 / 8.0);
    } else {
      ratio = lp_norm(traj, 6) / std::sqrt(m0);
    }
    int lo = 0, hi = -1;
    const int K = traj.grid().max_mode();
    for (int n = -K; n <= K; ++n) {
      if (traj.front()[n] == complex{}) continue;
      if (hi < lo) lo = n;
      hi = n;
    }
    st.ratios.push_back(ratio);
    st.band_lengths.push_back(hi - lo + 1);
  }
  if (!st.ratios.empty()) {
    std::vector<double> sorted = st.ratios;
    std::sort(sorted.begin(), sorted.end());
    st.max = sorted.back();
    st.mean = pairwise_sum(sorted) / static_cast<double>(sorted.size());
    const auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(sorted.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      return i + 1 < sorted.size() ? sorted[i] * (1 - frac) + sorted[i + 1] * frac : sorted[i];
    };
    st.median = quantile(0.5);
    st.q90 = quantile(0.9);
  }
  return st;
}

double xk1_plateau_ratio(double threshold, double dsigma) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ParameterError("xk1_plateau_ratio: threshold must lie in (0, 1]");
  }
  // sigma range [-8, 8) keeps bins 0..2 fully on the grid.
  const auto length = 2 * static_cast<std::size_t>(std::ceil(8.0 / dsigma));
  std::vector<complex> row(length);
  const double mid = static_cast<double>(length / 2);
  for (std::size_t m = 0; m < length; ++m) {
    if (cutoff::eta0((static_cast<double>(m) - mid) * dsigma) >= threshold) row[m] = 1.0;
  }
  return xk1_ratio(SpaceTimeSpectrum({0}, dsigma, {std::move(row)}, 2), 0);
}

std::vector<EmbeddingRow> embedding_probe(const std::vector<Trajectory>& corpus, const NormSpec& spec) {
  std::vector<EmbeddingRow> rows;
  for (const auto& traj : corpus) {
    EmbeddingRow row;
    const auto stn = short_time_norms(traj, spec);
    if (stn.f_s_alpha > 0.0) row.hs_over_f = stn.sup_hs / stn.f_s_alpha;
    const Trajectory frame = interaction_frame(traj);
    const double mid = 0.5 * (traj.times().front() + traj.times().back());
    const int K = traj.grid().max_mode();
    for (int k = 0; k <= dyadic_index(K); ++k) {
      const double lambda = std::exp2(std::floor(spec.alpha * k));
      const auto sp = transform_frame(frame, Window::eta0(lambda, mid), block_modes(K, k),
                                      Extension::Free, 4, traj.spec().dispersion_exponent());
      row.xk1_ratio = std::max(row.xk1_ratio, xk1_ratio(sp, k));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nlslab
