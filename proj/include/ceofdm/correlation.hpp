#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ceofdm/fft.hpp"
#include "ceofdm/waveform.hpp"

namespace ceofdm {

/// Sampled autocorrelation R(τ_k) = Σ_m s[m] s*[m+k] for k = -(M-1)..M-1,
/// stored so that index M-1 is zero delay.
template <typename Scalar>
struct CorrelationResult {
  CVectorX<Scalar> r;
  double fs = 0.0;

  Index zero_index() const { return (r.size() - 1) / 2; }
  Index max_lag() const { return zero_index(); }
  std::complex<Scalar> at_lag(Index lag) const { return r[zero_index() + lag]; }

  VectorX<Scalar> magnitude() const { return r.cwiseAbs(); }
};

inline double to_db(double power_ratio) {
  return power_ratio > 0.0 ? 10.0 * std::log10(power_ratio) : kNegInfDb;
}

namespace detail {

// Reorders the circular correlation raw[j] = Σ_m x[m+j] y*[m] (length 2M-1)
// into a centered lag vector holding Σ_m x[m] y*[m+k].
template <typename Scalar>
CVectorX<Scalar> center_lags(const CVectorX<Scalar>& raw) {
  const Index N = raw.size();
  const Index zero = (N - 1) / 2;
  CVectorX<Scalar> out(N);
  for (Index k = -zero; k <= zero; ++k) out[zero + k] = raw[((-k) % N + N) % N];
  return out;
}

}  // namespace detail

/// ACF via a (2M-1)-point DFT: r = IDFT(|DFT(s̄)|²), then centered.
template <typename Scalar>
CorrelationResult<Scalar> compute_acf(const SampledWaveform<Scalar>& s, Fft<Scalar>& fft) {
  const Index N = 2 * s.size() - 1;
  if (fft.size() != N) throw std::invalid_argument("compute_acf: FFT size must be 2M-1");
  CVectorX<Scalar> spectrum;
  fft.forward(s.padded(), spectrum);
  CVectorX<Scalar> power = spectrum.cwiseAbs2().template cast<std::complex<Scalar>>();
  CVectorX<Scalar> raw;
  fft.inverse(power, raw);
  return {detail::center_lags(raw), s.fs};
}

template <typename Scalar>
CorrelationResult<Scalar> compute_acf(const SampledWaveform<Scalar>& s) {
  Fft<Scalar> fft(2 * s.size() - 1);
  return compute_acf(s, fft);
}

template <typename Scalar>
struct AmbiguitySurface {
  VectorX<Scalar> delay;    // seconds, length 2M-1
  VectorX<Scalar> doppler;  // Hz
  MatrixX<Scalar> magnitude;  // doppler x delay, |χ(τ, ν)|
};

/// Narrowband ambiguity magnitude |χ(τ_k, ν_n)| on the full delay axis.
/// Each row is the cross-correlation of the Doppler-shifted waveform
/// s[m] e^{j2πν t_m} against s; the ν = 0 row is exactly compute_acf.
template <typename Scalar, typename DopplerDerived>
AmbiguitySurface<Scalar> compute_af(const SampledWaveform<Scalar>& s,
                                    const Eigen::MatrixBase<DopplerDerived>& doppler_hz) {
  const Index M = s.size();
  const Index N = 2 * M - 1;
  for (Index n = 0; n < doppler_hz.size(); ++n) {
    if (!std::isfinite(static_cast<double>(doppler_hz[n]))) {
      throw std::invalid_argument("compute_af: Doppler grid must be finite");
    }
  }

  AmbiguitySurface<Scalar> out;
  out.delay.resize(N);
  for (Index k = 0; k < N; ++k) out.delay[k] = static_cast<Scalar>(static_cast<double>(k - (M - 1)) / s.fs);
  out.doppler = doppler_hz.template cast<Scalar>();
  out.magnitude.resize(doppler_hz.size(), N);

  Fft<Scalar> fft(N);
  CVectorX<Scalar> reference;
  fft.forward(s.padded(), reference);
  CVectorX<Scalar> shifted = CVectorX<Scalar>::Zero(N);
  CVectorX<Scalar> shifted_spectrum;
  CVectorX<Scalar> raw;

  for (Index n = 0; n < doppler_hz.size(); ++n) {
    const double nu = static_cast<double>(doppler_hz[n]);
    if (nu == 0.0) {
      out.magnitude.row(n) = compute_acf(s, fft).magnitude().transpose();
      continue;
    }
    for (Index m = 0; m < M; ++m) {
      const double arg = kTwoPi<double> * nu * static_cast<double>(m) / s.fs;
      shifted[m] = s.samples[m] * std::polar(Scalar(1), static_cast<Scalar>(arg));
    }
    fft.forward(shifted, shifted_spectrum);
    CVectorX<Scalar> product = shifted_spectrum.cwiseProduct(reference.conjugate());
    fft.inverse(product, raw);
    out.magnitude.row(n) = detail::center_lags(raw).cwiseAbs().transpose();
  }
  return out;
}

/// First local minimum of |r| moving outward from zero delay. The last lag
/// counts as a minimum when |r| is non-increasing into it.
template <typename Scalar>
Index detect_mainlobe_null(const CorrelationResult<Scalar>& acf) {
  const Index zero = acf.zero_index();
  const VectorX<Scalar> mag = acf.magnitude();
  for (Index k = 1; k <= zero; ++k) {
    const Scalar here = mag[zero + k];
    if (here > mag[zero + k - 1]) continue;
    if (k == zero || here <= mag[zero + k + 1]) return k;
  }
  throw std::runtime_error("detect_mainlobe_null: no null found");
}

/// Closed delay interval |τ| ∈ [lo, hi] in units of T. With `from_null`
/// the lower edge is the first sample past the mainlobe null.
struct DelayInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool from_null = true;
};

/// Sidelobe region Ω_τ as a union of delay-magnitude intervals.
struct DelayRegion {
  std::vector<DelayInterval> intervals;

  /// Every delay outside the mainlobe.
  static DelayRegion full() { return {{DelayInterval{0.0, 1.0, true}}}; }
  /// Δτ <= |τ| <= hi·T.
  static DelayRegion up_to(double hi) { return {{DelayInterval{0.0, hi, true}}}; }
  static DelayRegion interval(double lo, double hi) { return {{DelayInterval{lo, hi, false}}}; }

  std::string describe() const {
    std::string out;
    for (const auto& iv : intervals) {
      if (!out.empty()) out += " U ";
      out += "[" + (iv.from_null ? std::string("null") : std::to_string(iv.lo)) + ", " +
             std::to_string(iv.hi) + "]";
    }
    return out;
  }
};

/// Binary mainlobe/sidelobe selectors over the centered lag axis.
template <typename Scalar>
struct GislWeights {
  VectorX<Scalar> sidelobe;
  VectorX<Scalar> mainlobe;
  Index null_index = 0;
  DelayRegion region;

  Index zero_index() const { return (sidelobe.size() - 1) / 2; }

  bool is_symmetric() const {
    const Index zero = zero_index();
    for (Index k = 1; k <= zero; ++k) {
      if (sidelobe[zero + k] != sidelobe[zero - k] || mainlobe[zero + k] != mainlobe[zero - k]) return false;
    }
    return true;
  }

  Index sidelobe_support() const { return (sidelobe.array() != Scalar(0)).count(); }
};

/// `samples_per_period` is fs·T, converting region bounds to lags.
template <typename Scalar = double>
GislWeights<Scalar> build_weights(Index null_index, const DelayRegion& region, Index M,
                                  double samples_per_period) {
  if (M < 2) throw std::invalid_argument("build_weights: M must be >= 2");
  if (null_index < 1 || null_index > M - 1) throw std::invalid_argument("build_weights: null index out of range");
  if (region.intervals.empty()) throw std::invalid_argument("build_weights: empty sidelobe region");
  constexpr double kEdgeTol = 1e-9;
  for (const auto& iv : region.intervals) {
    if (!(iv.hi >= 0.0) || (!iv.from_null && !(iv.lo <= iv.hi))) {
      throw std::invalid_argument("build_weights: malformed interval " + region.describe());
    }
    if (!iv.from_null && iv.lo * samples_per_period <= static_cast<double>(null_index) + kEdgeTol) {
      throw std::invalid_argument("build_weights: region " + region.describe() + " overlaps the mainlobe");
    }
  }

  const Index N = 2 * M - 1;
  const Index zero = M - 1;
  GislWeights<Scalar> w{VectorX<Scalar>::Zero(N), VectorX<Scalar>::Zero(N), null_index, region};
  for (Index k = 0; k <= zero; ++k) {
    Scalar sl = 0;
    Scalar ml = 0;
    if (k <= null_index) {
      ml = 1;
    } else {
      const double lag = static_cast<double>(k);
      for (const auto& iv : region.intervals) {
        const double lo = iv.from_null ? 0.0 : iv.lo * samples_per_period - kEdgeTol;
        if (lag >= lo && lag <= iv.hi * samples_per_period + kEdgeTol) sl = 1;
      }
    }
    w.mainlobe[zero + k] = w.mainlobe[zero - k] = ml;
    w.sidelobe[zero + k] = w.sidelobe[zero - k] = sl;
  }
  return w;
}

template <typename Scalar = double>
GislWeights<Scalar> build_weights(Index null_index, const DelayRegion& region, const WaveformConfig& cfg) {
  return build_weights<Scalar>(null_index, region, cfg.sample_count(), cfg.sample_rate() * cfg.T);
}

namespace detail {

inline void check_norm_order(int p) {
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("GISL order p must be an even integer >= 2");
}

template <typename Scalar>
void check_weight_shape(const CorrelationResult<Scalar>& acf, const GislWeights<Scalar>& w) {
  if (w.sidelobe.size() != acf.r.size() || w.mainlobe.size() != acf.r.size()) {
    throw std::invalid_argument("weights and ACF lengths differ");
  }
}

inline double floored_power(double magnitude, int p) {
  return std::pow(std::max(magnitude, kMagnitudeFloor), p);
}

}  // namespace detail

/// J_p = (w_SLᵀ|r|^p / w_MLᵀ|r|^p)^(2/p), a power ratio (use to_db for dB).
template <typename Scalar>
double compute_gisl(const CorrelationResult<Scalar>& acf, const GislWeights<Scalar>& w, int p) {
  detail::check_norm_order(p);
  detail::check_weight_shape(acf, w);
  double sidelobe = 0.0;
  double mainlobe = 0.0;
  for (Index k = 0; k < acf.r.size(); ++k) {
    const double ws = static_cast<double>(w.sidelobe[k]);
    const double wm = static_cast<double>(w.mainlobe[k]);
    if (ws == 0.0 && wm == 0.0) continue;
    const double power = detail::floored_power(std::abs(std::complex<double>(acf.r[k])), p);
    sidelobe += ws * power;
    mainlobe += wm * power;
  }
  if (mainlobe == 0.0) throw std::invalid_argument("compute_gisl: mainlobe weights are empty");
  return std::pow(sidelobe / mainlobe, 2.0 / p);
}

/// Integrated sidelobe level: sidelobe energy over mainlobe energy.
template <typename Scalar>
double compute_isl(const CorrelationResult<Scalar>& acf, const GislWeights<Scalar>& w) {
  detail::check_weight_shape(acf, w);
  double sidelobe = 0.0;
  double mainlobe = 0.0;
  for (Index k = 0; k < acf.r.size(); ++k) {
    const double power = std::norm(std::complex<double>(acf.r[k]));
    sidelobe += static_cast<double>(w.sidelobe[k]) * power;
    mainlobe += static_cast<double>(w.mainlobe[k]) * power;
  }
  if (mainlobe == 0.0) throw std::invalid_argument("compute_isl: mainlobe weights are empty");
  return sidelobe / mainlobe;
}

/// Peak sidelobe level in dB over all |k| > null_index. kNegInfDb when no
/// lag lies beyond the null.
template <typename Scalar>
double compute_pslr(const CorrelationResult<Scalar>& acf, Index null_index) {
  const Index zero = acf.zero_index();
  double peak = 0.0;
  for (Index k = null_index + 1; k <= zero; ++k) {
    peak = std::max({peak, std::norm(std::complex<double>(acf.r[zero + k])),
                     std::norm(std::complex<double>(acf.r[zero - k]))});
  }
  return to_db(peak);
}

/// Peak sidelobe level in dB restricted to the sidelobe-weight support.
template <typename Scalar>
double compute_pslr(const CorrelationResult<Scalar>& acf, const GislWeights<Scalar>& w) {
  detail::check_weight_shape(acf, w);
  double peak = 0.0;
  for (Index k = 0; k < acf.r.size(); ++k) {
    if (w.sidelobe[k] != Scalar(0)) peak = std::max(peak, std::norm(std::complex<double>(acf.r[k])));
  }
  return to_db(peak);
}

}  // namespace ceofdm
