#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "ceofdm/types.hpp"

namespace ceofdm {

/// Modulation index giving a CE-OFDM waveform with L subcarriers the same RMS
/// bandwidth as an LFM chirp with time-bandwidth product `tbp`.
inline double compute_modulation_index(double tbp, int L) {
  if (L < 1) throw std::domain_error("compute_modulation_index: L must be >= 1");
  if (!(tbp >= 0.0)) throw std::domain_error("compute_modulation_index: tbp must be >= 0");
  const double l = L;
  return tbp / (kTwoPi<double> * std::sqrt(2.0 * l * l * l + 3.0 * l * l + l));
}

/// Inverse of compute_modulation_index.
inline double implied_time_bandwidth(double h, int L) {
  const double l = L;
  return h * kTwoPi<double> * std::sqrt(2.0 * l * l * l + 3.0 * l * l + l);
}

/// Signal-model parameters. Either `h` alone or `tbp` (with `h` set from it)
/// determines the bandwidth; `samples` pins M directly and overrides the
/// oversampling rule fs = oversample * Δf.
struct WaveformConfig {
  int L = 24;
  double h = 0.0;
  double T = 1.0;
  double oversample = 5.0;
  std::optional<double> tbp;
  std::optional<Index> samples;

  static WaveformConfig from_tbp(int L, double tbp, double oversample = 5.0, double T = 1.0) {
    WaveformConfig cfg;
    cfg.L = L;
    cfg.h = compute_modulation_index(tbp, L);
    cfg.T = T;
    cfg.oversample = oversample;
    cfg.tbp = tbp;
    return cfg;
  }

  static WaveformConfig with_samples(int L, double h, Index M, double T = 1.0) {
    WaveformConfig cfg;
    cfg.L = L;
    cfg.h = h;
    cfg.T = T;
    cfg.samples = M;
    return cfg;
  }

  /// Δf in Hz. Derived from tbp when present, otherwise from h via the
  /// modulation-index relation.
  double bandwidth() const {
    const double product = tbp ? *tbp : implied_time_bandwidth(h, L);
    return product / T;
  }

  Index sample_count() const {
    if (samples) return *samples;
    return static_cast<Index>(std::llround(oversample * bandwidth() * T));
  }

  double sample_rate() const {
    if (samples) return static_cast<double>(*samples) / T;
    return oversample * bandwidth();
  }

  void validate() const {
    if (L < 1) throw std::domain_error("WaveformConfig: L must be >= 1");
    if (!(T > 0.0)) throw std::domain_error("WaveformConfig: T must be > 0");
    if (!(h >= 0.0) || !std::isfinite(h)) throw std::domain_error("WaveformConfig: h must be finite and >= 0");
    if (!(oversample > 0.0)) throw std::domain_error("WaveformConfig: oversample must be > 0");
    if (tbp) {
      const double expected = compute_modulation_index(*tbp, L);
      if (std::abs(h - expected) > 1e-9 * expected) {
        throw std::domain_error("WaveformConfig: h is inconsistent with tbp (expected " +
                                std::to_string(expected) + ")");
      }
    }
    const Index M = sample_count();
    if (M < 2 * static_cast<Index>(L) + 1) {
      throw std::domain_error("WaveformConfig: sample count M=" + std::to_string(M) +
                              " is below 2L+1; raise tbp, oversample or samples");
    }
  }
};

/// Sampled harmonics cos(2πℓt/T) and sin(2πℓt/T), ℓ = 1..L, on t_m = m/fs.
template <typename Scalar>
struct BasisMatrices {
  MatrixX<Scalar> cos_harmonics;  // M x L
  MatrixX<Scalar> sin_harmonics;  // M x L

  Index rows() const { return cos_harmonics.rows(); }
  Index cols() const { return cos_harmonics.cols(); }
};

template <typename Scalar = double>
VectorX<Scalar> sample_times(const WaveformConfig& cfg) {
  const Index M = cfg.sample_count();
  const double fs = cfg.sample_rate();
  VectorX<Scalar> t(M);
  for (Index m = 0; m < M; ++m) t[m] = static_cast<Scalar>(static_cast<double>(m) / fs);
  return t;
}

template <typename Scalar = double>
BasisMatrices<Scalar> make_basis(const WaveformConfig& cfg) {
  cfg.validate();
  const Index M = cfg.sample_count();
  const double fs = cfg.sample_rate();
  BasisMatrices<Scalar> basis{MatrixX<Scalar>(M, cfg.L), MatrixX<Scalar>(M, cfg.L)};
  for (int l = 1; l <= cfg.L; ++l) {
    for (Index m = 0; m < M; ++m) {
      const double arg = kTwoPi<double> * l * (static_cast<double>(m) / fs) / cfg.T;
      basis.cos_harmonics(m, l - 1) = static_cast<Scalar>(std::cos(arg));
      basis.sin_harmonics(m, l - 1) = static_cast<Scalar>(std::sin(arg));
    }
  }
  return basis;
}

namespace detail {
template <typename Derived>
void check_phase_length(const Eigen::MatrixBase<Derived>& phi, int L) {
  if (phi.size() != L) {
    throw std::invalid_argument("phase code length " + std::to_string(phi.size()) +
                                " does not match L=" + std::to_string(L));
  }
}
}  // namespace detail

/// φ(t_m) = 2πh Σ_ℓ cos(2πℓt_m/T + φ_ℓ), evaluated term by term.
template <typename Derived>
VectorX<typename Derived::Scalar> sample_phase(const Eigen::MatrixBase<Derived>& phi,
                                               const WaveformConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  cfg.validate();
  detail::check_phase_length(phi, cfg.L);
  const Index M = cfg.sample_count();
  const double fs = cfg.sample_rate();
  const double scale = kTwoPi<double> * cfg.h;
  VectorX<Scalar> out(M);
  for (Index m = 0; m < M; ++m) {
    const double t = static_cast<double>(m) / fs;
    double acc = 0.0;
    for (int l = 1; l <= cfg.L; ++l) {
      acc += std::cos(kTwoPi<double> * l * t / cfg.T + static_cast<double>(phi[l - 1]));
    }
    out[m] = static_cast<Scalar>(scale * acc);
  }
  return out;
}

/// Same phase function in real Fourier-series form,
/// 2πh (B_c cos φ - B_s sin φ), using precomputed harmonics.
template <typename Derived>
VectorX<typename Derived::Scalar> sample_phase(
    const Eigen::MatrixBase<Derived>& phi, const WaveformConfig& cfg,
    const BasisMatrices<typename Derived::Scalar>& basis) {
  using Scalar = typename Derived::Scalar;
  detail::check_phase_length(phi, cfg.L);
  const Scalar scale = static_cast<Scalar>(kTwoPi<double> * cfg.h);
  return scale * (basis.cos_harmonics * phi.array().cos().matrix() -
                  basis.sin_harmonics * phi.array().sin().matrix());
}

/// Instantaneous frequency in Hz, (1/2π) dφ/dt.
template <typename Derived>
VectorX<typename Derived::Scalar> sample_frequency(const Eigen::MatrixBase<Derived>& phi,
                                                   const WaveformConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  cfg.validate();
  detail::check_phase_length(phi, cfg.L);
  const Index M = cfg.sample_count();
  const double fs = cfg.sample_rate();
  const double scale = -kTwoPi<double> * cfg.h / cfg.T;
  VectorX<Scalar> out(M);
  for (Index m = 0; m < M; ++m) {
    const double t = static_cast<double>(m) / fs;
    double acc = 0.0;
    for (int l = 1; l <= cfg.L; ++l) {
      acc += l * std::sin(kTwoPi<double> * l * t / cfg.T + static_cast<double>(phi[l - 1]));
    }
    out[m] = static_cast<Scalar>(scale * acc);
  }
  return out;
}

/// Unit-energy, constant-envelope samples e^{jφ(t_m)}/√M.
template <typename Scalar>
struct SampledWaveform {
  CVectorX<Scalar> samples;
  VectorX<Scalar> t;
  double fs = 0.0;

  Index size() const { return samples.size(); }

  /// Zero-padded copy of length 2M-1.
  CVectorX<Scalar> padded() const {
    const Index M = samples.size();
    CVectorX<Scalar> out = CVectorX<Scalar>::Zero(2 * M - 1);
    out.head(M) = samples;
    return out;
  }
};

template <typename Scalar, typename Derived>
SampledWaveform<Scalar> waveform_from_phase(const Eigen::MatrixBase<Derived>& phase, double fs) {
  const Index M = phase.size();
  const Scalar amplitude = Scalar(1) / std::sqrt(static_cast<Scalar>(M));
  SampledWaveform<Scalar> s;
  s.samples.resize(M);
  s.t.resize(M);
  for (Index m = 0; m < M; ++m) {
    s.samples[m] = std::polar(amplitude, static_cast<Scalar>(phase[m]));
    s.t[m] = static_cast<Scalar>(static_cast<double>(m) / fs);
  }
  s.fs = fs;
  return s;
}

template <typename Derived>
SampledWaveform<typename Derived::Scalar> synthesize(
    const Eigen::MatrixBase<Derived>& phi, const WaveformConfig& cfg,
    const BasisMatrices<typename Derived::Scalar>& basis) {
  using Scalar = typename Derived::Scalar;
  return waveform_from_phase<Scalar>(sample_phase(phi, cfg, basis), cfg.sample_rate());
}

template <typename Derived>
SampledWaveform<typename Derived::Scalar> synthesize(const Eigen::MatrixBase<Derived>& phi,
                                                     const WaveformConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  return synthesize(phi, cfg, make_basis<Scalar>(cfg));
}

/// PSK alphabet size; either a finite M >= 2 or the continuum.
class PskOrder {
 public:
  explicit PskOrder(int order) : order_(order) {
    if (order < 2) throw std::domain_error("PSK order must be >= 2 (got " + std::to_string(order) + ")");
  }
  static PskOrder continuous() { return PskOrder(); }

  bool is_continuous() const { return order_ == 0; }
  int order() const { return order_; }
  std::string to_string() const { return is_continuous() ? "inf" : std::to_string(order_); }

  friend bool operator==(const PskOrder&, const PskOrder&) = default;

 private:
  PskOrder() = default;
  int order_ = 0;
};

/// Pseudo-random PSK symbols, deterministic in `seed`.
template <typename Scalar = double>
VectorX<Scalar> random_psk(int L, PskOrder alphabet, std::uint64_t seed) {
  if (L < 1) throw std::domain_error("random_psk: L must be >= 1");
  std::mt19937_64 rng(seed);
  VectorX<Scalar> phi(L);
  if (alphabet.is_continuous()) {
    std::uniform_real_distribution<double> dist(0.0, kTwoPi<double>);
    for (int l = 0; l < L; ++l) phi[l] = static_cast<Scalar>(dist(rng));
  } else {
    const int M = alphabet.order();
    std::uniform_int_distribution<int> dist(0, M - 1);
    for (int l = 0; l < L; ++l) {
      phi[l] = static_cast<Scalar>(kTwoPi<double> * dist(rng) / M);
    }
  }
  return phi;
}

}  // namespace ceofdm
