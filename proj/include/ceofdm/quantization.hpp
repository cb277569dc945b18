#pragma once

#include <cmath>
#include <vector>

#include "ceofdm/correlation.hpp"
#include "ceofdm/waveform.hpp"

namespace ceofdm {

/// Wraps to (-π, π].
inline double wrap_phase(double x) {
  double w = std::remainder(x, kTwoPi<double>);
  if (w <= -kPi<double>) w += kTwoPi<double>;
  return w;
}

/// Nearest point of {2πm/M}, anchored at zero phase. Exact midpoints go to
/// the smaller m. The continuous alphabet returns phi unchanged.
template <typename Derived>
VectorX<typename Derived::Scalar> quantize_psk(const Eigen::MatrixBase<Derived>& phi, PskOrder alphabet) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> out = phi;
  if (alphabet.is_continuous()) return out;
  const int M = alphabet.order();
  const double spacing = kTwoPi<double> / M;
  for (Index l = 0; l < out.size(); ++l) {
    double w = std::fmod(static_cast<double>(phi[l]), kTwoPi<double>);
    if (w < 0.0) w += kTwoPi<double>;
    long m = static_cast<long>(std::ceil(w / spacing - 0.5));
    if (m >= M) m -= M;
    out[l] = static_cast<Scalar>(kTwoPi<double> * static_cast<double>(m) / M);
  }
  return out;
}

struct QuantizationRecord {
  PskOrder alphabet = PskOrder::continuous();
  double max_phase_error = 0.0;  // radians, max_ℓ |wrap(φ_q - φ)|
  double gisl_db_before = 0.0;
  double gisl_db_after = 0.0;
  double pslr_db_before = 0.0;
  double pslr_db_after = 0.0;

  double gisl_degradation_db() const { return gisl_db_after - gisl_db_before; }
  double pslr_degradation_db() const { return pslr_db_after - pslr_db_before; }
};

struct QuantizationReport {
  std::vector<QuantizationRecord> records;
};

/// Quantizes phi_opt to each alphabet, resynthesizes, and rescores over the
/// same frozen weights. PSLR is the peak over the sidelobe-weight support.
template <typename Derived>
QuantizationReport degradation_sweep(const Eigen::MatrixBase<Derived>& phi_opt, const WaveformConfig& cfg,
                                     const GislWeights<typename Derived::Scalar>& w, int p,
                                     const std::vector<PskOrder>& alphabets) {
  using Scalar = typename Derived::Scalar;
  const BasisMatrices<Scalar> basis = make_basis<Scalar>(cfg);
  Fft<Scalar> fft(2 * cfg.sample_count() - 1);

  const CorrelationResult<Scalar> base = compute_acf(synthesize(phi_opt, cfg, basis), fft);
  const double gisl_before = to_db(compute_gisl(base, w, p));
  const double pslr_before = compute_pslr(base, w);

  QuantizationReport report;
  for (const PskOrder& alphabet : alphabets) {
    const VectorX<Scalar> phi_q = quantize_psk(phi_opt, alphabet);
    QuantizationRecord rec;
    rec.alphabet = alphabet;
    for (Index l = 0; l < phi_q.size(); ++l) {
      rec.max_phase_error = std::max(rec.max_phase_error,
                                     std::abs(wrap_phase(static_cast<double>(phi_q[l] - phi_opt[l]))));
    }
    const CorrelationResult<Scalar> acf = compute_acf(synthesize(phi_q, cfg, basis), fft);
    rec.gisl_db_before = gisl_before;
    rec.pslr_db_before = pslr_before;
    rec.gisl_db_after = to_db(compute_gisl(acf, w, p));
    rec.pslr_db_after = compute_pslr(acf, w);
    report.records.push_back(rec);
  }
  return report;
}

}  // namespace ceofdm
