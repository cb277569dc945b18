#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "ceofdm/correlation.hpp"
#include "ceofdm/fft.hpp"
#include "ceofdm/waveform.hpp"

namespace ceofdm {

/// Zero-padded chain-rule matrix D̄ ((2M-1) x L). Column ℓ is
/// ∂φ(t)/∂φ_ℓ / (2πh) = -b_c,ℓ sin φ_ℓ - b_s,ℓ cos φ_ℓ on the first M rows.
template <typename Derived>
MatrixX<typename Derived::Scalar> build_dbar(const Eigen::MatrixBase<Derived>& phi,
                                             const BasisMatrices<typename Derived::Scalar>& basis) {
  using Scalar = typename Derived::Scalar;
  const Index M = basis.rows();
  const Index L = basis.cols();
  if (phi.size() != L) throw std::invalid_argument("build_dbar: phase length does not match basis");
  MatrixX<Scalar> dbar = MatrixX<Scalar>::Zero(2 * M - 1, L);
  for (Index l = 0; l < L; ++l) {
    dbar.col(l).head(M) = -basis.cos_harmonics.col(l) * std::sin(phi[l]) -
                          basis.sin_harmonics.col(l) * std::cos(phi[l]);
  }
  return dbar;
}

struct GradientDiagnostics {
  // max|Im A u| / max|Re A u| for the vector whose real part is P; zero in
  // exact arithmetic when the weights are symmetric.
  double discarded_imag_ratio = 0.0;
};

/// Scratch state for repeated GISL cost and gradient evaluation on one
/// waveform configuration. Not shareable across threads.
template <typename Scalar>
class GradientWorkspace {
 public:
  explicit GradientWorkspace(const WaveformConfig& cfg)
      : cfg_(cfg),
        basis_(make_basis<Scalar>(cfg)),
        M_(cfg.sample_count()),
        N_(2 * M_ - 1),
        fft_(N_),
        padded_(CVectorX<Scalar>::Zero(N_)) {}

  const WaveformConfig& config() const { return cfg_; }
  const BasisMatrices<Scalar>& basis() const { return basis_; }
  Fft<Scalar>& fft() { return fft_; }
  const GradientDiagnostics& diagnostics() const { return diag_; }

  /// J_p at phi.
  template <typename Derived>
  double cost(const Eigen::MatrixBase<Derived>& phi, const GislWeights<Scalar>& w, int p) {
    prepare(phi, w, p);
    return cost_from_acf(w, p).value;
  }

  /// J_p at phi; writes ∇_φ J_p into grad.
  template <typename Derived>
  double gradient(const Eigen::MatrixBase<Derived>& phi, const GislWeights<Scalar>& w, int p,
                  VectorX<Scalar>& grad) {
    prepare(phi, w, p);
    if (!w.is_symmetric()) {
      throw std::invalid_argument("gisl_gradient: weights must be symmetric about zero delay");
    }
    const CostParts parts = cost_from_acf(w, p);
    if (parts.sidelobe == 0.0) {
      throw std::domain_error("gisl_gradient: sidelobe norm is zero; gradient undefined");
    }

    // u = |r|^{p-2} r ⊙ (w_SL / w_SLᵀ|r|^p - w_ML / w_MLᵀ|r|^p), in raw lag order.
    const Index zero = M_ - 1;
    for (Index j = 0; j < N_; ++j) {
      const Index lag = j <= zero ? j : j - N_;
      const double ws = static_cast<double>(w.sidelobe[zero + lag]);
      const double wm = static_cast<double>(w.mainlobe[zero + lag]);
      const std::complex<double> r(raw_acf_[j]);
      const double mag = std::abs(r);
      if ((ws == 0.0 && wm == 0.0) || mag < kMagnitudeFloor) {
        work_[j] = 0;
        continue;
      }
      const double coeff = std::pow(mag, p - 2) * (ws / parts.sidelobe - wm / parts.mainlobe);
      work_[j] = std::complex<Scalar>(r * coeff);
    }

    // P = Re{A u}
    fft_.forward(work_, transformed_);
    double max_re = 0.0;
    double max_im = 0.0;
    for (Index j = 0; j < N_; ++j) {
      max_re = std::max(max_re, std::abs(static_cast<double>(transformed_[j].real())));
      max_im = std::max(max_im, std::abs(static_cast<double>(transformed_[j].imag())));
      work_[j] = spectrum_[j] * transformed_[j].real();
    }
    diag_.discarded_imag_ratio = max_re > 0.0 ? max_im / max_re : 0.0;
    assert(diag_.discarded_imag_ratio < 1e-6 && "non-conjugate-symmetric GISL kernel");

    // Aᴴ[(A s̄) ⊙ P], then Im{s̄* ⊙ ·} on the unpadded support.
    fft_.inverse(work_, transformed_);
    VectorX<Scalar> g(M_);
    for (Index m = 0; m < M_; ++m) g[m] = (std::conj(padded_[m]) * transformed_[m]).imag();

    // D̄ᵀ g without forming D̄.
    const Scalar scale = static_cast<Scalar>(4.0 * parts.value * kTwoPi<double> * cfg_.h);
    grad = scale * (-(phi.array().sin() * (basis_.cos_harmonics.transpose() * g).array()) -
                    phi.array().cos() * (basis_.sin_harmonics.transpose() * g).array())
                       .matrix();
    return parts.value;
  }

 private:
  struct CostParts {
    double value;
    double sidelobe;
    double mainlobe;
  };

  template <typename Derived>
  void prepare(const Eigen::MatrixBase<Derived>& phi, const GislWeights<Scalar>& w, int p) {
    detail::check_norm_order(p);
    detail::check_phase_length(phi, cfg_.L);
    if (w.sidelobe.size() != N_ || w.mainlobe.size() != N_) {
      throw std::invalid_argument("gisl_gradient: weights length must be 2M-1");
    }
    const VectorX<Scalar> phase = sample_phase(phi, cfg_, basis_);
    const Scalar amplitude = Scalar(1) / std::sqrt(static_cast<Scalar>(M_));
    for (Index m = 0; m < M_; ++m) padded_[m] = std::polar(amplitude, phase[m]);
    fft_.forward(padded_, spectrum_);
    work_ = spectrum_.cwiseAbs2().template cast<std::complex<Scalar>>();
    fft_.inverse(work_, raw_acf_);
  }

  CostParts cost_from_acf(const GislWeights<Scalar>& w, int p) const {
    const Index zero = M_ - 1;
    double sidelobe = 0.0;
    double mainlobe = 0.0;
    for (Index j = 0; j < N_; ++j) {
      const Index lag = j <= zero ? j : j - N_;
      const double ws = static_cast<double>(w.sidelobe[zero + lag]);
      const double wm = static_cast<double>(w.mainlobe[zero + lag]);
      if (ws == 0.0 && wm == 0.0) continue;
      const double power = detail::floored_power(std::abs(std::complex<double>(raw_acf_[j])), p);
      sidelobe += ws * power;
      mainlobe += wm * power;
    }
    if (mainlobe == 0.0) throw std::invalid_argument("GISL: mainlobe weights are empty");
    return {std::pow(sidelobe / mainlobe, 2.0 / p), sidelobe, mainlobe};
  }

  WaveformConfig cfg_;
  BasisMatrices<Scalar> basis_;
  Index M_;
  Index N_;
  Fft<Scalar> fft_;
  CVectorX<Scalar> padded_;
  CVectorX<Scalar> spectrum_;
  CVectorX<Scalar> raw_acf_;
  CVectorX<Scalar> work_;
  CVectorX<Scalar> transformed_;
  GradientDiagnostics diag_;
};

/// ∇_φ J_p via FFTs (fresh workspace).
template <typename Derived>
VectorX<typename Derived::Scalar> gisl_gradient(const Eigen::MatrixBase<Derived>& phi,
                                                const WaveformConfig& cfg,
                                                const GislWeights<typename Derived::Scalar>& w, int p) {
  GradientWorkspace<typename Derived::Scalar> ws(cfg);
  VectorX<typename Derived::Scalar> grad;
  ws.gradient(phi, w, p, grad);
  return grad;
}

}  // namespace ceofdm
