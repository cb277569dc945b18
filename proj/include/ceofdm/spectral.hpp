#pragma once

#include <cmath>
#include <stdexcept>

#include "ceofdm/fft.hpp"
#include "ceofdm/waveform.hpp"

namespace ceofdm {

template <typename Scalar>
struct Spectrum {
  VectorX<Scalar> frequency;  // Hz, ascending, zero at index nfft/2
  VectorX<Scalar> magnitude;  // |DFT|, peak-normalized
};

/// Zero-padded magnitude spectrum, centered on DC.
template <typename Scalar>
Spectrum<Scalar> spectrum(const SampledWaveform<Scalar>& s, Index nfft) {
  const Index M = s.size();
  if (nfft < M) throw std::invalid_argument("spectrum: nfft must be >= waveform length");
  CVectorX<Scalar> buf = CVectorX<Scalar>::Zero(nfft);
  buf.head(M) = s.samples;
  Fft<Scalar> fft(nfft);
  CVectorX<Scalar> X;
  fft.forward(buf, X);

  Spectrum<Scalar> out{VectorX<Scalar>(nfft), VectorX<Scalar>(nfft)};
  const Index half = nfft / 2;
  for (Index i = 0; i < nfft; ++i) {
    const Index bin = (i - half + nfft) % nfft;
    out.frequency[i] = static_cast<Scalar>(static_cast<double>(i - half) * s.fs / nfft);
    out.magnitude[i] = std::abs(X[bin]);
  }
  const Scalar peak = out.magnitude.maxCoeff();
  if (peak > Scalar(0)) out.magnitude /= peak;
  return out;
}

/// RMS bandwidth in Hz from the M-point periodic DFT,
/// sqrt(Σ f_k² |S_k|² / Σ |S_k|²) with f_k folded into [-fs/2, fs/2).
template <typename Scalar>
double rms_bandwidth(const SampledWaveform<Scalar>& s) {
  const Index M = s.size();
  Fft<Scalar> fft(M);
  CVectorX<Scalar> X;
  fft.forward(s.samples, X);
  double num = 0.0;
  double den = 0.0;
  for (Index k = 0; k < M; ++k) {
    const Index folded = (2 * k >= M) ? k - M : k;
    const double f = static_cast<double>(folded) * s.fs / static_cast<double>(M);
    const double power = std::norm(std::complex<double>(X[k]));
    num += f * f * power;
    den += power;
  }
  return std::sqrt(num / den);
}

template <typename Scalar>
struct Spectrogram {
  VectorX<Scalar> time;       // frame centers, seconds
  VectorX<Scalar> frequency;  // Hz, DC-centered
  MatrixX<Scalar> magnitude;  // frequency x time, global peak-normalized
};

/// Short-time Fourier magnitude with a Hann window.
template <typename Scalar>
Spectrogram<Scalar> spectrogram(const SampledWaveform<Scalar>& s, Index window, Index hop, Index nfft) {
  const Index M = s.size();
  if (window < 2 || window > M) throw std::invalid_argument("spectrogram: window must be in [2, M]");
  if (hop < 1) throw std::invalid_argument("spectrogram: hop must be >= 1");
  if (nfft < window) throw std::invalid_argument("spectrogram: nfft must be >= window");

  VectorX<Scalar> taper(window);
  for (Index n = 0; n < window; ++n) {
    taper[n] = static_cast<Scalar>(0.5 - 0.5 * std::cos(kTwoPi<double> * n / (window - 1)));
  }

  const Index frames = 1 + (M - window) / hop;
  Spectrogram<Scalar> out{VectorX<Scalar>(frames), VectorX<Scalar>(nfft), MatrixX<Scalar>(nfft, frames)};
  const Index half = nfft / 2;
  for (Index i = 0; i < nfft; ++i) {
    out.frequency[i] = static_cast<Scalar>(static_cast<double>(i - half) * s.fs / nfft);
  }

  Fft<Scalar> fft(nfft);
  CVectorX<Scalar> buf(nfft);
  CVectorX<Scalar> X;
  for (Index f = 0; f < frames; ++f) {
    const Index start = f * hop;
    buf.setZero();
    for (Index n = 0; n < window; ++n) buf[n] = s.samples[start + n] * taper[n];
    fft.forward(buf, X);
    for (Index i = 0; i < nfft; ++i) out.magnitude(i, f) = std::abs(X[(i - half + nfft) % nfft]);
    out.time[f] = static_cast<Scalar>((static_cast<double>(start) + 0.5 * (window - 1)) / s.fs);
  }
  const Scalar peak = out.magnitude.maxCoeff();
  if (peak > Scalar(0)) out.magnitude /= peak;
  return out;
}

}  // namespace ceofdm
