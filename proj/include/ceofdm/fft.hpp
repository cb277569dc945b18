#pragma once

#include <complex>
#include <memory>

#include "ceofdm/types.hpp"

namespace ceofdm {

namespace detail {
template <typename Scalar>
struct FftPlans;
}

/// Fixed-size complex DFT of arbitrary (including prime) length backed by
/// FFTW plans. forward() is the unnormalized DFT; inverse() includes the 1/N
/// factor so inverse(forward(x)) == x.
///
/// Transforms run on internally owned, fixed-alignment buffers, so repeated
/// calls with the same input are bit-identical. Plan creation is serialized
/// internally; a single instance must not be used from two threads at once.
template <typename Scalar>
class Fft {
 public:
  explicit Fft(Index size);
  ~Fft();

  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  Index size() const { return size_; }

  void forward(const CVectorX<Scalar>& in, CVectorX<Scalar>& out);
  void inverse(const CVectorX<Scalar>& in, CVectorX<Scalar>& out);

 private:
  Index size_;
  std::unique_ptr<detail::FftPlans<Scalar>> plans_;
};

extern template class Fft<float>;
extern template class Fft<double>;

}  // namespace ceofdm
