#include "ceofdm/fft.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace ceofdm {

namespace {

// FFTW planner calls are not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename Scalar>
struct FftwApi;

template <>
struct FftwApi<double> {
  using Complex = fftw_complex;
  using Plan = fftw_plan;
  static Complex* alloc(Index n) { return fftw_alloc_complex(static_cast<size_t>(n)); }
  static void free(Complex* p) { fftw_free(p); }
  static Plan plan(Index n, Complex* in, Complex* out, int sign) {
    return fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
  }
  static void execute(Plan p) { fftw_execute(p); }
  static void destroy(Plan p) { fftw_destroy_plan(p); }
};

template <>
struct FftwApi<float> {
  using Complex = fftwf_complex;
  using Plan = fftwf_plan;
  static Complex* alloc(Index n) { return fftwf_alloc_complex(static_cast<size_t>(n)); }
  static void free(Complex* p) { fftwf_free(p); }
  static Plan plan(Index n, Complex* in, Complex* out, int sign) {
    return fftwf_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE);
  }
  static void execute(Plan p) { fftwf_execute(p); }
  static void destroy(Plan p) { fftwf_destroy_plan(p); }
};

}  // namespace

namespace detail {

template <typename Scalar>
struct FftPlans {
  using Api = FftwApi<Scalar>;

  explicit FftPlans(Index n) {
    std::lock_guard lock(planner_mutex());
    in = Api::alloc(n);
    out = Api::alloc(n);
    if (in == nullptr || out == nullptr) {
      Api::free(in);
      Api::free(out);
      throw std::bad_alloc();
    }
    fwd = Api::plan(n, in, out, FFTW_FORWARD);
    bwd = Api::plan(n, in, out, FFTW_BACKWARD);
    if (fwd == nullptr || bwd == nullptr) {
      if (fwd != nullptr) Api::destroy(fwd);
      if (bwd != nullptr) Api::destroy(bwd);
      Api::free(in);
      Api::free(out);
      throw std::runtime_error("FFTW plan creation failed");
    }
  }

  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    Api::destroy(fwd);
    Api::destroy(bwd);
    Api::free(in);
    Api::free(out);
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  typename Api::Complex* in = nullptr;
  typename Api::Complex* out = nullptr;
  typename Api::Plan fwd = nullptr;
  typename Api::Plan bwd = nullptr;
};

}  // namespace detail

template <typename Scalar>
Fft<Scalar>::Fft(Index size) : size_(size) {
  if (size < 1) throw std::invalid_argument("FFT size must be positive");
  plans_ = std::make_unique<detail::FftPlans<Scalar>>(size);
}

template <typename Scalar>
Fft<Scalar>::~Fft() = default;

template <typename Scalar>
Fft<Scalar>::Fft(Fft&&) noexcept = default;

template <typename Scalar>
Fft<Scalar>& Fft<Scalar>::operator=(Fft&&) noexcept = default;

template <typename Scalar>
void Fft<Scalar>::forward(const CVectorX<Scalar>& in, CVectorX<Scalar>& out) {
  if (in.size() != size_) throw std::invalid_argument("FFT input length mismatch");
  auto* buf_in = reinterpret_cast<std::complex<Scalar>*>(plans_->in);
  auto* buf_out = reinterpret_cast<std::complex<Scalar>*>(plans_->out);
  std::copy_n(in.data(), size_, buf_in);
  detail::FftPlans<Scalar>::Api::execute(plans_->fwd);
  out.resize(size_);
  std::copy_n(buf_out, size_, out.data());
}

template <typename Scalar>
void Fft<Scalar>::inverse(const CVectorX<Scalar>& in, CVectorX<Scalar>& out) {
  if (in.size() != size_) throw std::invalid_argument("FFT input length mismatch");
  auto* buf_in = reinterpret_cast<std::complex<Scalar>*>(plans_->in);
  auto* buf_out = reinterpret_cast<std::complex<Scalar>*>(plans_->out);
  std::copy_n(in.data(), size_, buf_in);
  detail::FftPlans<Scalar>::Api::execute(plans_->bwd);
  out.resize(size_);
  const Scalar scale = Scalar(1) / static_cast<Scalar>(size_);
  for (Index i = 0; i < size_; ++i) out[i] = buf_out[i] * scale;
}

template class Fft<float>;
template class Fft<double>;

}  // namespace ceofdm
