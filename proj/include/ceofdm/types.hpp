#pragma once

#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Core>

namespace ceofdm {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using CVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

template <typename Scalar>
inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

template <typename Scalar>
inline constexpr Scalar kTwoPi = Scalar(2) * std::numbers::pi_v<Scalar>;

// Distinguished value for "no sidelobes in region" results (PSLR, ISL).
inline constexpr double kNegInfDb = -std::numeric_limits<double>::infinity();

// Magnitudes below this are clamped before |r|^p so the cost and its
// gradient never see denormals.
inline constexpr double kMagnitudeFloor = 1e-9;

}  // namespace ceofdm
