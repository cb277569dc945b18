#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "ceofdm/ceofdm.hpp"
#include "oracles.hpp"

using namespace ceofdm;

namespace {

constexpr double kPiD = kPi<double>;

VectorX<double> uniform_phases(int L, std::uint64_t seed) {
  return random_psk(L, PskOrder::continuous(), seed);
}

// Direct evaluation of the phase function at an arbitrary instant.
double phase_at(const VectorX<double>& phi, double h, double T, double t) {
  double acc = 0.0;
  for (Index l = 0; l < phi.size(); ++l) acc += std::cos(2.0 * kPiD * (l + 1) * t / T + phi[l]);
  return 2.0 * kPiD * h * acc;
}

double band_energy_fraction(const Spectrum<double>& spec, double lo, double hi) {
  double inside = 0.0;
  double total = 0.0;
  for (Index i = 0; i < spec.frequency.size(); ++i) {
    const double e = spec.magnitude[i] * spec.magnitude[i];
    total += e;
    if (std::abs(spec.frequency[i]) >= lo && std::abs(spec.frequency[i]) <= hi) inside += e;
  }
  return inside / total;
}

}  // namespace

TEST(ModulationIndex, ReferenceDesignPoint) {
  EXPECT_NEAR(compute_modulation_index(200.0, 24), 0.1856, 5e-4);
  EXPECT_NEAR(compute_modulation_index(200.0, 24), 0.18564209553182764, 1e-12);
}

TEST(ModulationIndex, ZeroBandwidthGivesZero) { EXPECT_EQ(compute_modulation_index(0.0, 24), 0.0); }

TEST(ModulationIndex, RejectsBadArguments) {
  EXPECT_THROW(compute_modulation_index(200.0, 0), std::domain_error);
  EXPECT_THROW(compute_modulation_index(-1.0, 24), std::domain_error);
}

TEST(ModulationIndex, InverseRelation) {
  for (int L : {1, 4, 24, 64}) {
    const double h = compute_modulation_index(137.0, L);
    EXPECT_NEAR(implied_time_bandwidth(h, L), 137.0, 1e-9);
  }
}

// h that makes the spectral RMS bandwidth equal to that of an LFM chirp
// sweeping Δf (Δf/√12), found by bisection on a naive-DFT spectrum.
TEST(ModulationIndex, MatchesRmsBandwidthOracle) {
  const int L = 16;
  const double tbp = 100.0;
  const double T = 1.0;
  const double fs = 5.0 * tbp / T;
  const Index M = static_cast<Index>(std::llround(fs * T));
  const VectorX<double> phi = uniform_phases(L, 11);
  const double target = tbp / T / std::sqrt(12.0);

  auto bandwidth_for = [&](double h) {
    std::vector<double> phase(static_cast<size_t>(M));
    for (Index m = 0; m < M; ++m) phase[static_cast<size_t>(m)] = phase_at(phi, h, T, m / fs);
    return oracle::rms_bandwidth_from_phase(phase, fs);
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bandwidth_for(mid) < target ? lo : hi) = mid;
  }
  const double h_oracle = 0.5 * (lo + hi);
  EXPECT_NEAR(compute_modulation_index(tbp, L) / h_oracle, 1.0, 1e-3);
}

TEST(WaveformConfig, SampleGridFromTimeBandwidth) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  EXPECT_DOUBLE_EQ(cfg.bandwidth(), 200.0);
  EXPECT_DOUBLE_EQ(cfg.sample_rate(), 1000.0);
  EXPECT_EQ(cfg.sample_count(), 1000);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(WaveformConfig, RejectsInconsistentModulationIndex) {
  auto cfg = WaveformConfig::from_tbp(24, 200.0);
  cfg.h *= 1.01;
  EXPECT_THROW(cfg.validate(), std::domain_error);
}

TEST(WaveformConfig, RejectsTooFewSamples) {
  EXPECT_THROW(WaveformConfig::with_samples(24, 0.1, 48).validate(), std::domain_error);
  EXPECT_NO_THROW(WaveformConfig::with_samples(24, 0.1, 49).validate());
}

TEST(SamplePhase, SingleHarmonicAtZeroPhase) {
  const auto cfg = WaveformConfig::with_samples(1, 0.25, 8);
  const VectorX<double> phi = VectorX<double>::Zero(1);
  const VectorX<double> phase = sample_phase(phi, cfg);
  for (Index m = 0; m < 8; ++m) EXPECT_NEAR(phase[m], 2.0 * kPiD * 0.25 * std::cos(2.0 * kPiD * m / 8.0), 1e-14);
}

TEST(SamplePhase, QuarterTurnGivesNegativeSine) {
  const auto cfg = WaveformConfig::with_samples(1, 0.25, 8);
  VectorX<double> phi(1);
  phi << kPiD / 2.0;
  const VectorX<double> phase = sample_phase(phi, cfg);
  for (Index m = 0; m < 8; ++m) EXPECT_NEAR(phase[m], -2.0 * kPiD * 0.25 * std::sin(2.0 * kPiD * m / 8.0), 1e-14);
}

TEST(SamplePhase, MatrixFormAgreesWithDirectSum) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  const auto basis = make_basis<double>(cfg);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const VectorX<double> phi = uniform_phases(24, seed);
    const VectorX<double> direct = sample_phase(phi, cfg);
    const VectorX<double> matrix = sample_phase(phi, cfg, basis);
    ASSERT_LT((direct - matrix).cwiseAbs().maxCoeff(), 1e-10) << "seed " << seed;
  }
}

TEST(SamplePhase, RejectsWrongLength) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  EXPECT_THROW(sample_phase(VectorX<double>::Zero(23), cfg), std::invalid_argument);
}

TEST(SampleFrequency, SingleHarmonicAtZeroPhaseStartsAtZero) {
  const auto cfg = WaveformConfig::with_samples(1, 0.3, 16);
  const VectorX<double> f = sample_frequency(VectorX<double>::Zero(1), cfg);
  EXPECT_NEAR(f[0], 0.0, 1e-14);
}

TEST(SampleFrequency, ZeroMeanOverPeriod) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const VectorX<double> f = sample_frequency(uniform_phases(24, seed), cfg);
    EXPECT_NEAR(f.mean(), 0.0, 1e-9);
  }
}

TEST(SampleFrequency, MatchesDerivativeOfPhase) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  const VectorX<double> phi = uniform_phases(24, 5);
  const VectorX<double> f = sample_frequency(phi, cfg);
  const double fs = cfg.sample_rate();
  for (Index m = 0; m < f.size(); m += 37) {
    const double d = oracle::central_difference([&](double t) { return phase_at(phi, cfg.h, cfg.T, t); }, m / fs,
                                                1e-7);
    EXPECT_NEAR(f[m], d / (2.0 * kPiD), 1e-5 * cfg.bandwidth());
  }
}

TEST(Synthesize, ConstantEnvelopeAndUnitEnergy) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = synthesize(uniform_phases(24, seed), cfg);
    const double expected = 1.0 / std::sqrt(static_cast<double>(s.size()));
    EXPECT_LT((s.samples.cwiseAbs().array() - expected).abs().maxCoeff(), 1e-12);
    EXPECT_NEAR(s.samples.squaredNorm(), 1.0, 1e-12);
  }
}

TEST(Synthesize, ZeroModulationIsConstant) {
  const auto cfg = WaveformConfig::with_samples(8, 0.0, 64);
  const auto s = synthesize(uniform_phases(8, 3), cfg);
  for (Index m = 0; m < s.size(); ++m) EXPECT_NEAR(std::abs(s.samples[m] - s.samples[0]), 0.0, 1e-15);
}

TEST(Synthesize, PaddedCopyAppendsZeros) {
  const auto cfg = WaveformConfig::with_samples(4, 0.1, 20);
  const auto s = synthesize(uniform_phases(4, 1), cfg);
  const CVectorX<double> padded = s.padded();
  ASSERT_EQ(padded.size(), 39);
  EXPECT_EQ(padded.head(20), s.samples);
  EXPECT_EQ(padded.tail(19).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Synthesize, SpectrumConcentratedWithinBand) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  const double df = cfg.bandwidth();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto spec = spectrum(synthesize(uniform_phases(24, seed), cfg), 8 * cfg.sample_count());
    EXPECT_GE(band_energy_fraction(spec, 0.0, 0.75 * df), 0.95) << "seed " << seed;
    EXPECT_LT(band_energy_fraction(spec, 0.45 * cfg.sample_rate(), cfg.sample_rate()), 1e-3) << "seed " << seed;
  }
}

TEST(Synthesize, RmsBandwidthIndependentOfPhaseCode) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  const double target = cfg.bandwidth() / std::sqrt(12.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_NEAR(rms_bandwidth(synthesize(uniform_phases(24, seed), cfg)) / target, 1.0, 0.01) << "seed " << seed;
  }
}

TEST(Synthesize, FloatScalarTracksDouble) {
  const auto cfg = WaveformConfig::from_tbp(24, 200.0);
  const VectorX<double> phi = uniform_phases(24, 2);
  const auto sd = synthesize(phi, cfg);
  const auto sf = synthesize(VectorX<float>(phi.cast<float>()), cfg);
  EXPECT_LT((sf.samples.cast<std::complex<double>>() - sd.samples).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(RandomPsk, DeterministicInSeed) {
  EXPECT_EQ(random_psk(24, PskOrder(32), 7), random_psk(24, PskOrder(32), 7));
  EXPECT_NE(random_psk(24, PskOrder(32), 7), random_psk(24, PskOrder(32), 8));
  EXPECT_EQ(random_psk(24, PskOrder::continuous(), 7), random_psk(24, PskOrder::continuous(), 7));
}

TEST(RandomPsk, SymbolsLieOnGrid) {
  const VectorX<double> phi = random_psk(1000, PskOrder(32), 3);
  for (Index l = 0; l < phi.size(); ++l) {
    const double k = phi[l] / (2.0 * kPiD / 32.0);
    EXPECT_NEAR(k, std::round(k), 1e-9);
    EXPECT_GE(phi[l], 0.0);
    EXPECT_LT(phi[l], 2.0 * kPiD);
  }
}

TEST(RandomPsk, SymbolsUniform) {
  constexpr int M = 32;
  const VectorX<double> phi = random_psk(100000, PskOrder(M), 2024);
  std::vector<double> counts(M, 0.0);
  for (Index l = 0; l < phi.size(); ++l) counts[static_cast<size_t>(std::lround(phi[l] / (2.0 * kPiD / M))) % M] += 1;
  const double expected = static_cast<double>(phi.size()) / M;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(M - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01);
}

TEST(RandomPsk, RejectsDegenerateAlphabets) {
  EXPECT_THROW(PskOrder(1), std::domain_error);
  EXPECT_THROW(PskOrder(0), std::domain_error);
  EXPECT_THROW(random_psk(0, PskOrder(4), 1), std::domain_error);
}
