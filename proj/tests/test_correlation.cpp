#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ceofdm/ceofdm.hpp"
#include "oracles.hpp"

using namespace ceofdm;

namespace {

const WaveformConfig kDesign = WaveformConfig::from_tbp(24, 200.0);

SampledWaveform<double> design_waveform(std::uint64_t seed) {
  return synthesize(random_psk(24, PskOrder::continuous(), seed), kDesign);
}

// Centered ACF with the given magnitudes on lags 0..M-1 (mirrored).
CorrelationResult<double> synthetic_acf(const std::vector<double>& positive_lags) {
  const Index M = static_cast<Index>(positive_lags.size());
  CVectorX<double> r = CVectorX<double>::Zero(2 * M - 1);
  for (Index k = 0; k < M; ++k) r[M - 1 + k] = r[M - 1 - k] = positive_lags[static_cast<size_t>(k)];
  return {r, 1.0};
}

}  // namespace

TEST(Acf, MatchesLagSum) {
  const auto cfg = WaveformConfig::with_samples(6, 0.2, 128);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = synthesize(random_psk(6, PskOrder::continuous(), seed), cfg);
    const auto acf = compute_acf(s);
    EXPECT_LT((acf.r - oracle::lag_sum_acf(s.samples)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Acf, UnitPeakAndConjugateSymmetry) {
  const auto acf = compute_acf(design_waveform(3));
  const Index zero = acf.zero_index();
  EXPECT_NEAR(std::abs(acf.r[zero] - 1.0), 0.0, 1e-12);
  for (Index k = 1; k <= zero; ++k) ASSERT_LT(std::abs(acf.at_lag(-k) - std::conj(acf.at_lag(k))), 1e-12);
  EXPECT_LE(acf.magnitude().maxCoeff(), 1.0 + 1e-12);
}

TEST(Acf, ConstantWaveformGivesTriangle) {
  const auto cfg = WaveformConfig::with_samples(4, 0.0, 50);
  const auto acf = compute_acf(synthesize(VectorX<double>::Zero(4), cfg));
  for (Index k = -49; k <= 49; ++k) {
    EXPECT_NEAR(std::abs(acf.at_lag(k)), static_cast<double>(50 - std::abs(k)) / 50.0, 1e-12);
  }
  EXPECT_EQ(detect_mainlobe_null(acf), 49);
}

TEST(Acf, LongerZeroPaddingChangesNothing) {
  const auto s = design_waveform(4);
  const Index M = s.size();
  const Index N = 4 * M;
  Fft<double> fft(N);
  CVectorX<double> buf = CVectorX<double>::Zero(N);
  buf.head(M) = s.samples;
  CVectorX<double> X;
  CVectorX<double> raw;
  fft.forward(buf, X);
  fft.inverse(CVectorX<double>(X.cwiseAbs2().cast<std::complex<double>>()), raw);

  const auto acf = compute_acf(s);
  double worst = 0.0;
  for (Index k = -(M - 1); k <= M - 1; ++k) {
    worst = std::max(worst, std::abs(acf.at_lag(k) - raw[(N - k) % N]));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Acf, RejectsMismatchedFft) {
  Fft<double> fft(100);
  EXPECT_THROW(compute_acf(design_waveform(0), fft), std::invalid_argument);
}

TEST(Acf, FloatTracksDouble) {
  const VectorX<double> phi = random_psk(24, PskOrder::continuous(), 9);
  const auto ad = compute_acf(synthesize(phi, kDesign));
  const auto af = compute_acf(synthesize(VectorX<float>(phi.cast<float>()), kDesign));
  EXPECT_LT((af.r.cast<std::complex<double>>() - ad.r).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Af, ZeroDopplerRowIsAcf) {
  const auto s = design_waveform(2);
  VectorX<double> doppler(3);
  doppler << -50.0, 0.0, 50.0;
  const auto af = compute_af(s, doppler);
  const auto acf = compute_acf(s);
  EXPECT_LT((af.magnitude.row(1).transpose() - acf.magnitude()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Af, ZeroDelayCutIsDirichletKernel) {
  const auto s = design_waveform(2);
  const double fs = s.fs;
  const double M = static_cast<double>(s.size());
  const VectorX<double> doppler = VectorX<double>::LinSpaced(21, -10.0, 10.0);
  const auto af = compute_af(s, doppler);
  const Index zero = s.size() - 1;
  for (Index n = 0; n < doppler.size(); ++n) {
    const double x = kPi<double> * doppler[n] / fs;
    const double expected = std::abs(x) < 1e-15 ? 1.0 : std::abs(std::sin(M * x) / (M * std::sin(x)));
    EXPECT_NEAR(af.magnitude(n, zero), expected, 1e-12) << "nu=" << doppler[n];
  }
}

TEST(Af, PeakAtOrigin) {
  const auto s = design_waveform(6);
  const VectorX<double> doppler = VectorX<double>::LinSpaced(41, -200.0, 200.0);
  const auto af = compute_af(s, doppler);
  Index row = 0;
  Index col = 0;
  const double peak = af.magnitude.maxCoeff(&row, &col);
  EXPECT_NEAR(peak, 1.0, 1e-12);
  EXPECT_EQ(row, 20);
  EXPECT_EQ(col, s.size() - 1);
}

TEST(MainlobeNull, FirstLocalMinimum) {
  EXPECT_EQ(detect_mainlobe_null(synthetic_acf({1.0, 0.5, 0.2, 0.3, 0.1})), 2);
}

TEST(MainlobeNull, ImmediateMinimum) {
  EXPECT_EQ(detect_mainlobe_null(synthetic_acf({1.0, 0.1, 0.5, 0.4})), 1);
}

TEST(MainlobeNull, ThrowsWhenMagnitudeNeverDips) {
  EXPECT_THROW(detect_mainlobe_null(synthetic_acf({1.0, 1.2, 1.5})), std::runtime_error);
}

// Regression fixture for one design-point code, frozen from this library.
TEST(MainlobeNull, DesignPointFixture) {
  const auto acf = compute_acf(synthesize(random_psk(24, PskOrder(32), 1), kDesign));
  EXPECT_EQ(detect_mainlobe_null(acf), 11);
}

// Typical first-null delay is on the order of the reciprocal bandwidth.
TEST(MainlobeNull, MedianNearReciprocalBandwidth) {
  std::vector<double> ratio;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Index null = detect_mainlobe_null(compute_acf(design_waveform(seed)));
    ratio.push_back(static_cast<double>(null) / kDesign.sample_rate() * kDesign.bandwidth());
  }
  std::nth_element(ratio.begin(), ratio.begin() + 25, ratio.end());
  EXPECT_GE(ratio[25], 0.5);
  EXPECT_LE(ratio[25], 2.0);
}

TEST(Weights, FullRegionPartitionsLagAxis) {
  const Index M = kDesign.sample_count();
  const auto w = build_weights(10, DelayRegion::full(), kDesign);
  EXPECT_TRUE(((w.sidelobe + w.mainlobe).array() == 1.0).all());
  EXPECT_EQ(w.mainlobe.sum(), 21.0);
  EXPECT_EQ(w.sidelobe.size(), 2 * M - 1);
  EXPECT_TRUE(w.is_symmetric());
}

TEST(Weights, SubRegionCount) {
  for (Index null : {5, 9, 14}) {
    const auto w = build_weights(null, DelayRegion::up_to(0.1), kDesign);
    const Index edge = static_cast<Index>(std::floor(0.1 * kDesign.sample_rate() * kDesign.T));
    EXPECT_EQ(w.sidelobe_support(), 2 * (edge - null));
    EXPECT_EQ(w.sidelobe.cwiseProduct(w.mainlobe).cwiseAbs().sum(), 0.0);
    EXPECT_TRUE(w.is_symmetric());
  }
}

TEST(Weights, ExplicitIntervalUnion) {
  DelayRegion region;
  region.intervals = {DelayInterval{0.02, 0.03, false}, DelayInterval{0.5, 0.5, false}};
  const auto w = build_weights(8, region, kDesign);
  EXPECT_EQ(w.sidelobe_support(), 2 * (11 + 1));
  EXPECT_EQ(w.sidelobe[999 + 20], 1.0);
  EXPECT_EQ(w.sidelobe[999 + 500], 1.0);
  EXPECT_EQ(w.sidelobe[999 + 19], 0.0);
}

TEST(Weights, RejectsMainlobeOverlap) {
  EXPECT_THROW(build_weights(10, DelayRegion::interval(0.005, 0.1), kDesign), std::invalid_argument);
  EXPECT_THROW(build_weights(10, DelayRegion::interval(0.01, 0.1), kDesign), std::invalid_argument);
  EXPECT_NO_THROW(build_weights(10, DelayRegion::interval(0.011, 0.1), kDesign));
  EXPECT_THROW(build_weights(0, DelayRegion::full(), kDesign), std::invalid_argument);
}

TEST(Gisl, SingleSidelobeSample) {
  CVectorX<double> r = CVectorX<double>::Zero(7);
  r[3] = 1.0;
  r[5] = 0.1;
  const CorrelationResult<double> acf{r, 1.0};
  const auto w = build_weights(1, DelayRegion::full(), 4, 4.0);
  EXPECT_NEAR(compute_gisl(acf, w, 2), 0.01, 1e-12);
  EXPECT_NEAR(compute_gisl(acf, w, 20), 0.01, 1e-12);
  EXPECT_NEAR(compute_isl(acf, w), 0.01, 1e-15);
  EXPECT_NEAR(compute_pslr(acf, w), -20.0, 1e-12);
  EXPECT_NEAR(compute_pslr(acf, Index{1}), -20.0, 1e-12);
}

TEST(Gisl, RejectsBadOrder) {
  const auto acf = compute_acf(design_waveform(0));
  const auto w = build_weights(10, DelayRegion::full(), kDesign);
  EXPECT_THROW(compute_gisl(acf, w, 3), std::invalid_argument);
  EXPECT_THROW(compute_gisl(acf, w, 0), std::invalid_argument);
}

TEST(Gisl, OrderTwoIsIsl) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto acf = compute_acf(design_waveform(seed));
    const auto w = build_weights(detect_mainlobe_null(acf), DelayRegion::full(), kDesign);
    EXPECT_NEAR(compute_gisl(acf, w, 2) / compute_isl(acf, w), 1.0, 1e-12);
  }
}

TEST(Gisl, IslMatchesDirectSum) {
  const auto s = design_waveform(12);
  const CVectorX<double> r = oracle::lag_sum_acf(s.samples);
  const auto acf = compute_acf(s);
  const auto w = build_weights(detect_mainlobe_null(acf), DelayRegion::up_to(0.1), kDesign);
  const double dtau = 1.0 / s.fs;
  double sl = 0.0;
  double ml = 0.0;
  for (Index k = 0; k < r.size(); ++k) {
    sl += w.sidelobe[k] * std::norm(r[k]) * dtau;
    ml += w.mainlobe[k] * std::norm(r[k]) * dtau;
  }
  EXPECT_NEAR(compute_isl(acf, w) / (sl / ml), 1.0, 1e-12);
}

TEST(Gisl, EmptySidelobesGiveMinusInfinity) {
  const auto acf = synthetic_acf({1.0, 0.5, 0.0, 0.0, 0.0});
  const auto w = build_weights(1, DelayRegion::full(), 5, 5.0);
  EXPECT_EQ(compute_isl(acf, w), 0.0);
  EXPECT_EQ(to_db(compute_isl(acf, w)), kNegInfDb);
}

TEST(Gisl, TriangleHasNoSidelobePeak) {
  const auto cfg = WaveformConfig::with_samples(4, 0.0, 50);
  const auto acf = compute_acf(synthesize(VectorX<double>::Zero(4), cfg));
  EXPECT_EQ(compute_pslr(acf, detect_mainlobe_null(acf)), kNegInfDb);
}

TEST(Gisl, DesignPointMedianLevel) {
  std::vector<double> db;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto acf = compute_acf(synthesize(random_psk(24, PskOrder(32), seed), kDesign));
    const auto w = build_weights(detect_mainlobe_null(acf), DelayRegion::full(), kDesign);
    db.push_back(to_db(compute_gisl(acf, w, 20)));
  }
  std::sort(db.begin(), db.end());
  const double median = 0.5 * (db[9] + db[10]);
  EXPECT_NEAR(median, -14.7, 2.0);
}

// Higher p weights the largest sidelobe more, so GISL approaches PSLR.
TEST(Gisl, ApproachesPslrAsOrderGrows) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto acf = compute_acf(design_waveform(seed));
    const auto w = build_weights(detect_mainlobe_null(acf), DelayRegion::full(), kDesign);
    const double pslr = compute_pslr(acf, w);
    double previous = std::numeric_limits<double>::infinity();
    for (int p : {2, 6, 10, 20}) {
      const double gap = std::abs(to_db(compute_gisl(acf, w, p)) - pslr);
      EXPECT_LE(gap, previous + 1e-12) << "seed " << seed << " p " << p;
      previous = gap;
    }
  }
}
