#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ceofdm/ceofdm.hpp"
#include "runner/config.hpp"

namespace ceofdm::runner {

/// One seeded GD-GISL run with everything the exports and acceptance
/// checks need.
struct OptimizationRun {
  std::uint64_t seed = 0;
  WaveformConfig waveform;
  VectorX<double> phi_initial;
  VectorX<double> phi_final;
  GislWeights<double> weights;
  CorrelationResult<double> acf_initial;
  CorrelationResult<double> acf_final;
  Index null_initial = 0;
  Index null_final = 0;
  double gisl_db_initial = 0.0;
  double gisl_db_final = 0.0;
  double pslr_db_initial = 0.0;  // over the sidelobe region
  double pslr_db_final = 0.0;
  OptimizationTrace trace;
};

/// Initial phase code for `seed` drawn from cfg.init_alphabet.
VectorX<double> initial_phase_code(const ExperimentConfig& cfg, std::uint64_t seed);

/// Weights from the detected null of phi's ACF and the configured region.
/// Region/mainlobe overlap is reported as ConfigError.
GislWeights<double> weights_for(const ExperimentConfig& cfg, const CorrelationResult<double>& acf);

OptimizationRun optimize_from(const ExperimentConfig& cfg, const VectorX<double>& phi0, std::uint64_t seed);
OptimizationRun optimize_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// Runs `jobs` independent tasks on up to `threads` workers; task i writes
/// only slot i so results do not depend on scheduling.
void parallel_for(int jobs, int threads, const std::function<void(int)>& task);

struct Summary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Median and quartiles (linear interpolation between order statistics).
Summary summarize(std::vector<double> values);

}  // namespace ceofdm::runner
