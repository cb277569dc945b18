#include "runner/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace ceofdm::runner {

VectorX<double> initial_phase_code(const ExperimentConfig& cfg, std::uint64_t seed) {
  return random_psk<double>(cfg.L, cfg.init_alphabet, seed);
}

GislWeights<double> weights_for(const ExperimentConfig& cfg, const CorrelationResult<double>& acf) {
  const Index null_index = detect_mainlobe_null(acf);
  try {
    return build_weights<double>(null_index, cfg.region(), cfg.waveform());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

OptimizationRun optimize_from(const ExperimentConfig& cfg, const VectorX<double>& phi0, std::uint64_t seed) {
  OptimizationRun run;
  run.seed = seed;
  run.waveform = cfg.waveform();
  run.phi_initial = phi0;
  const BasisMatrices<double> basis = make_basis<double>(run.waveform);
  Fft<double> fft(2 * run.waveform.sample_count() - 1);

  run.acf_initial = compute_acf(synthesize(run.phi_initial, run.waveform, basis), fft);
  run.weights = weights_for(cfg, run.acf_initial);
  run.null_initial = run.weights.null_index;

  OptimizationResult<double> result = run_gd_gisl(run.phi_initial, run.waveform, run.weights, cfg.optimizer);
  run.phi_final = std::move(result.phi);
  run.trace = std::move(result.trace);

  run.acf_final = compute_acf(synthesize(run.phi_final, run.waveform, basis), fft);
  run.null_final = detect_mainlobe_null(run.acf_final);
  const int p = cfg.optimizer.p;
  run.gisl_db_initial = to_db(compute_gisl(run.acf_initial, run.weights, p));
  run.gisl_db_final = to_db(compute_gisl(run.acf_final, run.weights, p));
  run.pslr_db_initial = compute_pslr(run.acf_initial, run.weights);
  run.pslr_db_final = compute_pslr(run.acf_final, run.weights);
  return run;
}

OptimizationRun optimize_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  return optimize_from(cfg, initial_phase_code(cfg, seed), seed);
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& task) {
  const int workers = std::max(1, std::min(threads, jobs));
  if (workers == 1) {
    for (int i = 0; i < jobs; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < jobs; i = next++) task(i);
    });
  }
}

Summary summarize(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return {quantile(0.5), quantile(0.25), quantile(0.75)};
}

}  // namespace ceofdm::runner
