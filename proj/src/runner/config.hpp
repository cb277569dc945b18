#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ceofdm/correlation.hpp"
#include "ceofdm/optimizer.hpp"
#include "ceofdm/waveform.hpp"

namespace ceofdm::runner {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // [waveform]; T is fixed at 1.
  int L = 24;
  std::optional<double> tbp;
  std::optional<double> h;
  double oversample = 5.0;
  std::optional<Index> samples;
  PskOrder init_alphabet = PskOrder(32);

  // [region]
  std::string region_mode = "full";  // full | interval
  std::optional<double> region_lo;   // unset: start at the mainlobe null
  double region_hi = 0.1;

  // [optimizer]
  OptimizerConfig optimizer;

  // [quantization]
  std::vector<PskOrder> alphabets{PskOrder(64), PskOrder(32), PskOrder(16), PskOrder(8)};

  // [run]
  std::uint64_t seed = 1;
  int seed_count = 1;
  std::string output = "out";
  int threads = 1;
  bool export_af = true;
  bool export_spectrogram = true;
  int af_doppler_bins = 41;
  double af_max_doppler = 1.0;  // in units of Δf

  /// Resolved signal model; tbp defaults to 200 when neither tbp nor h is set.
  WaveformConfig waveform() const;
  DelayRegion region() const;

  /// Throws ConfigError on any out-of-range field.
  void validate() const;
};

/// Every accepted key, "section.key".
const std::vector<std::string>& config_keys();

/// Sets one field from its textual value. Unknown key or malformed value
/// throws ConfigError.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_config(const std::string& ini_text);
ExperimentConfig load_config(const std::string& path);

/// Resolved config as INI text with every key present; parse_config on the
/// result reproduces the same config.
std::string to_ini(const ExperimentConfig& cfg);

PskOrder parse_psk_order(const std::string& text);

}  // namespace ceofdm::runner
