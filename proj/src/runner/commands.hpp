#pragma once

#include <filesystem>
#include <optional>

#include "runner/config.hpp"

namespace ceofdm::runner {

/// Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

/// Waveform, instantaneous frequency, spectrum, spectrogram, ACF and AF of
/// the seed waveform.
void cmd_synth(const ExperimentConfig& cfg);

/// One GD-GISL run: phase codes, ACFs, spectra, trace and summary.
void cmd_optimize(const ExperimentConfig& cfg);

/// M-ary truncation report. Reads phi_initial.csv / phi_final.csv from
/// `from` when given, otherwise optimizes inline.
void cmd_quantize(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& from);

/// seed_count independent runs; returns the number of failed seeds.
int cmd_sweep(const ExperimentConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace ceofdm::runner
