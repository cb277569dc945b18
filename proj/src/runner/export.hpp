#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ceofdm/ceofdm.hpp"

namespace ceofdm::runner {

/// dB value as written to disk: -inf becomes -999, anything else is
/// clamped at -200.
double export_db(double db);

/// Buffers rows and writes the file in one go; failures raise IoError
/// naming the path.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, const std::vector<std::string>& columns);

  template <typename... Args>
  void row(const Args&... values);

  void write() const;

 private:
  std::filesystem::path path_;
  std::string buffer_;
};

template <typename... Args>
void CsvWriter::row(const Args&... values) {
  bool first = true;
  ((buffer_ += (first ? "" : ","), buffer_ += fmt::format("{}", values), first = false), ...);
  buffer_ += '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void ensure_directory(const std::filesystem::path& dir);

/// acf.csv schema: delay_samples, delay_over_T, magnitude_db.
void write_acf(const std::filesystem::path& path, const CorrelationResult<double>& acf, double samples_per_period);
void write_phase_code(const std::filesystem::path& path, const VectorX<double>& phi);
VectorX<double> read_phase_code(const std::filesystem::path& path);
/// trace.csv schema: iter, J_p_db, grad_norm, mu, backtracks, reset_flag.
void write_trace(const std::filesystem::path& path, const OptimizationTrace& trace);
void write_spectrum(const std::filesystem::path& path, const SampledWaveform<double>& s, double bandwidth);

}  // namespace ceofdm::runner

