#include "runner/export.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "runner/config.hpp"

namespace ceofdm::runner {

namespace fs = std::filesystem;

double export_db(double db) {
  if (std::isinf(db) && db < 0.0) return -999.0;
  return std::max(db, -200.0);
}

namespace {
double magnitude_db(double magnitude) {
  return export_db(magnitude > 0.0 ? 20.0 * std::log10(magnitude) : kNegInfDb);
}
}  // namespace

CsvWriter::CsvWriter(fs::path path, const std::vector<std::string>& columns) : path_(std::move(path)) {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::write() const { write_text(path_, buffer_); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  out.close();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  }
}

void write_acf(const fs::path& path, const CorrelationResult<double>& acf, double samples_per_period) {
  CsvWriter csv(path, {"delay_samples", "delay_over_T", "magnitude_db"});
  const Index zero = acf.zero_index();
  for (Index k = -zero; k <= zero; ++k) {
    csv.row(k, static_cast<double>(k) / samples_per_period, magnitude_db(std::abs(acf.at_lag(k))));
  }
  csv.write();
}

void write_phase_code(const fs::path& path, const VectorX<double>& phi) {
  CsvWriter csv(path, {"subcarrier", "phase_rad"});
  for (Index l = 0; l < phi.size(); ++l) csv.row(l + 1, phi[l]);
  csv.write();
}

VectorX<double> read_phase_code(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::getline(in, line);
  if (line != "subcarrier,phase_rad") throw IoError(fmt::format("'{}' is not a phase-code file", path.string()));
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(fmt::format("malformed row in '{}'", path.string()));
    try {
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw IoError(fmt::format("malformed phase value in '{}'", path.string()));
    }
  }
  return Eigen::Map<VectorX<double>>(values.data(), static_cast<Index>(values.size()));
}

void write_trace(const fs::path& path, const OptimizationTrace& trace) {
  CsvWriter csv(path, {"iter", "J_p_db", "grad_norm", "mu", "backtracks", "reset_flag"});
  for (const auto& rec : trace.iterations) {
    csv.row(rec.iteration, export_db(rec.cost_db), rec.grad_norm, rec.mu, rec.backtracks, rec.reset ? 1 : 0);
  }
  csv.write();
}

void write_spectrum(const fs::path& path, const SampledWaveform<double>& s, double bandwidth) {
  const Spectrum<double> spec = spectrum(s, 8 * s.size());
  CsvWriter csv(path, {"frequency_hz", "frequency_over_df", "magnitude_db"});
  for (Index i = 0; i < spec.frequency.size(); ++i) {
    const double f = spec.frequency[i];
    csv.row(f, bandwidth > 0.0 ? f / bandwidth : 0.0, magnitude_db(spec.magnitude[i]));
  }
  csv.write();
}

}  // namespace ceofdm::runner
