#include "runner/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace ceofdm::runner {

namespace {

constexpr double kDefaultTbp = 200.0;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", key, raw));
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: expected true/false, got '{}'", key, raw));
}

bool is_unset(const std::string& raw) {
  const std::string text = trim(raw);
  return text == "none" || text == "auto" || text == "null";
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"waveform.L", [](auto& c, auto& k, auto& v) { c.L = parse_number<int>(k, v); }},
      {"waveform.tbp",
       [](auto& c, auto& k, auto& v) {
         c.tbp = is_unset(v) ? std::nullopt : std::optional<double>(parse_number<double>(k, v));
       }},
      {"waveform.h",
       [](auto& c, auto& k, auto& v) {
         c.h = is_unset(v) ? std::nullopt : std::optional<double>(parse_number<double>(k, v));
       }},
      {"waveform.oversample", [](auto& c, auto& k, auto& v) { c.oversample = parse_number<double>(k, v); }},
      {"waveform.samples",
       [](auto& c, auto& k, auto& v) {
         c.samples = is_unset(v) ? std::nullopt : std::optional<Index>(parse_number<Index>(k, v));
       }},
      {"waveform.init_psk",
       [](auto& c, auto&, auto& v) { c.init_alphabet = parse_psk_order(v); }},
      {"region.mode",
       [](auto& c, auto& k, auto& v) {
         const std::string mode = trim(v);
         if (mode != "full" && mode != "interval") {
           throw ConfigError(fmt::format("{}: expected full or interval, got '{}'", k, v));
         }
         c.region_mode = mode;
       }},
      {"region.lo",
       [](auto& c, auto& k, auto& v) {
         c.region_lo = is_unset(v) ? std::nullopt : std::optional<double>(parse_number<double>(k, v));
       }},
      {"region.hi", [](auto& c, auto& k, auto& v) { c.region_hi = parse_number<double>(k, v); }},
      {"optimizer.p", [](auto& c, auto& k, auto& v) { c.optimizer.p = parse_number<int>(k, v); }},
      {"optimizer.beta", [](auto& c, auto& k, auto& v) { c.optimizer.beta = parse_number<double>(k, v); }},
      {"optimizer.mu0", [](auto& c, auto& k, auto& v) { c.optimizer.mu0 = parse_number<double>(k, v); }},
      {"optimizer.rho_down", [](auto& c, auto& k, auto& v) { c.optimizer.rho_down = parse_number<double>(k, v); }},
      {"optimizer.rho_up", [](auto& c, auto& k, auto& v) { c.optimizer.rho_up = parse_number<double>(k, v); }},
      {"optimizer.c", [](auto& c, auto& k, auto& v) { c.optimizer.c = parse_number<double>(k, v); }},
      {"optimizer.max_iterations",
       [](auto& c, auto& k, auto& v) { c.optimizer.max_iterations = parse_number<int>(k, v); }},
      {"optimizer.g_min",
       [](auto& c, auto& k, auto& v) {
         const std::string text = trim(v);
         c.optimizer.g_min = (text == "inf") ? std::numeric_limits<double>::infinity() : parse_number<double>(k, v);
       }},
      {"optimizer.max_backtracks",
       [](auto& c, auto& k, auto& v) { c.optimizer.max_backtracks = parse_number<int>(k, v); }},
      {"optimizer.mu_max", [](auto& c, auto& k, auto& v) { c.optimizer.mu_max = parse_number<double>(k, v); }},
      {"quantization.alphabets",
       [](auto& c, auto& k, auto& v) {
         std::vector<PskOrder> out;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) out.push_back(parse_psk_order(item));
         if (out.empty()) throw ConfigError(fmt::format("{}: at least one alphabet is required", k));
         c.alphabets = std::move(out);
       }},
      {"run.seed", [](auto& c, auto& k, auto& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"run.seed_count", [](auto& c, auto& k, auto& v) { c.seed_count = parse_number<int>(k, v); }},
      {"run.output", [](auto& c, auto&, auto& v) { c.output = trim(v); }},
      {"run.threads", [](auto& c, auto& k, auto& v) { c.threads = parse_number<int>(k, v); }},
      {"run.export_af", [](auto& c, auto& k, auto& v) { c.export_af = parse_bool(k, v); }},
      {"run.export_spectrogram", [](auto& c, auto& k, auto& v) { c.export_spectrogram = parse_bool(k, v); }},
      {"run.af_doppler_bins", [](auto& c, auto& k, auto& v) { c.af_doppler_bins = parse_number<int>(k, v); }},
      {"run.af_max_doppler", [](auto& c, auto& k, auto& v) { c.af_max_doppler = parse_number<double>(k, v); }},
  };
  return table;
}

std::string format_optional(const std::optional<double>& v, const char* unset) {
  return v ? fmt::format("{}", *v) : std::string(unset);
}

}  // namespace

PskOrder parse_psk_order(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return PskOrder::continuous();
  const int order = parse_number<int>("PSK order", t);
  if (order < 2) throw ConfigError(fmt::format("PSK order must be >= 2 or inf (got {})", order));
  return PskOrder(order);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& entry : setters()) out.push_back(entry.first);
    return out;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [name, setter] : setters()) {
    if (name == key) {
      setter(cfg, key, value);
      return;
    }
  }
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

WaveformConfig ExperimentConfig::waveform() const {
  WaveformConfig w;
  w.L = L;
  w.oversample = oversample;
  w.samples = samples;
  if (tbp) {
    w.tbp = tbp;
    w.h = h ? *h : compute_modulation_index(*tbp, L);
  } else if (h) {
    w.h = *h;
  } else {
    w.tbp = kDefaultTbp;
    w.h = compute_modulation_index(kDefaultTbp, L);
  }
  return w;
}

DelayRegion ExperimentConfig::region() const {
  if (region_mode == "full") return DelayRegion::full();
  if (region_lo) return DelayRegion::interval(*region_lo, region_hi);
  return DelayRegion::up_to(region_hi);
}

void ExperimentConfig::validate() const {
  try {
    if (L < 1) throw ConfigError("waveform.L must be >= 1");
    if (tbp && *tbp < 0.0) throw ConfigError("waveform.tbp must be >= 0");
    waveform().validate();
    optimizer.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (region_mode == "interval") {
    if (!(region_hi > 0.0 && region_hi <= 1.0)) throw ConfigError("region.hi must be in (0, 1]");
    if (region_lo && !(*region_lo >= 0.0 && *region_lo < region_hi)) {
      throw ConfigError("region.lo must be in [0, region.hi)");
    }
  }
  if (seed_count < 1) throw ConfigError("run.seed_count must be >= 1");
  if (threads < 1) throw ConfigError("run.threads must be >= 1");
  if (af_doppler_bins < 1) throw ConfigError("run.af_doppler_bins must be >= 1");
  if (!(af_max_doppler >= 0.0)) throw ConfigError("run.af_max_doppler must be >= 0");
  if (output.empty()) throw ConfigError("run.output must not be empty");
}

ExperimentConfig parse_config(const std::string& ini_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.message()));
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(fmt::format("key '{}' must be inside a [section]", section));
    for (const auto& [key, value] : body) {
      apply_setting(cfg, section + "." + key, value.data());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_ini(const ExperimentConfig& cfg) {
  const WaveformConfig w = cfg.waveform();
  const auto& o = cfg.optimizer;
  std::string alphabets;
  for (const auto& a : cfg.alphabets) {
    if (!alphabets.empty()) alphabets += ",";
    alphabets += a.to_string();
  }
  std::string out;
  out += "[waveform]\n";
  out += fmt::format("L={}\n", cfg.L);
  out += fmt::format("tbp={}\n", format_optional(w.tbp, "none"));
  out += fmt::format("h={}\n", w.h);
  out += fmt::format("oversample={}\n", cfg.oversample);
  out += fmt::format("samples={}\n", cfg.samples ? fmt::format("{}", *cfg.samples) : "auto");
  out += fmt::format("init_psk={}\n", cfg.init_alphabet.to_string());
  out += "\n[region]\n";
  out += fmt::format("mode={}\n", cfg.region_mode);
  out += fmt::format("lo={}\n", format_optional(cfg.region_lo, "null"));
  out += fmt::format("hi={}\n", cfg.region_hi);
  out += "\n[optimizer]\n";
  out += fmt::format("p={}\n", o.p);
  out += fmt::format("beta={}\n", o.beta);
  out += fmt::format("mu0={}\n", o.mu0);
  out += fmt::format("rho_down={}\n", o.rho_down);
  out += fmt::format("rho_up={}\n", o.rho_up);
  out += fmt::format("c={}\n", o.c);
  out += fmt::format("max_iterations={}\n", o.max_iterations);
  out += fmt::format("g_min={}\n", o.g_min);
  out += fmt::format("max_backtracks={}\n", o.max_backtracks);
  out += fmt::format("mu_max={}\n", o.mu_max);
  out += "\n[quantization]\n";
  out += fmt::format("alphabets={}\n", alphabets);
  out += "\n[run]\n";
  out += fmt::format("seed={}\n", cfg.seed);
  out += fmt::format("seed_count={}\n", cfg.seed_count);
  out += fmt::format("output={}\n", cfg.output);
  out += fmt::format("threads={}\n", cfg.threads);
  out += fmt::format("export_af={}\n", cfg.export_af);
  out += fmt::format("export_spectrogram={}\n", cfg.export_spectrogram);
  out += fmt::format("af_doppler_bins={}\n", cfg.af_doppler_bins);
  out += fmt::format("af_max_doppler={}\n", cfg.af_max_doppler);
  return out;
}

}  // namespace ceofdm::runner
