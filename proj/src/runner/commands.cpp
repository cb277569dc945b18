#include "runner/commands.hpp"

#include <chrono>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "runner/experiment.hpp"
#include "runner/export.hpp"

namespace ceofdm::runner {

namespace fs = std::filesystem;

namespace {

class IniWriter {
 public:
  void section(const std::string& name) {
    if (!text_.empty()) text_ += '\n';
    text_ += fmt::format("[{}]\n", name);
  }
  template <typename T>
  void put(const std::string& key, const T& value) {
    text_ += fmt::format("{}={}\n", key, value);
  }
  void put_db(const std::string& key, double db) { put(key, export_db(db)); }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

fs::path prepare_output(const ExperimentConfig& cfg) {
  const fs::path dir(cfg.output);
  ensure_directory(dir);
  write_text(dir / "config.ini", to_ini(cfg));
  return dir;
}

double samples_per_period(const WaveformConfig& w) { return w.sample_rate() * w.T; }

void write_timing(const fs::path& dir, double seconds) {
  IniWriter ini;
  ini.section("timing");
  ini.put("runtime_s", seconds);
  write_text(dir / "timing.ini", ini.text());
}

std::string csv_safe(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

}  // namespace

void cmd_synth(const ExperimentConfig& cfg) {
  cfg.validate();
  const WaveformConfig wf = cfg.waveform();
  const fs::path dir = prepare_output(cfg);

  const VectorX<double> phi = initial_phase_code(cfg, cfg.seed);
  const BasisMatrices<double> basis = make_basis<double>(wf);
  const SampledWaveform<double> s = synthesize(phi, wf, basis);
  const VectorX<double> phase = sample_phase(phi, wf, basis);
  const VectorX<double> freq = sample_frequency(phi, wf);
  const Index M = wf.sample_count();

  write_phase_code(dir / "phi.csv", phi);

  CsvWriter wave(dir / "waveform.csv", {"sample", "t", "real", "imag", "phase_rad", "frequency_hz"});
  for (Index m = 0; m < M; ++m) {
    wave.row(m, s.t[m], s.samples[m].real(), s.samples[m].imag(), phase[m], freq[m]);
  }
  wave.write();

  const double df = wf.bandwidth();
  write_spectrum(dir / "spectrum.csv", s, df);

  if (cfg.export_spectrogram) {
    const Index window = std::max<Index>(16, M / 8);
    const Index nfft = std::max<Index>(256, window);
    const Spectrogram<double> sg = spectrogram(s, window, std::max<Index>(1, window / 4), nfft);
    CsvWriter csv(dir / "spectrogram.csv", {"time_s", "frequency_hz", "magnitude_db"});
    for (Index f = 0; f < sg.time.size(); ++f) {
      for (Index i = 0; i < sg.frequency.size(); ++i) {
        const double mag = sg.magnitude(i, f);
        csv.row(sg.time[f], sg.frequency[i], export_db(mag > 0.0 ? 20.0 * std::log10(mag) : kNegInfDb));
      }
    }
    csv.write();
  }

  Fft<double> fft(2 * M - 1);
  const CorrelationResult<double> acf = compute_acf(s, fft);
  write_acf(dir / "acf.csv", acf, samples_per_period(wf));

  if (cfg.export_af) {
    const double nu_scale = df > 0.0 ? df : 1.0 / wf.T;
    const VectorX<double> doppler =
        cfg.af_doppler_bins == 1
            ? VectorX<double>(VectorX<double>::Zero(1))
            : VectorX<double>(VectorX<double>::LinSpaced(cfg.af_doppler_bins, -cfg.af_max_doppler * nu_scale,
                                         cfg.af_max_doppler * nu_scale));
    const AmbiguitySurface<double> af = compute_af(s, doppler);
    CsvWriter csv(dir / "af.csv", {"doppler_hz", "delay_samples", "delay_over_T", "magnitude_db"});
    const Index zero = M - 1;
    for (Index n = 0; n < af.doppler.size(); ++n) {
      for (Index k = 0; k < af.delay.size(); ++k) {
        const double mag = af.magnitude(n, k);
        csv.row(af.doppler[n], k - zero, static_cast<double>(k - zero) / samples_per_period(wf),
                export_db(mag > 0.0 ? 20.0 * std::log10(mag) : kNegInfDb));
      }
    }
    csv.write();
  }

  const GislWeights<double> w = weights_for(cfg, acf);
  const int p = cfg.optimizer.p;
  IniWriter ini;
  ini.section("waveform");
  ini.put("L", wf.L);
  ini.put("h", wf.h);
  ini.put("samples", M);
  ini.put("sample_rate_hz", wf.sample_rate());
  ini.put("bandwidth_hz", df);
  ini.put("rms_bandwidth_hz", rms_bandwidth(s));
  ini.section("metrics");
  ini.put("seed", cfg.seed);
  ini.put("null_index", w.null_index);
  ini.put("region", w.region.describe());
  ini.put("p", p);
  ini.put_db("gisl_db", to_db(compute_gisl(acf, w, p)));
  ini.put_db("isl_db", to_db(compute_isl(acf, w)));
  ini.put_db("pslr_db", compute_pslr(acf, w.null_index));
  ini.put_db("pslr_region_db", compute_pslr(acf, w));
  write_text(dir / "summary.ini", ini.text());

  fmt::print("synth: M={} null={} PSLR={:.2f} dB -> {}\n", M, w.null_index,
             export_db(compute_pslr(acf, w.null_index)), dir.string());
}

void cmd_optimize(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const OptimizationRun run = optimize_seed(cfg, cfg.seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir = prepare_output(cfg);
  const WaveformConfig& wf = run.waveform;
  const BasisMatrices<double> basis = make_basis<double>(wf);
  write_phase_code(dir / "phi_initial.csv", run.phi_initial);
  write_phase_code(dir / "phi_final.csv", run.phi_final);
  write_acf(dir / "acf_initial.csv", run.acf_initial, samples_per_period(wf));
  write_acf(dir / "acf_final.csv", run.acf_final, samples_per_period(wf));
  write_spectrum(dir / "spectrum_initial.csv", synthesize(run.phi_initial, wf, basis), wf.bandwidth());
  write_spectrum(dir / "spectrum_final.csv", synthesize(run.phi_final, wf, basis), wf.bandwidth());
  write_trace(dir / "trace.csv", run.trace);

  IniWriter ini;
  ini.section("run");
  ini.put("seed", run.seed);
  ini.put("region", run.weights.region.describe());
  ini.put("p", cfg.optimizer.p);
  ini.put("iterations", run.trace.iterations.size());
  ini.put("stop_reason", to_string(run.trace.stop));
  ini.put("final_grad_norm", run.trace.final_grad_norm);
  ini.section("metrics");
  ini.put("null_index_initial", run.null_initial);
  ini.put("null_index_final", run.null_final);
  ini.put("gisl_initial", run.trace.initial_cost);
  ini.put("gisl_final", run.trace.final_cost);
  ini.put_db("gisl_db_initial", run.gisl_db_initial);
  ini.put_db("gisl_db_final", run.gisl_db_final);
  ini.put_db("gisl_improvement_db", run.gisl_db_initial - run.gisl_db_final);
  ini.put_db("pslr_region_db_initial", run.pslr_db_initial);
  ini.put_db("pslr_region_db_final", run.pslr_db_final);
  ini.put_db("pslr_db_initial", compute_pslr(run.acf_initial, run.null_initial));
  ini.put_db("pslr_db_final", compute_pslr(run.acf_final, run.null_final));
  write_text(dir / "summary.ini", ini.text());
  write_timing(dir, seconds);

  fmt::print("optimize: GISL {:.2f} dB -> {:.2f} dB, null {} -> {}, {} iterations ({}) -> {}\n",
             run.gisl_db_initial, run.gisl_db_final, run.null_initial, run.null_final,
             run.trace.iterations.size(), to_string(run.trace.stop), dir.string());
}

void cmd_quantize(const ExperimentConfig& cfg, const std::optional<fs::path>& from) {
  cfg.validate();
  const WaveformConfig wf = cfg.waveform();
  VectorX<double> phi_opt;
  GislWeights<double> weights;
  if (from) {
    const VectorX<double> phi0 = read_phase_code(*from / "phi_initial.csv");
    phi_opt = read_phase_code(*from / "phi_final.csv");
    if (phi0.size() != wf.L || phi_opt.size() != wf.L) {
      throw ConfigError(fmt::format("phase codes in '{}' do not have L={} entries", from->string(), wf.L));
    }
    weights = weights_for(cfg, compute_acf(synthesize(phi0, wf)));
  } else {
    OptimizationRun run = optimize_seed(cfg, cfg.seed);
    phi_opt = std::move(run.phi_final);
    weights = std::move(run.weights);
  }

  const fs::path dir = prepare_output(cfg);
  const QuantizationReport report = degradation_sweep(phi_opt, wf, weights, cfg.optimizer.p, cfg.alphabets);
  CsvWriter csv(dir / "quantization.csv",
                {"mpsk", "max_phase_error_rad", "gisl_db_before", "gisl_db_after", "gisl_delta_db",
                 "pslr_db_before", "pslr_db_after", "pslr_delta_db"});
  const BasisMatrices<double> basis = make_basis<double>(wf);
  for (const QuantizationRecord& rec : report.records) {
    csv.row(rec.alphabet.to_string(), rec.max_phase_error, export_db(rec.gisl_db_before),
            export_db(rec.gisl_db_after), rec.gisl_degradation_db(), export_db(rec.pslr_db_before),
            export_db(rec.pslr_db_after), rec.pslr_degradation_db());
    const VectorX<double> phi_q = quantize_psk(phi_opt, rec.alphabet);
    const std::string tag = rec.alphabet.to_string();
    write_phase_code(dir / fmt::format("phi_psk_{}.csv", tag), phi_q);
    write_acf(dir / fmt::format("acf_psk_{}.csv", tag), compute_acf(synthesize(phi_q, wf, basis)),
              samples_per_period(wf));
  }
  csv.write();

  for (const QuantizationRecord& rec : report.records) {
    fmt::print("quantize: M_PSK={:>4} GISL {:.2f} dB -> {:.2f} dB\n", rec.alphabet.to_string(),
               rec.gisl_db_before, rec.gisl_db_after);
  }
}

int cmd_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Row {
    bool ok = false;
    std::string error;
    OptimizationRun run;
  };
  const int count = cfg.seed_count;
  std::vector<Row> rows(static_cast<size_t>(count));
  const auto start = std::chrono::steady_clock::now();
  parallel_for(count, cfg.threads, [&](int i) {
    Row& row = rows[static_cast<size_t>(i)];
    try {
      row.run = optimize_seed(cfg, cfg.seed + static_cast<std::uint64_t>(i));
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir = prepare_output(cfg);
  CsvWriter csv(dir / "sweep.csv",
                {"seed", "status", "null_initial", "null_final", "gisl_db_initial", "gisl_db_final",
                 "pslr_db_initial", "pslr_db_final", "improvement_db", "iterations", "stop_reason", "error"});
  std::vector<double> gisl_initial, gisl_final, pslr_initial, pslr_final, improvement;
  int failed = 0;
  for (int i = 0; i < count; ++i) {
    const Row& row = rows[static_cast<size_t>(i)];
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    if (!row.ok) {
      ++failed;
      csv.row(seed, "failed", "", "", "", "", "", "", "", "", "", csv_safe(row.error));
      continue;
    }
    const OptimizationRun& r = row.run;
    csv.row(seed, "ok", r.null_initial, r.null_final, export_db(r.gisl_db_initial), export_db(r.gisl_db_final),
            export_db(r.pslr_db_initial), export_db(r.pslr_db_final), r.gisl_db_initial - r.gisl_db_final,
            r.trace.iterations.size(), to_string(r.trace.stop), "");
    gisl_initial.push_back(r.gisl_db_initial);
    gisl_final.push_back(r.gisl_db_final);
    pslr_initial.push_back(r.pslr_db_initial);
    pslr_final.push_back(r.pslr_db_final);
    improvement.push_back(r.gisl_db_initial - r.gisl_db_final);
  }
  csv.write();

  IniWriter ini;
  ini.section("sweep");
  ini.put("seed_first", cfg.seed);
  ini.put("seed_count", count);
  ini.put("succeeded", count - failed);
  ini.put("failed", failed);
  auto put_stats = [&](const std::string& name, const std::vector<double>& values) {
    const Summary s = summarize(values);
    ini.section(name);
    ini.put_db("median", s.median);
    ini.put_db("q1", s.q1);
    ini.put_db("q3", s.q3);
    ini.put("iqr", s.q3 - s.q1);
  };
  if (failed < count) {
    put_stats("gisl_db_initial", gisl_initial);
    put_stats("gisl_db_final", gisl_final);
    put_stats("pslr_db_initial", pslr_initial);
    put_stats("pslr_db_final", pslr_final);
    put_stats("improvement_db", improvement);
  }
  write_text(dir / "aggregate.ini", ini.text());
  write_timing(dir, seconds);

  if (failed < count) {
    fmt::print("sweep: {} seeds, median GISL {:.2f} dB -> {:.2f} dB ({} failed) -> {}\n", count,
               summarize(gisl_initial).median, summarize(gisl_final).median, failed, dir.string());
  } else {
    fmt::print("sweep: all {} seeds failed -> {}\n", count, dir.string());
  }
  return failed;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"CE-OFDM waveform synthesis and GISL sidelobe optimization"};
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> from;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::map<std::string, std::string> raw;
  };
  Options opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "INI experiment config");
    sub->add_option("--out", opts.out, "output directory (run.output)");
    sub->add_option("--seed", opts.seed, "base seed (run.seed)");
    sub->add_option("--threads", opts.threads, "worker threads (run.threads)");
    for (const std::string& key : config_keys()) {
      sub->add_option("--" + key, opts.raw[key], "override " + key);
    }
  };

  CLI::App* synth = app.add_subcommand("synth", "synthesize a seed waveform and export its ACF/AF/spectra");
  CLI::App* optimize = app.add_subcommand("optimize", "run GD-GISL on one seed");
  CLI::App* quantize = app.add_subcommand("quantize", "truncate optimized phases to M-ary PSK");
  CLI::App* sweep = app.add_subcommand("sweep", "run GD-GISL over seed_count seeds");
  for (CLI::App* sub : {synth, optimize, quantize, sweep}) add_common(sub);
  quantize->add_option("--from", opts.from, "directory written by 'optimize'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ExperimentConfig cfg = opts.config.empty() ? ExperimentConfig{} : load_config(opts.config);
    for (const std::string& key : config_keys()) {
      for (CLI::App* sub : {synth, optimize, quantize, sweep}) {
        if (sub->parsed() && sub->count("--" + key) > 0) apply_setting(cfg, key, opts.raw[key]);
      }
    }
    if (opts.out) cfg.output = *opts.out;
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.threads) cfg.threads = *opts.threads;

    if (synth->parsed()) {
      cmd_synth(cfg);
    } else if (optimize->parsed()) {
      cmd_optimize(cfg);
    } else if (quantize->parsed()) {
      cmd_quantize(cfg, opts.from ? std::optional<fs::path>(*opts.from) : std::nullopt);
    } else if (sweep->parsed()) {
      const int failed = cmd_sweep(cfg);
      if (failed == cfg.seed_count) return kExitNumerical;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace ceofdm::runner
