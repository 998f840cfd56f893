#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "benjamin/bourgain.hpp"
#include "benjamin/config.hpp"
#include "benjamin/errors.hpp"
#include "benjamin/hum.hpp"
#include "benjamin/io.hpp"
#include "benjamin/nonlinear_control.hpp"
#include "benjamin/spectral_ops.hpp"

namespace benjamin::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::string output;
  bool quiet = false;
};

// Thrown for a failed check; carries the message already written to summary.txt.
struct CheckFailed {
  std::string what;
};

Overrides collect_overrides(const std::vector<std::string>& sets) {
  Overrides out;
  for (const auto& s : sets) out.push_back(parse_override(s));
  return out;
}

fs::path resolve_output(const Common& c, const Config& cfg) {
  if (!c.output.empty()) return c.output;
  return output_directory(cfg.run.output_dir);
}

void write_meta(const fs::path& dir, const std::string& command, const Config& cfg) {
  KeyValues kv{{"version", version()}, {"command", command}};
  for (auto& entry : describe(cfg)) kv.push_back(std::move(entry));
  kv.emplace_back("run.resolved_dt", format_number(cfg.run.time_step()));
  write_key_values(dir / "meta.txt", kv);
}

std::string yes(bool b) { return b ? "true" : "false"; }

// At most ~200 slices of the spectrum, always including the last sample.
Trajectory thin(const Trajectory& tr, std::size_t target = 200) {
  const std::size_t stride = std::max<std::size_t>(1, (tr.size() + target - 1) / target);
  Trajectory out;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (i % stride == 0 || i + 1 == tr.size()) {
      out.times.push_back(tr.times[i]);
      out.states.push_back(tr.states[i]);
      out.diagnostics.push_back(tr.diagnostics[i]);
    }
  }
  return out;
}

void write_run_files(const fs::path& dir, const Trajectory& tr) {
  write_trajectory_csv(dir / "trajectory.csv", tr);
  write_spectrum_csv(dir / "spectrum.csv", thin(tr));
}

KeyValues decay_summary(const RunConfig& run, const Trajectory& tr, bool& ok) {
  const auto l2 = tr.l2_series();
  double rise = 0.0;
  for (std::size_t i = 1; i < l2.size(); ++i) rise = std::max(rise, l2[i] - l2[i - 1]);
  KeyValues kv{{"law", feedback_name(run.feedback)},
               {"initial_l2", format_number(l2.front())},
               {"final_l2", format_number(l2.back())},
               {"max_rise", format_number(rise)}};
  const bool damping = std::holds_alternative<DampingGGstar>(run.feedback);
  bool monotone = rise <= 1e-10;
  kv.emplace_back("monotone", yes(monotone));
  ok = !damping || monotone;
  if (!std::holds_alternative<NoFeedback>(run.feedback)) {
    try {
      const DecayFit fit = fit_decay_rate(tr.times, l2, run.decay_window());
      kv.emplace_back("decay_rate", format_number(fit.rate));
      kv.emplace_back("decay_intercept", format_number(fit.intercept));
      kv.emplace_back("decay_r_squared", format_number(fit.r_squared));
      kv.emplace_back("decay_window_start", format_number(fit.window.first));
      kv.emplace_back("decay_window_end", format_number(fit.window.second));
      ok = ok && fit.rate > 0.0;
    } catch (const NonPositiveNorm& e) {
      kv.emplace_back("decay_rate", "nan");
      ok = false;
    }
  }
  return kv;
}

int finish(const fs::path& dir, KeyValues kv, bool ok, std::ostream& out, bool quiet) {
  kv.emplace_back("status", ok ? "pass" : "fail");
  write_key_values(dir / "summary.txt", kv);
  if (!quiet) {
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
    out << "wrote " << dir.string() << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_evolve(const Common& c, std::ostream& out) {
  const Config cfg = load_config(c.config_path, collect_overrides(c.sets));
  const fs::path dir = resolve_output(c, cfg);
  const Trajectory tr = integrate(cfg.run);
  write_run_files(dir, tr);
  write_meta(dir, "evolve", cfg);
  bool ok = true;
  KeyValues kv = decay_summary(cfg.run, tr, ok);
  const auto& first = tr.diagnostics.front();
  const auto& last = tr.diagnostics.back();
  kv.emplace_back("I1_drift", format_number(first.I1 != 0.0 ? std::abs(last.I1 - first.I1) / first.I1 : 0.0));
  kv.emplace_back("I2_drift",
                  format_number(first.I2 != 0.0 ? std::abs(last.I2 - first.I2) / std::abs(first.I2) : 0.0));
  kv.emplace_back("samples", std::to_string(tr.size()));
  return finish(dir, std::move(kv), ok, out, c.quiet);
}

struct StabilizeFlags {
  std::string law;
  double lambda = 0.0;
  double gain = 0.0;
};

Overrides stabilize_overrides(const Common& c, const StabilizeFlags& f) {
  Overrides o = collect_overrides(c.sets);
  if (!f.law.empty()) o.emplace_back("feedback.law", f.law);
  if (f.lambda > 0.0) o.emplace_back("feedback.lambda", format_number(f.lambda));
  if (f.gain != 0.0) o.emplace_back("feedback.gain", format_number(f.gain));
  return o;
}

int stabilize_once(const Config& cfg, const fs::path& dir, std::ostream& out, bool quiet, KeyValues* result) {
  const Trajectory tr = integrate(cfg.run);
  write_run_files(dir, tr);
  write_meta(dir, "stabilize", cfg);
  bool ok = true;
  KeyValues kv = decay_summary(cfg.run, tr, ok);
  if (result) *result = kv;
  return finish(dir, std::move(kv), ok, out, quiet);
}

int cmd_stabilize(const Common& c, const StabilizeFlags& f, std::ostream& out) {
  const Config cfg = load_config(c.config_path, stabilize_overrides(c, f));
  return stabilize_once(cfg, resolve_output(c, cfg), out, c.quiet, nullptr);
}

// ---------------------------------------------------------------------------

struct ControlFlags {
  std::string mode = "linear";
};

int cmd_control(const Common& c, const ControlFlags& f, std::ostream& out) {
  Config cfg = load_config(c.config_path, collect_overrides(c.sets));
  const fs::path dir = resolve_output(c, cfg);
  const RunConfig& run = cfg.run;
  const double T = cfg.control.horizon;
  const SpectralField u0 = run.initial.build(run.N);
  const SpectralField u1 = cfg.control.target.build(run.N);
  KeyValues kv{{"mode", f.mode}, {"horizon", format_number(T)}};
  bool ok = false;

  if (f.mode == "linear") {
    RunConfig lin = run;
    lin.nonlinear = false;
    lin.t0 = 0.0;
    lin.T_final = T;
    const GainProfile g = lin.gain.build(lin.N);
    const auto W = assemble_gramian(T, g, lin.params, lin.N);
    const HumSynthesizer syn(W, g, lin.params, T);
    ControlProblem prob{u0, u1, T, run.s};
    const int steps = static_cast<int>(std::lround(T / lin.time_step()));
    const ControlSignal h = syn.synthesize(prob, 2 * steps);
    const Trajectory tr = controlled_run(lin, h, u0);
    const double residual = sobolev_norm(tr.final_state() - u1, run.s);
    const double target = sobolev_norm(u1, run.s);
    const double rel = target > 0.0 ? residual / target : residual;
    write_run_files(dir, thin(tr, 2000));
    write_control_csv(dir / "control.csv", h, run.s);
    const auto& ev = W.eigenvalues();
    write_gramian_csv(dir / "gramian.csv", std::vector<double>(ev.data(), ev.data() + ev.size()));
    kv.emplace_back("residual", format_number(residual));
    kv.emplace_back("relative_residual", format_number(rel));
    kv.emplace_back("observability_constant", format_number(observability_constant(W)));
    kv.emplace_back("gramian_condition", format_number(syn.condition_number()));
    kv.emplace_back("nu", format_number(syn.nu()));
    kv.emplace_back("control_l2", format_number(h.time_norm(0.0)));
    ok = rel < 1e-6;
  } else if (f.mode == "picard") {
    const PicardResult r = picard_control(u0, u1, T, run.s, cfg.control.tol, cfg.control.max_iter, run);
    write_run_files(dir, thin(r.trajectory, 2000));
    write_control_csv(dir / "control.csv", r.control, run.s);
    const auto& ev = r.synthesizer->gramian().eigenvalues();
    write_gramian_csv(dir / "gramian.csv", std::vector<double>(ev.data(), ev.data() + ev.size()));
    std::ofstream hist(dir / "picard.csv");
    hist.precision(17);
    hist << "iteration,distance,ratio,residual\n";
    for (const auto& it : r.history) hist << it.index << ',' << it.distance << ',' << it.ratio << ',' << it.residual << '\n';
    kv.emplace_back("iterations", std::to_string(r.iterations));
    kv.emplace_back("residual", format_number(r.residual));
    kv.emplace_back("relative_residual", format_number(r.relative_residual));
    kv.emplace_back("contraction_estimate", format_number(r.contraction_estimate));
    kv.emplace_back("gramian_condition", format_number(r.gramian_condition));
    ok = r.residual < cfg.control.tol * r.gramian_condition || r.residual == 0.0;
  } else if (f.mode == "large") {
    const LargeDataResult r = large_data_control(u0, u1, cfg.control.large, run);
    write_run_files(dir, thin(r.replay, 2000));
    write_control_csv(dir / "control.csv", r.control, cfg.control.large.s);
    kv.emplace_back("damp_forward_time", format_number(r.damp_forward_time));
    kv.emplace_back("control_time", format_number(r.control_time));
    kv.emplace_back("damp_backward_time", format_number(r.damp_backward_time));
    kv.emplace_back("small_start_norm", format_number(r.small_start_norm));
    kv.emplace_back("small_target_norm", format_number(r.small_target_norm));
    kv.emplace_back("picard_iterations", std::to_string(r.picard_iterations));
    kv.emplace_back("residual", format_number(r.residual));
    kv.emplace_back("relative_residual", format_number(r.relative_residual));
    ok = r.relative_residual < 1e-4;
  } else {
    throw ConfigError("unknown control mode '" + f.mode + "'");
  }
  write_meta(dir, "control --mode " + f.mode, cfg);
  return finish(dir, std::move(kv), ok, out, c.quiet);
}

// ---------------------------------------------------------------------------

struct VerifyFlags {
  bool lemmas = false;
  bool invariants = false;
  bool l4 = false;
  bool gramian = false;
  long kmax = 200;
  std::vector<double> alphas;
  int fields = 500;
  std::vector<int> sizes{32, 64, 128};
};

int cmd_verify(const Common& c, VerifyFlags f, std::ostream& out) {
  const Config cfg = load_config(c.config_path, collect_overrides(c.sets));
  const fs::path dir = resolve_output(c, cfg);
  fs::create_directories(dir);
  if (!f.lemmas && !f.invariants && !f.l4 && !f.gramian) f.lemmas = f.invariants = f.gramian = true;
  KeyValues kv;
  bool ok = true;

  if (f.lemmas) {
    if (f.alphas.empty()) f.alphas.push_back(cfg.run.params.alpha);
    std::ofstream csv(dir / "resonance.csv");
    csv << "alpha,k_max,pairs,cubic_bound_violations,product_bound_violations,resonance_checked,resonance_violations,"
           "resonance_min_ratio,trichotomy_checked,trichotomy_violations\n";
    csv.precision(17);
    for (double a : f.alphas) {
      const NonresonanceReport r = verify_nonresonance(f.kmax, a);
      csv << a << ',' << r.k_max << ',' << r.pairs_checked << ',' << r.cubic_bound_violations << ','
          << r.product_bound_violations << ',' << r.resonance_checked << ',' << r.resonance_violations << ','
          << r.resonance_min_ratio << ',' << r.trichotomy_checked << ',' << r.trichotomy_violations << '\n';
      const std::string p = "lemmas.alpha_" + format_number(a) + ".";
      kv.emplace_back(p + "pairs", std::to_string(r.pairs_checked));
      kv.emplace_back(p + "violations", std::to_string(r.cubic_bound_violations + r.product_bound_violations +
                                                       r.resonance_violations + r.trichotomy_violations));
      kv.emplace_back(p + "resonance_min_ratio", format_number(r.resonance_min_ratio));
      ok = ok && r.ok();
    }
  }

  if (f.invariants) {
    RunConfig run = cfg.run;
    run.feedback = NoFeedback{};
    const Trajectory tr = integrate(run);
    write_trajectory_csv(dir / "trajectory.csv", tr);
    double d1 = 0.0, d2 = 0.0;
    const auto& first = tr.diagnostics.front();
    for (const auto& d : tr.diagnostics) {
      if (first.I1 != 0.0) d1 = std::max(d1, std::abs(d.I1 - first.I1) / first.I1);
      if (first.I2 != 0.0) d2 = std::max(d2, std::abs(d.I2 - first.I2) / std::abs(first.I2));
    }
    const Evolution evo(run);
    const SpectralField u0 = tr.states.front();
    const double step = run.time_step();
    const SpectralField back = evo.run(tr.final_state(), run.T_final, run.t0, step, 1 << 30).final_state();
    const double norm0 = l2_norm(u0);
    const double rev = norm0 > 0.0 ? l2_norm(back - u0) / norm0 : l2_norm(back);
    // Parseval against a physical-space rectangle rule on a 4N grid.
    const auto x = sample_on_grid(u0, 4 * run.N);
    double quad = 0.0;
    for (double v : x) quad += 0.5 * v * v;
    quad *= kTwoPi / static_cast<double>(x.size());
    const double i1 = invariant_I1(u0);
    const double parseval = i1 > 0.0 ? std::abs(quad - i1) / i1 : std::abs(quad);
    kv.emplace_back("invariants.I1_drift", format_number(d1));
    kv.emplace_back("invariants.I2_drift", format_number(d2));
    kv.emplace_back("invariants.reversibility", format_number(rev));
    kv.emplace_back("invariants.parseval", format_number(parseval));
    ok = ok && d1 < 1e-8 && d2 < 1e-6 && rev < 1e-7 && parseval < 1e-12;
  }

  if (f.gramian) {
    const GainProfile g = cfg.run.gain.build(cfg.run.N);
    const auto W = assemble_gramian(cfg.control.horizon, g, cfg.run.params, cfg.run.N);
    const auto& ev = W.eigenvalues();
    write_gramian_csv(dir / "gramian.csv", std::vector<double>(ev.data(), ev.data() + ev.size()));
    const double lo = W.min_eigenvalue(), hi = W.max_eigenvalue();
    kv.emplace_back("gramian.observability_constant", format_number(lo));
    kv.emplace_back("gramian.max_eigenvalue", format_number(hi));
    kv.emplace_back("gramian.condition", format_number(hi / lo));
    kv.emplace_back("gramian.hermitian_residual", format_number(W.hermitian_residual()));
    ok = ok && lo >= -1e-12 * hi && lo > 0.0 && W.hermitian_residual() < 1e-10;
  }

  if (f.l4) {
    std::ofstream csv(dir / "l4.csv");
    csv << "N,fields,max_ratio,mean_ratio\n";
    csv.precision(17);
    double base = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < f.sizes.size(); ++i) {
      double best = 0.0, sum = 0.0;
      for (int seed = 1; seed <= f.fields; ++seed) {
        const double r = l4_embedding_ratio(random_free_wave(f.sizes[i], static_cast<std::uint64_t>(seed),
                                                             cfg.run.params),
                                            cfg.run.params);
        best = std::max(best, r);
        sum += r;
      }
      csv << f.sizes[i] << ',' << f.fields << ',' << best << ',' << sum / f.fields << '\n';
      kv.emplace_back("l4.N_" + std::to_string(f.sizes[i]) + ".max_ratio", format_number(best));
      if (i == 0) base = best;
      worst = std::max(worst, best);
    }
    const double growth = base > 0.0 ? worst / base - 1.0 : 0.0;
    kv.emplace_back("l4.growth", format_number(growth));
    ok = ok && growth <= 0.10;
  }

  write_meta(dir, "verify", cfg);
  return finish(dir, std::move(kv), ok, out, c.quiet);
}

// ---------------------------------------------------------------------------

struct SweepFlags {
  std::string param;
  std::vector<std::string> values;
  std::string law;
  unsigned jobs = 0;
};

int cmd_sweep(const Common& c, const SweepFlags& f, std::ostream& out) {
  const Overrides base = collect_overrides(c.sets);
  std::vector<Config> configs;
  for (const auto& v : f.values) {
    Overrides o = base;
    if (!f.law.empty()) o.emplace_back("feedback.law", f.law);
    o.emplace_back(f.param, v);
    configs.push_back(load_config(c.config_path, o));
  }
  const fs::path dir = resolve_output(c, configs.front());
  fs::create_directories(dir);

  const unsigned jobs = f.jobs > 0 ? f.jobs : std::max(1u, std::thread::hardware_concurrency());
  std::vector<int> codes(configs.size(), kOk);
  std::vector<KeyValues> results(configs.size());
  std::vector<std::string> errors(configs.size());
  for (std::size_t start = 0; start < configs.size(); start += jobs) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(configs.size(), start + jobs); ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        std::ostringstream sink;
        try {
          codes[i] = stabilize_once(configs[i], dir / (f.param + "=" + f.values[i]), sink, true, &results[i]);
        } catch (const std::exception& e) {
          codes[i] = kCheckFailed;
          errors[i] = e.what();
        }
      }));
    }
    for (auto& fut : batch) fut.get();
  }

  std::ofstream csv(dir / "sweep.csv");
  csv << "param,value,decay_rate,decay_r_squared,final_l2,status\n";
  bool ok = true;
  auto lookup = [](const KeyValues& kv, const std::string& key) {
    for (const auto& [k, v] : kv) {
      if (k == key) return v;
    }
    return std::string("nan");
  };
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const bool pass = codes[i] == kOk;
    ok = ok && pass;
    csv << f.param << ',' << f.values[i] << ',' << lookup(results[i], "decay_rate") << ','
        << lookup(results[i], "decay_r_squared") << ',' << lookup(results[i], "final_l2") << ','
        << (pass ? "pass" : "fail") << '\n';
    if (!errors[i].empty() && !c.quiet) out << f.param << '=' << f.values[i] << ": " << errors[i] << '\n';
  }
  KeyValues kv{{"param", f.param}, {"points", std::to_string(configs.size())}};
  write_meta(dir, "sweep " + f.param, configs.front());
  return finish(dir, std::move(kv), ok, out, c.quiet);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and control of the periodic Benjamin equation"};
  app.name("benjamin");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("-c,--config", common.config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", common.sets, "Override a setting, section.key=value (repeatable)");
  app.add_option("-o,--output", common.output, "Output directory (default: $BENJAMIN_OUTPUT_DIR, then run.output_dir)");
  app.add_flag("-q,--quiet", common.quiet, "Only write files");
  app.set_version_flag("--version", std::string(version()));

  auto* evolve = app.add_subcommand("evolve", "Free or forced run of the configured initial condition");

  StabilizeFlags sf;
  auto* stabilize = app.add_subcommand("stabilize", "Closed-loop run with a feedback law and a decay fit");
  stabilize->add_option("--law", sf.law, "none | ggstar | klambda | timevarying")
      ->check(CLI::IsMember({"none", "ggstar", "klambda", "timevarying"}));
  stabilize->add_option("--lambda", sf.lambda, "Decay parameter for klambda / timevarying");
  stabilize->add_option("--gain", sf.gain, "Multiplier for ggstar");

  ControlFlags cf;
  auto* control = app.add_subcommand("control", "Exact control from [initial] to [target]");
  control->add_option("--mode", cf.mode, "linear | picard | large")
      ->check(CLI::IsMember({"linear", "picard", "large"}));

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Invariant, resonance, L4 and Gramian checks");
  verify->add_flag("--lemmas", vf.lemmas, "Exhaustive non-resonance check");
  verify->add_flag("--invariants", vf.invariants, "Conservation, reversibility and Parseval checks");
  verify->add_flag("--l4", vf.l4, "L4 / X_{0,1/3} ensemble ratios");
  verify->add_flag("--gramian", vf.gramian, "Observability Gramian spectrum");
  verify->add_option("--kmax", vf.kmax, "Range for --lemmas")->check(CLI::Range(2L, 100000L));
  verify->add_option("--alpha", vf.alphas, "Alpha values for --lemmas (default physics.alpha)");
  verify->add_option("--fields", vf.fields, "Ensemble size for --l4")->check(CLI::PositiveNumber);
  verify->add_option("--sizes", vf.sizes, "Mode counts for --l4, the first is the baseline");

  SweepFlags wf;
  auto* sweep = app.add_subcommand("sweep", "Closed-loop runs over a grid of one setting");
  sweep->add_option("--param", wf.param, "Setting to vary, section.key")->required();
  sweep->add_option("--values", wf.values, "Values to try")->required()->delimiter(',');
  sweep->add_option("--law", wf.law, "Feedback law for every point")
      ->check(CLI::IsMember({"none", "ggstar", "klambda", "timevarying"}));
  sweep->add_option("--jobs", wf.jobs, "Concurrent runs (default: hardware threads)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(common, out);
    if (stabilize->parsed()) return cmd_stabilize(common, sf, out);
    if (control->parsed()) return cmd_control(common, cf, out);
    if (verify->parsed()) return cmd_verify(common, vf, out);
    if (sweep->parsed()) return cmd_sweep(common, wf, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kConfigError;
}

}  // namespace benjamin::cli
