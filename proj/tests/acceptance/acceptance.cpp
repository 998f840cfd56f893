// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   acceptance            run everything
//   acceptance 3 10       run the listed criteria only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "benjamin/bourgain.hpp"
#include "benjamin/diagnostics.hpp"
#include "benjamin/evolution.hpp"
#include "benjamin/hum.hpp"
#include "benjamin/nonlinear_control.hpp"
#include "benjamin/operators.hpp"
#include "benjamin/spectral_ops.hpp"

using namespace benjamin;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Independent dispersion relation, written out here rather than taken from the library.
double phase(int k, const PhysicalParams& p) {
  const double kk = k;
  return -kk * kk * kk - 2.0 * p.mu * kk + p.alpha * kk * std::abs(kk);
}

SpectralField mode_field(int n, int k, Complex c) {
  SpectralField u(n);
  u.set_coeff(k, c);
  return u;
}

// Data shared by criteria 3 and 10.
SpectralField decay_data(int n) { return random_field(n, 1, 0.1); }

constexpr int kDecayN = 64;
constexpr double kDecayDt = 1e-4;
constexpr double kDecayT = 10.0;
constexpr int kDecayStride = 100;

Trajectory decay_run(const FeedbackLaw& law) {
  RunConfig cfg;
  cfg.N = kDecayN;
  cfg.dt = kDecayDt;
  cfg.T_final = kDecayT;
  cfg.sample_stride = kDecayStride;
  cfg.s = 0.0;
  cfg.feedback = law;
  return integrate(cfg, decay_data(cfg.N));
}

DecayFit k0_fit() {
  static const DecayFit fit = [] {
    const Trajectory tr = decay_run(DampingGGstar{1.0});
    const auto l2 = tr.l2_series();
    return fit_decay_rate(tr.times, l2, {2.0, kDecayT});
  }();
  return fit;
}

// 1. Linear propagator exactness.
Outcome linear_propagator() {
  const int n = 64;
  const double T = 1.0;
  RunConfig cfg;
  cfg.N = n;
  cfg.dt = 1e-3;
  cfg.T_final = T;
  cfg.nonlinear = false;
  double worst = 0.0;
  for (int k : {1, 2, 7, 16, 31}) {
    const Complex c{0.3, -0.2};
    const Trajectory tr = integrate(cfg, mode_field(n, k, c));
    const Complex expect = c * std::exp(Complex{0.0, phase(k, cfg.params) * T});
    const SpectralField diff = tr.final_state() - mode_field(n, k, expect);
    worst = std::max(worst, l2_norm(diff) / l2_norm(mode_field(n, k, c)));
  }
  return {worst < 1e-10, fmt("max relative error %.2e over k = 1,2,7,16,31 (tol 1e-10)", worst)};
}

// 2. Conservation of I1, I2.
Outcome conservation() {
  RunConfig cfg;
  cfg.N = 128;
  cfg.dt = 1e-3;
  cfg.T_final = 1.0;
  cfg.initial.kind = InitialCondition::Kind::kCosine;
  cfg.initial.amplitude = 0.1;
  cfg.initial.mode = 1;
  const Trajectory tr = integrate(cfg);
  double d1 = 0.0, d2 = 0.0;
  const auto& first = tr.diagnostics.front();
  for (const auto& d : tr.diagnostics) {
    d1 = std::max(d1, std::abs(d.I1 - first.I1) / first.I1);
    d2 = std::max(d2, std::abs(d.I2 - first.I2) / std::abs(first.I2));
  }
  return {d1 < 1e-8 && d2 < 1e-6, fmt("|dI1|/I1 = %.2e (tol 1e-8), |dI2|/|I2| = %.2e (tol 1e-6)", d1, d2)};
}

// 3. K0 monotone decay with an exponential fit on [2, 10].
Outcome k0_decay() {
  const Trajectory tr = decay_run(DampingGGstar{1.0});
  const auto l2 = tr.l2_series();
  double worst_rise = 0.0;
  for (std::size_t i = 1; i < l2.size(); ++i) worst_rise = std::max(worst_rise, l2[i] - l2[i - 1]);
  const DecayFit fit = k0_fit();
  const bool ok = worst_rise <= 1e-10 && fit.rate > 0.0 && fit.r_squared > 0.95;
  return {ok, fmt("max rise %.1e (slack 1e-10), rate %.4f, r2 %.4f (need > 0.95)", worst_rise, fit.rate,
                  fit.r_squared)};
}

// 4. Energy identity d/dt (1/2)|u|^2 = -|Gu|^2 at second order in dt.
Outcome energy_identity() {
  std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4};
  std::vector<double> errs;
  for (double dt : dts) {
    RunConfig cfg;
    cfg.N = 64;
    cfg.dt = dt;
    cfg.T_final = 1.0;
    cfg.feedback = DampingGGstar{1.0};
    cfg.initial.kind = InitialCondition::Kind::kCosine;
    cfg.initial.amplitude = 0.1;
    cfg.initial.mode = 2;
    const Trajectory tr = integrate(cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
      const auto& a = tr.diagnostics[i];
      const auto& b = tr.diagnostics[i + 1];
      const double h = b.t - a.t;
      const double r = (b.I1 - a.I1) / h + 0.5 * (a.control_energy + b.control_energy);
      worst = std::max(worst, std::abs(r));
    }
    errs.push_back(worst);
  }
  // Least-squares slope of log err against log dt.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(dts.size());
  for (std::size_t i = 0; i < dts.size(); ++i) {
    const double x = std::log(dts[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return {order >= 1.9, fmt("residual %.2e at dt 4e-3 .. %.2e at dt 5e-4, fitted order %.3f (need >= 1.9)",
                            errs.front(), errs.back(), order)};
}

// 5. L_lambda closed form (uniform gain) and Hermitian positivity (bump gain).
Outcome l_lambda_closed_form() {
  const int n = 64;
  const PhysicalParams p;
  LLambdaSpec spec;
  spec.lambda = 1.0;
  spec.a = 1.0;
  const auto L = assemble_L_lambda(spec, GainProfile::uniform(n), p, n);
  const double expect = (1.0 - std::exp(-2.0 * spec.lambda * spec.a)) / (8.0 * kPi * kPi * spec.lambda);
  double rel = 0.0;
  const auto& e = L.entries();
  for (int i = 0; i < e.rows(); ++i) {
    for (int j = 0; j < e.cols(); ++j) {
      const Complex target = i == j ? Complex{expect, 0.0} : Complex{};
      rel = std::max(rel, std::abs(e(i, j) - target) / expect);
    }
  }
  const auto B = assemble_L_lambda(spec, GainProfile::raised_cosine(n), p, n);
  const double herm = B.hermitian_residual();
  const double lmin = B.min_eigenvalue();
  return {rel < 1e-8 && herm < 1e-10 && lmin > 0.0,
          fmt("uniform max rel dev %.2e (tol 1e-8); bump hermitian residual %.2e, min eigenvalue %.3e", rel, herm,
              lmin)};
}

// 6. K_lambda decay at rate >= 0.8 for lambda = 1.
Outcome arbitrary_decay() {
  std::string detail;
  bool ok = true;
  for (double s : {0.0, 1.0}) {
    RunConfig cfg;
    cfg.N = 64;
    cfg.T_final = 4.0;
    cfg.s = s;
    cfg.sample_stride = 200;
    KLambda law;
    law.spec.lambda = 1.0;
    cfg.feedback = law;
    SpectralField u0 = random_field(cfg.N, 5);
    u0 *= 1e-3 / sobolev_norm(u0, s);
    const Trajectory tr = integrate(cfg, u0);
    const auto hs = tr.hs_series();
    const DecayFit fit = fit_decay_rate(tr.times, hs, cfg.decay_window());
    ok = ok && fit.rate >= 0.8 && fit.r_squared > 0.95;
    detail += fmt("%ss=%g rate %.3f r2 %.5f", detail.empty() ? "" : "; ", s, fit.rate, fit.r_squared);
  }
  return {ok, detail + " (need rate >= 0.8, r2 > 0.95)"};
}

// 7. Linear HUM control.
Outcome linear_control() {
  RunConfig cfg;
  cfg.N = 64;
  cfg.T_final = 1.0;
  cfg.nonlinear = false;
  const double T = cfg.T_final;
  const GainProfile g = cfg.gain.build(cfg.N);
  const auto W = assemble_gramian(T, g, cfg.params, cfg.N);
  const double delta2 = observability_constant(W);
  const HumSynthesizer syn(W, g, cfg.params, T);
  ControlProblem prob;
  prob.u0 = mode_field(cfg.N, 1, {0.05, 0.0});
  prob.u1 = mode_field(cfg.N, 2, {0.0, -0.05});
  prob.horizon_T = T;
  const int steps = static_cast<int>(std::lround(T / cfg.time_step()));
  const ControlSignal h = syn.synthesize(prob, 2 * steps);
  const Trajectory tr = controlled_run(cfg, h, prob.u0);
  const double rel = l2_norm(tr.final_state() - prob.u1) / l2_norm(prob.u1);
  return {rel < 1e-6 && delta2 > 0.0,
          fmt("relative residual %.2e (tol 1e-6), delta^2 = %.3e, cond(W) = %.1f", rel, delta2,
              syn.condition_number())};
}

// 8. Picard small-data control, plus the linear limit.
Outcome small_data_control() {
  RunConfig cfg;
  cfg.N = 64;
  cfg.s = 0.0;
  SpectralField u0 = mode_field(cfg.N, 1, {1.0, 0.0});
  SpectralField u1 = mode_field(cfg.N, 2, {0.0, -1.0});
  u0 *= 1e-3 / l2_norm(u0);
  u1 *= 1e-3 / l2_norm(u1);
  const PicardResult r = picard_control(u0, u1, 1.0, 0.0, 1e-12, 20, cfg);

  // Re-simulate at dt/4 from the adjoint state.
  RunConfig fine = cfg;
  fine.dt = cfg.time_step() / 4.0;
  fine.T_final = 1.0;
  const int steps = static_cast<int>(std::lround(1.0 / fine.dt));
  std::vector<double> times = uniform_times(0.0, 1.0, 2 * steps);
  std::vector<SpectralField> values;
  for (double t : times) values.push_back(r.synthesizer->control_at(r.eta, t));
  const Trajectory check = controlled_run(fine, ControlSignal(times, values), u0);
  const double replay = l2_norm(check.final_state() - u1);

  RunConfig lin = cfg;
  lin.nonlinear = false;
  const PicardResult rl = picard_control(u0, u1, 1.0, 0.0, 1e-12, 20, lin);

  const bool ok = r.iterations <= 8 && r.residual < 1e-6 && replay < 1e-6 && rl.iterations == 1;
  return {ok, fmt("%d iterations, residual %.2e (relative %.2e), dt/4 replay %.2e, contraction %.2e; "
                  "linear: %d iteration",
                  r.iterations, r.residual, r.relative_residual, replay, r.contraction_estimate, rl.iterations)};
}

// 9. Large-data composition.
Outcome large_data() {
  RunConfig cfg;
  cfg.N = 64;
  cfg.s = 0.0;
  const SpectralField u0 = random_field(cfg.N, 11, 1.0);
  const SpectralField u1 = random_field(cfg.N, 12, 1.0);
  const LargeDataOptions opts;
  const LargeDataResult r = large_data_control(u0, u1, opts, cfg);
  return {r.residual < 1e-4,
          fmt("residual %.2e (tol 1e-4); damp %.1f + control %.1f + damp %.1f, small states %.1e -> %.1e, %d "
              "Picard iterations",
              r.residual, r.damp_forward_time, r.control_time, r.damp_backward_time, r.small_start_norm,
              r.small_target_norm, r.picard_iterations)};
}

// 10. Time-varying feedback beats K0 on the same data.
Outcome time_varying() {
  TimeVarying law;
  law.spec.lambda = 2.0;
  law.spec.period_T = 1.0;
  const Trajectory tr = decay_run(law);
  const auto l2 = tr.l2_series();
  const DecayFit fit = fit_decay_rate(tr.times, l2, {2.0, kDecayT});
  const DecayFit k0 = k0_fit();
  return {fit.rate > k0.rate, fmt("rate %.4f vs K0 rate %.4f", fit.rate, k0.rate)};
}

// 11. Non-resonance lemmas.
Outcome nonresonance() {
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const NonresonanceReport r = verify_nonresonance(200, alpha);
    ok = ok && r.cubic_bound_violations == 0 && r.product_bound_violations == 0 && r.resonance_violations == 0;
    detail += fmt("%salpha %g: %ld/%ld/%ld violations, min ratio %.3f", detail.empty() ? "" : "; ", alpha,
                  r.cubic_bound_violations, r.product_bound_violations, r.resonance_violations, r.resonance_min_ratio);
  }
  return {ok, detail};
}

// 12. L4 embedding constant independent of N.
Outcome l4_embedding() {
  const PhysicalParams p;
  auto ensemble_max = [&](int n) {
    double best = 0.0;
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
      best = std::max(best, l4_embedding_ratio(random_free_wave(n, seed, p), p));
    }
    return best;
  };
  const double m32 = ensemble_max(32);
  const double m64 = ensemble_max(64);
  const double m128 = ensemble_max(128);
  const double growth = std::max(m64, m128) / m32 - 1.0;
  return {growth <= 0.10, fmt("ensemble max %.4f (N=32), %.4f (N=64), %.4f (N=128), growth %+.2f%% (limit 10%%)",
                              m32, m64, m128, 100.0 * growth)};
}

// 13. Forward-then-backward free integration.
Outcome reversibility() {
  RunConfig cfg;
  cfg.N = 64;
  const Evolution evo(cfg);
  const SpectralField u0 = random_field(cfg.N, 4, 0.1);
  const double step = cfg.time_step();
  const Trajectory fw = evo.run(u0, 0.0, 1.0, step, 1000000);
  const Trajectory bw = evo.run(fw.final_state(), 1.0, 0.0, step, 1000000);
  const double rel = l2_norm(bw.final_state() - u0) / l2_norm(u0);
  return {rel < 1e-7, fmt("relative return error %.2e (tol 1e-7)", rel)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"linear propagator exactness", linear_propagator},
      {"conservation of I1 and I2", conservation},
      {"K0 monotone exponential decay", k0_decay},
      {"energy identity second order", energy_identity},
      {"L_lambda closed form and positivity", l_lambda_closed_form},
      {"K_lambda prescribed decay", arbitrary_decay},
      {"linear HUM exact control", linear_control},
      {"nonlinear small-data control", small_data_control},
      {"large-data control composition", large_data},
      {"time-varying feedback beats K0", time_varying},
      {"non-resonance lemmas", nonresonance},
      {"L4 embedding ratio stable in N", l4_embedding},
      {"time reversibility", reversibility},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first, out.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
