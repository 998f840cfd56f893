#include "benjamin/nonlinear_control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "benjamin/errors.hpp"
#include "benjamin/quadrature.hpp"
#include "benjamin/spectral_ops.hpp"

namespace benjamin {

namespace {

// int_0^1 x exp(-a x) dx
Complex first_moment(Complex a) {
  if (std::abs(a) < 1e-2) {
    Complex sum{}, term{1.0};
    double fact = 1.0;
    for (int n = 0; n < 10; ++n) {
      if (n > 0) {
        term *= -a;
        fact *= n;
      }
      sum += term / (fact * (n + 2));
    }
    return sum;
  }
  return (1.0 - std::exp(-a) * (1.0 + a)) / (a * a);
}

double sup_distance(const Trajectory& a, const Trajectory& b, double s) {
  if (a.size() != b.size()) throw std::logic_error("picard_control: trajectories on different grids");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, sobolev_norm(a.states[i] - b.states[i], s));
  return d;
}

ControlSignal sample_control(const HumSynthesizer& syn, const SpectralField& eta, int intervals) {
  auto times = uniform_times(0.0, syn.horizon(), intervals);
  std::vector<SpectralField> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(syn.control_at(eta, t));
  return ControlSignal(std::move(times), std::move(values));
}

}  // namespace

SpectralField w_functional(const Trajectory& traj, double T, const PhysicalParams& p) {
  if (traj.size() == 0) throw std::invalid_argument("w_functional: empty trajectory");
  const int n = traj.states.front().mode_count();
  SpectralField w(n);
  if (traj.size() < 2) return w;
  const auto table = DispersionTable::get(n, p);
  auto ws = w.half_spectrum();

  SpectralField prev = nonlinear_term(traj.states[0]);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const SpectralField next = nonlinear_term(traj.states[i + 1]);
    const double t0 = traj.times[i];
    const double dt = traj.times[i + 1] - t0;
    const auto a = prev.half_spectrum();
    const auto b = next.half_spectrum();
    for (int k = 1; k < n / 2; ++k) {
      const double phi = table->half()[static_cast<std::size_t>(k)];
      const Complex whole = exp_integral(Complex{0.0, phi}, dt);
      const Complex slope = dt * first_moment(Complex{0.0, phi * dt});
      const Complex shift = std::exp(Complex{0.0, phi * (T - t0)});
      const auto kk = static_cast<std::size_t>(k);
      ws[kk] += shift * (a[kk] * (whole - slope) + b[kk] * slope);
    }
    prev = next;
  }
  return w;
}

PicardResult picard_control(const SpectralField& u0, const SpectralField& u1, double T, double s, double tol,
                            int max_iter, const RunConfig& cfg) {
  if (!u0.is_mean_zero() || !u1.is_mean_zero()) throw std::invalid_argument("picard_control: data must be mean-zero");
  if (!(T > 0.0) || !(tol > 0.0) || max_iter < 1) throw std::invalid_argument("picard_control: bad T, tol or max_iter");

  RunConfig run = cfg;
  run.t0 = 0.0;
  run.T_final = T;
  run.sample_stride = 1;
  run.self_check = false;
  run.feedback = NoFeedback{};
  run.validate();

  const GainProfile g = cfg.gain.build(cfg.N);
  auto syn = std::make_shared<const HumSynthesizer>(assemble_gramian(T, g, cfg.params, cfg.N), g, cfg.params, T);
  // Samples on the dt/2 grid so every ETDRK4 stage reads an exact value.
  const int intervals = static_cast<int>(std::max(1L, 2 * std::lround(T / cfg.time_step())));

  RunConfig linear = run;
  linear.nonlinear = false;
  SpectralField eta = syn->adjoint_state(u0, u1);
  ControlSignal h = sample_control(*syn, eta, intervals);
  Trajectory prev = controlled_run(linear, h, u0);

  PicardResult result;
  result.synthesizer = syn;
  result.gramian_condition = syn->condition_number();
  const double target = sobolev_norm(u1, s);

  int slow = 0;
  double last = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    SpectralField shifted = u1;
    if (cfg.nonlinear) shifted += w_functional(prev, T, cfg.params);
    eta = syn->adjoint_state(u0, shifted);
    h = sample_control(*syn, eta, intervals);
    Trajectory cur = controlled_run(run, h, u0);

    PicardIterate it;
    it.index = iter;
    it.distance = sup_distance(cur, prev, s);
    it.ratio = iter > 1 && last > 0.0 ? it.distance / last : 0.0;
    it.residual = sobolev_norm(cur.final_state() - u1, s);
    result.history.push_back(it);
    if (iter > 1) result.contraction_estimate = std::max(result.contraction_estimate, it.ratio);

    if (it.distance < tol) {
      result.control = std::move(h);
      result.trajectory = std::move(cur);
      result.eta = eta;
      result.iterations = iter;
      result.residual = it.residual;
      result.relative_residual = target > 0.0 ? it.residual / target : it.residual;
      return result;
    }
    slow = (iter > 1 && it.ratio > 0.9) ? slow + 1 : 0;
    if (slow >= 3) {
      throw NoContraction("Picard iteration stopped contracting at iterate " + std::to_string(iter) +
                          " (ratio " + std::to_string(it.ratio) + ")");
    }
    last = it.distance;
    prev = std::move(cur);
  }
  throw NoContraction("Picard iteration did not reach tol within " + std::to_string(max_iter) + " iterates");
}

namespace {

struct DampingPhase {
  ControlSignal control;
  SpectralField end_state;
  double duration = 0.0;
};

// Closed-loop K_lambda run from u until the H^s norm drops below small_norm.
// Records h = -G L^{-1} u at every step on [0, duration].
DampingPhase damp(const SpectralField& u, const LargeDataOptions& opts, const RunConfig& cfg, double step) {
  RunConfig run = cfg;
  KLambda law;
  law.spec.lambda = opts.damp_lambda;
  law.spec.a = opts.damp_horizon;
  run.feedback = law;
  const Evolution evo(run);

  std::vector<double> times{0.0};
  std::vector<SpectralField> values{evo.control(u, 0.0)};
  SpectralField state = u;
  double elapsed = 0.0;
  while (sobolev_norm(state, opts.s) > opts.small_norm && elapsed < opts.max_damp_time - 1e-12) {
    const double chunk = std::min(opts.damp_chunk, opts.max_damp_time - elapsed);
    const Trajectory tr = evo.run(state, elapsed, elapsed + chunk, step, 1);
    for (std::size_t i = 1; i < tr.size(); ++i) {
      times.push_back(tr.times[i]);
      values.push_back(evo.control(tr.states[i], tr.times[i]));
    }
    state = tr.final_state();
    elapsed += chunk;
  }
  return DampingPhase{ControlSignal(std::move(times), std::move(values)), state, elapsed};
}

// Maps a forward phase of w = R u1 to the backward phase of u ending at u1:
// u(t) = R w(-t) on [-duration, 0] carries h_u(t) = -R h_w(-t). Samples are
// returned on [0, duration] after the shift t -> t + duration.
ControlSignal reversed(const ControlSignal& hw, double center) {
  const double d = hw.times().back();
  std::vector<double> times;
  std::vector<SpectralField> values;
  times.reserve(hw.size());
  values.reserve(hw.size());
  for (std::size_t i = hw.size(); i-- > 0;) {
    times.push_back(d - hw.times()[i]);
    values.push_back(-1.0 * reflect(hw.values()[i], center));
  }
  return ControlSignal(std::move(times), std::move(values));
}

ControlSignal shifted(const ControlSignal& c, double offset) {
  ControlSignal out;
  out.append(c, offset);
  return out;
}

void extend(Trajectory& into, const Trajectory& next) {
  into.times.insert(into.times.end(), next.times.begin() + 1, next.times.end());
  into.states.insert(into.states.end(), next.states.begin() + 1, next.states.end());
  into.diagnostics.insert(into.diagnostics.end(), next.diagnostics.begin() + 1, next.diagnostics.end());
}

}  // namespace

LargeDataResult large_data_control(const SpectralField& u0, const SpectralField& u1, const LargeDataOptions& opts,
                                   const RunConfig& cfg) {
  if (!(opts.damp_dt >= 0.0) || !(opts.damp_chunk > 0.0) || !(opts.control_time > 0.0) ||
      !(opts.damp_lambda >= 0.0) || !(opts.damp_horizon > 0.0) || !(opts.small_norm > 0.0)) {
    throw std::invalid_argument("large_data_control: bad damping or timing parameters");
  }
  const GainProfile g = cfg.gain.build(cfg.N);
  const double center = cfg.gain.kind == GainSpec::Kind::kUniform ? 0.0 : cfg.gain.center;
  {
    // The backward phase relies on G commuting with the reflection about center.
    const SpectralField probe = random_field(cfg.N, 3);
    const SpectralField lhs = reflect(apply_G(reflect(probe, center), g), center);
    if (l2_norm(lhs - apply_G(probe, g)) > 1e-10 * l2_norm(apply_G(probe, g))) {
      throw std::invalid_argument("large_data_control: gain must be symmetric about its center");
    }
  }
  // Recording step with an even number of steps per chunk, so replay nodes
  // land on recorded samples across chunk boundaries.
  const double wanted = opts.damp_dt > 0.0 ? opts.damp_dt : cfg.time_step();
  const double step = opts.damp_chunk / (2.0 * std::ceil(opts.damp_chunk / (2.0 * wanted)));

  const DampingPhase forward = damp(u0, opts, cfg, step);
  const DampingPhase backward_w = damp(reflect(u1, center), opts, cfg, step);
  const SpectralField small_target = reflect(backward_w.end_state, center);

  const double t1 = forward.duration;
  const double t2 = t1 + opts.control_time;
  const double t3 = t2 + backward_w.duration;

  RunConfig run = cfg;
  run.sample_stride = 1;
  run.self_check = false;
  // Open-loop replay at twice the recording step so every ETDRK4 stage falls
  // on a recorded sample.
  auto replay = [&](const ControlSignal& h, const SpectralField& start, double from, double to) {
    RunConfig seg = run;
    seg.feedback = ExternalControl{h};
    const Evolution evo(seg);
    if (to - from <= 0.0) {
      Trajectory tr;
      tr.times.push_back(from);
      tr.states.push_back(start);
      tr.diagnostics.push_back(evo.diagnose(start, from));
      return tr;
    }
    return evo.run(start, from, to, 2.0 * step, 1);
  };

  // Phases run in sequence so the local control starts from the replayed
  // state rather than the closed-loop one.
  const ControlSignal h1 = forward.control;
  Trajectory path = replay(h1, u0, 0.0, t1);

  const PicardResult local = picard_control(path.final_state(), small_target, opts.control_time, opts.s,
                                            opts.picard_tol, opts.max_iter, cfg);
  const ControlSignal h2 = shifted(local.control, t1);
  Trajectory middle = local.trajectory;
  for (auto& t : middle.times) t += t1;
  for (auto& d : middle.diagnostics) d.t += t1;
  extend(path, middle);

  const ControlSignal h3 = shifted(reversed(backward_w.control, center), t2);
  extend(path, replay(h3, path.final_state(), t2, t3));

  LargeDataResult out;
  out.damp_forward_time = forward.duration;
  out.control_time = opts.control_time;
  out.damp_backward_time = backward_w.duration;
  out.small_start_norm = sobolev_norm(local.trajectory.states.front(), opts.s);
  out.small_target_norm = sobolev_norm(small_target, opts.s);
  out.picard_iterations = local.iterations;

  out.control = h1;
  out.control.append(h2, 0.0);
  out.control.append(h3, 0.0);
  out.replay = std::move(path);
  out.residual = sobolev_norm(out.replay.final_state() - u1, opts.s);
  const double target = sobolev_norm(u1, opts.s);
  out.relative_residual = target > 0.0 ? out.residual / target : out.residual;
  return out;
}

}  // namespace benjamin
