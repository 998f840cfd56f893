#include "benjamin/evolution.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "benjamin/errors.hpp"
#include "benjamin/spectral_ops.hpp"

namespace benjamin {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ETDRK4 coefficients (Cox-Matthews) for the diagonal linear part c_k = i phi(k),
// evaluated by a contour mean to avoid cancellation near z = 0.
struct EtdCoefficients {
  std::vector<Complex> e, e2, q, f1, f2, f3;
};

EtdCoefficients etd_coefficients(const DispersionTable& table, double h) {
  constexpr int kContour = 64;
  const int half = table.mode_count() / 2;
  EtdCoefficients c;
  for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) v->assign(static_cast<std::size_t>(half + 1), Complex{});
  for (int k = 0; k <= half; ++k) {
    const Complex z{0.0, table.half()[static_cast<std::size_t>(k)] * h};
    const auto i = static_cast<std::size_t>(k);
    c.e[i] = std::exp(z);
    c.e2[i] = std::exp(0.5 * z);
    Complex q{}, f1{}, f2{}, f3{};
    for (int m = 0; m < kContour; ++m) {
      const Complex r = std::exp(Complex{0.0, kPi * (m + 0.5) / kContour * 2.0});
      const Complex w = z + r;
      const Complex wh = 0.5 * z + r;
      const Complex ew = std::exp(w);
      const Complex w3 = w * w * w;
      q += (std::exp(wh) - 1.0) / wh;
      f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
      f2 += (2.0 + w + ew * (w - 2.0)) / w3;
      f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
    }
    c.q[i] = 0.5 * h * q / static_cast<double>(kContour);
    c.f1[i] = h * f1 / static_cast<double>(kContour);
    c.f2[i] = h * f2 / static_cast<double>(kContour);
    c.f3[i] = h * f3 / static_cast<double>(kContour);
  }
  return c;
}

// out = a .* x + b .* y  (mode-wise, half spectrum)
SpectralField combine(const std::vector<Complex>& a, const SpectralField& x, const std::vector<Complex>& b,
                      const SpectralField& y) {
  SpectralField out(x.mode_count());
  auto o = out.half_spectrum();
  const auto xs = x.half_spectrum();
  const auto ys = y.half_spectrum();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = a[k] * xs[k] + b[k] * ys[k];
  return out;
}

void pin(SpectralField& u) {
  u.half_spectrum()[0] = 0.0;
  zero_nyquist(u);
}

void check_finite(const SpectralField& u, double t) {
  if (!u.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite state at t = " << t;
    throw NonFiniteState(msg.str());
  }
}

}  // namespace

std::string feedback_name(const FeedbackLaw& law) {
  return std::visit(Overloaded{[](const NoFeedback&) { return std::string("none"); },
                               [](const ExternalControl&) { return std::string("external"); },
                               [](const DampingGGstar&) { return std::string("ggstar"); },
                               [](const KLambda&) { return std::string("klambda"); },
                               [](const TimeVarying&) { return std::string("timevarying"); }},
                    law);
}

GainProfile GainSpec::build(int mode_count) const {
  if (kind == Kind::kUniform) return GainProfile::uniform(mode_count);
  return GainProfile::raised_cosine(mode_count, center, width);
}

SpectralField InitialCondition::build(int n) const {
  SpectralField u(n);
  switch (kind) {
    case Kind::kZero:
      break;
    case Kind::kCosine:
    case Kind::kSine:
      if (mode < 1 || mode >= n / 2) throw ConfigError("initial mode must lie in [1, N/2)");
      // a cos(mx) has coefficient a/2 at k = m; a sin(mx) has -i a/2.
      u.set_coeff(mode, kind == Kind::kCosine ? Complex{0.5 * amplitude, 0.0} : Complex{0.0, -0.5 * amplitude});
      break;
    case Kind::kRandom:
      u = random_field(n, seed);
      if (norm > 0.0) u *= norm / sobolev_norm(u, norm_s);
      break;
    case Kind::kFile: {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open initial-condition file '" + path + "'");
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        int k = 0;
        double re = 0.0, im = 0.0;
        if (!(row >> k >> re >> im)) throw ConfigError("malformed line in '" + path + "': " + line);
        if (k < 1 || k >= n / 2) throw ConfigError("wavenumber out of range in '" + path + "'");
        u.set_coeff(k, Complex{re, im});
      }
      break;
    }
  }
  return u;
}

void RunConfig::validate() const {
  if (N < 4 || (N & (N - 1)) != 0) throw ConfigError("N must be a power of two >= 4");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive (or 0 for the resolving step)");
  if (!(T_final > t0)) throw ConfigError("T_final must exceed t0");
  if (!(params.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
  if (fit_window && !(fit_window->second > fit_window->first)) throw ConfigError("fit window is empty");
  if (const auto* kl = std::get_if<KLambda>(&feedback)) {
    if (kl->spec.lambda < 0.0 || !(kl->spec.a > 0.0)) throw ConfigError("klambda needs lambda >= 0 and a > 0");
    if (kl->spec.quad_nodes < 8) throw ConfigError("quad_nodes must be >= 8");
  }
  if (const auto* tv = std::get_if<TimeVarying>(&feedback)) {
    const auto& s = tv->spec;
    if (!(s.lambda > 0.0) || !(s.period_T > 0.0)) throw ConfigError("timevarying needs lambda > 0 and T > 0");
    if (!(s.r0 > 0.0 && s.r0 < 1.0)) throw ConfigError("r0 must lie in (0, 1)");
    if (!(s.delta > 0.0 && s.delta < 0.1)) throw ConfigError("delta must lie in (0, 1/10)");
    if (!(tv->a > 0.0)) throw ConfigError("timevarying needs a > 0");
  }
}

double RunConfig::time_step() const { return dt > 0.0 ? dt : resolving_time_step(N, params); }

std::pair<double, double> RunConfig::decay_window() const {
  if (fit_window) return *fit_window;
  return {0.2 * T_final, T_final};
}

std::vector<double> Trajectory::l2_series() const {
  std::vector<double> out;
  out.reserve(diagnostics.size());
  for (const auto& d : diagnostics) out.push_back(d.l2);
  return out;
}

std::vector<double> Trajectory::hs_series() const {
  std::vector<double> out;
  out.reserve(diagnostics.size());
  for (const auto& d : diagnostics) out.push_back(d.hs);
  return out;
}

Evolution::Evolution(const RunConfig& cfg) : cfg_(cfg), gain_(cfg.gain.build(cfg.N)) {
  if (const auto* kl = std::get_if<KLambda>(&cfg_.feedback)) {
    l_solver_ = std::make_shared<HermitianSolver>(assemble_L_lambda(kl->spec, gain_, cfg_.params, cfg_.N));
  } else if (const auto* tv = std::get_if<TimeVarying>(&cfg_.feedback)) {
    LLambdaSpec spec;
    spec.lambda = tv->spec.lambda;
    spec.a = tv->a;
    spec.method = tv->method;
    l_solver_ = std::make_shared<HermitianSolver>(assemble_L_lambda(spec, gain_, cfg_.params, cfg_.N));
  }
}

SpectralField Evolution::forcing(const SpectralField& u, double t) const {
  return std::visit(
      Overloaded{[&](const NoFeedback&) { return SpectralField(u.mode_count()); },
                 [&](const ExternalControl& c) {
                   return c.h.empty() ? SpectralField(u.mode_count()) : apply_G(c.h.at(t), gain_);
                 },
                 [&](const DampingGGstar& d) { return -d.gain * apply_K0(u, gain_); },
                 [&](const KLambda&) { return -1.0 * apply_K_lambda(u, *l_solver_, gain_); },
                 [&](const TimeVarying& tv) {
                   return -1.0 * time_varying_feedback(u, t, tv.spec, *l_solver_, gain_, cfg_.s);
                 }},
      cfg_.feedback);
}

SpectralField Evolution::control(const SpectralField& u, double t) const {
  return std::visit(
      Overloaded{[&](const NoFeedback&) { return SpectralField(u.mode_count()); },
                 [&](const ExternalControl& c) { return c.h.empty() ? SpectralField(u.mode_count()) : c.h.at(t); },
                 [&](const DampingGGstar& d) { return -d.gain * apply_G(u, gain_); },
                 [&](const KLambda&) { return -1.0 * apply_G(l_solver_->solve(u), gain_); },
                 [&](const TimeVarying& tv) {
                   return -1.0 * time_varying_control_field(u, t, tv.spec, *l_solver_, gain_, cfg_.s);
                 }},
      cfg_.feedback);
}

SpectralField Evolution::nonlinear_part(const SpectralField& u, double t) const {
  SpectralField f = forcing(u, t);
  if (cfg_.nonlinear) f -= nonlinear_term(u);
  pin(f);
  return f;
}

SpectralField Evolution::rhs(const SpectralField& u, double t) const {
  check_finite(u, t);
  const auto table = DispersionTable::get(cfg_.N, cfg_.params);
  SpectralField lin = u;
  auto c = lin.half_spectrum();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= Complex{0.0, table->half()[k]};
  pin(lin);
  return lin + nonlinear_part(u, t);
}

double Evolution::control_energy(const SpectralField& u, double t) const {
  if (const auto* c = std::get_if<ExternalControl>(&cfg_.feedback)) {
    if (c->h.empty()) return 0.0;
    const double n = l2_norm(c->h.at(t));
    return n * n;
  }
  if (std::holds_alternative<NoFeedback>(cfg_.feedback)) return 0.0;
  return -inner(forcing(u, t), u);
}

DiagnosticsRecord Evolution::diagnose(const SpectralField& u, double t) const {
  DiagnosticsRecord r;
  r.t = t;
  r.l2 = l2_norm(u);
  r.hs = sobolev_norm(u, cfg_.s);
  r.I1 = invariant_I1(u);
  r.I2 = invariant_I2(u, cfg_.params);
  r.control_energy = control_energy(u, t);
  return r;
}

Trajectory Evolution::run(const SpectralField& u0, double t_start, double t_end, double step, int stride) const {
  if (u0.mode_count() != cfg_.N) throw std::invalid_argument("Evolution::run: initial state has the wrong size");
  if (!(step > 0.0)) throw std::invalid_argument("Evolution::run: step must be positive");
  if (stride < 1) throw std::invalid_argument("Evolution::run: stride must be >= 1");
  const double span = t_end - t_start;
  const long steps = std::max(1L, std::lround(std::abs(span) / step));
  const double h = span / static_cast<double>(steps);

  const auto table = DispersionTable::get(cfg_.N, cfg_.params);
  const EtdCoefficients c = etd_coefficients(*table, h);

  SpectralField u = u0;
  pin(u);
  check_finite(u, t_start);

  Trajectory traj;
  auto record = [&](const SpectralField& v, double t) {
    traj.times.push_back(t);
    traj.states.push_back(v);
    traj.diagnostics.push_back(diagnose(v, t));
  };
  record(u, t_start);

  const std::size_t m = c.e.size();
  for (long n = 0; n < steps; ++n) {
    const double t = t_start + h * static_cast<double>(n);
    const SpectralField nu = nonlinear_part(u, t);
    const SpectralField a = combine(c.e2, u, c.q, nu);
    const SpectralField na = nonlinear_part(a, t + 0.5 * h);
    const SpectralField b = combine(c.e2, u, c.q, na);
    const SpectralField nb = nonlinear_part(b, t + 0.5 * h);
    SpectralField cc = combine(c.e2, a, c.q, 2.0 * nb - nu);
    const SpectralField nc = nonlinear_part(cc, t + h);

    auto us = u.half_spectrum();
    const auto nus = nu.half_spectrum(), nas = na.half_spectrum(), nbs = nb.half_spectrum(), ncs = nc.half_spectrum();
    for (std::size_t k = 0; k < m; ++k) {
      us[k] = c.e[k] * us[k] + c.f1[k] * nus[k] + 2.0 * c.f2[k] * (nas[k] + nbs[k]) + c.f3[k] * ncs[k];
    }
    pin(u);
    const double t_next = (n + 1 == steps) ? t_end : t_start + h * static_cast<double>(n + 1);
    check_finite(u, t_next);
    if ((n + 1) % stride == 0 || n + 1 == steps) record(u, t_next);
  }
  return traj;
}

SpectralField rhs(const SpectralField& u, double t, const RunConfig& cfg) { return Evolution(cfg).rhs(u, t); }

Trajectory integrate(const RunConfig& cfg, const SpectralField& u0) {
  cfg.validate();
  const Evolution evo(cfg);
  const double step = cfg.time_step();
  Trajectory traj = evo.run(u0, cfg.t0, cfg.T_final, step, cfg.sample_stride);
  if (cfg.self_check) {
    const Trajectory fine = evo.run(u0, cfg.t0, cfg.T_final, 0.5 * step, 1 << 30);
    const double coarse_norm = traj.diagnostics.back().l2;
    const double fine_norm = fine.diagnostics.back().l2;
    const double scale = std::max(fine_norm, 1e-300);
    if (std::abs(coarse_norm - fine_norm) > 1e-6 * scale) {
      std::ostringstream msg;
      msg << "halving dt changed the terminal L2 norm by " << std::abs(coarse_norm - fine_norm) / scale
          << " (relative)";
      throw StepTooLarge(msg.str());
    }
  }
  return traj;
}

Trajectory integrate(const RunConfig& cfg) { return integrate(cfg, cfg.initial.build(cfg.N)); }

Trajectory controlled_run(const RunConfig& cfg, const ControlSignal& h, const SpectralField& u0) {
  RunConfig forced = cfg;
  forced.feedback = ExternalControl{h};
  return integrate(forced, u0);
}

Trajectory controlled_run(const RunConfig& cfg, const ControlSignal& h) {
  return controlled_run(cfg, h, cfg.initial.build(cfg.N));
}

double resolving_time_step(int mode_count, const PhysicalParams& p) {
  const double fastest = DispersionTable::get(mode_count, p)->max_abs_phase();
  if (!(fastest > 0.0)) return 1e-3;
  return std::min(1e-3, kTwoPi / (10.0 * fastest));
}

}  // namespace benjamin
