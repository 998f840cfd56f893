#include <doctest.h>

#include <cmath>
#include <limits>

#include "benjamin/errors.hpp"
#include "benjamin/evolution.hpp"
#include "benjamin/spectral_ops.hpp"
#include "helpers.hpp"

using namespace benjamin;
using testing::band_limited;
using testing::max_abs;
using testing::max_diff;

namespace {

RunConfig base(int n, double dt, double T) {
  RunConfig cfg;
  cfg.N = n;
  cfg.dt = dt;
  cfg.T_final = T;
  return cfg;
}

SpectralField mode(int n, int k, Complex c) {
  SpectralField u(n);
  u.set_coeff(k, c);
  return u;
}

}  // namespace

TEST_CASE("rhs examples") {
  RunConfig cfg = base(32, 1e-3, 1.0);
  CHECK(max_abs(rhs(SpectralField(32), 0.0, cfg)) == 0.0);

  cfg.nonlinear = false;
  const auto u = mode(32, 5, {0.3, -0.2});
  const double ph = phase_symbol(5, cfg.params);
  CHECK(max_diff(rhs(u, 0.0, cfg), mode(32, 5, Complex{0.0, ph} * Complex{0.3, -0.2})) < 1e-13);

  cfg.feedback = DampingGGstar{};
  const auto v = band_limited(32, 10, 4);
  const Evolution evo(cfg);
  CHECK(max_diff(evo.forcing(v, 0.0), apply_K0(v, evo.gain()) * -1.0) == 0.0);
  CHECK(max_diff(apply_G(evo.control(v, 0.0), evo.gain()), evo.forcing(v, 0.0)) < 1e-17);

  SpectralField bad(32);
  bad.set_coeff(3, {std::numeric_limits<double>::quiet_NaN(), 0.0});
  CHECK_THROWS_AS(rhs(bad, 0.0, cfg), NonFiniteState);
}

TEST_CASE("zero data stays zero") {
  RunConfig cfg = base(32, 1e-3, 0.5);
  cfg.initial.kind = InitialCondition::Kind::kZero;
  const auto traj = integrate(cfg);
  CHECK(traj.size() == 501);
  for (const auto& s : traj.states) CHECK(max_abs(s) == 0.0);
}

TEST_CASE("linear run equals the propagator") {
  RunConfig cfg = base(32, 1e-3, 1.0);
  cfg.params = {1.0, 0.0};
  cfg.nonlinear = false;
  const auto u0 = mode(32, 3, {1.0, 0.0});
  const auto traj = integrate(cfg, u0);
  CHECK(max_diff(traj.final_state(), semigroup_apply(u0, 1.0, cfg.params)) < 1e-10);
  CHECK(traj.times.back() == doctest::Approx(1.0));
}

TEST_CASE("sampling and trajectory layout") {
  RunConfig cfg = base(32, 1e-3, 0.1);
  cfg.sample_stride = 10;
  const auto traj = integrate(cfg);
  CHECK(traj.size() == 11);
  CHECK(traj.diagnostics.size() == traj.size());
  CHECK(traj.times.front() == 0.0);
  for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
  for (const auto& s : traj.states) CHECK(s.coeff(0) == Complex{});
  CHECK(traj.l2_series().size() == traj.size());
  const auto again = integrate(cfg);
  CHECK(max_diff(again.final_state(), traj.final_state()) == 0.0);
}

TEST_CASE("resolving time step") {
  const PhysicalParams p{0.5, 0.0};
  double fastest = 0.0;
  for (int k = 1; k < 32; ++k) fastest = std::max(fastest, std::abs(phase_symbol(k, p)));
  CHECK(resolving_time_step(64, p) == doctest::Approx(2 * kPi / (10 * fastest)));
  CHECK(resolving_time_step(4, p) == doctest::Approx(1e-3));
  RunConfig cfg = base(64, 0.0, 1.0);
  CHECK(cfg.time_step() == resolving_time_step(64, cfg.params));
}

TEST_CASE("free evolution conserves the invariants") {
  RunConfig cfg = base(64, 1e-3, 1.0);
  cfg.initial.kind = InitialCondition::Kind::kCosine;
  cfg.initial.amplitude = 0.1;
  cfg.initial.mode = 1;
  const auto traj = integrate(cfg);
  const auto& a = traj.diagnostics.front();
  const auto& b = traj.diagnostics.back();
  CHECK(std::abs(b.I1 - a.I1) / a.I1 < 1e-8);
  CHECK(std::abs(b.I2 - a.I2) / std::abs(a.I2) < 1e-6);
}

TEST_CASE("K0 feedback: monotone decay and energy identity") {
  RunConfig cfg = base(64, 1e-3, 2.0);
  cfg.feedback = DampingGGstar{};
  cfg.initial.kind = InitialCondition::Kind::kCosine;
  cfg.initial.amplitude = 0.1;
  cfg.initial.mode = 2;
  const auto traj = integrate(cfg);
  for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.diagnostics[i].l2 <= traj.diagnostics[i - 1].l2 + 1e-10);

  auto worst = [](const Trajectory& tr) {
    double w = 0.0;
    for (std::size_t i = 1; i + 1 < tr.size(); ++i) {
      const double h = tr.times[i + 1] - tr.times[i - 1];
      const double de = 0.5 * (std::pow(tr.diagnostics[i + 1].l2, 2) - std::pow(tr.diagnostics[i - 1].l2, 2)) / h;
      w = std::max(w, std::abs(de + tr.diagnostics[i].control_energy));
    }
    return w;
  };
  const double e1 = worst(traj);
  cfg.dt = 5e-4;
  const double e2 = worst(integrate(cfg));
  CHECK(e1 < 1e-3 * traj.diagnostics.front().control_energy);
  CHECK(e1 / e2 > 3.0);
}

TEST_CASE("fourth-order convergence") {
  RunConfig cfg = base(32, 0.0, 0.5);
  cfg.feedback = DampingGGstar{};
  const auto u0 = band_limited(32, 6, 7, 2.0);
  const Evolution evo(cfg);
  const auto ref = evo.run(u0, 0.0, 0.5, 1e-4, 1 << 30).final_state();
  std::vector<double> err;
  for (double dt : {4e-3, 2e-3, 1e-3}) err.push_back(l2_norm(evo.run(u0, 0.0, 0.5, dt, 1 << 30).final_state() - ref));
  const double o1 = std::log2(err[0] / err[1]);
  const double o2 = std::log2(err[1] / err[2]);
  MESSAGE("errors " << err[0] << " " << err[1] << " " << err[2]);
  CHECK(o1 > 3.5);
  CHECK(o2 > 3.5);
}

TEST_CASE("forward then backward returns the data") {
  RunConfig cfg = base(32, 0.0, 1.0);
  const Evolution evo(cfg);
  const auto u0 = band_limited(32, 8, 9, 0.3);
  const double step = cfg.time_step();
  const auto fw = evo.run(u0, 0.0, 1.0, step, 1 << 30);
  const auto bw = evo.run(fw.final_state(), 1.0, 0.0, step, 1 << 30);
  CHECK(l2_norm(bw.final_state() - u0) / l2_norm(u0) < 1e-7);
}

TEST_CASE("K_lambda Lyapunov functional decays at rate 2 lambda") {
  RunConfig cfg = base(32, 0.0, 1.0);
  cfg.nonlinear = false;
  const LLambdaSpec spec{1.5, 1.0};
  cfg.feedback = KLambda{spec};
  const auto g = cfg.gain.build(32);
  const HermitianSolver L(assemble_L_lambda(spec, g, cfg.params, 32));
  const auto traj = integrate(cfg, band_limited(32, 10, 13));
  auto V = [&](const SpectralField& u) { return inner(L.solve(u), u); };
  const double v0 = V(traj.states.front());
  for (std::size_t i = 0; i < traj.size(); i += 500) {
    CHECK(V(traj.states[i]) <= v0 * std::exp(-2 * spec.lambda * traj.times[i]) * (1 + 1e-8));
  }
}

TEST_CASE("controlled runs") {
  RunConfig cfg = base(32, 1e-3, 0.5);
  cfg.initial.kind = InitialCondition::Kind::kSine;
  cfg.initial.amplitude = 0.2;
  cfg.initial.mode = 2;
  const auto free = integrate(cfg);
  const ControlSignal zero({0.0, 0.5}, {SpectralField(32), SpectralField(32)});
  const auto forced0 = controlled_run(cfg, zero);
  CHECK(max_diff(forced0.final_state(), free.final_state()) < 1e-15);

  const auto h1 = band_limited(32, 10, 3);
  const ControlSignal h({0.0, 0.25, 0.5}, {h1, h1 * -1.0, h1 * 2.0});
  const auto forced = controlled_run(cfg, h);
  CHECK(max_diff(forced.final_state(), free.final_state()) > 1e-3);
  for (const auto& s : forced.states) CHECK(s.coeff(0) == Complex{});
  CHECK(forced.diagnostics.back().control_energy == doctest::Approx(std::pow(l2_norm(h1 * 2.0), 2)));
}

TEST_CASE("step self-check") {
  RunConfig cfg = base(64, 1e-2, 0.2);
  cfg.initial.kind = InitialCondition::Kind::kRandom;
  cfg.initial.norm = 3.0;
  cfg.self_check = true;
  CHECK_THROWS_AS(integrate(cfg), StepTooLarge);
  cfg.initial.norm = 1e-3;
  cfg.dt = 1e-3;
  CHECK_NOTHROW(integrate(cfg));
}

TEST_CASE("run config validation") {
  auto bad = [](auto edit) {
    RunConfig cfg;
    edit(cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  bad([](RunConfig& c) { c.N = 96; });
  bad([](RunConfig& c) { c.N = 2; });
  bad([](RunConfig& c) { c.dt = -1.0; });
  bad([](RunConfig& c) { c.T_final = 0.0; });
  bad([](RunConfig& c) { c.sample_stride = 0; });
  bad([](RunConfig& c) { c.params.alpha = 0.0; });
  bad([](RunConfig& c) { c.feedback = KLambda{{-1.0, 1.0}}; });
  bad([](RunConfig& c) { c.feedback = TimeVarying{{2.0, 1.0, 1.5, 0.05}}; });
  bad([](RunConfig& c) { c.feedback = TimeVarying{{2.0, 1.0, 0.1, 0.2}}; });
  CHECK_NOTHROW(RunConfig{}.validate());
  InitialCondition ic;
  ic.mode = 64;
  CHECK_THROWS_AS(ic.build(64), ConfigError);
}
