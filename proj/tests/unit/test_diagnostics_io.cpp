#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "benjamin/config.hpp"
#include "benjamin/diagnostics.hpp"
#include "benjamin/errors.hpp"
#include "benjamin/io.hpp"
#include "benjamin/spectral_ops.hpp"
#include "helpers.hpp"

using namespace benjamin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("benjamin_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Config parse(const std::string& text, const Overrides& ov = {}) {
  std::istringstream in(text);
  return parse_config(in, ov);
}

}  // namespace

TEST_CASE("I1 examples and Parseval") {
  const int n = 64;
  CHECK(invariant_I1(SpectralField(n)) == 0.0);
  const auto c = SpectralField::from_function(n, [](double x) { return std::cos(x); });
  CHECK(invariant_I1(c) == doctest::Approx(kPi / 2).epsilon(1e-15));
  const auto u = testing::band_limited(n, 20, 3);
  CHECK(invariant_I1(u * 2.0) == doctest::Approx(4.0 * invariant_I1(u)).epsilon(1e-15));
  const double oracle = testing::quad([&](double x) { return 0.5 * std::pow(testing::eval(u, x), 2); }, 4 * n);
  CHECK(std::abs(invariant_I1(u) - oracle) <= 1e-12 * oracle);
}

TEST_CASE("I2 examples") {
  const int n = 64;
  CHECK(invariant_I2(SpectralField(n), {0.5, 0.0}) == 0.0);
  for (double alpha : {0.2, 0.5, 1.0, 3.0}) {
    for (double eps : {0.01, 1.0}) {
      const auto u = SpectralField::from_function(n, [&](double x) { return eps * std::cos(x); });
      CHECK(invariant_I2(u, {alpha, 0.0}) == doctest::Approx(kPi * eps * eps * (1 - alpha) / 2).epsilon(1e-13));
    }
  }
  // Term-by-term quadrature oracle on a generic field.
  const PhysicalParams p{0.7, 0.0};
  const auto u = testing::band_limited(n, 10, 8);
  const auto ux = derivative(u, 1);
  const auto hux = hilbert_transform(ux);
  const double oracle = testing::quad(
      [&](double x) {
        const double v = testing::eval(u, x);
        return 0.5 * std::pow(testing::eval(ux, x), 2) - 0.5 * p.alpha * v * testing::eval(hux, x) + v * v * v / 3.0;
      },
      4 * n);
  CHECK(invariant_I2(u, p) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("Sobolev norms") {
  const int n = 32;
  const auto c = SpectralField::from_function(n, [](double x) { return std::cos(x); });
  const double h1 = std::sqrt(testing::quad([](double x) { return std::pow(std::cos(x), 2) + std::pow(std::sin(x), 2); }));
  CHECK(sobolev_norm(c, 1.0) == doctest::Approx(h1).epsilon(1e-14));
  CHECK(sobolev_norm(c, 1.0) == doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-14));
  const auto u = testing::band_limited(n, 15, 2);
  CHECK(sobolev_norm(u, 0.0) == l2_norm(u));
  double prev = 0.0;
  for (double s : {0.0, 0.5, 1.0, 2.0, 3.5}) {
    const double v = sobolev_norm(u, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("decay fit") {
  std::vector<double> t, y, flat;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(-2.0 * 0.1 * i));
    flat.push_back(0.7);
  }
  const auto f = fit_decay_rate(t, y, {0.0, 5.0});
  CHECK(f.rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.window.first == 0.0);
  const auto g = fit_decay_rate(t, flat, {1.0, 4.0});
  CHECK(std::abs(g.rate) < 1e-14);
  CHECK(g.r_squared >= 0.0);
  CHECK(g.r_squared <= 1.0);

  std::mt19937 rng(17);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> tn, yn;
  for (int i = 0; i < 100; ++i) {
    const double ti = 10.0 * i / 99;
    tn.push_back(ti);
    yn.push_back(std::exp(-ti) * (1.0 + noise(rng)));
  }
  const auto h = fit_decay_rate(tn, yn, {0.0, 10.0});
  CHECK(std::abs(h.rate - 1.0) < 0.03);
  CHECK(h.r_squared <= 1.0);

  y[10] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, y, {0.0, 5.0}), NonPositiveNorm);
  CHECK_NOTHROW(fit_decay_rate(t, y, {2.0, 5.0}));
}

TEST_CASE("random fields") {
  const auto a = random_field(64, 5);
  const auto b = random_field(64, 5);
  CHECK(testing::max_diff(a, b) == 0.0);
  CHECK(testing::max_diff(a, random_field(64, 6)) > 0.0);
  CHECK(a.coeff(0) == Complex{});
  CHECK(a.coeff(32) == Complex{});
  for (int k = 1; k < 32; ++k) CHECK(std::abs(a.coeff(k)) == doctest::Approx(std::abs(a.coeff(1)) * 2.0 / (1.0 + k * k)));
  CHECK(l2_norm(random_field(64, 5, 0.3)) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("diagnostic record invariants along a run") {
  RunConfig cfg;
  cfg.N = 32;
  cfg.dt = 1e-3;
  cfg.T_final = 0.2;
  cfg.s = 1.0;
  cfg.feedback = DampingGGstar{};
  for (const auto& d : integrate(cfg).diagnostics) {
    CHECK(std::isfinite(d.I2));
    CHECK(d.l2 >= 0.0);
    CHECK(d.hs >= d.l2);
    CHECK(d.control_energy >= 0.0);
  }
}

TEST_CASE("trajectory CSV round trip") {
  const auto dir = scratch("csv");
  std::vector<DiagnosticsRecord> rows;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    rows.push_back({0.1 * i + d(rng) * 1e-9, std::exp(d(rng)), std::exp(d(rng) * 30), d(rng) / 3.0, d(rng) * 1e-300,
                    i == 0 ? 0.0 : 1.0 / 3.0 + d(rng)});
  }
  write_trajectory_csv(dir / "t.csv", rows);
  std::ifstream in(dir / "t.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,l2,hs,I1,I2,control_energy");
  const auto back = read_trajectory_csv(dir / "t.csv");
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].t == rows[i].t);
    CHECK(back[i].l2 == rows[i].l2);
    CHECK(back[i].hs == rows[i].hs);
    CHECK(back[i].I1 == rows[i].I1);
    CHECK(back[i].I2 == rows[i].I2);
    CHECK(back[i].control_energy == rows[i].control_energy);
  }
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);

  std::ofstream(dir / "bad.csv") << "t,l2\n0,1\n";
  CHECK_THROWS_AS(read_trajectory_csv(dir / "bad.csv"), std::runtime_error);
  std::ofstream(dir / "bad2.csv") << "t,l2,hs,I1,I2,control_energy\n0,1,2,x,4,5\n";
  CHECK_THROWS_AS(read_trajectory_csv(dir / "bad2.csv"), std::runtime_error);
}

TEST_CASE("other CSV writers and key-value files") {
  const auto dir = scratch("kv");
  write_key_values(dir / "s.txt", {{"a", "1"}, {"status", "pass"}});
  const auto kv = read_key_values(dir / "s.txt");
  REQUIRE(kv.size() == 2);
  CHECK(kv[1].first == "status");
  CHECK(kv[1].second == "pass");

  write_gramian_csv(dir / "g.csv", {0.5, 1.5});
  std::ifstream g(dir / "g.csv");
  std::string line;
  std::getline(g, line);
  CHECK(line == "index,eigenvalue");

  RunConfig cfg;
  cfg.N = 16;
  cfg.dt = 1e-3;
  cfg.T_final = 0.01;
  write_spectrum_csv(dir / "sp.csv", integrate(cfg));
  std::ifstream sp(dir / "sp.csv");
  std::getline(sp, line);
  CHECK(line == "t,k,amplitude");
  int rows = 0;
  while (std::getline(sp, line)) ++rows;
  CHECK(rows == 11 * 7);

  const ControlSignal h({0.0, 1.0}, {SpectralField(16), SpectralField(16)});
  write_control_csv(dir / "c.csv", h, 1.0);
  std::ifstream c(dir / "c.csv");
  std::getline(c, line);
  CHECK(line == "t,h_l2,h_hs");
}

TEST_CASE("output directory override") {
  ::unsetenv("BENJAMIN_OUTPUT_DIR");
  CHECK(output_directory("fallback") == fs::path("fallback"));
  ::setenv("BENJAMIN_OUTPUT_DIR", "", 1);
  CHECK(output_directory("fallback") == fs::path("fallback"));
  ::setenv("BENJAMIN_OUTPUT_DIR", "/tmp/elsewhere", 1);
  CHECK(output_directory("fallback") == fs::path("/tmp/elsewhere"));
  ::unsetenv("BENJAMIN_OUTPUT_DIR");
}

TEST_CASE("config defaults and parsing") {
  const Config def = parse("");
  CHECK(def.run.N == 128);
  CHECK(def.run.dt == 0.0);
  CHECK(def.run.params.alpha == 0.5);
  CHECK(std::holds_alternative<NoFeedback>(def.run.feedback));
  CHECK(def.run.decay_window().first == doctest::Approx(0.2));
  CHECK(def.run.decay_window().second == doctest::Approx(1.0));

  const Config c = parse(
      "[run]\nN = 64 ; comment\nT_final = 5\nfit_start = 1\nfit_end = 4\n"
      "[feedback]\nlaw = klambda\nlambda = 2.5  # other comment\n[physics]\nalpha = 1\n");
  CHECK(c.run.N == 64);
  CHECK(c.run.decay_window().first == 1.0);
  CHECK(c.run.decay_window().second == 4.0);
  REQUIRE(std::holds_alternative<KLambda>(c.run.feedback));
  CHECK(std::get<KLambda>(c.run.feedback).spec.lambda == 2.5);
  CHECK(c.run.params.alpha == 1.0);

  const Config o = parse("[run]\nN = 64\n", {parse_override("run.N=32"), parse_override("feedback.law=ggstar")});
  CHECK(o.run.N == 32);
  CHECK(std::holds_alternative<DampingGGstar>(o.run.feedback));

  // describe() covers every key and parses back to the same settings.
  std::string text;
  std::string section;
  for (const auto& [key, value] : describe(c)) {
    const auto dot = key.find('.');
    if (key.substr(0, dot) != section) {
      section = key.substr(0, dot);
      text += "[" + section + "]\n";
    }
    text += key.substr(dot + 1) + " = " + value + "\n";
  }
  const Config again = parse(text);
  CHECK(describe(again) == describe(c));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[run]\nN = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\nN = 48\n"), ConfigError);
  CHECK_THROWS_AS(parse("[feedback]\nlaw = magic\n"), ConfigError);
  CHECK_THROWS_AS(parse("[feedback]\nlaw = timevarying\ndelta = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("", {{"run.T_final", "-1"}}), ConfigError);
  CHECK_THROWS_AS(parse_override("nodot=1"), ConfigError);
  CHECK_THROWS_AS(parse_override("run.N"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("shipped configs parse") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(BENJAMIN_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++count;
  }
  CHECK(count >= 5);
  CHECK(describe(load_config((fs::path(BENJAMIN_SOURCE_DIR) / "configs" / "default.ini").string())) ==
        describe(load_config("")));
}
