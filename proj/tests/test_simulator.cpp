#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "kinklab/errors.hpp"
#include "kinklab/profiles.hpp"
#include "kinklab/semigroup.hpp"
#include "kinklab/simulator.hpp"

using namespace kinklab;

namespace {

SimulationConfig small_config() {
  SimulationConfig c;
  c.grid = Grid1D(20.0, 128);
  c.Lperp = 32.0;
  c.M = 16;
  c.dt = 0.05;
  c.T = 5.0;
  c.delta = 0.1;
  return c;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("config file parsing") {
  const std::string path = temp_file("kinklab_cfg_ok.cfg",
                                     "# run\nL = 30\nN = 256\nLperp = 64\nM = 32\ndt = 0.02\nT = 50\n"
                                     "delta = 0.05\nr = 6  # tail\nshape = gaussian\nout_dir = /tmp/x\n");
  const SimulationConfig c = load_config(path);
  CHECK(c.grid.L == 30.0);
  CHECK(c.grid.N == 256);
  CHECK(c.Lperp == 64.0);
  CHECK(c.M == 32);
  CHECK(c.dt == 0.02);
  CHECK(c.T == 50.0);
  CHECK(c.delta == 0.05);
  CHECK(c.r == 6.0);
  CHECK(c.shape == "gaussian");
  CHECK(c.out_dir == "/tmp/x");
  CHECK_NOTHROW(validate(c));

  CHECK_THROWS_AS(load_config(temp_file("kinklab_cfg_bad.cfg", "L = 30\nwidth = 3\n")), ConfigError);
  CHECK_THROWS_AS(load_config(temp_file("kinklab_cfg_num.cfg", "dt = fast\n")), ConfigError);
  try {
    load_config("/nonexistent/missing.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("missing.cfg") != std::string::npos);
  }
}

TEST_CASE("config validation") {
  SimulationConfig c = small_config();
  c.r = 4.0;
  CHECK_THROWS_AS(validate(c), DecayTooSlow);
  c = small_config();
  c.dt = 0.2;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = small_config();
  c.M = 15;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = small_config();
  c.shape = "square";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = small_config();
  c.T = 1000.0;  // spreading reaches the transverse box
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("perturbation integrals") {
  SimulationConfig c = small_config();
  c.delta = 0.0;
  const Perturbation z = make_perturbation(c);
  CHECK(z.A_exact == 0.0);
  CHECK(z.A_quad == 0.0);
  for (double v : z.h) CHECK(v == 0.0);

  c = small_config();
  c.shape = "gaussian";
  c.grid = Grid1D(20.0, 257);
  c.M = 64;
  c.Lperp = 24.0;
  const Perturbation g = make_perturbation(c);
  CHECK(g.A_exact == doctest::Approx(0.1 * std::pow(2.0 * kPi, 1.5)).epsilon(1e-15));
  CHECK(std::abs(g.A_quad - g.A_exact) < 1e-10);

  c = small_config();
  c.delta = 0.01;
  c.r = 5.0;
  const Perturbation a = make_perturbation(c);
  CHECK(a.A_exact == doctest::Approx(kPi / 3.0 * 0.01).epsilon(1e-14));
}

TEST_CASE("weighted norms") {
  SimulationConfig c = small_config();
  c.grid = Grid1D(20.0, 129);  // a node at x = 0
  c.delta = 0.01;
  Simulator sim(c);
  std::vector<double> zero(sim.field().size(), 0.0);
  Simulator empty(c);
  empty.set_field(zero);
  CHECK(empty.norms().X == 0.0);
  CHECK(empty.norms().t == 0.0);

  // the weight is 1 at the origin sample, where h = delta; elsewhere the
  // transform roundoff is magnified by weights up to about 1e8
  const WeightedNorms n = sim.norms();
  const int M = c.M;
  CHECK(sim.field()[(std::size_t(64) * M + M / 2) * M + M / 2] == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(n.X == doctest::Approx(0.01).epsilon(1e-8));

  std::vector<double> v = sim.field();
  for (double& x : v) x *= 2.0;
  Simulator twice(c);
  twice.set_field(v);
  CHECK(twice.norms().X == doctest::Approx(2.0 * n.X).epsilon(1e-14));
  CHECK(twice.norms().t == doctest::Approx(2.0 * n.t).epsilon(1e-14));
}

TEST_CASE("zero perturbation stays zero") {
  SimulationConfig c = small_config();
  c.delta = 0.0;
  Simulator sim(c);
  sim.advance_to(1.0);
  CHECK(sim.max_abs() == 0.0);
}

TEST_CASE("mass is conserved step by step and the spectrum stays Hermitian") {
  Simulator sim(small_config());
  double m = sim.mass();
  for (int n = 0; n < 5; ++n) {
    sim.step();
    const double m1 = sim.mass();
    CHECK(std::abs(m1 - m) <= 1e-10 * std::abs(m));
    m = m1;
  }
  const auto a = sim.mode(3, 0), b = sim.mode(-3, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - std::conj(b[i])));
  CHECK(worst < 1e-14);
  CHECK(sim.wavenumber(3, 0) == doctest::Approx(2.0 * kPi * 3.0 / 32.0));
}

TEST_CASE("front displacement is even in the transverse coordinate") {
  Simulator sim(small_config());
  sim.advance_to(2.0);
  const std::vector<double> a = sim.front_displacement();
  const int M = sim.config().M;
  REQUIRE(int(a.size()) == M);
  for (int j = 1; j < M / 2; ++j) CHECK(std::abs(a[M / 2 + j] - a[M / 2 - j]) < 1e-10);
  // a raised profile v > 0 shifts u0(x - a) towards negative a
  CHECK(a[M / 2] < 0.0);
}

TEST_CASE("linear run of a single transverse mode follows the semigroup kernel") {
  const double k = 0.25, t = 5.0;
  SimulationConfig c;
  c.grid = Grid1D(20.0, 801);
  c.Lperp = 2.0 * kPi / k;
  c.M = 8;
  c.dt = 0.005;
  c.T = t;
  c.nonlinear = false;
  Simulator sim(c);
  const Grid1D& g = c.grid;
  const int M = c.M;
  const double hp = c.Lperp / M;
  auto f = [](double x) { return std::exp(-x * x); };
  std::vector<double> v(std::size_t(g.N) * M * M);
  for (int i = 0; i < g.N; ++i)
    for (int j1 = 0; j1 < M; ++j1)
      for (int j2 = 0; j2 < M; ++j2) v[(std::size_t(i) * M + j1) * M + j2] = f(g.x(i)) * std::cos(k * (j1 - M / 2) * hp);
  sim.set_field(v);
  sim.advance_to(t);
  const std::vector<double> out = sim.field();

  KernelOptions o;
  o.grid = g;
  const SemigroupKernel K = kernel(k, t, o);
  const Eigen::VectorXd w = K.apply(sample(g, f));
  double err = 0.0;
  for (int i = 0; i < g.N; ++i) err = std::max(err, std::abs(out[(std::size_t(i) * M + M / 2) * M + M / 2] - w[i]));
  CHECK(err < 1e-3 * w.lpNorm<Eigen::Infinity>());
}
