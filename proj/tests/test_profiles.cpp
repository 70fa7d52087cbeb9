#include <cmath>
#include <vector>

#include <doctest.h>

#include "kinklab/errors.hpp"
#include "kinklab/numerics.hpp"
#include "kinklab/profiles.hpp"

using namespace kinklab;

namespace {

template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// inverse transforms of exp(-k^3/3), radial forms
double phi1_oracle(double r) {
  return simpson([r](double k) { return std::cos(k * r) * std::exp(-k * k * k / 3.0); }, 0.0, 6.0, 6000) / kPi;
}
double phi2_oracle(double r) {
  return simpson([r](double k) { return std::cyl_bessel_j(0.0, k * r) * k * std::exp(-k * k * k / 3.0); }, 0.0, 6.0,
                 6000) /
         (2.0 * kPi);
}

}  // namespace

TEST_CASE("kink family at the origin, by parity and far out") {
  const KinkFamily k0 = kink_family(0.0);
  CHECK(k0.u0 == 0.0);
  CHECK(k0.du0 == doctest::Approx(0.5));
  CHECK(k0.V == doctest::Approx(-1.5));

  const KinkFamily a = kink_family(2.3), b = kink_family(-2.3);
  CHECK(a.u0 == doctest::Approx(-b.u0).epsilon(1e-15));
  CHECK(a.du0 == doctest::Approx(b.du0).epsilon(1e-15));
  CHECK(a.V == doctest::Approx(b.V).epsilon(1e-15));

  const KinkFamily f = kink_family(40.0);
  CHECK(1.0 - f.u0 < 1e-16);
  CHECK(f.du0 == doctest::Approx(2.0 * std::exp(-40.0)).epsilon(1e-12));
  CHECK(f.V == doctest::Approx(-6.0 * std::exp(-40.0)).epsilon(1e-12));
}

TEST_CASE("kink derivatives by finite differences") {
  const double h = 1e-4;
  for (double x : {-3.0, -0.4, 0.0, 1.1, 5.0}) {
    const KinkFamily k = kink_family(x);
    const double du = (kink_family(x + h).u0 - kink_family(x - h).u0) / (2 * h);
    const double dV = (kink_family(x + h).V - kink_family(x - h).V) / (2 * h);
    const double d2V = (kink_family(x + h).dV - kink_family(x - h).dV) / (2 * h);
    CHECK(k.du0 == doctest::Approx(du).epsilon(1e-7));
    CHECK(k.dV == doctest::Approx(dV).epsilon(1e-6));
    CHECK(k.d2V == doctest::Approx(d2V).epsilon(1e-6));
    // the kink solves u'' = u^3 - u scaled: -u0'' + (u0^3 - u0)/2 = 0
    const double d2u = (kink_family(x + h).u0 - 2 * k.u0 + kink_family(x - h).u0) / (h * h);
    CHECK(std::abs(-d2u + 0.5 * (k.u0 * k.u0 * k.u0 - k.u0)) < 1e-6);
  }
}

TEST_CASE("phi_star against quadrature of the inverse transform") {
  CHECK(phi_star(0.0, 1) == doctest::Approx(std::pow(3.0, -2.0 / 3.0) * std::tgamma(1.0 / 3.0) / kPi).epsilon(1e-10));
  CHECK(phi_star(0.0, 2) ==
        doctest::Approx(std::pow(3.0, -1.0 / 3.0) * std::tgamma(2.0 / 3.0) / (2.0 * kPi)).epsilon(1e-10));
  for (double r : {0.0, 0.5, 1.7, 3.0, 6.0}) {
    CHECK(std::abs(phi_star(r, 1) - phi1_oracle(r)) < 1e-9);
    CHECK(std::abs(phi_star(r, 2) - phi2_oracle(r)) < 1e-9);
  }
}

TEST_CASE("phi_star has unit integral and the right transform") {
  // samples on [0, R]; beyond R the 1D profile follows -2/(pi r^4), from the |k|^3 term
  const double R = 60.0;
  const int n = 6000;
  const double h = R / n;
  std::vector<double> p1(n + 1), p2(n + 1);
  for (int i = 0; i <= n; ++i) {
    p1[i] = phi_star(i * h, 1);
    p2[i] = phi_star(i * h, 2);
  }
  auto simpson_samples = [&](auto f) {
    double s = f(0) + f(n);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i);
    return s * h / 3.0;
  };
  CHECK(std::abs(p1[n] + 2.0 / (kPi * std::pow(R, 4))) < 1e-3 * 2.0 / (kPi * std::pow(R, 4)));
  for (double k : {0.0, 0.5, 1.0, 1.5}) {
    double ft = 2.0 * simpson_samples([&](int i) { return std::cos(k * i * h) * p1[i]; });
    // the oscillating tail is below 2/(pi R^4 k) for k > 0
    if (k == 0.0) ft += 2.0 * (-2.0 / (3.0 * kPi * R * R * R));
    CHECK(std::abs(ft - std::exp(-k * k * k / 3.0)) < 1e-6);
  }
  const double mass2 = simpson_samples([&](int i) { return 2.0 * kPi * i * h * p2[i]; });
  CHECK(std::abs(mass2 - 1.0) < 1e-5);
}

TEST_CASE("half width") {
  for (int dim : {1, 2}) {
    const double w = phi_star_half_width(dim);
    CHECK(phi_star(w, dim) == doctest::Approx(0.5 * phi_star(0.0, dim)).epsilon(1e-9));
  }
}

TEST_CASE("scaling identity and asymptotic state") {
  for (double t : {1.0, 8.0, 100.0})
    for (double r : {0.0, 1.0, 4.0})
      CHECK(std::abs(phi_scaled(r, t, 2) - std::pow(t, -2.0 / 3.0) * phi_star(r / std::cbrt(t), 2)) < 1e-10);

  const AsymptoticAnsatz none{0.0, 3};
  CHECK(asymptotic_state(0.7, 1.0, 5.0, none) == doctest::Approx(std::tanh(0.35)));

  const AsymptoticAnsatz a{0.3, 3};
  const double x = 0.4, t = 10.0;
  const double d1 = asymptotic_state(x, 0.0, t, a) - std::tanh(x / 2);
  const double d8 = asymptotic_state(x, 0.0, 8.0 * t, a) - std::tanh(x / 2);
  CHECK(d8 / d1 == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(asymptotic_state(0.0, 0.0, 2.0, AsymptoticAnsatz{1.0, 2}), UnsupportedDimension);
}
