#include <cmath>
#include <vector>

#include <doctest.h>

#include "kinklab/numerics.hpp"

using namespace kinklab;

namespace {

// composite Simpson on [a, b] with n (even) panels
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("gamma_tail values") {
  CHECK(gamma_tail(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  const double quad = simpson([](double r) { return std::exp(-r * r) / std::sqrt(kPi); }, 1.0, 9.0, 20000);
  CHECK(std::abs(gamma_tail(1.0) - quad) < 1e-14);
  CHECK(std::abs(gamma_tail(-0.7) - (1.0 - gamma_tail(0.7))) < 1e-15);
  // complex branch agrees with the real one on the axis
  for (double x : {-2.0, -0.3, 0.0, 0.4, 3.0, 7.5})
    CHECK(std::abs(gamma_tail(cplx(x, 0.0)) - gamma_tail(x)) < 1e-14 * (1.0 + gamma_tail(x)) + 1e-300);
}

TEST_CASE("gamma_tail off the axis matches the defining path integral") {
  // Gamma_tail(z) = 1/2 - (1/sqrt(pi)) int_0^z e^{-s^2} ds along the straight segment
  const cplx z(0.8, 0.6);
  const int n = 4000;
  cplx acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const cplx s = z * (double(i) / n);
    acc += w * std::exp(-s * s);
  }
  acc *= z / (3.0 * n);
  const cplx oracle = 0.5 - acc / std::sqrt(kPi);
  CHECK(std::abs(gamma_tail(z) - oracle) < 1e-12);
}

TEST_CASE("erfcx against erfc and its tail") {
  for (double x : {0.0, 0.5, 2.0, 5.0, 10.0})
    CHECK(erfcx(x) == doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-12));
  const double x = 1e4;
  CHECK(erfcx(x) == doctest::Approx(1.0 / (x * std::sqrt(kPi)) * (1.0 - 0.5 / (x * x))).epsilon(1e-12));
}

TEST_CASE("mills_product") {
  CHECK(mills_product(0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mills_product(3.0, -3.0) == doctest::Approx(0.5 * std::exp(-18.0)).epsilon(1e-14));
  // exp(50) erfc(10)/2 via the integral (1/sqrt(pi)) int_10^inf e^{50 - r^2} dr
  const double quad = simpson([](double r) { return std::exp(50.0 - r * r) / std::sqrt(kPi); }, 10.0, 20.0, 40000);
  CHECK(mills_product(5.0, 5.0) == doctest::Approx(quad).epsilon(1e-12));
  // exp(2xy) alone overflows here; the product is exp(-x^2-y^2) erfcx(x+y)/2
  const double v = mills_product(20.0, 15.0);
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(0.5 * std::exp(-625.0) * erfcx(35.0)).epsilon(1e-12));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  REQUIRE(x.size() == 8);
  for (int p = 0; p <= 15; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    const double exact = (p % 2) ? 0.0 : 2.0 / (p + 1);
    CHECK(std::abs(s - exact) < 1e-14);
  }
}

TEST_CASE("contour_integrate") {
  const auto unit = ContourPath::circle(0.0, 1.0);
  CHECK(std::abs(contour_integrate(unit, [](cplx z) { return 1.0 / (2.0 * kPi * kI * z); }, 1e-12) - 1.0) < 1e-12);

  const auto seg = ContourPath::line(-10.0, 10.0);
  CHECK(std::abs(contour_integrate(seg, [](cplx z) { return std::exp(-z * z) / std::sqrt(kPi); }, 1e-13) - 1.0) <
        1e-12);

  const cplx a = 0.3 * kI;
  const double t = 2.0;
  const auto small = ContourPath::circle(a, 0.1);
  const cplx v = contour_integrate(small, [&](cplx z) { return std::exp(-z * t) / (2.0 * kPi * kI * (z - a)); }, 1e-12);
  CHECK(std::abs(v - std::exp(-0.6 * kI)) < 1e-11);

  // reversing the orientation flips the sign
  const cplx w = contour_integrate(unit.reversed(), [](cplx z) { return 1.0 / (2.0 * kPi * kI * z); }, 1e-12);
  CHECK(std::abs(w + 1.0) < 1e-12);
}

TEST_CASE("Grid1D") {
  const Grid1D g(10.0, 201);
  CHECK(g.dx() == doctest::Approx(0.1));
  CHECK(g.x(0) == -10.0);
  CHECK(g.x(100) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g.mirror(3) == 197);
  CHECK(g.x(g.mirror(17)) == doctest::Approx(-g.x(17)));
}
