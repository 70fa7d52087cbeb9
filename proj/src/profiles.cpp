#include "kinklab/profiles.hpp"

#include <vector>

namespace kinklab {

double sech2_half(double x) {
  const double e = std::exp(-std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

KinkFamily kink_family(double x) {
  const double s = sech2_half(x);
  const double T = std::tanh(0.5 * x);
  KinkFamily k;
  k.u0 = T;
  k.du0 = 0.5 * s;
  k.V = -1.5 * s;
  k.dV = 1.5 * s * T;
  k.d2V = 2.25 * s * s - 1.5 * s;
  return k;
}

namespace {

// e^{-k^3/3} < 1e-16 beyond this
const double kKmax = std::cbrt(3.0 * 16.0 * std::log(10.0));

}  // namespace

double phi_star(double r, int dim) {
  if (dim != 1 && dim != 2) throw UnsupportedDimension("phi_star supports dim 1 or 2, got " + std::to_string(dim));
  r = std::abs(r);
  static std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(20, gx, gw);
  // Panels no wider than half an oscillation period of the kernel.
  const double half_period = r > 0 ? kPi / r : kKmax;
  const int panels = std::max(8, static_cast<int>(std::ceil(kKmax / std::min(half_period, 0.5))));
  const double h = kKmax / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) * h;
    for (std::size_t j = 0; j < gx.size(); ++j) {
      const double k = c + 0.5 * h * gx[j];
      const double w = 0.5 * h * gw[j] * std::exp(-k * k * k / 3.0);
      sum += dim == 1 ? w * std::cos(k * r) : w * k * std::cyl_bessel_j(0.0, k * r);
    }
  }
  return dim == 1 ? sum / kPi : sum / (2.0 * kPi);
}

double phi_scaled(double rhat, double t, int dim) {
  return std::pow(t, -dim / 3.0) * phi_star(rhat * std::pow(t, -1.0 / 3.0), dim);
}

double asymptotic_state(double x, double rhat, double t, const AsymptoticAnsatz& ansatz) {
  if (ansatz.d < 3) throw UnsupportedDimension("asymptotic_state needs d >= 3");
  const KinkFamily kf = kink_family(x);
  return kf.u0 + 0.5 * ansatz.A * kf.du0 * phi_scaled(rhat, t, ansatz.d - 1);
}

double phi_star_half_width(int dim) {
  const double target = 0.5 * phi_star(0.0, dim);
  double a = 0.0, b = 1.0;
  while (phi_star(b, dim) > target) b *= 2.0;
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    (phi_star(m, dim) > target ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace kinklab
