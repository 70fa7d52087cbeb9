#include "kinklab/pieces.hpp"

#include <cmath>

#include "kinklab/errors.hpp"
#include "kinklab/numerics.hpp"
#include "kinklab/profiles.hpp"

namespace kinklab {

double u1_zero(double x) { return 0.25 * sech2_half(x); }

double z1_zero_plus(double y) {
  return y >= 0 ? std::log1p(std::exp(-y)) : -y + std::log1p(std::exp(y));
}

ExplicitPieces explicit_pieces(double k, double t) {
  if (!(k >= 0.0) || !(t > 0.0)) throw ConfigError("explicit pieces need k >= 0 and t > 0");
  ExplicitPieces p;
  p.k = k;
  p.t = t;
  return p;
}

double ExplicitPieces::tprime() const {
  const double c = 1.0 + 2.0 * k * k;
  return c * c * t;
}

double ExplicitPieces::pole_factor(double y) const {
  const double ay = std::abs(y);
  return std::exp(-k * k * k * t / 3.0) * (std::exp(-k * ay) - 2.0 * k * z1_zero_plus(ay));
}

double ExplicitPieces::rest00_factor(double y) const {
  const double tp = tprime(), st = std::sqrt(tp), ay = std::abs(y);
  const double a = k * st, b = ay / (2.0 * st);
  const double g = std::exp((3.0 * std::pow(k, 4) + 4.0 * std::pow(k, 6)) * t);
  const double coef = 4.0 * k * gamma_tail(a) - 2.0 * std::exp(-a * a) / std::sqrt(kPi * tp);
  return g * (mills_product(a, b) - mills_product(a, -b) + coef * z1_zero_plus(ay));
}

double ExplicitPieces::all00_factor(double y) const {
  const double tp = tprime(), st = std::sqrt(tp), ay = std::abs(y);
  const double a = k * st, b = ay / (2.0 * st);
  const double g = std::exp((3.0 * std::pow(k, 4) + 4.0 * std::pow(k, 6)) * t);
  const double coef = 4.0 * k * gamma_tail(a) - 2.0 * k - 2.0 * std::exp(-a * a) / std::sqrt(kPi * tp);
  return g * (mills_product(a, b) + mills_product(-a, b) + coef * z1_zero_plus(ay));
}

double ExplicitPieces::kpole0(double x, double y) const { return u1_zero(x) * pole_factor(y); }
double ExplicitPieces::krest00(double x, double y) const { return u1_zero(x) * rest00_factor(y); }
double ExplicitPieces::kall00(double x, double y) const { return u1_zero(x) * all00_factor(y); }

double ExplicitPieces::krest10(double x, double y) const {
  if (!(x * y > 0.0)) return 0.0;
  const double tp = tprime();
  const double damp = std::exp(-(k * k + std::pow(k, 4)) * t);
  return damp / std::sqrt(4.0 * kPi * tp) *
         (std::exp(-(x - y) * (x - y) / (4.0 * tp)) - std::exp(-(x + y) * (x + y) / (4.0 * tp)));
}

double ExplicitPieces::krest11(double x, double y) const {
  const double tp = tprime();
  const double sg = (x > y) ? 1.0 : (x < y ? -1.0 : 0.0);
  return sg * x / (std::sqrt(4.0 * kPi) * std::pow(tp, 1.5)) *
         std::exp(-(k * k + std::pow(k, 4)) * t - x * x / (4.0 * tp)) * z1_zero_plus(std::abs(y));
}

}  // namespace kinklab
