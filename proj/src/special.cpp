#include <cmath>
#include <vector>

#include "kinklab/numerics.hpp"

namespace kinklab {

const double GaussKronrod15::xk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
const double GaussKronrod15::wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double GaussKronrod15::wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

Grid1D::Grid1D(double half_length, int nodes) : L(half_length), N(nodes) {
  if (N < 4) throw ValidationError("Grid1D needs at least 4 nodes");
  if (!(L > 0)) throw ValidationError("Grid1D half-length must be positive");
}

Eigen::VectorXd Grid1D::nodes() const {
  Eigen::VectorXd v(N);
  for (int i = 0; i < N; ++i) v[i] = x(i);
  return v;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
  }
}

namespace {

const double kSqrtPi = std::sqrt(kPi);

// Laplace continued fraction, valid for Re z > 0 and |z| not small.
cplx erfcx_cf(cplx z) {
  const double tiny = 1e-300;
  cplx f = z, C = z, D = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    D = z + a * D;
    if (std::abs(D) < tiny) D = tiny;
    C = z + a / C;
    if (std::abs(C) < tiny) C = tiny;
    D = 1.0 / D;
    cplx delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (kSqrtPi * f);
}

cplx erf_series(cplx z) {
  cplx term = z, sum = z;
  const cplx z2 = z * z;
  for (int n = 1; n < 1000; ++n) {
    term *= -z2 / double(n);
    cplx add = term / double(2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return 2.0 / kSqrtPi * sum;
}

// erfc(x + iy) = erfc(x) - (2i/sqrt(pi)) int_0^y exp(-(x+is)^2) ds
cplx erfc_vertical(double x, double y) {
  static std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(24, gx, gw);
  const int panels = 6;
  cplx acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = y * p / panels, b = y * (p + 1) / panels;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (size_t j = 0; j < gx.size(); ++j) {
      const double s = c + h * gx[j];
      acc += h * gw[j] * std::exp(-cplx(x, s) * cplx(x, s));
    }
  }
  return std::erfc(x) - 2.0 * kI / kSqrtPi * acc;
}

// erfc for Re z >= 0
cplx erfc_right(cplx z) {
  const double x = z.real(), r = std::abs(z);
  if (z.imag() == 0.0) return std::erfc(x);
  if (x < 1.0) {
    if (r < 8.0) return 1.0 - erf_series(z);
    return std::exp(-z * z) * erfcx_cf(z);
  }
  if (r >= 3.5) return std::exp(-z * z) * erfcx_cf(z);
  return erfc_vertical(x, z.imag());
}

}  // namespace

double erfcx(double x) {
  if (x < 0) return 2.0 * std::exp(x * x) - erfcx(-x);
  if (x < 5.0) return std::exp(x * x) * std::erfc(x);
  return erfcx_cf(cplx(x, 0)).real();
}

cplx erfcx(cplx z) {
  if (z.real() >= 0 && std::abs(z) >= 6.0) return erfcx_cf(z);
  if (z.real() >= 1.0 && std::abs(z) >= 3.5) return erfcx_cf(z);
  return std::exp(z * z) * 2.0 * gamma_tail(z);
}

cplx gamma_tail(cplx z) {
  if (z.real() < 0) return 1.0 - 0.5 * erfc_right(-z);
  return 0.5 * erfc_right(z);
}

double gamma_tail(double x) { return 0.5 * std::erfc(x); }

double mills_product(double x, double y) {
  const double s = x + y;
  if (s >= 0) return std::exp(-x * x - y * y) * 0.5 * erfcx(s);
  return std::exp(2 * x * y) - std::exp(-x * x - y * y) * 0.5 * erfcx(-s);
}

}  // namespace kinklab
