#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kinklab/errors.hpp"

namespace kinklab {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Symmetric uniform grid on [-L, L] with N nodes, node i at -L + i*dx.
struct Grid1D {
  double L = 40.0;
  int N = 4096;

  Grid1D() = default;
  Grid1D(double half_length, int nodes);
  double dx() const { return 2.0 * L / (N - 1); }
  double x(int i) const { return -L + i * dx(); }
  Eigen::VectorXd nodes() const;
  // Index of the node mirrored through the origin.
  int mirror(int i) const { return N - 1 - i; }
};

// Gamma_tail(z) = erfc(z)/2 on the complex plane.
cplx gamma_tail(cplx z);
double gamma_tail(double x);

// Scaled complementary error function erfcx(x) = exp(x^2) erfc(x), real x >= 0.
double erfcx(double x);
cplx erfcx(cplx z);

// exp(2xy) Gamma_tail(x+y) without overflow.
double mills_product(double x, double y);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct GaussKronrod15 {
  static const double xk[8];   // Kronrod abscissae, non-negative half, xk[7] = 0
  static const double wk[8];
  static const double wg[4];   // Gauss weights for xk[1], xk[3], xk[5], xk[7]
};

enum class ContourPlane { Zeta, Tau };
enum class Orientation { Counterclockwise, Clockwise, Open };

// Piecewise-smooth path; each segment maps s in [0,1] to a point and its derivative.
struct ContourSegment {
  std::function<cplx(double)> point;
  std::function<cplx(double)> deriv;
};

struct ContourPath {
  std::vector<ContourSegment> segments;
  Orientation orientation = Orientation::Open;
  ContourPlane plane = ContourPlane::Zeta;

  static ContourPath line(cplx a, cplx b);
  static ContourPath circle(cplx center, double radius, Orientation o = Orientation::Counterclockwise);
  ContourPath reversed() const;
  ContourPath concat(const ContourPath& other) const;
};

// Adaptive Gauss-Kronrod over each segment; |error| <= tol (1 + |result|).
cplx contour_integrate(const ContourPath& path, const std::function<cplx(cplx)>& f, double tol,
                       int max_panels = 1 << 14);

// Adaptive partition of [a, b] for a vector-valued integrand. Returns the accepted
// panels; error is measured in the max norm against tol * (atol_scale + max|result|).
template <class F>
std::vector<std::pair<double, double>> adaptive_partition(F&& f, double a, double b, double tol,
                                                          double atol_scale,
                                                          int max_panels = 1 << 14) {
  using Vec = Eigen::VectorXcd;
  struct Panel {
    double a, b, err;
    Vec val;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto eval = [&](double pa, double pb) {
    const double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
    Vec fc = f(c);
    Vec k = GaussKronrod15::wk[7] * fc;
    Vec g = GaussKronrod15::wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
      Vec f1 = f(c - h * GaussKronrod15::xk[j]);
      Vec f2 = f(c + h * GaussKronrod15::xk[j]);
      k += GaussKronrod15::wk[j] * (f1 + f2);
      if (j % 2 == 1) g += GaussKronrod15::wg[j / 2] * (f1 + f2);
    }
    k *= h;
    g *= h;
    return Panel{pa, pb, (k - g).cwiseAbs().maxCoeff(), k};
  };
  std::priority_queue<Panel> heap;
  Panel first = eval(a, b);
  Vec total = first.val;
  double err = first.err;
  heap.push(std::move(first));
  int count = 1;
  while (true) {
    const double scale = atol_scale + total.cwiseAbs().maxCoeff();
    if (err <= tol * scale) break;
    if (count >= max_panels) throw NonConvergence("adaptive quadrature exceeded panel budget");
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    Panel l = eval(p.a, m), r = eval(m, p.b);
    total += l.val + r.val - p.val;
    err += l.err + r.err - p.err;
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++count;
  }
  std::vector<std::pair<double, double>> out;
  while (!heap.empty()) {
    out.emplace_back(heap.top().a, heap.top().b);
    heap.pop();
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kinklab
