#include <algorithm>
#include <limits>
#include "kinklab/homogeneous.hpp"

#include <array>
#include <string>
#include <vector>

#include "kinklab/profiles.hpp"

namespace kinklab {

namespace {

bool on_negative_axis(cplx w) { return std::abs(w.imag()) <= 1e-14 * (1.0 + std::abs(w)) && w.real() <= 0.0; }

}  // namespace

cplx zeta_of(cplx k, cplx tau) {
  const cplx k2 = k * k, b = 1.0 + 2.0 * k2;
  return k2 + k2 * k2 + b * b * tau * tau;
}

SpectralParameters spectral_parameters(cplx k, cplx tau) {
  const cplx k2 = k * k;
  if (on_negative_axis(1.0 + 2.0 * k2)) throw BranchCut("k lies on +-i[1/sqrt2, inf)");
  if (on_negative_axis(1.0 + 4.0 * tau * tau)) throw BranchCut("tau lies on +-i[1/2, inf)");
  SpectralParameters p;
  p.k = k;
  p.tau = tau;
  p.zeta = zeta_of(k, tau);
  const cplx b = std::sqrt(1.0 + 2.0 * k2);
  const cplx s = std::sqrt(1.0 + 4.0 * tau * tau);
  const cplx q = std::sqrt(0.5 + 0.5 * s);
  p.mu[0] = -b * q;
  p.mu[1] = b * kI * tau / q;
  p.mu[2] = -p.mu[1];
  p.mu[3] = -p.mu[0];
  return p;
}

SpectralParameters spectral_parameters_from_zeta(cplx k, cplx zeta) {
  const cplx k2 = k * k, b = 1.0 + 2.0 * k2;
  cplx tau = std::sqrt((zeta - k2 - k2 * k2) / (b * b));
  if (tau.imag() < 0 || (tau.imag() == 0 && tau.real() < 0)) tau = -tau;
  SpectralParameters p = spectral_parameters(k, tau);
  p.zeta = zeta;
  return p;
}

Eigen::Vector4cd right_vector(const SpectralParameters&, cplx mu) { return {1.0, mu, mu * mu, mu * mu * mu}; }

Eigen::RowVector4cd left_vector(const SpectralParameters& p, cplx mu) {
  const cplx c2 = 1.0 + 2.0 * p.k * p.k;
  Eigen::RowVector4cd w;
  w << mu * (mu * mu - c2), mu * mu - c2, mu, 1.0;
  return w;
}

Eigen::Matrix4cd system_matrix(const SpectralParameters& p, double x) {
  const KinkFamily kf = kink_family(x);
  const cplx k2 = p.k * p.k;
  Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
  A(0, 1) = A(1, 2) = A(2, 3) = 1.0;
  A(3, 0) = p.zeta - k2 - k2 * k2 - k2 * kf.V + kf.d2V;
  A(3, 1) = 2.0 * kf.dV;
  A(3, 2) = 1.0 + 2.0 * k2 + kf.V;
  return A;
}

cplx SolutionSet::d2Z(int j, int i) const {
  const double V = kink_family(grid.x(i)).V;
  return z[j](i, 1) + (1.0 + 2.0 * params.k * params.k + V) * z[j](i, 3);
}

double growth_solution_zero(double x) { return 2.0 * (std::cosh(x) + 1.0); }

namespace {

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

using V4 = Eigen::Vector4cd;

class Shooter {
 public:
  // Integrates the deviation d = y - base, where base is a constant solution of
  // the asymptotic system; roundoff then scales with |d| instead of |base|.
  Shooter(const SpectralParameters& p, cplx rho, bool adjoint, double rtol, const V4& base)
      : p_(p), rho_(rho), adjoint_(adjoint), rtol_(rtol), base_(base) {
    Ainf_ = Eigen::Matrix4cd::Zero();
    Ainf_(0, 1) = Ainf_(1, 2) = Ainf_(2, 3) = 1.0;
    const cplx k2 = p.k * p.k;
    Ainf_(3, 0) = p.zeta - k2 - k2 * k2;
    Ainf_(3, 2) = 1.0 + 2.0 * k2;
  }

  // Switch to integrating the full vector once the deviation is no longer small.
  void maybe_rebase(V4& d) {
    if (base_.isZero() || d.cwiseAbs().maxCoeff() < 0.5 * base_.cwiseAbs().maxCoeff()) return;
    d += base_;
    base_.setZero();
  }
  const V4& base() const { return base_; }
  void drop_base(V4& d) {
    d += base_;
    base_.setZero();
  }

  V4 rhs(double x, const V4& d) const {
    const KinkFamily kf = kink_family(x);
    const cplx k2 = p_.k * p_.k;
    Eigen::Matrix4cd R = Eigen::Matrix4cd::Zero();
    R(3, 0) = -k2 * kf.V + kf.d2V;
    R(3, 1) = 2.0 * kf.dV;
    R(3, 2) = kf.V;
    const Eigen::Matrix4cd A = Ainf_ + R;
    if (adjoint_) return rho_ * d - A.transpose() * d - R.transpose() * base_;
    return A * d - rho_ * d + R * base_;
  }

  // Advance y from x to x_end with adaptive steps; h carries the last step size.
  void advance(double& x, V4& y, double x_end, double& h) {
    const double dir = x_end > x ? 1.0 : -1.0;
    int guard = 0;
    V4 k1 = rhs(x, y);
    while (dir * (x_end - x) > 1e-14) {
      if (++guard > 2000000) throw StiffBlowup("step budget exhausted");
      double step = dir * std::min(std::abs(h), std::abs(x_end - x));
      if (std::abs(step) < 1e-12) throw StiffBlowup("step size underflow near x = " + std::to_string(x));
      const V4 k2 = rhs(x + c2 * step, y + step * (a21 * k1));
      const V4 k3 = rhs(x + c3 * step, y + step * (a31 * k1 + a32 * k2));
      const V4 k4 = rhs(x + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      const V4 k5 = rhs(x + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const V4 k6 = rhs(x + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const V4 ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const V4 k7 = rhs(x + step, ynew);
      const V4 err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double scale =
          rtol_ * std::max({(y + base_).cwiseAbs().maxCoeff(), (ynew + base_).cwiseAbs().maxCoeff(), 1e-300});
      const double ratio = err.cwiseAbs().maxCoeff() / scale;
      if (!std::isfinite(ratio)) throw StiffBlowup("non-finite solution");
      const double fac = ratio > 0 ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0) : 5.0;
      if (ratio <= 1.0) {
        x += step;
        y = ynew;
        k1 = k7;
        if (!base_.isZero() && y.cwiseAbs().maxCoeff() >= 0.5 * base_.cwiseAbs().maxCoeff()) {
          maybe_rebase(y);
          k1 = rhs(x, y);
        }
        // keep the free step for the next call unless this one was clipped
        if (std::abs(step) >= std::abs(h) * 0.999) h = std::abs(step) * fac;
      } else {
        h = std::abs(step) * fac;
      }
    }
    x = x_end;
  }

 private:
  const SpectralParameters& p_;
  cplx rho_;
  bool adjoint_;
  double rtol_;
  V4 base_;
  Eigen::Matrix4cd Ainf_;
};

// Integrates from xs with renormalized data y0 (solution = exp(+-rho x) y) in both
// directions, recording the solution at every grid node. When `exact_base` is set,
// y0 is an eigenvector of the asymptotic system for rho and only y - y0 is integrated.
Eigen::MatrixXcd shoot(const SpectralParameters& p, const Grid1D& g, double xs, cplx rho, const V4& y0,
                       bool adjoint, double rtol, bool exact_base = true) {
  Eigen::MatrixXcd out(g.N, 4);
  const V4 base = exact_base ? y0 : V4::Zero();
  const V4 d0 = y0 - base;
  const double sign = adjoint ? -1.0 : 1.0;
  auto store = [&](int i, const V4& d, const V4& b) {
    const cplx f = std::exp(sign * rho * g.x(i));
    const V4 v = f * (b + d);
    if (!v.allFinite()) throw StiffBlowup("solution overflow at x = " + std::to_string(g.x(i)));
    out.row(i) = v.transpose();
  };
  // first node at or beyond xs in each direction
  int right = 0;
  while (right < g.N && g.x(right) < xs) ++right;
  {
    Shooter sh(p, rho, adjoint, rtol, base);
    double x = xs, h = 0.05;
    V4 y = d0;
    for (int i = right; i < g.N; ++i) {
      sh.advance(x, y, g.x(i), h);
      store(i, y, sh.base());
    }
  }
  {
    Shooter sh(p, rho, adjoint, rtol, base);
    double x = xs, h = 0.05;
    V4 y = d0;
    for (int i = right - 1; i >= 0; --i) {
      sh.advance(x, y, g.x(i), h);
      store(i, y, sh.base());
    }
  }
  return out;
}

// Shoots a second solution from xs while holding it in the gauge where its pairing
// with `partner` (the dual dominant solution) vanishes: at every node on the inward
// sweep the multiple of `dominant` that restores this is subtracted. The accumulated
// multiple is applied to every stored row, so the result differs from the plain
// solution by one global triangular basis change. Nodes where the dominant pairing
// is ill-conditioned are left alone.
Eigen::MatrixXcd shoot_gauged(const SpectralParameters& p, const Grid1D& g, double xs, cplx rho, const V4& y0,
                              bool adjoint, double rtol, const Eigen::MatrixXcd& dominant,
                              const Eigen::MatrixXcd& partner, bool enabled) {
  Eigen::MatrixXcd out(g.N, 4);
  const double sign = adjoint ? -1.0 : 1.0;
  int right = 0;
  while (right < g.N && g.x(right) < xs) ++right;
  const bool inward_is_left = xs > 0.0;
  std::vector<cplx> gauge(g.N, 0.0);
  cplx total = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const bool left = (pass == 0);
    const bool inward = (left == inward_is_left);
    Shooter sh(p, rho, adjoint, rtol, y0);
    V4 d = V4::Zero();
    double x = xs, h = 0.05;
    const int first = left ? right - 1 : right, last = left ? -1 : g.N, stepi = left ? -1 : 1;
    for (int i = first; i != last; i += stepi) {
      const double xi = g.x(i);
      sh.advance(x, d, xi, h);
      const cplx f = std::exp(sign * rho * xi);
      V4 a = f * (sh.base() + d);
      if (!a.allFinite()) throw StiffBlowup("solution overflow at x = " + std::to_string(xi));
      if (inward && enabled) {
        const V4 w = partner.row(i).transpose(), dom = dominant.row(i).transpose();
        const cplx pd = w.cwiseProduct(dom).sum();
        const double scale = w.cwiseAbs().dot(dom.cwiseAbs());
        if (std::abs(pd) > 1e-6 * scale) {
          const cplx c = w.cwiseProduct(a).sum() / pd;
          a -= c * dom;
          sh.drop_base(d);
          d = a / f;
          total += c;
        }
      }
      gauge[i] = total;
      out.row(i) = a.transpose();
    }
  }
  if (total != 0.0)
    for (int i = 0; i < g.N; ++i) out.row(i) += (gauge[i] - total) * dominant.row(i);
  return out;
}

// Whether the dominant pairing is usable as a gauge pivot: its value at the best
// conditioned node must stand clear of the largest term it is built from inside [-x0, x0].
bool gauge_usable(const Grid1D& g, double x0, const Eigen::MatrixXcd& dominant, const Eigen::MatrixXcd& partner) {
  double best_scale = std::numeric_limits<double>::infinity(), central = 0.0;
  cplx best = 0.0;
  for (int i = 0; i < g.N; ++i) {
    const double scale = partner.row(i).cwiseAbs().dot(dominant.row(i).cwiseAbs());
    if (scale < best_scale) {
      best_scale = scale;
      best = partner.row(i).transpose().cwiseProduct(dominant.row(i).transpose()).sum();
    }
    if (std::abs(g.x(i)) <= x0) central = std::max(central, scale);
  }
  return std::abs(best) > 1e-6 * central;
}

V4 mu_derivative_right(cplx mu) { return {0.0, 1.0, 2.0 * mu, 3.0 * mu * mu}; }

}  // namespace

namespace {

// z_i . u_j, a constant of motion; median over the nodes inside [-x0, x0].
cplx central_pairing(const SolutionSet& s, int i, int j) {
  std::vector<double> re, im;
  for (int n = 0; n < s.grid.N; ++n) {
    if (std::abs(s.grid.x(n)) > s.x0) continue;
    const cplx v = s.z[i].row(n).transpose().cwiseProduct(s.u[j].row(n).transpose()).sum();
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  if (re.empty()) return s.z[i].row(s.grid.N / 2).transpose().cwiseProduct(s.u[j].row(s.grid.N / 2).transpose()).sum();
  auto med = [](std::vector<double>& v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  return {med(re), med(im)};
}

}  // namespace

SolutionSet solve_homogeneous(const SpectralParameters& p, const Grid1D& grid, const ShootOptions& opt) {
  SolutionSet s;
  s.params = p;
  s.grid = grid;
  s.x0 = opt.x0;
  const double x0 = opt.x0;
  const auto& mu = p.mu;
  // u_j^+ ~ exp(mu_j x) v_j at +x0, stored as exp(mu x) * y with y(x0) = v_j
  s.u[0] = shoot(p, grid, x0, mu[0], right_vector(p, mu[0]), false, opt.rtol);
  // z_j^- ~ exp(-mu_j x) w_j at -x0
  s.z[0] = shoot(p, grid, -x0, mu[0], left_vector(p, mu[0]).transpose(), true, opt.rtol);
  const bool gauged = gauge_usable(grid, x0, s.u[0], s.z[0]);
  s.u[1] = shoot_gauged(p, grid, x0, mu[1], right_vector(p, mu[1]), false, opt.rtol, s.u[0], s.z[0], gauged);
  s.z[1] = shoot_gauged(p, grid, -x0, mu[1], left_vector(p, mu[1]).transpose(), true, opt.rtol, s.z[0], s.u[0], gauged);
  if (!opt.all_four) return s;

  const cplx d = mu[2] - mu[1];
  V4 y3u, y3z;
  if (std::abs(d) < 1e-6) {
    y3u = x0 * right_vector(p, mu[1]) + mu_derivative_right(mu[1]);
    const cplx c2k = 1.0 + 2.0 * p.k * p.k;
    V4 dw(3.0 * mu[1] * mu[1] - c2k, 2.0 * mu[1], 1.0, 0.0);
    y3z = x0 * left_vector(p, mu[1]).transpose() + dw;  // -x * w + w' at x = -x0
  } else {
    y3u = (std::exp(d * x0) * right_vector(p, mu[2]) - right_vector(p, mu[1])) / d;
    y3z = (std::exp(d * x0) * left_vector(p, mu[2]).transpose() - left_vector(p, mu[1]).transpose()) / d;
  }
  s.u[2] = shoot(p, grid, x0, mu[1], y3u, false, opt.rtol, false);
  s.z[2] = shoot(p, grid, -x0, mu[1], y3z, true, opt.rtol, false);
  s.u[3] = shoot(p, grid, x0, mu[3], right_vector(p, mu[3]), false, opt.rtol);
  s.z[3] = shoot(p, grid, -x0, mu[3], left_vector(p, mu[3]).transpose(), true, opt.rtol);
  // z_3 is only fixed modulo z_1 (the potential tail decays at the same rate);
  // pick the representative with z_3 . u_2 = z_2 . u_3.
  const cplx p32 = central_pairing(s, 2, 1), p23 = central_pairing(s, 1, 2), p12 = central_pairing(s, 0, 1);
  if (std::abs(p12) > 1e-8) s.z[2] -= ((p32 - p23) / p12) * s.z[0];
  return s;
}

SolutionSet solve_homogeneous_minus(const SpectralParameters& p, const Grid1D& grid, const ShootOptions& opt) {
  SolutionSet s;
  s.params = p;
  s.grid = grid;
  s.x0 = opt.x0;
  const auto& mu = p.mu;
  s.u[0] = shoot(p, grid, -opt.x0, mu[3], right_vector(p, mu[3]), false, opt.rtol);
  s.z[0] = shoot(p, grid, opt.x0, mu[3], left_vector(p, mu[3]).transpose(), true, opt.rtol);
  const bool gauged = gauge_usable(grid, opt.x0, s.u[0], s.z[0]);
  s.u[1] = shoot_gauged(p, grid, -opt.x0, mu[2], right_vector(p, mu[2]), false, opt.rtol, s.u[0], s.z[0], gauged);
  s.z[1] = shoot_gauged(p, grid, opt.x0, mu[2], left_vector(p, mu[2]).transpose(), true, opt.rtol, s.z[0], s.u[0], gauged);
  return s;
}

}  // namespace kinklab
