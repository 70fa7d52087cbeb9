#include "kinklab/resolvent.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace kinklab {

namespace {

double median(std::vector<double> v) {
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + m, v.end());
  double hi = v[m];
  if (v.size() % 2) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + m);
  return 0.5 * (lo + hi);
}

std::vector<int> window_nodes(const Grid1D& g, double window) {
  std::vector<int> idx;
  for (int i = 0; i < g.N; ++i)
    if (std::abs(g.x(i)) <= window) idx.push_back(i);
  if (idx.empty())
    for (int i = 0; i < g.N; ++i) idx.push_back(i);
  return idx;
}

struct PairStats {
  cplx med;
  double spread;
};

// Median of the pairing over the nodes where its rounding scale sum |z||u| is within
// a factor 10 of the smallest; spread is measured over all nodes.
PairStats pair_stats(const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& u, const std::vector<int>& idx) {
  std::vector<cplx> vals;
  std::vector<double> scales;
  double mean_scale = 0.0, min_scale = std::numeric_limits<double>::infinity();
  for (int i : idx) {
    vals.push_back(z.row(i).transpose().cwiseProduct(u.row(i).transpose()).sum());
    scales.push_back(z.row(i).cwiseAbs().dot(u.row(i).cwiseAbs()));
    mean_scale += scales.back();
    min_scale = std::min(min_scale, scales.back());
  }
  mean_scale /= idx.size();
  std::vector<double> re, im;
  for (std::size_t n = 0; n < vals.size(); ++n)
    if (scales[n] <= 10.0 * min_scale) {
      re.push_back(vals[n].real());
      im.push_back(vals[n].imag());
    }
  const cplx med(median(re), median(im));
  cplx mean = 0.0;
  for (auto v : vals) mean += v;
  mean /= double(vals.size());
  double var = 0.0;
  for (auto v : vals) var += std::norm(v - mean);
  const double sd = std::sqrt(var / vals.size());
  return {med, mean_scale > 0 ? sd / mean_scale : 0.0};
}

}  // namespace

Eigen::Matrix4d pairing_spread(const SolutionSet& s, double window) {
  const auto idx = window_nodes(s.grid, window);
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = pair_stats(s.z[i], s.u[j], idx).spread;
  return out;
}

Eigen::Matrix4cd pairing_matrix(const SolutionSet& s, double window) {
  const auto idx = window_nodes(s.grid, window);
  Eigen::Matrix4cd out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = pair_stats(s.z[i], s.u[j], idx).med;
  return out;
}

ResolventAssembly omega(const SolutionSet& sols) {
  ResolventAssembly ra;
  ra.sols = sols;
  const auto idx = window_nodes(sols.grid, sols.x0);
  double spread = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const PairStats st = pair_stats(sols.z[i], sols.u[j], idx);
      ra.omega(i, j) = st.med;
      spread = std::max(spread, st.spread);
    }
  ra.spread = spread;
  if (spread > 1e-5) throw DegenerateSolutions("pairing varies in x, relative spread " + std::to_string(spread));
  if (ra.omega.cwiseAbs().maxCoeff() == 0.0) throw DegenerateSolutions("pairing vanishes identically");
  ra.det = ra.omega.determinant();
  if (ra.det != 0.0) ra.omega_inv = ra.omega.inverse();
  return ra;
}

cplx det_omega(cplx k, cplx tau, double rtol) {
  const SpectralParameters p = spectral_parameters(k, tau);
  ShootOptions opt;
  opt.rtol = rtol;
  opt.all_four = false;
  const SolutionSet s = solve_homogeneous(p, Grid1D(4.0, 9), opt);
  return omega(s).det;
}

PoleReport locate_pole(double k, cplx guess) {
  const cplx target = kI * k;
  auto f = [&](cplx tau) { return det_omega(k, tau, 1e-12); };
  cplx t0 = guess, t1 = guess * (1.0 + 1e-3) + 1e-9 * kI;
  cplx f0 = f(t0), f1 = f(t1);
  PoleReport rep;
  rep.k = k;
  for (int it = 1; it <= 60; ++it) {
    if (f1 == f0) break;
    const cplx t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
    if (std::abs(t2 - target) > 0.5 * k) throw NoRoot("iterate left the disc |tau - ik| <= k/2");
    t0 = t1;
    f0 = f1;
    t1 = t2;
    f1 = f(t1);
    rep.iterations = it;
    if (std::abs(t1 - t0) <= 1e-14 * std::abs(t1)) break;
  }
  if (std::abs(t1 - t0) > 1e-10 * std::abs(t1)) throw NoRoot("secant iteration did not converge");
  // imaginary by symmetry; drop the roundoff real part
  rep.tau = cplx(0.0, t1.imag());
  rep.zeta = zeta_of(k, rep.tau);
  return rep;
}

PoleReport locate_pole(double k) { return locate_pole(k, kI * k); }

namespace {

void check_pole(const ResolventAssembly& ra) {
  if (std::abs(ra.det) < 1e-10) throw AtPole("|det Omega| < 1e-10");
}

cplx kernel_from(const Eigen::Matrix2cd& inv, const cplx U[2], const cplx Z[2]) {
  cplx r = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) r += U[a] * inv(a, b) * Z[b];
  return -r;
}

// cubic Hermite on the grid cell containing x
cplx hermite(const Grid1D& g, const Eigen::MatrixXcd& m, int val_col, int der_col, double der_sign, double x) {
  const double h = g.dx();
  int i = static_cast<int>(std::floor((x + g.L) / h));
  i = std::clamp(i, 0, g.N - 2);
  const double s = (x - g.x(i)) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * m(i, val_col) + h10 * h * der_sign * m(i, der_col) + h01 * m(i + 1, val_col) +
         h11 * h * der_sign * m(i + 1, der_col);
}

}  // namespace

cplx resolvent_kernel(const ResolventAssembly& ra, int i, int j) {
  check_pole(ra);
  const Grid1D& g = ra.sols.grid;
  if (g.x(j) > g.x(i)) {
    i = g.mirror(i);
    j = g.mirror(j);
  }
  const cplx U[2] = {ra.sols.u[0](i, 0), ra.sols.u[1](i, 0)};
  const cplx Z[2] = {ra.sols.z[0](j, 3), ra.sols.z[1](j, 3)};
  return kernel_from(ra.omega_inv, U, Z);
}

cplx resolvent_kernel(const ResolventAssembly& ra, double x, double y) {
  check_pole(ra);
  if (y > x) {
    x = -x;
    y = -y;
  }
  const Grid1D& g = ra.sols.grid;
  cplx U[2], Z[2];
  for (int a = 0; a < 2; ++a) {
    U[a] = hermite(g, ra.sols.u[a], 0, 1, 1.0, x);
    Z[a] = hermite(g, ra.sols.z[a], 3, 2, -1.0, y);
  }
  return kernel_from(ra.omega_inv, U, Z);
}

cplx resolvent_kernel_minus(const ResolventAssembly& plus, const SolutionSet& minus, int i, int j) {
  const Grid1D& g = plus.sols.grid;
  if (g.x(j) <= g.x(i)) return resolvent_kernel(plus, i, j);
  const auto idx = window_nodes(minus.grid, minus.x0);
  Eigen::Matrix2cd om;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) om(a, b) = pair_stats(minus.z[a], minus.u[b], idx).med;
  const Eigen::Matrix2cd inv = om.inverse();
  const cplx U[2] = {minus.u[0](i, 0), minus.u[1](i, 0)};
  const cplx Z[2] = {minus.z[0](j, 3), minus.z[1](j, 3)};
  return -kernel_from(inv, U, Z);
}

}  // namespace kinklab
