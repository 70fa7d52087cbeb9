#include <cmath>

#include <Eigen/Dense>
#include <doctest.h>

#include "kinklab/homogeneous.hpp"
#include "kinklab/resolvent.hpp"
#include "kinklab/spectrum.hpp"

using namespace kinklab;

TEST_CASE("det Omega follows its small-lambda expansion") {
  auto lead = [](double k, cplx tau) {
    return k * k + tau * tau + 2.0 * kI * tau * tau * tau + (7.0 / 3.0) * kI * tau * k * k;
  };
  const double k = 0.02;
  const cplx tau = 0.02 * kI;
  const double lam = std::abs(tau) + k;
  CHECK(std::abs(det_omega(k, tau) - lead(k, tau)) < 5.0 * std::pow(lam, 4));

  std::vector<double> rem;
  for (double s : {0.04, 0.02, 0.01}) rem.push_back(std::abs(det_omega(s, kI * s) - lead(s, kI * s)));
  CHECK(rem[0] / rem[1] == doctest::Approx(16.0).epsilon(0.5));
  CHECK(rem[1] / rem[2] == doctest::Approx(16.0).epsilon(0.5));
}

TEST_CASE("pole location") {
  const double k = 0.05;
  const PoleReport p = locate_pole(k);
  CHECK(std::abs(p.tau.imag() - (k - k * k / 6.0)) < 5.0 * k * k * k);
  CHECK(std::abs(p.zeta.imag()) < 1e-10 * std::abs(p.zeta));
  CHECK(p.zeta.real() > 0.0);

  EigenOptions o;
  o.L = 200.0;
  o.N = 10000;
  const SpectralResult s = lowest_eigenpair(k, o);
  CHECK(std::abs(p.zeta.real() - s.zeta0) / s.zeta0 < 1e-4);
}

TEST_CASE("resolvent mirror symmetry") {
  const SpectralParameters p = spectral_parameters(0.3, cplx(0.2, 0.25));
  const Grid1D g(20.0, 401);
  const ResolventAssembly ra = omega(solve_homogeneous(p, g));
  const SolutionSet minus = solve_homogeneous_minus(p, g);
  CHECK(resolvent_kernel(ra, 1.0, -0.5) == resolvent_kernel(ra, -1.0, 0.5));
  // y > x branch from independently shot solutions
  double worst = 0.0, scale = 0.0;
  for (int i = 100; i <= 300; i += 20)
    for (int j = i + 5; j <= 300; j += 20) {
      worst = std::max(worst, std::abs(resolvent_kernel(ra, i, j) - resolvent_kernel_minus(ra, minus, i, j)));
      scale = std::max(scale, std::abs(resolvent_kernel(ra, i, j)));
    }
  CHECK(worst < 1e-8 * std::max(scale, 1.0));
}

TEST_CASE("resolvent inverts zeta - D H") {
  // (zeta - DH) of the finite-difference operator applied in x to R(., y) is a delta at y
  const double k = 0.3;
  const SpectralParameters p = spectral_parameters(k, cplx(0.2, 0.25));
  const Grid1D g(20.0, 2001);  // dx = 0.02
  const ResolventAssembly ra = omega(solve_homogeneous(p, g));
  const BandedMatrix DH = assemble(k, g).DH();
  const int col = 1000 + 25;  // y = 0.5
  Eigen::VectorXcd Rcol(g.N);
  for (int i = 0; i < g.N; ++i) Rcol[i] = resolvent_kernel(ra, i, col);
  const Eigen::VectorXcd res = (p.zeta * Rcol - DH.apply(Rcol)) * g.dx();
  double off = 0.0;
  for (int i = 200; i < g.N - 200; ++i)
    if (std::abs(i - col) > 6) off = std::max(off, std::abs(res[i]));
  CHECK(off < 1e-4);
  cplx sum = 0.0;
  for (int i = col - 6; i <= col + 6; ++i) sum += res[i];
  CHECK(std::abs(sum - 1.0) < 1e-3);
}

TEST_CASE("resolvent is C^2 across the diagonal") {
  const SpectralParameters p = spectral_parameters(0.3, cplx(0.2, 0.25));
  const Grid1D g(20.0, 2001);
  const ResolventAssembly ra = omega(solve_homogeneous(p, g));
  const double h = g.dx();
  const int i = 1050;
  // one-sided second differences in y from each side of y = x
  auto R = [&](int j) { return resolvent_kernel(ra, i, j); };
  const cplx left = (R(i) - 2.0 * R(i - 1) + R(i - 2)) / (h * h);
  const cplx right = (R(i) - 2.0 * R(i + 1) + R(i + 2)) / (h * h);
  CHECK(std::abs(left - right) < 10.0 * h * std::max(1.0, std::abs(left)));
}
