#pragma once

#include <Eigen/Dense>

#include "kinklab/homogeneous.hpp"

namespace kinklab {

// Omega_ij = z_i^- . u_j^+ (i, j in {1, 2}); constant in x.
struct ResolventAssembly {
  SolutionSet sols;
  Eigen::Matrix2cd omega;
  Eigen::Matrix2cd omega_inv;
  cplx det = 0.0;
  double spread = 0.0;  // max relative x-variation of the pairing
};

ResolventAssembly omega(const SolutionSet& sols);

// Relative x-variation of z_i . u_j for all 16 pairs: std / mean of sum |z_c||u_c|.
Eigen::Matrix4d pairing_spread(const SolutionSet& sols, double window);

// Median pairing for all 16 pairs.
Eigen::Matrix4cd pairing_matrix(const SolutionSet& sols, double window);

cplx det_omega(cplx k, cplx tau, double rtol = 1e-11);

struct PoleReport {
  double k = 0.0;
  cplx tau;
  cplx zeta;
  int iterations = 0;
};

// Root of det Omega(k, .) near tau = i k.
PoleReport locate_pole(double k, cplx guess);
PoleReport locate_pole(double k);

// Green's function of (zeta - D_k H_k) at grid nodes (i, j):
// R = -U^+(x) Omega^{-1} Z^-(y) for y <= x, and R(x, y) = R(-x, -y).
cplx resolvent_kernel(const ResolventAssembly& ra, int i, int j);
// Off-grid evaluation by cubic Hermite interpolation of U and Z.
cplx resolvent_kernel(const ResolventAssembly& ra, double x, double y);
// The same kernel built from the independently shot u^-, z^+ sets (y > x branch).
cplx resolvent_kernel_minus(const ResolventAssembly& plus, const SolutionSet& minus, int i, int j);

}  // namespace kinklab
