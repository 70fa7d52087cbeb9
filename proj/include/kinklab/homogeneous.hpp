#pragma once

#include <array>

#include <Eigen/Dense>

#include "kinklab/numerics.hpp"

namespace kinklab {

// Spatial eigenvalues of the first-order system at given (k, tau):
// zeta = k^2 + k^4 + (1+2k^2)^2 tau^2, Re mu1 <= Re mu2 <= 0 for Im tau >= 0,
// mu3 = -mu2, mu4 = -mu1.
struct SpectralParameters {
  cplx k;
  cplx tau;
  cplx zeta;
  std::array<cplx, 4> mu;
};

SpectralParameters spectral_parameters(cplx k, cplx tau);
// Picks the root tau with Im tau >= 0.
SpectralParameters spectral_parameters_from_zeta(cplx k, cplx zeta);
cplx zeta_of(cplx k, cplx tau);

// Eigenvector of the asymptotic matrix for root mu, and the matching left eigenvector.
Eigen::Vector4cd right_vector(const SpectralParameters& p, cplx mu);
Eigen::RowVector4cd left_vector(const SpectralParameters& p, cplx mu);

// Coefficient matrix A(x) of u' = A u for the fourth-order resolvent ODE.
Eigen::Matrix4cd system_matrix(const SpectralParameters& p, double x);

// Values of four solutions on a grid; each matrix is N x 4 (value, d, d2, d3 for
// the u-system, or the adjoint row vector for the z-system).
struct SolutionSet {
  SpectralParameters params;
  Grid1D grid;
  double x0 = 25.0;
  std::array<Eigen::MatrixXcd, 4> u;  // u_j^+ : u_1, u_2 decay at +infinity
  std::array<Eigen::MatrixXcd, 4> z;  // z_j^- : z_1, z_2 decay at -infinity
  // Z, Z' and Z'' of the adjoint solutions, read off the z-vector.
  cplx Z(int j, int i) const { return z[j](i, 3); }
  cplx dZ(int j, int i) const { return -z[j](i, 2); }
  cplx d2Z(int j, int i) const;
};

struct ShootOptions {
  double x0 = 25.0;
  double rtol = 1e-10;
  bool all_four = true;  // also build u_3, u_4, z_3, z_4
};

SolutionSet solve_homogeneous(const SpectralParameters& p, const Grid1D& grid, const ShootOptions& opt = {});

// Mirror-image construction: u^- decaying at -infinity (exponents mu4, mu3) and
// z^+ decaying at +infinity, shot independently. Only j = 1, 2 are filled.
SolutionSet solve_homogeneous_minus(const SpectralParameters& p, const Grid1D& grid, const ShootOptions& opt = {});

// Growing solution 4 cosh^2(x/2) of D_0 H_0 u = 0.
double growth_solution_zero(double x);

}  // namespace kinklab
