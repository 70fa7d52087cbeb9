#pragma once

#include <Eigen/Dense>

#include "kinklab/banded.hpp"
#include "kinklab/numerics.hpp"

namespace kinklab {

// Finite-difference D_k = -d^2/dx^2 + k^2 and H_k = D_k + 1 + V on a grid,
// homogeneous Dirichlet closure at +-L (the stencil is truncated at the ends).
struct OperatorPair {
  double k = 0.0;
  Grid1D grid;
  int order = 4;
  BandedMatrix D;
  BandedMatrix H;
  BandedMatrix DH() const { return D * H; }
};

// Second-difference stencil coefficients for order 2 or 4, offsets 0..order/2.
Eigen::VectorXd second_difference_stencil(int order);

OperatorPair assemble(double k, const Grid1D& grid, int order = 4);

struct SpectralResult {
  double k = 0.0;
  double zeta0 = 0.0;
  double zeta1 = 0.0;
  Eigen::VectorXd eigenfunction;  // u-variable, unit discrete L2 norm, positive at x = 0
  double residual = 0.0;          // relative residual of the zeta0 pair
};

struct EigenOptions {
  double L = 40.0;
  int N = 4096;
  int order = 4;
  int lanczos_steps = 120;
  double tol = 1e-12;  // relative Ritz estimate that stops the restarts
};

// Lowest two eigenvalues of D_k H_k via shift-invert Lanczos on the symmetric
// pencil (D H D) psi = zeta D psi, shift sigma = k^3/3. At k = 0 solves H alone.
SpectralResult lowest_eigenpair(double k, const EigenOptions& opt = {});

}  // namespace kinklab
