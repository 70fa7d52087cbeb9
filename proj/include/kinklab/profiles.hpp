#pragma once

#include "kinklab/numerics.hpp"

namespace kinklab {

struct KinkFamily {
  double u0;   // tanh(x/2)
  double du0;  // sech^2(x/2)/2
  double V;    // -3 du0
  double dV;
  double d2V;
};

KinkFamily kink_family(double x);

// sech^2(x/2) without overflow
double sech2_half(double x);

// Self-similar transverse profile: inverse Fourier transform of exp(-|k|^3/3)
// in `dim` dimensions, evaluated at radius r. dim is 1 or 2.
double phi_star(double r, int dim);

// phi(xhat, t) = t^{-dim/3} phi_star(|xhat| t^{-1/3}), dim = d - 1.
double phi_scaled(double rhat, double t, int dim);

struct AsymptoticAnsatz {
  double A = 0.0;  // integral of the initial perturbation
  int d = 3;
};

// u0(x) + (A/2) du0(x) phi(xhat, t), the leading large-time state.
double asymptotic_state(double x, double rhat, double t, const AsymptoticAnsatz& ansatz);

// Radius where phi_star falls to half its centre value.
double phi_star_half_width(int dim);

}  // namespace kinklab
