#pragma once

namespace kinklab {

// Closed forms at lambda = 0: U_1^+(x) = 1/(4 cosh^2(x/2)) and Z_1^+(y) = log(1 + e^{-y}).
double u1_zero(double x);
double z1_zero_plus(double y);

// Leading explicit terms of the semigroup kernel for small k, t >= 1.
// All share t' = (1 + 2k^2)^2 t.
struct ExplicitPieces {
  double k = 0.0;
  double t = 1.0;

  double kpole0(double x, double y) const;
  double krest00(double x, double y) const;
  double krest10(double x, double y) const;
  double krest11(double x, double y) const;
  double kall00(double x, double y) const;

  // y-factors of the rank-one parts: kpole0 = u1_zero(x) * pole_factor(y), etc.
  double pole_factor(double y) const;
  double rest00_factor(double y) const;
  double all00_factor(double y) const;

  double tprime() const;
};

ExplicitPieces explicit_pieces(double k, double t);

}  // namespace kinklab
