#include "kinklab/timestepper.hpp"

#include <cmath>

#include "kinklab/errors.hpp"

namespace kinklab {

namespace {

// Alexander's SDIRK3 tableau.
constexpr double kGamma = 0.43586652150845899942;

struct Tableau {
  double a21, a31, a32;
};

Tableau tableau() {
  const double g = kGamma;
  return {(1.0 - g) / 2.0, -1.5 * g * g + 4.0 * g - 0.25, 1.5 * g * g - 5.0 * g + 1.25};
}

Eigen::MatrixXd apply(const BandedMatrix& A, const Eigen::MatrixXd& W) {
  Eigen::MatrixXd out(W.rows(), W.cols());
  for (int c = 0; c < W.cols(); ++c) out.col(c) = A.apply(Eigen::VectorXd(W.col(c)));
  return out;
}

void sdirk_step(const BandedMatrix& A, const BandedLU& lu, double dt, Eigen::MatrixXd& W) {
  const Tableau tb = tableau();
  // stage values Y_i solve (I + g dt A) Y_i = W + dt sum_{j<i} a_ij F_j with F_j = -A Y_j
  Eigen::MatrixXd Y1 = lu.solve(W);
  const Eigen::MatrixXd F1 = -apply(A, Y1);
  Eigen::MatrixXd Y2 = lu.solve(Eigen::MatrixXd(W + dt * tb.a21 * F1));
  const Eigen::MatrixXd F2 = -apply(A, Y2);
  W = lu.solve(Eigen::MatrixXd(W + dt * (tb.a31 * F1 + tb.a32 * F2)));
}

}  // namespace

LinearStepper::LinearStepper(const BandedMatrix& A, double dt)
    : A_(A), dt_(dt), lu_(A.scaled_plus_identity(kGamma * dt, 1.0)) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
}

void LinearStepper::step(Eigen::MatrixXd& W) const { sdirk_step(A_, lu_, dt_, W); }

Eigen::MatrixXd LinearStepper::evolve(Eigen::MatrixXd W, double t) const {
  if (!(t >= 0.0)) throw ConfigError("evolution time must be non-negative");
  const int full = static_cast<int>(std::floor(t / dt_ * (1.0 + 1e-12)));
  for (int s = 0; s < full; ++s) step(W);
  const double rest = t - full * dt_;
  if (rest > 1e-12 * dt_) {
    const BandedLU lu(A_.scaled_plus_identity(kGamma * rest, 1.0));
    sdirk_step(A_, lu, rest, W);
  }
  return W;
}

Eigen::MatrixXd evolve_linear(const BandedMatrix& A, const Eigen::MatrixXd& W0, double t, double dt) {
  return LinearStepper(A, dt).evolve(W0, t);
}

Eigen::VectorXd evolve_linear(const BandedMatrix& A, const Eigen::VectorXd& w0, double t, double dt) {
  Eigen::MatrixXd W = w0;
  return LinearStepper(A, dt).evolve(W, t).col(0);
}

}  // namespace kinklab
