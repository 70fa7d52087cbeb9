#pragma once

#include <Eigen/Dense>

#include "kinklab/banded.hpp"

namespace kinklab {

// L-stable three-stage SDIRK (third order, stiffly accurate) for w' = -A w with a
// banded A. One factorization of I + gamma dt A serves every step and every column.
class LinearStepper {
 public:
  LinearStepper(const BandedMatrix& A, double dt);
  double dt() const { return dt_; }
  // Advances each column of W by one step.
  void step(Eigen::MatrixXd& W) const;
  // Advances to time t with steps no longer than dt (the last one is shortened).
  Eigen::MatrixXd evolve(Eigen::MatrixXd W, double t) const;

 private:
  BandedMatrix A_;
  double dt_;
  BandedLU lu_;
};

Eigen::MatrixXd evolve_linear(const BandedMatrix& A, const Eigen::MatrixXd& W0, double t, double dt);
Eigen::VectorXd evolve_linear(const BandedMatrix& A, const Eigen::VectorXd& w0, double t, double dt);

}  // namespace kinklab
