#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kinklab/numerics.hpp"

namespace kinklab {

// Square band matrix, kl sub- and ku super-diagonals.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }
  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
  double operator()(int i, int j) const { return in_band(i, j) ? ab_[(ku_ + i - j) + j * ld_] : 0.0; }
  double& at(int i, int j) { return ab_[(ku_ + i - j) + j * ld_]; }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXd dense() const;
  BandedMatrix operator*(const BandedMatrix& o) const;
  // this*a + identity*shift
  BandedMatrix scaled_plus_identity(double a, double shift) const;
  BandedMatrix transpose() const;

 private:
  friend class BandedLU;
  int n_ = 0, kl_ = 0, ku_ = 0, ld_ = 1;
  std::vector<double> ab_;
};

// Partial-pivoting LU of a band matrix (LAPACK gbtrf/gbtrs).
class BandedLU {
 public:
  BandedLU() = default;
  explicit BandedLU(const BandedMatrix& a);
  int size() const { return n_; }
  void solve_in_place(double* rhs, int nrhs, int ldb) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0, ld_ = 1;
  std::vector<double> lu_;
  std::vector<int> ipiv_;
};

}  // namespace kinklab
