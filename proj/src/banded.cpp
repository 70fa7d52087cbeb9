#include "kinklab/banded.hpp"

#include <string>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info, std::size_t len);
}

namespace kinklab {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(kl + ku + 1), ab_(static_cast<std::size_t>(ld_) * n, 0.0) {}

Eigen::VectorXd BandedMatrix::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int i0 = std::max(0, j - ku_), i1 = std::min(n_ - 1, j + kl_);
    for (int i = i0; i <= i1; ++i) out[i] += ab_[(ku_ + i - j) + j * ld_] * v[j];
  }
  return out;
}

Eigen::VectorXcd BandedMatrix::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int i0 = std::max(0, j - ku_), i1 = std::min(n_ - 1, j + kl_);
    for (int i = i0; i <= i1; ++i) out[i] += ab_[(ku_ + i - j) + j * ld_] * v[j];
  }
  return out;
}

Eigen::MatrixXd BandedMatrix::dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) d(i, j) = (*this)(i, j);
  return d;
}

BandedMatrix BandedMatrix::operator*(const BandedMatrix& o) const {
  BandedMatrix r(n_, kl_ + o.kl_, ku_ + o.ku_);
  for (int j = 0; j < n_; ++j)
    for (int m = std::max(0, j - o.ku_); m <= std::min(n_ - 1, j + o.kl_); ++m) {
      const double b = o(m, j);
      if (b == 0.0) continue;
      for (int i = std::max(0, m - ku_); i <= std::min(n_ - 1, m + kl_); ++i) r.at(i, j) += (*this)(i, m) * b;
    }
  return r;
}

BandedMatrix BandedMatrix::scaled_plus_identity(double a, double shift) const {
  BandedMatrix r = *this;
  for (double& v : r.ab_) v *= a;
  for (int i = 0; i < n_; ++i) r.at(i, i) += shift;
  return r;
}

BandedMatrix BandedMatrix::transpose() const {
  BandedMatrix r(n_, ku_, kl_);
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) r.at(j, i) = (*this)(i, j);
  return r;
}

BandedLU::BandedLU(const BandedMatrix& a) : n_(a.n_), kl_(a.kl_), ku_(a.ku_), ld_(2 * a.kl_ + a.ku_ + 1) {
  lu_.assign(static_cast<std::size_t>(ld_) * n_, 0.0);
  for (int j = 0; j < n_; ++j)
    for (int r = 0; r < a.ld_; ++r) lu_[(kl_ + r) + j * ld_] = a.ab_[r + j * a.ld_];
  ipiv_.assign(n_, 0);
  int info = 0;
  dgbtrf_(&n_, &n_, &kl_, &ku_, lu_.data(), &ld_, ipiv_.data(), &info);
  if (info != 0) throw NumericalError("banded LU failed, info = " + std::to_string(info));
}

void BandedLU::solve_in_place(double* rhs, int nrhs, int ldb) const {
  int info = 0;
  const char t = 'N';
  dgbtrs_(&t, &n_, &kl_, &ku_, &nrhs, lu_.data(), &ld_, ipiv_.data(), rhs, &ldb, &info, 1);
  if (info != 0) throw NumericalError("banded solve failed");
}

Eigen::VectorXd BandedLU::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = b;
  solve_in_place(x.data(), 1, n_);
  return x;
}

Eigen::VectorXcd BandedLU::solve(const Eigen::VectorXcd& b) const {
  Eigen::MatrixXd m(n_, 2);
  m.col(0) = b.real();
  m.col(1) = b.imag();
  solve_in_place(m.data(), 2, n_);
  Eigen::VectorXcd x(n_);
  x.real() = m.col(0);
  x.imag() = m.col(1);
  return x;
}

Eigen::MatrixXd BandedLU::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd x = b;
  solve_in_place(x.data(), static_cast<int>(x.cols()), n_);
  return x;
}

}  // namespace kinklab
