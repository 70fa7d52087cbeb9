#include <random>

#include <doctest.h>

#include "kinklab/banded.hpp"

using namespace kinklab;

namespace {

BandedMatrix random_band(int n, int kl, int ku, unsigned seed, double diag) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BandedMatrix a(n, kl, ku);
  for (int j = 0; j < n; ++j)
    for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) a.at(i, j) = u(rng) + (i == j ? diag : 0.0);
  return a;
}

}  // namespace

TEST_CASE("band storage, products and transpose follow the dense matrices") {
  const BandedMatrix a = random_band(30, 2, 1, 1, 0.0), b = random_band(30, 1, 3, 2, 0.0);
  const Eigen::MatrixXd A = a.dense(), B = b.dense();
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(30, -1.0, 2.0);
  CHECK((a.apply(v) - A * v).norm() < 1e-13);
  const BandedMatrix ab = a * b;
  CHECK(ab.kl() == 3);
  CHECK(ab.ku() == 4);
  CHECK((ab.dense() - A * B).norm() < 1e-12);
  CHECK((a.transpose().dense() - A.transpose()).norm() == 0.0);
  CHECK((a.scaled_plus_identity(2.0, 0.5).dense() - (2.0 * A + 0.5 * Eigen::MatrixXd::Identity(30, 30))).norm() <
        1e-14);
  CHECK(a(0, 5) == 0.0);
}

TEST_CASE("banded LU solves against a dense solve") {
  // no diagonal dominance: pivoting is needed
  const BandedMatrix a = random_band(40, 2, 2, 7, 0.0);
  const BandedLU lu(a);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(40, 0.0, 1.0).array().sin();
  const Eigen::VectorXd x = lu.solve(b);
  const Eigen::VectorXd ref = a.dense().fullPivLu().solve(b);
  CHECK((x - ref).norm() < 1e-10 * ref.norm());

  Eigen::VectorXcd bc = b.cast<cplx>() * cplx(1.0, -2.0);
  CHECK((lu.solve(bc) - ref.cast<cplx>() * cplx(1.0, -2.0)).norm() < 1e-10 * ref.norm());

  Eigen::MatrixXd B(40, 3);
  B << b, 2.0 * b, -b;
  const Eigen::MatrixXd X = lu.solve(B);
  CHECK((X.col(1) - 2.0 * ref).norm() < 1e-9 * ref.norm());
}
