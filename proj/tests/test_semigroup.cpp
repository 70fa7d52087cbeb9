#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>
#include <doctest.h>

#include "kinklab/pieces.hpp"
#include "kinklab/profiles.hpp"
#include "kinklab/semigroup.hpp"
#include "kinklab/spectrum.hpp"
#include "kinklab/timestepper.hpp"

using namespace kinklab;

namespace {

double gauss(double x) { return std::exp(-x * x); }

KernelOptions small_grid() {
  KernelOptions o;
  o.grid = Grid1D(20.0, 401);
  return o;
}

}  // namespace

TEST_CASE("explicit pieces") {
  const ExplicitPieces p = explicit_pieces(0.1, 20.0);
  CHECK(p.krest10(1.0, -2.0) == 0.0);
  CHECK(p.krest10(-0.5, 3.0) == 0.0);
  CHECK(p.krest10(0.0, 3.0) == 0.0);

  // k = 0: Dirichlet half-line heat kernel by images
  const ExplicitPieces q = explicit_pieces(0.0, 3.0);
  const double x = 1.2, y = 0.7, t = 3.0;
  const double heat = (std::exp(-(x - y) * (x - y) / (4 * t)) - std::exp(-(x + y) * (x + y) / (4 * t))) /
                      std::sqrt(4 * kPi * t);
  CHECK(q.krest10(x, y) == doctest::Approx(heat).epsilon(1e-14));
  CHECK(q.tprime() == t);

  // pole piece at y = 0
  const double k = 0.1;
  for (double xx : {-1.0, 0.0, 2.5})
    CHECK(p.kpole0(xx, 0.0) ==
          doctest::Approx(std::exp(-k * k * k * 20.0 / 3.0) * (1.0 - 2.0 * k * std::log(2.0)) / (4.0 * std::pow(std::cosh(xx / 2), 2)))
              .epsilon(1e-13));
}

TEST_CASE("lambda = 0 profiles solve the k = 0 equations") {
  const double h = 1e-3;
  for (double x : {-3.0, 0.0, 1.4}) {
    // H_0 U_1 = 0
    const double u = u1_zero(x);
    const double d2u = (u1_zero(x + h) - 2 * u + u1_zero(x - h)) / (h * h);
    CHECK(std::abs(-d2u + (1.0 - 1.5 / std::pow(std::cosh(x / 2), 2)) * u) < 1e-6);
    // Z_1'' = U_1, so D_0 Z_1 lies in the kernel of H_0
    const double d2z = (z1_zero_plus(x + h) - 2 * z1_zero_plus(x) + z1_zero_plus(x - h)) / (h * h);
    CHECK(d2z == doctest::Approx(u).epsilon(1e-5));
  }
}

TEST_CASE("regime classification and contour choices") {
  CHECK(classify(0.05, 100.0) == Regime::SmallK);
  const ContourPlan a = contour_for(0.05, 100.0);
  CHECK(a.regime == Regime::SmallK);
  CHECK(a.height == doctest::Approx(0.2));

  const ContourPlan b = contour_for(0.2, 100.0);
  CHECK(b.regime == Regime::MediumK);
  CHECK(b.residue);

  for (double t : {1.0, 10.0}) {
    const ContourPlan c = contour_for(1.0, t);
    CHECK(c.regime == Regime::LargeK);
    CHECK(c.apex == doctest::Approx(0.5));
  }
  CHECK(classify(0.1, 0.5) == Regime::ShortTime);
  CHECK(regime_name(Regime::MediumK) == "medium_k");
}

TEST_CASE("kernel leaves du0 fixed at k = 0") {
  const SemigroupKernel K = kernel(0.0, 5.0, small_grid());
  const Grid1D& g = K.grid();
  const Eigen::VectorXd du = sample(g, [](double x) { return kink_family(x).du0; });
  const Eigen::VectorXd out = K.apply(du);
  CHECK((out - du).lpNorm<Eigen::Infinity>() < 1e-6);
  // S against du0 is the evolved second derivative of du0
  const OperatorPair op = assemble(0.0, g);
  const Eigen::MatrixXd E = (-5.0 * op.DH().dense()).exp();
  const Eigen::VectorXd oracle = E * (-op.D.apply(du));
  // the dense oracle is truncated at the grid ends; compare on |x| <= 15
  const Eigen::VectorXd s = K.apply_S(du);
  double worst = 0.0;
  for (int i = 0; i < g.N; ++i)
    if (std::abs(g.x(i)) <= 15.0) worst = std::max(worst, std::abs(s[i] - oracle[i]));
  CHECK(worst < 1e-4 * oracle.lpNorm<Eigen::Infinity>());
}

TEST_CASE("apply_S matches a dense matrix exponential") {
  // S f = exp(-t D H) (-D) f on the grid; coarse grid for the dense oracle
  const double k = 0.3, t = 5.0;
  const SemigroupKernel K = kernel(k, t, small_grid());
  const Grid1D& g = K.grid();
  const OperatorPair op = assemble(k, g);
  const Eigen::MatrixXd E = (-t * op.DH().dense()).exp();
  const Eigen::VectorXd f = sample(g, gauss);
  const Eigen::VectorXd oracle = E * (-op.D.apply(f));
  const Eigen::VectorXd got = K.apply_S(f);
  CHECK((got - oracle).lpNorm<Eigen::Infinity>() < 1e-4 * oracle.lpNorm<Eigen::Infinity>());

  // the same oracle for K itself
  const Eigen::VectorXd kf = K.apply(f);
  CHECK((kf - E * f).lpNorm<Eigen::Infinity>() < 1e-4 * kf.lpNorm<Eigen::Infinity>());
}

TEST_CASE("apply_S is linear") {
  const SemigroupKernel K = kernel(0.1, 3.0, small_grid());
  auto f = [](double x) { return cplx(std::exp(-x * x), 0.3 * x * std::exp(-x * x)); };
  auto g = [](double x) { return cplx(1.0 / (1.0 + x * x), 0.0); };
  const cplx a(0.7, -0.2), b(-1.3, 0.4);
  const Eigen::VectorXcd lhs = apply_S(K, [&](double x) { return a * f(x) + b * g(x); });
  const Eigen::VectorXcd rhs = a * apply_S(K, f) + b * apply_S(K, g);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10 * (1.0 + rhs.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("kernel agrees with the timestepper") {
  KernelOptions o = small_grid();
  const TimestepComparison c = validate_vs_timestepping(0.1, 5.0, gauss, o);
  CHECK(c.discrepancy < 1e-3);
  const TimestepComparison d =
      validate_vs_timestepping(0.0, 5.0, [](double x) { return kink_family(x).du0; }, o);
  CHECK(d.discrepancy < 1e-6);
}

TEST_CASE("small_k and medium_k paths agree at the crossover") {
  const double t = 25.0, k = 1.0 / std::sqrt(t);
  KernelOptions o = small_grid();
  o.regime = Regime::SmallK;
  const SemigroupKernel a = kernel(k, t, o);
  o.regime = Regime::MediumK;
  const SemigroupKernel b = kernel(k, t, o);
  CHECK((a.K() - b.K()).cwiseAbs().maxCoeff() < 1e-6 * a.K().cwiseAbs().maxCoeff());
}

TEST_CASE("kernel decays with k at fixed t") {
  double prev = 1e300;
  for (double k : {0.05, 0.1, 0.2, 0.4}) {
    const double m = kernel(k, 20.0, small_grid()).K().cwiseAbs().maxCoeff();
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("large-k kernel bound") {
  const double k = 1.2, t = 2.0;
  const double m = kernel(k, t, small_grid()).K().cwiseAbs().maxCoeff();
  // regression constant fitted once
  CHECK(m <= 2.0 * std::exp(-0.5 * std::pow(k, 4) * t));
}

TEST_CASE("dense exponential oracle for the linear stepper") {
  const Grid1D g(20.0, 161);
  const OperatorPair op = assemble(0.4, g);
  const BandedMatrix A = op.DH();
  const Eigen::VectorXd w0 = sample(g, gauss);
  const Eigen::VectorXd ref = (-2.0 * A.dense()).exp() * w0;
  const Eigen::VectorXd w = evolve_linear(A, w0, 2.0, 1e-3);
  CHECK((w - ref).norm() < 1e-6 * ref.norm());
  // third order: halving dt cuts the error about eightfold
  const double e1 = (evolve_linear(A, w0, 2.0, 0.02) - ref).norm();
  const double e2 = (evolve_linear(A, w0, 2.0, 0.01) - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.3));
}
