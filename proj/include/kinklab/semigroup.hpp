#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "kinklab/numerics.hpp"
#include "kinklab/pieces.hpp"

namespace kinklab {

enum class Regime { SmallK, MediumK, LargeK, ShortTime };

std::string regime_name(Regime r);

// Integration path for the Dunford-Cauchy integral.
//   SmallK:  tau-line Im tau = height above the pole, sigma = Re tau in [0, extent].
//   MediumK: tau-line at height k/2 below the pole plus a circle of radius
//            residue_radius around it.
//   LargeK:  zeta-wedge apex + s e^{+-i angle}, s in [0, extent].
struct ContourPlan {
  Regime regime = Regime::SmallK;
  ContourPath path;
  double height = 0.0;
  double extent = 0.0;
  double apex = 0.0;
  double angle = 0.0;
  bool residue = false;
  cplx pole = 0.0;
  double residue_radius = 0.0;
};

// Regime from k and t: small_k for k <= min(t^{-1/2}, k0), medium_k up to k0,
// large_k beyond; t < 1 is ShortTime (no contour).
Regime classify(double k, double t, double k0 = 0.25);
ContourPlan contour_for(double k, double t, double k0 = 0.25);
ContourPlan contour_for_regime(double k, double t, Regime regime);

struct KernelOptions {
  Grid1D grid{20.0, 801};
  double tol = 1e-8;
  double k0 = 0.25;
  std::optional<Regime> regime;  // forces a regime instead of classify()
  int threads = 0;               // 0: default_threads()
  double x0 = 25.0;              // shooting start
  double rtol = 1e-10;
  int residue_points = 32;
  int proxy_points = 17;
  double short_time_dt = 5e-3;
  double short_time_margin = 10.0;
};

// K(x, y, k, t) of exp(-t D_k H_k) sampled on a grid, with S = (d_y^2 - k^2) K and
// the split K = K0 + K1 (K0 from the explicit rank-one pieces where they apply).
class SemigroupKernel {
 public:
  double k() const { return k_; }
  double t() const { return t_; }
  Regime regime() const { return regime_; }
  const Grid1D& grid() const { return grid_; }
  const ContourPlan& plan() const { return plan_; }
  int nodes() const { return nodes_; }

  const Eigen::MatrixXd& K() const { return K_; }
  const Eigen::MatrixXd& S() const { return S_; }
  const Eigen::MatrixXd& K0() const { return K0_; }
  Eigen::MatrixXd K1() const { return K_ - K0_; }

  // Bilinear interpolation between grid nodes.
  double operator()(double x, double y) const;

  // Trapezoid quadrature of the kernel against grid samples of f.
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  Eigen::VectorXd apply_S(const Eigen::VectorXd& f) const;
  Eigen::VectorXd weights() const;

 private:
  friend SemigroupKernel kernel(double k, double t, const KernelOptions& opt);
  double k_ = 0.0, t_ = 0.0;
  Regime regime_ = Regime::SmallK;
  Grid1D grid_;
  ContourPlan plan_;
  int nodes_ = 0;
  Eigen::MatrixXd K_, S_, K0_;
};

SemigroupKernel kernel(double k, double t, const KernelOptions& opt = {});

Eigen::VectorXd sample(const Grid1D& g, const std::function<double(double)>& f);
Eigen::VectorXcd apply_S(const SemigroupKernel& kern, const std::function<cplx(double)>& payload);

// Evolves w' = -D_k H_k w on the kernel grid padded by `margin` with the implicit
// stepper and returns the relative L2 distance from kern.apply(initial).
struct TimestepComparison {
  double discrepancy = 0.0;
  Eigen::VectorXd from_kernel;
  Eigen::VectorXd from_stepper;
};
TimestepComparison validate_vs_timestepping(const SemigroupKernel& kern,
                                            const std::function<double(double)>& initial,
                                            double dt = 0.01, double margin = 20.0);
TimestepComparison validate_vs_timestepping(double k, double t, const std::function<double(double)>& initial,
                                            const KernelOptions& opt = {});

}  // namespace kinklab
