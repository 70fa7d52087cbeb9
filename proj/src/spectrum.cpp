#include <Eigen/Eigenvalues>
#include <algorithm>
#include <memory>
#include <functional>
#include <vector>

#include "kinklab/profiles.hpp"
#include "kinklab/spectrum.hpp"

namespace kinklab {

namespace {

using VecOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LanczosOut {
  Eigen::VectorXd theta;      // Ritz values of T
  Eigen::MatrixXd vectors;    // Ritz vectors
  Eigen::VectorXd estimate;   // |beta_m s_m|
};

// Lanczos for T self-adjoint in the M inner product, full reorthogonalization.
LanczosOut lanczos(const VecOp& T, const VecOp& M, const Eigen::VectorXd& start, int steps) {
  const int n = start.size();
  steps = std::min(steps, n);
  Eigen::MatrixXd Q(n, steps + 1), MQ(n, steps + 1);
  Eigen::VectorXd alpha(steps), beta(steps);
  Eigen::VectorXd mq = M(start);
  double nrm = std::sqrt(start.dot(mq));
  Q.col(0) = start / nrm;
  MQ.col(0) = mq / nrm;
  int m = steps;
  for (int j = 0; j < steps; ++j) {
    Eigen::VectorXd w = T(Q.col(j));
    alpha[j] = w.dot(MQ.col(j));
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd c = MQ.leftCols(j + 1).transpose() * w;
      w -= Q.leftCols(j + 1) * c;
    }
    Eigen::VectorXd mw = M(w);
    beta[j] = std::sqrt(std::max(0.0, w.dot(mw)));
    if (beta[j] < 1e-14 * std::abs(alpha[0])) {
      m = j + 1;
      break;
    }
    Q.col(j + 1) = w / beta[j];
    MQ.col(j + 1) = mw / beta[j];
  }
  Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    Tm(j, j) = alpha[j];
    if (j + 1 < m) Tm(j, j + 1) = Tm(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
  LanczosOut out;
  out.theta = es.eigenvalues();
  out.vectors = Q.leftCols(m) * es.eigenvectors();
  out.estimate = (beta[m - 1] * es.eigenvectors().row(m - 1)).cwiseAbs().transpose();
  return out;
}

}  // namespace

SpectralResult lowest_eigenpair(double k, const EigenOptions& opt) {
  const Grid1D grid(opt.L, opt.N);
  const OperatorPair op = assemble(k, grid, opt.order);
  const int n = grid.N;
  const bool plain = (k == 0.0);
  // D_k H_k is self-adjoint in the D_k^{-1} inner product; at k = 0 use H alone.
  const double sigma = plain ? -1e-3 : k * k * k / 3.0;
  BandedMatrix A = plain ? op.H : op.DH();
  for (int i = 0; i < n; ++i) A.at(i, i) -= sigma;
  const BandedLU luA(A);
  std::unique_ptr<BandedLU> luD;
  if (!plain) luD = std::make_unique<BandedLU>(op.D);
  const VecOp T = [&](const Eigen::VectorXd& v) { return luA.solve(v); };
  const VecOp M = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return plain ? v : luD->solve(v);
  };

  Eigen::VectorXd start(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    start[i] = kink_family(x).du0 + 1e-3 * std::sin(0.37 * i + 0.1) / (1.0 + 0.01 * x * x);
  }

  SpectralResult res;
  res.k = k;
  for (int restart = 0; restart < 6; ++restart) {
    const LanczosOut lo = lanczos(T, M, start, opt.lanczos_steps);
    if (lo.theta.size() < 2) throw NoConvergence("Lanczos produced fewer than two Ritz values");
    // the two Ritz values nearest the shift, then ordered by zeta
    std::vector<int> idx(lo.theta.size());
    for (int i = 0; i < int(idx.size()); ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(),
                      [&](int a, int b) { return std::abs(lo.theta[a]) > std::abs(lo.theta[b]); });
    if (1.0 / lo.theta[idx[1]] < 1.0 / lo.theta[idx[0]]) std::swap(idx[0], idx[1]);
    const Eigen::VectorXd phi0 = lo.vectors.col(idx[0]);
    const Eigen::VectorXd Hphi = op.H.apply(phi0);
    const Eigen::VectorXd Mphi = M(phi0);
    // Rayleigh quotient of the pencil (H, D^{-1})
    res.zeta0 = phi0.dot(Hphi) / phi0.dot(Mphi);
    res.zeta1 = sigma + 1.0 / lo.theta[idx[1]];
    const Eigen::VectorXd r = (plain ? Hphi : op.D.apply(Hphi)) - res.zeta0 * phi0;
    res.residual = r.norm() / std::max(std::abs(res.zeta0) * phi0.norm(), 1e-300);
    Eigen::VectorXd phi = phi0 / std::sqrt(phi0.squaredNorm() * grid.dx());
    if (phi[n / 2] < 0) phi = -phi;
    res.eigenfunction = phi;
    const double rel = lo.estimate[idx[0]] / std::abs(lo.theta[idx[0]]);
    if (rel < opt.tol) return res;
    start = phi0;
  }
  if (!(res.residual < 1e-6)) throw NoConvergence("shift-invert Lanczos did not converge for zeta0");
  return res;
}

}  // namespace kinklab
