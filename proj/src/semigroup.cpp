#include "kinklab/semigroup.hpp"

#include <cmath>
#include <vector>

#include "kinklab/errors.hpp"
#include "kinklab/homogeneous.hpp"
#include "kinklab/parallel.hpp"
#include "kinklab/resolvent.hpp"
#include "kinklab/spectrum.hpp"
#include "kinklab/timestepper.hpp"

namespace kinklab {

namespace {

// e^{-x} below this is dropped from the contour tails
constexpr double kTailLog = 32.3;
constexpr double kLineCap = 0.4;
constexpr double kWedgeAngle = kPi / 6.0;

double cfac(double k) { return 1.0 + 2.0 * k * k; }

double line_extent(double k, double t) { return std::sqrt(kTailLog / t) / cfac(k) + 0.5 / std::sqrt(t); }

struct Node {
  SpectralParameters p;
  cplx coeff;  // contribution is Re(coeff * R(x, y))
};

// Contour integrand without the quadrature weight, e^{-zeta t} dzeta/dparam.
cplx tau_line_factor(const SpectralParameters& p, double t) {
  const double c = cfac(p.k.real());
  return std::exp(-p.zeta * t) * 2.0 * c * c * p.tau;
}

class Proxy {
 public:
  Proxy(const KernelOptions& opt, int points) : grid_(opt.grid.L, points) {
    so_.x0 = opt.x0;
    so_.rtol = opt.rtol;
    so_.all_four = false;
    for (int i = 0; i < grid_.N; ++i)
      for (int j = 0; j <= i; ++j) pairs_.emplace_back(i, j);
  }
  Eigen::VectorXcd operator()(const SpectralParameters& p, cplx factor) const {
    const ResolventAssembly ra = omega(solve_homogeneous(p, grid_, so_));
    Eigen::VectorXcd v(pairs_.size());
    for (std::size_t n = 0; n < pairs_.size(); ++n)
      v[n] = factor * resolvent_kernel(ra, pairs_[n].first, pairs_[n].second);
    return v;
  }

 private:
  Grid1D grid_;
  ShootOptions so_;
  std::vector<std::pair<int, int>> pairs_;
};

template <class Param>
void add_panel_nodes(const std::vector<std::pair<double, double>>& panels, const Param& param,
                     std::vector<Node>& nodes) {
  for (const auto& [a, b] : panels) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int j = 0; j < 8; ++j) {
      const double w = h * GaussKronrod15::wk[j];
      if (j == 7) {
        nodes.push_back(param(c, w));
      } else {
        nodes.push_back(param(c - h * GaussKronrod15::xk[j], w));
        nodes.push_back(param(c + h * GaussKronrod15::xk[j], w));
      }
    }
  }
}

std::vector<Node> contour_nodes(double k, double t, const ContourPlan& plan, const KernelOptions& opt) {
  std::vector<Node> nodes;
  const Proxy proxy(opt, opt.proxy_points);
  if (plan.regime == Regime::LargeK) {
    const cplx dir = std::exp(cplx(0.0, -plan.angle));
    auto params = [&](double s) { return spectral_parameters_from_zeta(k, plan.apex + s * dir); };
    auto f = [&](double s) {
      const SpectralParameters p = params(s);
      return proxy(p, std::exp(-p.zeta * t) * dir);
    };
    const auto panels = adaptive_partition(f, 0.0, plan.extent, opt.tol, 0.0);
    add_panel_nodes(panels,
                    [&](double s, double w) {
                      const SpectralParameters p = params(s);
                      return Node{p, -kI / kPi * w * std::exp(-p.zeta * t) * dir};
                    },
                    nodes);
    return nodes;
  }
  auto params = [&](double s) { return spectral_parameters(k, cplx(s, plan.height)); };
  auto f = [&](double s) {
    const SpectralParameters p = params(s);
    return proxy(p, tau_line_factor(p, t));
  };
  const auto panels = adaptive_partition(f, 0.0, plan.extent, opt.tol, 0.0);
  add_panel_nodes(panels,
                  [&](double s, double w) {
                    const SpectralParameters p = params(s);
                    return Node{p, kI / kPi * w * tau_line_factor(p, t)};
                  },
                  nodes);
  if (plan.residue) {
    const int M = opt.residue_points;
    for (int j = 0; j < M; ++j) {
      const double th = 2.0 * kPi * (j + 0.5) / M;
      const cplx e = std::exp(cplx(0.0, th));
      const SpectralParameters p = spectral_parameters(k, plan.pole + plan.residue_radius * e);
      nodes.push_back(Node{p, plan.residue_radius / M * e * tau_line_factor(p, t)});
    }
  }
  return nodes;
}

Grid1D padded(const Grid1D& g, double margin, int& m) {
  m = static_cast<int>(std::lround(margin / g.dx()));
  return Grid1D(g.L + m * g.dx(), g.N + 2 * m);
}

void short_time_kernel(double k, double t, const KernelOptions& opt, Eigen::MatrixXd& K, Eigen::MatrixXd& S) {
  const Grid1D& g = opt.grid;
  int m = 0;
  const Grid1D ge = padded(g, opt.short_time_margin, m);
  const OperatorPair op = assemble(k, ge, 4);
  // the kernel is even under (x, y) -> (-x, -y), so half the columns suffice
  const int half = (g.N + 1) / 2;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(ge.N, half);
  for (int j = 0; j < half; ++j) W(m + j, j) = 1.0 / g.dx();
  W = evolve_linear(op.DH(), W, t, opt.short_time_dt);
  K.resize(g.N, g.N);
  K.leftCols(half) = W.middleRows(m, g.N);
  for (int j = half; j < g.N; ++j)
    for (int i = 0; i < g.N; ++i) K(i, j) = K(g.N - 1 - i, g.N - 1 - j);
  const OperatorPair opk = assemble(k, g, 4);
  S.resize(g.N, g.N);
  for (int i = 0; i < g.N; ++i) S.row(i) = -opk.D.apply(Eigen::VectorXd(K.row(i).transpose())).transpose();
}

}  // namespace

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::SmallK: return "small_k";
    case Regime::MediumK: return "medium_k";
    case Regime::LargeK: return "large_k";
    case Regime::ShortTime: return "short_time";
  }
  return "unknown";
}

Regime classify(double k, double t, double k0) {
  if (t < 1.0) return Regime::ShortTime;
  if (k > k0) return Regime::LargeK;
  if (k <= 1.0 / std::sqrt(t)) return Regime::SmallK;
  return Regime::MediumK;
}

ContourPlan contour_for(double k, double t, double k0) { return contour_for_regime(k, t, classify(k, t, k0)); }

ContourPlan contour_for_regime(double k, double t, Regime regime) {
  if (!(k >= 0.0) || !(t > 0.0)) throw ConfigError("contour needs k >= 0 and t > 0");
  ContourPlan plan;
  plan.regime = regime;
  switch (regime) {
    case Regime::ShortTime:
      return plan;
    case Regime::SmallK: {
      plan.height = std::min(2.0 / std::sqrt(t), kLineCap);
      if (k > 0.0 && plan.height < 1.3 * k)
        throw ConfigError("small_k line at height " + std::to_string(plan.height) + " does not clear the pole");
      plan.extent = line_extent(k, t);
      plan.path = ContourPath::line(cplx(-plan.extent, plan.height), cplx(plan.extent, plan.height));
      plan.path.plane = ContourPlane::Tau;
      return plan;
    }
    case Regime::MediumK: {
      if (!(k > 0.0)) throw ConfigError("medium_k needs k > 0");
      const PoleReport pr = locate_pole(k);
      plan.height = 0.5 * k;
      plan.extent = line_extent(k, t);
      plan.residue = true;
      plan.pole = pr.tau;
      plan.residue_radius = 0.25 * k;
      plan.path = ContourPath::line(cplx(-plan.extent, plan.height), cplx(plan.extent, plan.height))
                      .concat(ContourPath::circle(plan.pole, plan.residue_radius, Orientation::Clockwise));
      plan.path.plane = ContourPlane::Tau;
      return plan;
    }
    case Regime::LargeK: {
      plan.apex = 0.5 * std::pow(k, 4);
      plan.angle = kWedgeAngle;
      plan.extent = kTailLog / (t * std::cos(plan.angle));
      const cplx a = plan.apex;
      const cplx lo = a + plan.extent * std::exp(cplx(0.0, -plan.angle));
      const cplx hi = a + plan.extent * std::exp(cplx(0.0, plan.angle));
      plan.path = ContourPath::line(lo, a).concat(ContourPath::line(a, hi)).reversed();
      plan.path.plane = ContourPlane::Zeta;
      return plan;
    }
  }
  return plan;
}

SemigroupKernel kernel(double k, double t, const KernelOptions& opt) {
  if (!(k >= 0.0) || !(t > 0.0)) throw ConfigError("kernel needs k >= 0 and t > 0");
  SemigroupKernel out;
  out.k_ = k;
  out.t_ = t;
  out.grid_ = opt.grid;
  Regime reg = (t < 1.0) ? Regime::ShortTime : (opt.regime ? *opt.regime : classify(k, t, opt.k0));
  out.regime_ = reg;
  out.plan_ = contour_for_regime(k, t, reg);
  const Grid1D& g = opt.grid;
  const int N = g.N;

  if (reg == Regime::ShortTime) {
    short_time_kernel(k, t, opt, out.K_, out.S_);
    out.K0_ = Eigen::MatrixXd::Zero(N, N);
    return out;
  }

  const std::vector<Node> nodes = contour_nodes(k, t, out.plan_, opt);
  const int Q = static_cast<int>(nodes.size());
  out.nodes_ = Q;
  Eigen::MatrixXd Ar(N, 4 * Q), Br(N, 4 * Q), Bs(N, 4 * Q);
  ShootOptions so;
  so.x0 = opt.x0;
  so.rtol = opt.rtol;
  so.all_four = false;
  const double k2 = k * k;
  parallel_for(Q, opt.threads > 0 ? opt.threads : default_threads(), [&](std::size_t n) {
    const Node& nd = nodes[n];
    const ResolventAssembly ra = omega(solve_homogeneous(nd.p, g, so));
    if (std::abs(ra.det) < 1e-10) throw AtPole("det Omega vanishes on the contour");
    const SolutionSet& s = ra.sols;
    for (int i = 0; i < N; ++i) {
      const cplx U[2] = {s.u[0](i, 0), s.u[1](i, 0)};
      for (int b = 0; b < 2; ++b) {
        const cplx P = U[0] * ra.omega_inv(0, b) + U[1] * ra.omega_inv(1, b);
        const cplx A = -nd.coeff * P;
        const cplx Z = s.Z(b, i);
        const cplx Zs = s.d2Z(b, i) - k2 * Z;
        const int c = 4 * static_cast<int>(n) + 2 * b;
        Ar(i, c) = A.real();
        Ar(i, c + 1) = -A.imag();
        Br(i, c) = Z.real();
        Br(i, c + 1) = Z.imag();
        Bs(i, c) = Zs.real();
        Bs(i, c + 1) = Zs.imag();
      }
    }
  });
  const Eigen::MatrixXd Kl = Ar * Br.transpose();
  const Eigen::MatrixXd Sl = Ar * Bs.transpose();
  out.K_.resize(N, N);
  out.S_.resize(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const bool lower = j <= i;
      const int a = lower ? i : N - 1 - i, b = lower ? j : N - 1 - j;
      out.K_(i, j) = Kl(a, b);
      out.S_(i, j) = Sl(a, b);
    }

  out.K0_ = Eigen::MatrixXd::Zero(N, N);
  if (reg == Regime::SmallK || reg == Regime::MediumK) {
    const ExplicitPieces ep = explicit_pieces(k, t);
    for (int j = 0; j < N; ++j) {
      const double y = g.x(j);
      const double zf = reg == Regime::SmallK ? ep.all00_factor(y) : ep.pole_factor(y) + ep.rest00_factor(y);
      for (int i = 0; i < N; ++i) out.K0_(i, j) = u1_zero(g.x(i)) * zf;
    }
  }
  return out;
}

Eigen::VectorXd SemigroupKernel::weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(grid_.N, grid_.dx());
  w[0] *= 0.5;
  w[grid_.N - 1] *= 0.5;
  return w;
}

Eigen::VectorXd SemigroupKernel::apply(const Eigen::VectorXd& f) const {
  if (f.size() != grid_.N) throw ConfigError("payload size does not match the kernel grid");
  return K_ * weights().cwiseProduct(f);
}

Eigen::VectorXd SemigroupKernel::apply_S(const Eigen::VectorXd& f) const {
  if (f.size() != grid_.N) throw ConfigError("payload size does not match the kernel grid");
  return S_ * weights().cwiseProduct(f);
}

double SemigroupKernel::operator()(double x, double y) const {
  const double h = grid_.dx();
  auto locate = [&](double v, int& i, double& s) {
    const double u = std::clamp((v + grid_.L) / h, 0.0, double(grid_.N - 1));
    i = std::min(static_cast<int>(u), grid_.N - 2);
    s = u - i;
  };
  int i, j;
  double sx, sy;
  locate(x, i, sx);
  locate(y, j, sy);
  return (1 - sx) * ((1 - sy) * K_(i, j) + sy * K_(i, j + 1)) + sx * ((1 - sy) * K_(i + 1, j) + sy * K_(i + 1, j + 1));
}

Eigen::VectorXd sample(const Grid1D& g, const std::function<double(double)>& f) {
  Eigen::VectorXd v(g.N);
  for (int i = 0; i < g.N; ++i) v[i] = f(g.x(i));
  return v;
}

Eigen::VectorXcd apply_S(const SemigroupKernel& kern, const std::function<cplx(double)>& payload) {
  const Grid1D& g = kern.grid();
  Eigen::VectorXd re(g.N), im(g.N);
  for (int i = 0; i < g.N; ++i) {
    const cplx v = payload(g.x(i));
    re[i] = v.real();
    im[i] = v.imag();
  }
  const Eigen::VectorXd a = kern.apply_S(re), b = kern.apply_S(im);
  Eigen::VectorXcd out(g.N);
  for (int i = 0; i < g.N; ++i) out[i] = cplx(a[i], b[i]);
  return out;
}

TimestepComparison validate_vs_timestepping(const SemigroupKernel& kern, const std::function<double(double)>& initial,
                                            double dt, double margin) {
  const Grid1D& g = kern.grid();
  int m = 0;
  const Grid1D ge = padded(g, margin, m);
  const OperatorPair op = assemble(kern.k(), ge, 4);
  const Eigen::VectorXd w = evolve_linear(op.DH(), sample(ge, initial), kern.t(), dt);
  TimestepComparison c;
  c.from_stepper = w.segment(m, g.N);
  c.from_kernel = kern.apply(sample(g, initial));
  c.discrepancy = (c.from_kernel - c.from_stepper).norm() / std::max(c.from_stepper.norm(), 1e-300);
  return c;
}

TimestepComparison validate_vs_timestepping(double k, double t, const std::function<double(double)>& initial,
                                            const KernelOptions& opt) {
  return validate_vs_timestepping(kernel(k, t, opt), initial);
}

}  // namespace kinklab
