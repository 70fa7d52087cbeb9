#include "kinklab/profiles.hpp"
#include "kinklab/spectrum.hpp"

namespace kinklab {

Eigen::VectorXd second_difference_stencil(int order) {
  Eigen::VectorXd c;
  if (order == 2) {
    c.resize(2);
    c << -2.0, 1.0;
  } else if (order == 4) {
    c.resize(3);
    c << -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0;
  } else {
    throw ValidationError("stencil order must be 2 or 4");
  }
  return c;
}

OperatorPair assemble(double k, const Grid1D& grid, int order) {
  if (grid.L < 20.0) throw GridTooSmall("half-length " + std::to_string(grid.L) + " < 20");
  const Eigen::VectorXd c = second_difference_stencil(order);
  const int w = order / 2, n = grid.N;
  const double h2 = grid.dx() * grid.dx();
  OperatorPair op;
  op.k = k;
  op.grid = grid;
  op.order = order;
  op.D = BandedMatrix(n, w, w);
  op.H = BandedMatrix(n, w, w);
  for (int i = 0; i < n; ++i) {
    for (int o = -w; o <= w; ++o) {
      const int j = i + o;
      if (j < 0 || j >= n) continue;
      const double v = -c[std::abs(o)] / h2 + (o == 0 ? k * k : 0.0);
      op.D.at(i, j) = v;
      op.H.at(i, j) = v + (o == 0 ? 1.0 + kink_family(grid.x(i)).V : 0.0);
    }
  }
  return op;
}

}  // namespace kinklab
