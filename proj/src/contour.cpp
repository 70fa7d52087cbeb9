#include <queue>

#include "kinklab/numerics.hpp"

namespace kinklab {

ContourPath ContourPath::line(cplx a, cplx b) {
  ContourPath p;
  p.segments.push_back({[a, b](double s) { return a + s * (b - a); }, [a, b](double) { return b - a; }});
  return p;
}

ContourPath ContourPath::circle(cplx center, double radius, Orientation o) {
  ContourPath p;
  const double sign = (o == Orientation::Clockwise) ? -1.0 : 1.0;
  p.segments.push_back(
      {[=](double s) { return center + radius * std::exp(kI * (sign * 2 * kPi * s)); },
       [=](double s) { return kI * (sign * 2 * kPi * radius) * std::exp(kI * (sign * 2 * kPi * s)); }});
  p.orientation = o;
  return p;
}

ContourPath ContourPath::reversed() const {
  ContourPath r;
  r.plane = plane;
  r.orientation = orientation == Orientation::Counterclockwise ? Orientation::Clockwise
                  : orientation == Orientation::Clockwise      ? Orientation::Counterclockwise
                                                               : Orientation::Open;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    auto pt = it->point;
    auto dv = it->deriv;
    r.segments.push_back({[pt](double s) { return pt(1.0 - s); }, [dv](double s) { return -dv(1.0 - s); }});
  }
  return r;
}

ContourPath ContourPath::concat(const ContourPath& other) const {
  ContourPath r = *this;
  r.segments.insert(r.segments.end(), other.segments.begin(), other.segments.end());
  r.orientation = Orientation::Open;
  return r;
}

namespace {

struct Panel {
  double a, b, err;
  cplx val;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const ContourSegment& seg, const std::function<cplx(cplx)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  auto g = [&](double s) { return f(seg.point(s)) * seg.deriv(s); };
  cplx fc = g(c);
  cplx k = GaussKronrod15::wk[7] * fc, gs = GaussKronrod15::wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    cplx f1 = g(c - h * GaussKronrod15::xk[j]), f2 = g(c + h * GaussKronrod15::xk[j]);
    k += GaussKronrod15::wk[j] * (f1 + f2);
    if (j % 2 == 1) gs += GaussKronrod15::wg[j / 2] * (f1 + f2);
  }
  return {a, b, std::abs(h * (k - gs)), h * k};
}

}  // namespace

cplx contour_integrate(const ContourPath& path, const std::function<cplx(cplx)>& f, double tol, int max_panels) {
  cplx total = 0.0;
  for (const auto& seg : path.segments) {
    std::priority_queue<Panel> heap;
    Panel p0 = gk15(seg, f, 0.0, 1.0);
    cplx sum = p0.val;
    double err = p0.err;
    heap.push(p0);
    int count = 1;
    while (err > tol * (1.0 + std::abs(sum))) {
      if (count >= max_panels) throw NonConvergence("contour_integrate: panel budget exhausted");
      Panel p = heap.top();
      heap.pop();
      const double m = 0.5 * (p.a + p.b);
      Panel l = gk15(seg, f, p.a, m), r = gk15(seg, f, m, p.b);
      sum += l.val + r.val - p.val;
      err += l.err + r.err - p.err;
      heap.push(l);
      heap.push(r);
      ++count;
    }
    total += sum;
  }
  return total;
}

}  // namespace kinklab
