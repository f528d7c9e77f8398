#include "dpnls/contour.hpp"

#include <cmath>
#include <limits>

namespace dpnls {

std::vector<cplx> circle_samples(const AnalyticFn& f, cplx center, double radius, int M) {
  std::vector<cplx> s(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) s[j] = f(center + std::polar(radius, 2.0 * pi * j / M));
  return s;
}

std::vector<cplx> laurent_from_samples(const std::vector<cplx>& samples, double radius, int n_lo,
                                       int n_hi) {
  const int M = static_cast<int>(samples.size());
  std::vector<cplx> c;
  c.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (int n = n_lo; n <= n_hi; ++n) {
    cplx acc = 0.0;
    for (int j = 0; j < M; ++j) acc += samples[j] * std::polar(1.0, -2.0 * pi * n * j / M);
    c.push_back(acc / (static_cast<double>(M) * std::pow(radius, n)));
  }
  return c;
}

std::vector<cplx> laurent_on_circle(const AnalyticFn& f, cplx center, double radius, int M,
                                    int n_lo, int n_hi) {
  return laurent_from_samples(circle_samples(f, center, radius, M), radius, n_lo, n_hi);
}

namespace {

constexpr double kMaxStep = pi / 4;

// Sum of argument increments of f along the path p(s), s in [0,1], refined adaptively.
template <class Path>
double arg_increment(const AnalyticFn& f, Path p, int n0, double& min_abs, std::size_t& evals) {
  struct Node {
    double s;
    cplx v;
  };
  auto eval = [&](double s) {
    ++evals;
    cplx v = f(p(s));
    min_abs = std::min(min_abs, std::abs(v));
    if (v == 0.0 || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("contour passes through a zero or singularity of the integrand");
    return v;
  };

  double total = 0.0;
  Node left{0.0, eval(0.0)};
  for (int k = 1; k <= n0; ++k) {
    const double s_end = static_cast<double>(k) / n0;
    std::vector<Node> stack{{s_end, eval(s_end)}};
    while (!stack.empty()) {
      Node right = stack.back();
      const double step = std::arg(right.v / left.v);
      if (std::abs(step) > kMaxStep && right.s - left.s > 1e-12) {
        const double mid = 0.5 * (left.s + right.s);
        stack.push_back({mid, eval(mid)});
        continue;
      }
      total += step;
      left = right;
      stack.pop_back();
    }
  }
  return total;
}

}  // namespace

int circle_winding(const AnalyticFn& f, cplx center, double radius, int M0, double min_abs) {
  double seen = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  const double total = arg_increment(
      f, [&](double s) { return center + std::polar(radius, 2.0 * pi * s); }, M0, seen, evals);
  if (seen < min_abs) throw DomainError("function vanishes on the winding circle");
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

BoxWinding box_winding(const AnalyticFn& f, const Box& box, int per_edge) {
  const cplx corners[4] = {box.lo, cplx(box.hi.real(), box.lo.imag()), box.hi,
                           cplx(box.lo.real(), box.hi.imag())};
  BoxWinding out;
  out.min_abs = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e];
    const cplx b = corners[(e + 1) % 4];
    total += arg_increment(
        f, [a, b](double s) { return a + s * (b - a); }, per_edge, out.min_abs, out.evaluations);
  }
  out.count = static_cast<int>(std::lround(total / (2.0 * pi)));
  return out;
}

}  // namespace dpnls
