// Trapezoid-rule contour tools on circles and rectangles.
#pragma once

#include <functional>
#include <vector>

#include "dpnls/core.hpp"

namespace dpnls {

using AnalyticFn = std::function<cplx(cplx)>;

/// Laurent coefficients c_n, n = n_lo..n_hi, of f around center from M equispaced samples on
/// |z - center| = radius. Spectrally accurate when f is analytic in an annulus around the circle.
std::vector<cplx> laurent_on_circle(const AnalyticFn& f, cplx center, double radius, int M,
                                    int n_lo, int n_hi);

/// Same, from precomputed samples f(center + radius e^{2 pi i j / M}).
std::vector<cplx> laurent_from_samples(const std::vector<cplx>& samples, double radius, int n_lo,
                                       int n_hi);

std::vector<cplx> circle_samples(const AnalyticFn& f, cplx center, double radius, int M);

/// Winding number of f around 0 along the circle; samples are refined until consecutive
/// argument increments stay below pi/4. Throws DomainError if |f| vanishes on the circle.
int circle_winding(const AnalyticFn& f, cplx center, double radius, int M0 = 32,
                   double min_abs = 1e-14);

/// Axis-aligned rectangle [lo.real, hi.real] x [lo.imag, hi.imag].
struct Box {
  cplx lo;
  cplx hi;
  double width() const { return hi.real() - lo.real(); }
  double height() const { return hi.imag() - lo.imag(); }
  cplx center() const { return 0.5 * (lo + hi); }
  bool contains(cplx z) const {
    return z.real() >= lo.real() && z.real() <= hi.real() && z.imag() >= lo.imag() &&
           z.imag() <= hi.imag();
  }
};

struct BoxWinding {
  int count = 0;
  double min_abs = 0.0;  // smallest |f| seen on the boundary
  std::size_t evaluations = 0;
};

/// Argument principle on the box boundary with adaptive refinement of every edge.
BoxWinding box_winding(const AnalyticFn& f, const Box& box, int per_edge = 16);

}  // namespace dpnls
