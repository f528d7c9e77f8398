// Forward Zakharov-Shabat scattering for the focusing NLS.
#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dpnls/contour.hpp"
#include "dpnls/profile.hpp"

namespace dpnls {

struct JostOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double tail_tol = 1e-10;  // relative, see InitialProfile::relative_tail
};

/// Jost data at the truncation ends x_lo, x_hi of the profile grid.
/// mu_minus is evaluated at x_hi and mu_plus at x_lo. For non-real z only the analytic
/// columns (first of mu_minus, second of mu_plus) are filled; `full` says whether the
/// other columns are meaningful.
struct JostPair {
  Mat2 mu_minus = Mat2::Identity();
  Mat2 mu_plus = Mat2::Identity();
  cplx s11 = 1.0;           // det(mu1-, mu2+), read at x_hi
  cplx s11_integral = 1.0;  // 1 + int conj(q) mu12+ dy, read at x_lo
  cplx s11_prime = 0.0;     // d s11 / dz from the variational equations
  cplx s21 = 0.0;           // only when full
  bool full = false;
};

JostPair integrate_jost(const InitialProfile& profile, cplx z, const JostOptions& opt = {});

/// s22(z) for Im z <= 0, from the second column of mu- (used for symmetry checks).
cplx s22_lower(const InitialProfile& profile, cplx z, const JostOptions& opt = {});

/// Jost columns and their z-derivatives at an interior point xm.
struct JostColumnsAt {
  double x = 0.0;
  Vec2 mu1_minus, dmu1_minus;  // first column of mu-, integrated from x_lo
  Vec2 mu2_plus, dmu2_plus;    // second column of mu+, integrated from x_hi
};
JostColumnsAt jost_columns_at(const InitialProfile& profile, cplx z, double xm,
                              const JostOptions& opt = {});

/// Discrete spectral datum. c0/c1 hold the t-independent constants: c1 = A and c0 = A B for a
/// double point, c1 = 0 and c0 = b / s11' for a simple one.
struct DiscreteDatum {
  cplx z;
  int order = 2;
  cplx c0 = 0.0;
  cplx c1 = 0.0;
  std::optional<cplx> b;
  std::optional<cplx> d;

  void validate() const;
};

struct ScatteringData {
  UniformGrid z_grid;
  std::vector<cplx> r;
  std::vector<cplx> s11;  // retained samples (may be empty)
  std::vector<cplx> s21;
  std::vector<DiscreteDatum> discrete;

  bool reflectionless() const;
  /// Linear interpolation of r; throws DomainError outside the grid.
  cplx r_at(double z) const;
};

struct ReflectionOptions {
  JostOptions jost;
  double singularity_tol = 1e-8;  // |s11| below this is a spectral singularity
};

ScatteringData reflection_coefficient(const InitialProfile& profile, const UniformGrid& z_grid,
                                      const ReflectionOptions& opt = {});

/// ScatteringData with r identically zero on a trivial grid and the given discrete data.
ScatteringData reflectionless_data(std::vector<DiscreteDatum> discrete);

struct Zero {
  cplx z;
  int multiplicity = 1;
};

struct ZeroSearchOptions {
  double tol = 1e-6;           // double-zero classification threshold
  double merge_radius = 1e-3;  // simple pairs closer than this are flagged
  double newton_tol = 1e-13;
  int max_depth = 10;
  int per_edge = 16;
  JostOptions jost;
};

/// s11 and (s11, s11') together, the ingredients the zero finder needs.
struct S11Source {
  AnalyticFn f;
  std::function<std::pair<cplx, cplx>(cplx)> f_df;
  /// Absolute accuracy of f. A pair of zeros whose local quadratic bottoms out below it cannot
  /// be told apart from a double zero; 0 for exact stubs.
  double accuracy = 0.0;
};

S11Source s11_source(const InitialProfile& profile, const JostOptions& opt = {});

std::vector<Zero> locate_zeros(const S11Source& s11, Box box, const ZeroSearchOptions& opt = {});
std::vector<Zero> locate_zeros(const InitialProfile& profile, Box box,
                               const ZeroSearchOptions& opt = {});

struct S11Derivatives {
  cplx d1, d2, d3;
  double achieved = 0.0;  // max relative disagreement between the two radii
};

/// Derivatives from Cauchy integrals on two circles (radius and radius/2). radius defaults to
/// 0.3 * min(Im z, distance to the nearest other zero).
S11Derivatives s11_derivatives(const AnalyticFn& s11, cplx z, double radius, double agree_tol = 1e-8,
                               int M = 64);
S11Derivatives s11_derivatives(const InitialProfile& profile, cplx z,
                               const std::vector<cplx>& other_zeros = {},
                               const JostOptions& opt = {}, double agree_tol = 1e-8);

struct NormingOptions {
  JostOptions jost;
  double ratio_tol = 1e-6;
  double x_match = 0.0;
};

/// b (and d for order 2) from the Jost columns at x_match, then (A, B) via s11 derivatives.
DiscreteDatum norming_constants(const InitialProfile& profile, cplx z, int order,
                                const std::vector<cplx>& other_zeros = {},
                                const NormingOptions& opt = {});

/// Ratio b with mu1 = b e^{2 i z x} mu2, checking that both components agree.
cplx norming_ratio(const Vec2& mu1, const Vec2& mu2, cplx z, double x, double ratio_tol);

}  // namespace dpnls
