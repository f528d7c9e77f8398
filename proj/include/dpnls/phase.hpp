// Phase function, partial transmission delta/T, spectrum partitions and the modulated r0.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dpnls/scattering.hpp"

namespace dpnls {

struct ThetaPair {
  cplx theta;
  cplx dtheta;
};

/// theta = z^2 + x z / t and its z-derivative.
ThetaPair theta(cplx z, double x, double t);

/// nu = -(1/2pi) log(1 + |r|^2).
double nu_of(double r_abs);

enum class CutSide { none, plus, minus };

/// delta(z) = exp((1/2 pi i) int_{-inf}^{z0} log(1+|r(s)|^2)/(s-z) ds) for one z0.
/// log(1+|r|^2) is represented by a cubic B-spline on the r-grid and taken as zero beyond it.
class DeltaFunction {
 public:
  DeltaFunction(const ScatteringData& scattering, double z0, double quad_tol = 1e-12);
  ~DeltaFunction();
  DeltaFunction(DeltaFunction&&) noexcept;
  DeltaFunction& operator=(DeltaFunction&&) noexcept;

  double z0() const { return z0_; }
  bool trivial() const { return trivial_; }

  /// delta(z) off the cut; on the cut (real z < z0) a side must be chosen.
  cplx operator()(cplx z, CutSide side = CutSide::none) const;
  /// delta'(z)/delta(z) off the real axis.
  cplx log_derivative(cplx z) const;
  /// int_{-inf}^{z0} nu(s) ds.
  double nu_integral() const;
  /// beta(z0, z0) = int (nu(s) - chi(s) nu(z0))/(s - z0) ds, chi the indicator of (z0-1, z0).
  double beta_at_z0() const;
  /// int_{-inf}^{z0} log|s - z0| d log(1+|r(s)|^2) (Stieltjes form, via integration by parts).
  double log_stieltjes() const;
  /// log(1+|r(s)|^2) from the spline (zero outside the grid).
  double L(double s) const;
  double nu0() const;

 private:
  cplx cauchy(cplx z, CutSide side) const;
  double z0_;
  double lo_ = 0.0, hi_ = 0.0;  // integration range [lo, min(z0, grid hi)]
  bool trivial_ = true;
  double tol_;
  double scale_ = 0.0;  // max log(1+|r|^2), sets the absolute quadrature floor
  struct Spline;
  std::unique_ptr<Spline> spline_;
};

/// Indices with Re z_k < z0 (delta_minus) and Re z_k >= z0 (delta_plus); a tie goes to
/// delta_plus with a warning.
struct Cone {
  double x1 = 0.0, x2 = 0.0, v1 = 0.0, v2 = 0.0;
  void validate() const;
  /// I = [-v2/2, -v1/2].
  double I_lo() const { return -v2 / 2.0; }
  double I_hi() const { return -v1 / 2.0; }
  bool contains(double x, double t) const;
};

struct ConePartition {
  std::optional<Cone> cone;
  double I_lo = 0.0, I_hi = 0.0;
  std::vector<int> delta_minus, delta_plus;
  std::vector<int> zI;
  double mu_I = std::numeric_limits<double>::infinity();
};

ConePartition partition(const std::vector<DiscreteDatum>& data, double z0,
                        const std::optional<Cone>& cone = std::nullopt);

/// T(z) = prod_{k in delta_minus} ((z - conj z_k)/(z - z_k))^{order_k} delta(z).
cplx T_fn(cplx z, const std::vector<int>& delta_minus, const std::vector<DiscreteDatum>& data,
          const DeltaFunction& delta, CutSide side = CutSide::none);

/// 1/z coefficient of T from the closed form i [2 sum order Im z_k - int nu].
cplx T_expansion_coefficient(const std::vector<int>& delta_minus,
                             const std::vector<DiscreteDatum>& data, const DeltaFunction& delta);

/// T0(z0) = prod ((z0 - conj z_k)/(z0 - z_k))^{order_k} e^{i beta(z0,z0)}.
cplx T0_at_z0(const std::vector<int>& delta_minus, const std::vector<DiscreteDatum>& data,
              const DeltaFunction& delta);

struct PhaseContext {
  double x = 0.0, t = 0.0;
  double z0 = 0.0;
  double nu0 = 0.0;
  cplx T0_z0 = 1.0;
  cplx r_at_z0 = 0.0;
  std::vector<int> delta_minus;
};

PhaseContext make_phase_context(const ScatteringData& scattering, const DeltaFunction& delta,
                                double x, double t);

/// r0 = r(z0) T0^{-2} e^{2i(nu0 log(2 sqrt t) - t z0^2)}.
cplx r0_modulated(const PhaseContext& ctx);

}  // namespace dpnls
