// Reflectionless double-pole N-soliton solutions from discrete data.
#pragma once

#include <vector>

#include "dpnls/scattering.hpp"

namespace dpnls {

/// Which column of m carries the pole at z_k. Lower: the first column has the pole at z_k
/// (the untransformed problem). Upper: the second column has it, after the a_Delta transform.
enum class Orientation { lower, upper };

/// Discrete data together with the orientation of every point. For upper points c0/c1 hold the
/// transformed constants.
struct OrientedData {
  std::vector<DiscreteDatum> points;
  std::vector<Orientation> orientation;

  static OrientedData all_lower(std::vector<DiscreteDatum> points);
  std::size_t size() const { return points.size(); }
  void validate() const;
};

struct GammaPair {
  cplx gamma0;
  cplx gamma1;
};

/// gamma_1 = c1 e^{s 2it theta(z)}, gamma_0 = (c0 + s 2it theta'(z) c1) e^{s 2it theta(z)},
/// s = +1 (lower) or -1 (upper).
GammaPair gamma_coeffs(const DiscreteDatum& d, double x, double t, Orientation o);

/// Linear system for the pole coefficients of the first row of m:
///   m11(z) = 1 + sum_k u1_k/(z-PU_k) + u2_k/(z-PU_k)^2
///   m12(z) = sum_k s_k (v1_k/(z-PV_k) + v2_k/(z-PV_k)^2)
/// with (PU, PV, s) = (z_k, conj z_k, -1) for lower points and (conj z_k, z_k, +1) for upper.
/// Unknowns are ordered (u1, u2, v1, v2).
struct SolitonSystem {
  VecX gamma0, gamma1;
  MatX matrix;
  VecX rhs;
  /// Blocks of the all-lower form [[I,0,A,B],[0,I,C,D],[-A*,-B*,I,0],[-C*,-D*,0,I]];
  /// only filled when every point is lower.
  MatX A_blk, B_blk, C_blk, D_blk;
};

SolitonSystem assemble_system(const OrientedData& data, double x, double t);

struct SolitonState {
  double x = 0.0, t = 0.0;
  VecX u1, u2, v1, v2;
  /// Unknowns in the untransformed notation: alpha = u, beta = conj(v) (meaningful for lower
  /// points; kept for every point for uniformity).
  VecX alpha1, alpha2, beta1, beta2;
  cplx q = 0.0;
  double residual = 0.0;  // ||K X - rhs||_inf / max(1, ||rhs||_inf)
  double rcond = 1.0;

  std::vector<cplx> pole_u, pole_v;
  std::vector<double> sign;

  /// First row of m at z.
  std::pair<cplx, cplx> first_row(cplx z) const;
  /// Full m(z) through the symmetry m(z) = sigma2 conj(m(conj z)) sigma2.
  Mat2 matrix(cplx z) const;
};

struct SolveOptions {
  double condition_warning = 1e12;
};

SolitonState solve_soliton(const OrientedData& data, double x, double t,
                           const SolveOptions& opt = {});
SolitonState solve_soliton(const std::vector<DiscreteDatum>& data, double x, double t,
                           const SolveOptions& opt = {});

/// q alone, solved with every point whose exponential grows at (x, t) moved to the upper
/// orientation, which keeps the system well conditioned far from the solitons. Points with a
/// zero leading constant stay lower.
cplx soliton_q(const std::vector<DiscreteDatum>& data, double x, double t, const SolveOptions& opt = {});

/// (eta11, eta12) = first row of m at z_eval; throws DomainError near a pole.
std::pair<cplx, cplx> outer_matrix_row(const OrientedData& data, double x, double t,
                                       cplx z_eval);

/// Taylor data of a_Delta(z) = prod_{j in Delta} ((z-z_j)/(z-conj z_j))^{order_j} at z.
/// For z = z_k with k in Delta, value_or_lead is the leading coefficient g(z_k) of
/// a_Delta = (z-z_k)^{order_k} g(z) and log_derivative is g'/g there; otherwise they are
/// a_Delta(z) and a_Delta'/a_Delta.
struct BlaschkeLocal {
  cplx value_or_lead;
  cplx log_derivative;
};
BlaschkeLocal a_delta_local(const std::vector<DiscreteDatum>& data, const std::vector<int>& delta,
                            std::size_t k);

/// a_Delta'' and a_Delta''' at z_k for a double point k in Delta (exact, from the log-derivative).
std::pair<cplx, cplx> a_delta_derivatives(const std::vector<DiscreteDatum>& data,
                                          const std::vector<int>& delta, std::size_t k);

/// Multiply the lower-orientation data by an analytic nonvanishing scalar f at every point:
/// c1 -> f^2 c1, c0 -> f^2 (c0 + 2 c1 f'/f). Inputs are f(z_k) and f'(z_k)/f(z_k).
std::vector<DiscreteDatum> scale_lower(const std::vector<DiscreteDatum>& data,
                                       const std::vector<cplx>& f,
                                       const std::vector<cplx>& log_df);

/// The a_Delta transform: points in delta become upper with transformed constants; the
/// others stay lower with constants scaled by a_Delta. Leaves q unchanged.
OrientedData orient(const std::vector<DiscreteDatum>& data, const std::vector<int>& delta);

/// Data seen by the outer model: constants weighted by delta(z_k)^{-1} (scale_lower with
/// f = 1/delta) and then oriented with Delta = delta_minus.
OrientedData transform_out(const std::vector<DiscreteDatum>& data, const std::vector<int>& delta_minus,
                           const std::vector<cplx>& delta_at, const std::vector<cplx>& dlog_delta_at);

/// Restriction of oriented data to the given index set.
OrientedData restrict_to(const OrientedData& data, const std::vector<int>& keep);

}  // namespace dpnls
