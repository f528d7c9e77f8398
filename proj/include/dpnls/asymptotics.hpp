// Long-time asymptotics inside a space-time cone: soliton part plus t^{-1/2} dispersive term.
#pragma once

#include <optional>

#include "dpnls/gamma.hpp"
#include "dpnls/phase.hpp"
#include "dpnls/soliton.hpp"

namespace dpnls {

struct PCCoefficients {
  double nu = 0.0;
  cplx r0 = 0.0;
  cplx beta12 = 0.0;
  cplx beta21 = 0.0;

  /// [[0, -i beta12], [i beta21, 0]].
  Mat2 m1() const;
};

/// beta12 = sqrt(2 pi) e^{i pi/4} e^{-pi nu/2} / (r0 Gamma(-i nu)), beta21 = nu / beta12.
PCCoefficients pc_coefficients(cplx r0, double nu);

/// alpha(z0) = sqrt(2 pi) e^{i pi/4} e^{-pi nu/2} T0^2 / (r(z0) Gamma(-i nu)), so that
/// beta12 = alpha e^{i(x^2/(2t) - nu log 4t)}.
cplx alpha_z0(const PhaseContext& ctx);

/// The same alpha from its modulus sqrt|nu| and the closed-form argument
///   pi/4 + arg Gamma(i nu) - arg r(z0) - 4 sum_{Delta-} order_k arg(z0 - z_k)
///        + (1/pi) int log|s - z0| d log(1+|r|^2).
cplx alpha_from_argument(const PhaseContext& ctx, const std::vector<DiscreteDatum>& data,
                         const DeltaFunction& delta);

/// (1/(2i sqrt t)) m_out m1 m_out^{-1}; the inverse is the adjugate (det m_out = 1).
Mat2 e1_matrix(const Mat2& m_out, const PCCoefficients& pc, double t);

/// phi = x^2/(2t) - nu log(4t).
double dispersive_phase(double x, double t, double nu);

/// f = eta11^2 alpha e^{i phi} - eta12^2 conj(alpha) e^{-i phi}
///   = beta12 eta11^2 + beta21 eta12^2   (beta21 = nu/beta12 = -conj(beta12) e^{...}).
/// The sign and the overall phase are fixed against split-step runs; see README.
cplx dispersive_f(cplx eta11, cplx eta12, cplx alpha, double phi);

/// The same f read off the E1 matrix: f = -2 sqrt(t) (E1)_12, i.e. i times 2i sqrt(t) (E1)_12.
cplx dispersive_f_from_e1(const Mat2& e1, double t);

struct AsymptoticOptions {
  double t_min = 5.0;
  double r_zero_tol = 1e-12;
  double quad_tol = 1e-12;
};

struct AsymptoticValue {
  double x = 0.0, t = 0.0;
  cplx q_sol_part = 0.0;
  cplx f_part = 0.0;
  cplx q_total = 0.0;
  double error_order = -0.75;  // remainder is O(t^error_order)
  // diagnostics
  double z0 = 0.0;
  double nu0 = 0.0;
  cplx alpha = 0.0;
  cplx eta11 = 1.0, eta12 = 0.0;
  std::size_t solitons_kept = 0;
};

/// Full pipeline at one (x, t) inside the cone: partition, outer data, reduced data on Z(I),
/// soliton part, outer row at z0, alpha and f.
AsymptoticValue q_asymptotic(double x, double t, const ScatteringData& scattering, const Cone& cone,
                             const AsymptoticOptions& opt = {});

/// Outer-model data sigma_out at the stationary point of (x, t): delta weights and the a_Delta
/// orientation with Delta = Delta-.
OrientedData outer_data(const ScatteringData& scattering, const DeltaFunction& delta,
                        const std::vector<int>& delta_minus);

}  // namespace dpnls
