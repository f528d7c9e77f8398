#include "dpnls/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

namespace dpnls {

Mat2 PCCoefficients::m1() const {
  Mat2 m;
  m << 0.0, -I * beta12, I * beta21, 0.0;
  return m;
}

PCCoefficients pc_coefficients(cplx r0, double nu) {
  if (r0 == 0.0) throw DomainError("parabolic-cylinder coefficients need r0 != 0");
  if (nu == 0.0) throw DomainError("nu = 0 with r0 != 0 is inconsistent (Gamma pole)");
  PCCoefficients pc;
  pc.nu = nu;
  pc.r0 = r0;
  const cplx num = std::sqrt(2.0 * pi) * std::polar(1.0, pi / 4.0) * std::exp(-pi * nu / 2.0);
  pc.beta12 = num / (r0 * complex_gamma(-I * nu));
  pc.beta21 = nu / pc.beta12;
  return pc;
}

cplx alpha_z0(const PhaseContext& ctx) {
  if (ctx.r_at_z0 == 0.0 || ctx.nu0 == 0.0) throw DomainError("alpha needs r(z0) != 0");
  const cplx num = std::sqrt(2.0 * pi) * std::polar(1.0, pi / 4.0) * std::exp(-pi * ctx.nu0 / 2.0);
  return num * ctx.T0_z0 * ctx.T0_z0 / (ctx.r_at_z0 * complex_gamma(-I * ctx.nu0));
}

cplx alpha_from_argument(const PhaseContext& ctx, const std::vector<DiscreteDatum>& data,
                         const DeltaFunction& delta) {
  if (ctx.r_at_z0 == 0.0 || ctx.nu0 == 0.0) throw DomainError("alpha needs r(z0) != 0");
  double arg = pi / 4.0 + std::arg(complex_gamma(I * ctx.nu0)) - std::arg(ctx.r_at_z0);
  for (int k : ctx.delta_minus) {
    const DiscreteDatum& d = data.at(static_cast<std::size_t>(k));
    arg -= 4.0 * d.order * std::arg(cplx(ctx.z0) - d.z);
  }
  arg += delta.log_stieltjes() / pi;
  return std::polar(std::sqrt(std::abs(ctx.nu0)), arg);
}

Mat2 e1_matrix(const Mat2& m_out, const PCCoefficients& pc, double t) {
  if (!(t > 0.0)) throw DomainError("E1 needs t > 0");
  const cplx det = m_out.determinant();
  if (std::abs(det - 1.0) > 1e-8) {
    std::ostringstream os;
    os << "outer matrix is not unimodular (det = " << det << ")";
    throw DomainError(os.str());
  }
  Mat2 adj;
  adj << m_out(1, 1), -m_out(0, 1), -m_out(1, 0), m_out(0, 0);
  return m_out * pc.m1() * adj / (2.0 * I * std::sqrt(t));
}

double dispersive_phase(double x, double t, double nu) {
  if (!(t > 0.0)) throw DomainError("dispersive phase needs t > 0");
  return x * x / (2.0 * t) - nu * std::log(4.0 * t);
}

cplx dispersive_f(cplx eta11, cplx eta12, cplx alpha, double phi) {
  return eta11 * eta11 * alpha * std::polar(1.0, phi) -
         eta12 * eta12 * std::conj(alpha) * std::polar(1.0, -phi);
}

cplx dispersive_f_from_e1(const Mat2& e1, double t) { return -2.0 * std::sqrt(t) * e1(0, 1); }

OrientedData outer_data(const ScatteringData& scattering, const DeltaFunction& delta,
                        const std::vector<int>& delta_minus) {
  const auto& pts = scattering.discrete;
  std::vector<cplx> dv(pts.size()), dl(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    dv[k] = delta(pts[k].z);
    dl[k] = delta.log_derivative(pts[k].z);
  }
  return transform_out(pts, delta_minus, dv, dl);
}

AsymptoticValue q_asymptotic(double x, double t, const ScatteringData& scattering, const Cone& cone,
                             const AsymptoticOptions& opt) {
  if (!(t > 0.0)) throw DomainError("asymptotics need t > 0");
  if (t < opt.t_min) {
    std::ostringstream os;
    os << "t = " << t << " is below the asymptotic guard t_min = " << opt.t_min;
    throw DomainError(os.str());
  }
  cone.validate();
  if (!cone.contains(x, t)) {
    std::ostringstream os;
    os << "(x, t) = (" << x << ", " << t << ") lies outside the cone";
    throw DomainError(os.str());
  }

  AsymptoticValue v;
  v.x = x;
  v.t = t;
  v.z0 = -x / (2.0 * t);

  const DeltaFunction delta(scattering, v.z0, opt.quad_tol);
  const ConePartition part = partition(scattering.discrete, v.z0, cone);
  const OrientedData out = outer_data(scattering, delta, part.delta_minus);
  const OrientedData reduced = restrict_to(out, part.zI);
  v.solitons_kept = reduced.size();
  if (reduced.size() > 0) v.q_sol_part = solve_soliton(reduced, x, t).q;

  const cplx r_z0 = scattering.reflectionless() ? cplx(0.0) : scattering.r_at(v.z0);
  if (std::abs(r_z0) >= opt.r_zero_tol) {
    const PhaseContext ctx = make_phase_context(scattering, delta, x, t);
    v.nu0 = ctx.nu0;
    v.alpha = alpha_z0(ctx);
    if (out.size() > 0) std::tie(v.eta11, v.eta12) = outer_matrix_row(out, x, t, v.z0);
    v.f_part = dispersive_f(v.eta11, v.eta12, v.alpha, dispersive_phase(x, t, v.nu0));
  }
  v.q_total = v.q_sol_part + v.f_part / std::sqrt(t);
  return v;
}

}  // namespace dpnls
