#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dpnls/asymptotics.hpp"
#include "dpnls/gamma.hpp"
#include "dpnls/soliton.hpp"

using namespace dpnls;

namespace {

DiscreteDatum pt(cplx z, int order, cplx c0, cplx c1) {
  DiscreteDatum d;
  d.z = z;
  d.order = order;
  d.c0 = c0;
  d.c1 = c1;
  return d;
}

ScatteringData smooth_r(std::vector<DiscreteDatum> discrete = {}) {
  ScatteringData sd;
  sd.z_grid = UniformGrid::span(-6.0, 6.0, 1201);
  sd.r.resize(sd.z_grid.size);
  for (std::size_t i = 0; i < sd.z_grid.size; ++i) {
    const double s = sd.z_grid[i];
    sd.r[i] = 0.6 * std::exp(-s * s) * std::polar(1.0, 0.3 * s + 0.2);
  }
  sd.discrete = std::move(discrete);
  return sd;
}

double wrap(double a) { return std::remainder(a, 2.0 * pi); }

}  // namespace

TEST_CASE("complex gamma") {
  CHECK(std::abs(complex_gamma(1.0) - 1.0) < 1e-14);
  CHECK(std::abs(complex_gamma(0.5) - std::sqrt(pi)) < 1e-14);
  CHECK(std::abs(complex_gamma(5.0) - 24.0) < 1e-12);
  for (double y : {0.3, 0.05, 2.0}) {
    const double expect = pi / (y * std::sinh(pi * y));
    CHECK(std::norm(complex_gamma(cplx(0.0, y))) == doctest::Approx(expect).epsilon(1e-12));
  }
  // recurrence across the reflection boundary
  const cplx w(-0.7, 1.3);
  CHECK(std::abs(complex_gamma(w + 1.0) - w * complex_gamma(w)) < 1e-12 * std::abs(complex_gamma(w + 1.0)));
  CHECK_THROWS_AS(complex_gamma(0.0), DomainError);
  CHECK_THROWS_AS(complex_gamma(-2.0), DomainError);
}

TEST_CASE("parabolic cylinder coefficients") {
  for (double nu : {-0.05, -0.11, -0.3}) {
    const double r = std::sqrt(std::expm1(-2 * pi * nu));
    const auto pc = pc_coefficients(std::polar(r, 0.7), nu);
    CHECK(std::abs(std::norm(pc.beta12) - std::abs(nu)) < 1e-10);
    CHECK(std::abs(pc.beta12 * pc.beta21 - nu) < 1e-15);
    const auto rot = pc_coefficients(std::polar(r, 0.7 + 0.4), nu);
    CHECK(std::abs(rot.beta12 - pc.beta12 * std::polar(1.0, -0.4)) < 1e-14);
    CHECK(pc.m1().trace() == cplx(0.0));
  }
  CHECK_THROWS_AS(pc_coefficients(0.0, -0.1), DomainError);
  CHECK_THROWS_AS(pc_coefficients(0.5, 0.0), DomainError);
}

TEST_CASE("alpha: modulus, argument route and beta12 route agree") {
  const auto sd = smooth_r({pt(cplx(-0.5, 0.7), 2, 1.0, 0.5), pt(cplx(-1.2, 0.4), 1, cplx(0.0, 1.0), 0.0)});
  const double x = -4.0, t = 10.0;
  const DeltaFunction d(sd, -x / (2 * t));
  const auto ctx = make_phase_context(sd, d, x, t);
  REQUIRE(ctx.delta_minus.size() == 2);
  const cplx a = alpha_z0(ctx);
  CHECK(std::norm(a) == doctest::Approx(std::abs(ctx.nu0)).epsilon(1e-10));
  const cplx b = alpha_from_argument(ctx, sd.discrete, d);
  CHECK(std::abs(a - b) < 1e-9);
  const auto pc = pc_coefficients(r0_modulated(ctx), ctx.nu0);
  CHECK(std::abs(pc.beta12 - a * std::polar(1.0, dispersive_phase(x, t, ctx.nu0))) < 1e-12);
}

TEST_CASE("alpha with empty Delta- collapses to the structural terms") {
  const auto sd = smooth_r();
  const double x = -2.0, t = 8.0;
  const DeltaFunction d(sd, -x / (2 * t));
  const auto ctx = make_phase_context(sd, d, x, t);
  const double arg = pi / 4 + std::arg(complex_gamma(I * ctx.nu0)) - std::arg(ctx.r_at_z0) + d.log_stieltjes() / pi;
  CHECK(std::abs(wrap(std::arg(alpha_z0(ctx)) - arg)) < 1e-9);
}

TEST_CASE("E1 matrix") {
  const auto pc = pc_coefficients(std::polar(0.4, 1.1), nu_of(0.4));
  const double t = 9.0;
  const Mat2 e = e1_matrix(Mat2::Identity(), pc, t);
  CHECK((e - pc.m1() / (2.0 * I * std::sqrt(t))).norm() < 1e-15);
  CHECK(std::abs(e(0, 1) - (-I * pc.beta12) / (2.0 * I * std::sqrt(t))) < 1e-15);

  const auto st = solve_soliton(std::vector<DiscreteDatum>{pt(cplx(0.2, 0.6), 2, 0.5, cplx(0.3, 1.0))}, 0.3, 6.0);
  const Mat2 m = st.matrix(cplx(0.1));
  const Mat2 e2 = e1_matrix(m, pc, t);
  CHECK(std::abs(e2.trace()) < 1e-12);
  // matrix route and scalar route give the same f
  const double phi = 0.83;
  const cplx alpha = pc.beta12 * std::polar(1.0, -phi);
  CHECK(std::abs(dispersive_f_from_e1(e2, t) - dispersive_f(m(0, 0), m(0, 1), alpha, phi)) < 1e-12);
  CHECK(std::abs(dispersive_f(m(0, 0), m(0, 1), alpha, phi) -
                 (pc.beta12 * m(0, 0) * m(0, 0) + pc.beta21 * m(0, 1) * m(0, 1))) < 1e-12);

  Mat2 bad = Mat2::Identity();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(e1_matrix(bad, pc, t), DomainError);
}

TEST_CASE("dispersive term: phase identity and modulus bound") {
  const cplx alpha = std::polar(0.3, -0.4);
  const double x = 1.7, t = 23.0, nu = -0.09;
  const double phi = dispersive_phase(x, t, nu);
  CHECK(phi == doctest::Approx(x * x / (2 * t) - nu * std::log(4 * t)));
  const cplx first = dispersive_f(1.0, 0.0, alpha, phi);
  CHECK(std::abs(wrap(std::arg(first) - std::arg(alpha) - phi)) < 1e-10);
  const cplx e11(0.8, 0.3), e12(-0.2, 0.5);
  CHECK(std::abs(dispersive_f(e11, e12, alpha, phi)) <= (std::norm(e11) + std::norm(e12)) * std::abs(alpha) + 1e-15);
}

TEST_CASE("reflectionless data gives the soliton part only") {
  const auto sd = reflectionless_data({pt(cplx(0.1, 0.8), 2, 1.0, 0.5), pt(cplx(1.0, 0.6), 2, cplx(0.5, 0.5), 1.0)});
  const Cone cone{-1.0, 1.0, -0.5, 0.5};
  const auto v = q_asymptotic(0.3, 7.0, sd, cone);
  CHECK(v.f_part == cplx(0.0));
  CHECK(v.q_total == v.q_sol_part);
  CHECK(v.solitons_kept == 1);
  // the kept soliton is the reduced exact solution
  const DeltaFunction d(sd, v.z0);
  const auto part = partition(sd.discrete, v.z0, cone);
  const auto reduced = restrict_to(outer_data(sd, d, part.delta_minus), part.zI);
  CHECK(v.q_sol_part == solve_soliton(reduced, 0.3, 7.0).q);
}

TEST_CASE("pure radiation: |q| sqrt t is sqrt |nu|") {
  const auto p = gaussian_profile(0.3, UniformGrid::span(-12.0, 12.0, 2401));
  const auto sd = reflection_coefficient(p, UniformGrid::span(-4.0, 4.0, 161));
  const Cone cone{-1.0, 1.0, -0.2, 0.2};
  for (double t : {20.0, 40.0, 80.0}) {
    const auto v = q_asymptotic(0.05 * t, t, sd, cone);
    CHECK(v.eta11 == cplx(1.0));
    CHECK(v.eta12 == cplx(0.0));
    CHECK(std::abs(v.q_total) * std::sqrt(t) == doctest::Approx(std::sqrt(std::abs(v.nu0))).epsilon(1e-12));
    CHECK(std::abs(v.q_total - v.q_sol_part - v.f_part / std::sqrt(t)) == 0.0);
  }
}

TEST_CASE("guards") {
  const auto sd = smooth_r();
  const Cone cone{-1.0, 1.0, -0.5, 0.5};
  CHECK_THROWS_AS(q_asymptotic(0.0, 2.0, sd, cone), DomainError);
  CHECK_THROWS_AS(q_asymptotic(0.0, -10.0, sd, cone), DomainError);
  CHECK_THROWS_AS(q_asymptotic(50.0, 10.0, sd, cone), DomainError);
  CHECK_THROWS_AS(q_asymptotic(0.0, 10.0, sd, Cone{1.0, -1.0, 0.0, 0.0}), InputError);
  AsymptoticOptions opt;
  opt.t_min = 1.0;
  CHECK_NOTHROW(q_asymptotic(0.0, 2.0, sd, cone, opt));
}
