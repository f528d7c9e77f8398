#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "dpnls/scattering.hpp"
#include "dpnls/soliton.hpp"

using namespace dpnls;

namespace {

InitialProfile sech2() { return sech_profile(2.0, UniformGrid::span(-30.0, 30.0, 6001)); }

// Plain RK4 on phi' = [[-iz, q], [-conj q, iz]] phi, phi ~ (1,0) e^{-izx} from the left.
// Returns (a, b) with phi ~ (a e^{-izx}, b e^{izx}) on the right.
std::pair<cplx, cplx> rk4_ab(const std::function<cplx(double)>& q, cplx z, double L, double h) {
  using V = std::array<cplx, 2>;
  auto rhs = [&](double x, const V& p) {
    const cplx qx = q(x);
    return V{-I * z * p[0] + qx * p[1], -std::conj(qx) * p[0] + I * z * p[1]};
  };
  V p{std::exp(I * z * L), 0.0};
  const int n = static_cast<int>(std::lround(2.0 * L / h));
  for (int j = 0; j < n; ++j) {
    const double x = -L + j * h;
    const V k1 = rhs(x, p);
    const V k2 = rhs(x + h / 2, {p[0] + h / 2 * k1[0], p[1] + h / 2 * k1[1]});
    const V k3 = rhs(x + h / 2, {p[0] + h / 2 * k2[0], p[1] + h / 2 * k2[1]});
    const V k4 = rhs(x + h, {p[0] + h * k3[0], p[1] + h * k3[1]});
    for (int c = 0; c < 2; ++c) p[c] += h / 6 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  }
  return {p[0] * std::exp(I * z * L), p[1] * std::exp(-I * z * L)};
}

}  // namespace

TEST_CASE("zero potential") {
  const InitialProfile p(UniformGrid::span(-5.0, 5.0, 101), std::vector<cplx>(101, 0.0));
  for (cplx z : {cplx(0.3), cplx(-1.0, 0.5)}) {
    const auto j = integrate_jost(p, z);
    CHECK(std::abs(j.s11 - 1.0) < 1e-14);
    CHECK(std::abs(j.s21) < 1e-14);
    CHECK((j.mu_minus.col(0) - Vec2(1, 0)).norm() < 1e-14);
    CHECK((j.mu_plus.col(1) - Vec2(0, 1)).norm() < 1e-14);
  }
  const auto sd = reflection_coefficient(p, UniformGrid::span(-2.0, 2.0, 21));
  for (const cplx r : sd.r) CHECK(r == cplx(0.0));
  CHECK(sd.reflectionless());
  CHECK(locate_zeros(p, Box{cplx(-2.0, 0.1), cplx(2.0, 2.0)}).empty());
}

TEST_CASE("2 sech is reflectionless and unitary") {
  const auto p = sech2();
  const auto j = integrate_jost(p, 0.25);
  REQUIRE(j.full);
  CHECK(std::abs(j.s21) < 1e-6);
  CHECK(std::abs(std::norm(j.s11) + std::norm(j.s21) - 1.0) < 1e-8);
  const auto sd = reflection_coefficient(p, UniformGrid::span(-8.0, 8.0, 81));
  double rmax = 0.0;
  for (const cplx r : sd.r) rmax = std::max(rmax, std::abs(r));
  CHECK(rmax < 1e-6);
  // the classical transmission product has |s11(i)| = 1/15
  CHECK(std::abs(integrate_jost(p, I).s11) == doctest::Approx(1.0 / 15.0).epsilon(1e-9));
}

TEST_CASE("determinant and integral forms of s11 agree, and s22 mirrors s11") {
  const auto p = gaussian_profile(0.8, UniformGrid::span(-12.0, 12.0, 2401));
  for (cplx z : {cplx(0.4, 0.3), cplx(-1.2, 0.05), cplx(0.0, 1.5)}) {
    const auto j = integrate_jost(p, z);
    CHECK(std::abs(j.s11 - j.s11_integral) < 1e-9);
    CHECK(std::abs(s22_lower(p, std::conj(z)) - std::conj(j.s11)) < 1e-9);
  }
}

TEST_CASE("small gaussian against an independent RK4 integration") {
  auto q = [](double x) { return cplx(0.3 * std::exp(-x * x)); };
  const auto p = gaussian_profile(0.3, UniformGrid::span(-12.0, 12.0, 2401));
  for (double z : {0.0, 0.7, -1.3}) {
    const auto [a, b] = rk4_ab(q, z, 12.0, 2e-3);
    const auto sd = reflection_coefficient(p, UniformGrid::span(z, z + 0.1, 2));
    const auto j = integrate_jost(p, z);
    CHECK(std::abs(std::abs(j.s11) - std::abs(a)) < 1e-10);
    CHECK(std::abs(std::abs(sd.r[0]) - std::abs(b / a)) < 1e-10);
  }
  // regression pin of r(0) from the tight-tolerance integration
  const auto sd = reflection_coefficient(p, UniformGrid::span(0.0, 0.1, 2));
  const auto [a0, b0] = rk4_ab(q, 0.0, 12.0, 1e-3);
  CHECK(std::abs(sd.r[0]) == doctest::Approx(std::abs(b0 / a0)).epsilon(1e-9));
  CHECK(std::abs(sd.r[0]) < 0.6);
}

TEST_CASE("spectral singularity is reported") {
  // A = 1/2 sech has a zero of s11 at z = 0 exactly
  const auto p = sech_profile(0.5, UniformGrid::span(-40.0, 40.0, 8001));
  CHECK_THROWS_AS(reflection_coefficient(p, UniformGrid::span(-1.0, 1.0, 3)), SpectralSingularityError);
}

TEST_CASE("zeros of 2 sech") {
  const auto zeros = locate_zeros(sech2(), Box{cplx(-2.0, 0.1), cplx(2.0, 3.0)});
  REQUIRE(zeros.size() == 2);
  std::vector<cplx> z{zeros[0].z, zeros[1].z};
  std::sort(z.begin(), z.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
  CHECK(std::abs(z[0] - 0.5 * I) < 1e-6);
  CHECK(std::abs(z[1] - 1.5 * I) < 1e-6);
  CHECK(zeros[0].multiplicity == 1);
  CHECK(zeros[1].multiplicity == 1);
  const auto d = s11_derivatives(sech2(), 0.5 * I, {1.5 * I});
  CHECK(std::abs(d.d1) > 1e-3);
}

TEST_CASE("cauchy differentiation of a polynomial stub") {
  const AnalyticFn f = [](cplx z) { return (z - I) * (z - I); };
  const auto d = s11_derivatives(f, I, 0.3);
  CHECK(std::abs(d.d1) < 1e-12);
  CHECK(std::abs(d.d2 - 2.0) < 1e-12);
  CHECK(std::abs(d.d3) < 1e-12);
}

TEST_CASE("norming ratio") {
  const Vec2 mu2(cplx(0.3, 0.1), cplx(-0.2, 0.7));
  CHECK(std::abs(norming_ratio(2.0 * mu2, mu2, cplx(0.0, 1.0), 0.0, 1e-10) - 2.0) < 1e-14);
  Vec2 bad = 2.0 * mu2;
  bad(1) *= 1.01;
  CHECK_THROWS(norming_ratio(bad, mu2, cplx(0.0, 1.0), 0.0, 1e-6));
}

TEST_CASE("simple zero norming constants of 2 sech") {
  const auto d = norming_constants(sech2(), 0.5 * I, 1, {1.5 * I});
  REQUIRE(d.b.has_value());
  CHECK(std::abs(*d.b) > 1e-3);
  CHECK(std::abs(*d.b) < 1e3);
  CHECK(d.c1 == cplx(0.0));
}

TEST_CASE("double pole round trip") {
  DiscreteDatum in;
  in.z = I;
  in.order = 2;
  in.c0 = 0.0;
  in.c1 = 1.0;
  const UniformGrid g = UniformGrid::span(-30.0, 30.0, 6001);
  std::vector<cplx> s(g.size);
  for (std::size_t i = 0; i < g.size; ++i) s[i] = soliton_q({in}, g[i], 0.0);
  const InitialProfile p(g, s);
  const auto zeros = locate_zeros(p, Box{cplx(-1.0, 0.3), cplx(1.0, 2.0)});
  REQUIRE(zeros.size() == 1);
  CHECK(zeros[0].multiplicity == 2);
  CHECK(std::abs(zeros[0].z - I) < 1e-6);
  const auto d = s11_derivatives(p, zeros[0].z);
  CHECK(std::abs(d.d1) < 1e-6);
  CHECK(std::abs(d.d2) > 1e-3);
  const auto out = norming_constants(p, zeros[0].z, 2);
  CHECK(std::abs(out.c1 - in.c1) < 1e-4);
  CHECK(std::abs(out.c0 - in.c0) < 1e-4);
}

TEST_CASE("discrete datum validation") {
  DiscreteDatum d;
  d.z = cplx(0.0, -1.0);
  CHECK_THROWS_AS(d.validate(), InputError);
  d.z = I;
  d.order = 3;
  CHECK_THROWS_AS(d.validate(), InputError);
  d.order = 1;
  d.c1 = 1.0;
  CHECK_THROWS_AS(d.validate(), InputError);
}
