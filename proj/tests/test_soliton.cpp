#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dpnls/contour.hpp"
#include "dpnls/pde.hpp"
#include "dpnls/phase.hpp"
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

const std::vector<DiscreteDatum> kMixed{pt(cplx(-0.4, 0.7), 2, cplx(0.8, 0.3), cplx(1.2, -0.4)),
                                        pt(cplx(0.6, 0.5), 1, cplx(0.0, 1.5), 0.0),
                                        pt(cplx(0.1, 1.1), 2, 0.4, cplx(0.0, 0.7))};

double trapezoid_mass(const std::vector<DiscreteDatum>& data, double t) {
  const UniformGrid g = UniformGrid::span(-40.0, 40.0, 8001);
  double m = 0.0;
  for (std::size_t i = 0; i < g.size; ++i) m += std::norm(soliton_q(data, g[i], t));
  return m * g.step;
}

}  // namespace

TEST_CASE("gamma coefficients") {
  const auto d = pt(cplx(0.3, 0.8), 2, cplx(0.5, -0.2), cplx(1.0, 0.4));
  auto g = gamma_coeffs(d, 0.0, 0.0, Orientation::lower);
  CHECK(g.gamma1 == d.c1);
  CHECK(g.gamma0 == d.c0);
  const double x = 0.7, t = 1.3;
  const auto th = theta(d.z, x, t);
  g = gamma_coeffs(d, x, t, Orientation::lower);
  const cplx e = std::exp(2.0 * I * t * th.theta);
  CHECK(std::abs(g.gamma1 - d.c1 * e) < 1e-14);
  CHECK(std::abs(g.gamma0 - (d.c0 + 2.0 * I * t * th.dtheta * d.c1) * e) < 1e-14);
  CHECK(std::abs(g.gamma1) == doctest::Approx(std::abs(d.c1) * std::exp((2.0 * I * t * th.theta).real())));
  const auto u = gamma_coeffs(d, x, t, Orientation::upper);
  CHECK(std::abs(u.gamma1 - d.c1 / e) < 1e-14 * std::abs(u.gamma1));
  CHECK(std::abs(u.gamma0 - (d.c0 - 2.0 * I * t * th.dtheta * d.c1) / e) < 1e-14 * std::abs(u.gamma0));
}

TEST_CASE("block entries for a double point at i") {
  const auto sys = assemble_system(OrientedData::all_lower({pt(I, 2, 0.0, 1.0)}), 0.0, 0.0);
  REQUIRE(sys.A_blk.rows() == 1);
  CHECK(std::abs(sys.A_blk(0, 0) - 0.25) < 1e-15);
  CHECK(std::abs(sys.B_blk(0, 0) - cplx(0.0, -0.25)) < 1e-15);
  CHECK(std::abs(sys.C_blk(0, 0) - cplx(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(sys.D_blk(0, 0) + 0.25) < 1e-15);
}

TEST_CASE("block structure [[I, M], [-conj M, I]]") {
  const auto sys = assemble_system(OrientedData::all_lower(kMixed), 0.3, 0.4);
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(kMixed.size());
  const MatX M = sys.matrix.topRightCorner(n, n);
  CHECK((sys.matrix.bottomLeftCorner(n, n) + M.conjugate()).norm() < 1e-14 * M.norm());
  CHECK((sys.matrix.topLeftCorner(n, n) - MatX::Identity(n, n)).norm() == 0.0);
  CHECK((sys.matrix.bottomRightCorner(n, n) - MatX::Identity(n, n)).norm() == 0.0);
}

TEST_CASE("empty data") {
  const auto st = solve_soliton(std::vector<DiscreteDatum>{}, 0.3, 0.2);
  CHECK(st.q == cplx(0.0));
  const auto [e11, e12] = outer_matrix_row(OrientedData::all_lower({}), 0.3, 0.2, cplx(0.5));
  CHECK(e11 == cplx(1.0));
  CHECK(e12 == cplx(0.0));
}

TEST_CASE("coincident spectra are rejected") {
  CHECK_THROWS_AS(assemble_system(OrientedData::all_lower({pt(I, 2, 0.0, 1.0), pt(I, 1, 1.0, 0.0)}), 0.0, 0.0),
                  InputError);
}

TEST_CASE("simple pole is the one-soliton") {
  const cplx z(0.4, 0.6);
  const cplx c0(0.3, 1.1);
  const std::vector<DiscreteDatum> data{pt(z, 1, c0, 0.0)};
  double qmax = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.001) qmax = std::max(qmax, std::abs(soliton_q(data, x, 0.7)));
  CHECK(qmax == doctest::Approx(2.0 * z.imag()).epsilon(1e-6));
  const double res = pde_residual([&](double x, double t) { return soliton_q(data, x, t); },
                                  PeriodicGrid{-20.0, 20.0, 512}, Window{-20.0, 20.0, 0.0, 0.2}, 1e-3);
  CHECK(res < 1e-8);
}

TEST_CASE("double-pole field solves the equation") {
  const std::vector<DiscreteDatum> data{pt(I, 2, cplx(0.3, -0.2), cplx(0.7, 0.5))};
  const double res = pde_residual([&](double x, double t) { return soliton_q(data, x, t); },
                                  PeriodicGrid{-20.0, 20.0, 2048}, Window{-20.0, 20.0, 0.0, 1.0}, 5e-4);
  CHECK(res < 1e-8);
}

TEST_CASE("mixed orders solve the equation") {
  const double res = pde_residual([&](double x, double t) { return soliton_q(kMixed, x, t); },
                                  PeriodicGrid{-30.0, 30.0, 2048}, Window{-30.0, 30.0, 0.0, 0.2}, 5e-4);
  CHECK(res < 1e-6);
}

TEST_CASE("balanced orientation gives the same q where both are well conditioned") {
  for (double x : {-1.0, 0.0, 0.8})
    CHECK(std::abs(soliton_q(kMixed, x, 0.3) - solve_soliton(kMixed, x, 0.3).q) < 1e-11);
  CHECK(soliton_q({}, 0.0, 0.0) == cplx(0.0));
}

TEST_CASE("mass is four times the summed imaginary parts") {
  CHECK(trapezoid_mass({pt(I, 2, 0.0, 1.0)}, 0.4) == doctest::Approx(8.0).epsilon(1e-8));
  double expect = 0.0;
  for (const auto& d : kMixed) expect += 4.0 * d.order * d.z.imag();
  CHECK(trapezoid_mass(kMixed, 0.0) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("residues of the reconstructed first row") {
  const double x = 0.4, t = 0.3;
  const auto data = OrientedData::all_lower(kMixed);
  const auto st = solve_soliton(data, x, t);
  for (std::size_t k = 0; k < kMixed.size(); ++k) {
    const auto& d = kMixed[k];
    const auto g = gamma_coeffs(d, x, t, Orientation::lower);
    const double rad = 0.1;
    // Laurent coefficients of m11 at z_k, Taylor coefficients of m12 at z_k
    const auto m11 = laurent_on_circle([&](cplx z) { return st.first_row(z).first; }, d.z, rad, 128, -2, -1);
    const auto m12 = laurent_on_circle([&](cplx z) { return st.first_row(z).second; }, d.z, rad, 128, 0, 1);
    CHECK(std::abs(m11[1] - (g.gamma0 * m12[0] + g.gamma1 * m12[1])) < 1e-8);
    CHECK(std::abs(m11[0] - g.gamma1 * m12[0]) < 1e-8);
    // mirrored points: m12 has the poles at conj(z_k)
    const cplx zb = std::conj(d.z);
    const auto n12 = laurent_on_circle([&](cplx z) { return st.first_row(z).second; }, zb, rad, 128, -2, -1);
    const auto n11 = laurent_on_circle([&](cplx z) { return st.first_row(z).first; }, zb, rad, 128, 0, 1);
    CHECK(std::abs(n12[1] + (std::conj(g.gamma0) * n11[0] + std::conj(g.gamma1) * n11[1])) < 1e-8);
    CHECK(std::abs(n12[0] + std::conj(g.gamma1) * n11[0]) < 1e-8);
  }
}

TEST_CASE("outer matrix is unimodular and tends to the identity") {
  const auto data = OrientedData::all_lower(kMixed);
  const auto st = solve_soliton(data, -0.3, 0.5);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const cplx z(u(rng), u(rng));
    CHECK(std::abs(st.matrix(z).determinant() - 1.0) < 1e-10);
    const auto [a, b] = outer_matrix_row(data, -0.3, 0.5, z);
    CHECK(std::abs(a - st.first_row(z).first) < 1e-12);
    CHECK(std::abs(b - st.first_row(z).second) < 1e-12);
  }
  for (double R : {1e3, 1e4}) {
    const auto [a, b] = outer_matrix_row(data, -0.3, 0.5, cplx(R, R));
    CHECK(std::abs(a - 1.0) * R < 10.0);
    CHECK(std::abs(b) * R < 10.0);
  }
  CHECK_THROWS_AS(outer_matrix_row(data, -0.3, 0.5, kMixed[0].z), DomainError);
}

TEST_CASE("orientation does not change q") {
  const double x = 0.25, t = -0.6;
  const cplx q = solve_soliton(kMixed, x, t).q;
  for (const std::vector<int>& delta : {std::vector<int>{0}, {1, 2}, {0, 1, 2}}) {
    const auto o = orient(kMixed, delta);
    CHECK(std::abs(solve_soliton(o, x, t).q - q) < 1e-10);
  }
}

TEST_CASE("a_Delta derivatives against Cauchy differentiation") {
  const std::vector<int> delta{0, 1, 2};
  auto a = [&](cplx z) {
    cplx p = 1.0;
    for (int j : delta) p *= std::pow((z - kMixed[j].z) / (z - std::conj(kMixed[j].z)), kMixed[j].order);
    return p;
  };
  for (std::size_t k : {std::size_t{0}, std::size_t{2}}) {
    const auto c = laurent_on_circle(a, kMixed[k].z, 0.05, 128, 2, 3);
    const auto [d2, d3] = a_delta_derivatives(kMixed, delta, k);
    CHECK(std::abs(d2 - 2.0 * c[0]) < 1e-9);
    CHECK(std::abs(d3 - 6.0 * c[1]) < 1e-8);
    const auto loc = a_delta_local(kMixed, delta, k);
    CHECK(std::abs(loc.value_or_lead - c[0]) < 1e-10);
    CHECK(std::abs(loc.log_derivative - c[1] / c[0]) < 1e-8);
  }
}

TEST_CASE("outer data with unit delta leaves the constants alone") {
  const std::vector<cplx> one(kMixed.size(), 1.0), zero(kMixed.size(), 0.0);
  const auto out = transform_out(kMixed, {}, one, zero);
  for (std::size_t k = 0; k < kMixed.size(); ++k) {
    CHECK(out.orientation[k] == Orientation::lower);
    CHECK(out.points[k].c0 == kMixed[k].c0);
    CHECK(out.points[k].c1 == kMixed[k].c1);
  }
  // |c~| = |c| |f|^2 with f = 1/delta and a constant weight
  const std::vector<cplx> w(kMixed.size(), cplx(0.8, 0.3));
  const auto s = scale_lower(kMixed, w, zero);
  for (std::size_t k = 0; k < kMixed.size(); ++k) CHECK(std::abs(s[k].c1 - kMixed[k].c1 * w[k] * w[k]) < 1e-15);
}

TEST_CASE("restriction keeps the selected points") {
  const auto o = orient(kMixed, {1});
  const auto r = restrict_to(o, {0, 1});
  REQUIRE(r.size() == 2);
  CHECK(r.orientation[1] == Orientation::upper);
  CHECK(r.points[0].z == kMixed[0].z);
}
