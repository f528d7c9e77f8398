#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dpnls/pde.hpp"

using namespace dpnls;

namespace {

cplx sech_soliton(double x, double t) { return std::polar(1.0 / std::cosh(x), t / 2.0); }

std::vector<cplx> sample(const PeriodicGrid& g, double t) {
  std::vector<cplx> q(g.modes);
  for (std::size_t j = 0; j < g.modes; ++j) q[j] = sech_soliton(g.x(j), t);
  return q;
}

double linf(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((PeriodicGrid{-1.0, 1.0, 1000}.validate()), InputError);
  CHECK_THROWS_AS((PeriodicGrid{1.0, -1.0, 1024}.validate()), InputError);
  CHECK_NOTHROW((PeriodicGrid{-1.0, 1.0, 1024}.validate()));
}

TEST_CASE("zero field stays zero") {
  const PeriodicGrid g{-10.0, 10.0, 256};
  const auto f = split_step(std::vector<cplx>(g.modes, 0.0), g, {0.0, 1.0});
  for (const auto& s : f.q)
    for (const cplx v : s) CHECK(v == cplx(0.0));
  const auto inv = invariants(f.q.back(), g);
  CHECK(inv.mass == 0.0);
  CHECK(inv.momentum == 0.0);
  CHECK(inv.energy == 0.0);
}

TEST_CASE("sech soliton on the default grid") {
  const PeriodicGrid g;  // [-40pi, 40pi), 4096 modes
  SplitStepOptions opt;
  opt.dt = 1e-3;
  const auto f = split_step(sample(g, 0.0), g, {1.0}, opt);
  REQUIRE(f.slices() == 1);
  CHECK(linf(f.q[0], sample(g, 1.0)) < 1e-6);
}

TEST_CASE("second order in dt") {
  const PeriodicGrid g{-40.0, 40.0, 1024};
  std::vector<double> err;
  for (double dt : {4e-2, 2e-2, 1e-2}) {
    SplitStepOptions opt;
    opt.dt = dt;
    err.push_back(linf(split_step(sample(g, 0.0), g, {2.0}, opt).q[0], sample(g, 2.0)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("conserved quantities") {
  const PeriodicGrid g{-40.0, 40.0, 1024};
  const auto inv0 = invariants(sample(g, 0.0), g);
  CHECK(inv0.mass == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(inv0.momentum == doctest::Approx(0.0));
  // int sech^2 tanh^2 / 2 - sech^4 / 2 = 1/3 - 2/3
  CHECK(inv0.energy == doctest::Approx(-1.0 / 3.0).epsilon(1e-8));

  const PeriodicGrid wide{-80.0, 80.0, 2048};
  std::vector<cplx> q0(wide.modes);
  for (std::size_t j = 0; j < wide.modes; ++j) {
    const double x = wide.x(j);
    q0[j] = 1.2 * std::exp(-x * x / 2) * std::polar(1.0, 0.3 * x);
  }
  SplitStepOptions opt;
  opt.dt = 1e-3;
  const auto f = split_step(q0, wide, {0.0, 5.0, 10.0}, opt);
  const auto c = conserved(f);
  REQUIRE(c.size() == 3);
  for (const auto& i : c) {
    CHECK(std::abs(i.mass / c[0].mass - 1.0) < 1e-10);
    CHECK(std::abs(i.momentum / c[0].momentum - 1.0) < 1e-8);
    CHECK(std::abs(i.energy - c[0].energy) < 1e-5 * std::abs(c[0].energy));
  }
}

TEST_CASE("residual checker") {
  const PeriodicGrid g{-30.0, 30.0, 1024};
  CHECK(pde_residual(sech_soliton, g, Window{-30.0, 30.0, 0.0, 1.0}, 1e-3) < 1e-8);
  // a smooth function that is not a solution
  auto wrong = [](double x, double t) { return cplx(std::exp(-x * x) * (1.0 + t)); };
  CHECK(pde_residual(wrong, g, Window{-30.0, 30.0, 0.0, 1.0}, 1e-3) > 0.1);

  const auto field = sample_field(sech_soliton, g, {0.0, 0.01, 0.02, 0.03, 0.04, 0.05});
  CHECK(pde_residual(field) < 1e-7);
  const auto short_field = sample_field(sech_soliton, g, {0.0, 0.01, 0.02});
  CHECK_THROWS(pde_residual(short_field));
}

TEST_CASE("compare") {
  const PeriodicGrid g{-20.0, 20.0, 512};
  const auto a = sample_field(sech_soliton, g, {1.0, 2.0});
  auto all = [](double) { return std::pair<double, double>(-20.0, 20.0); };
  for (const auto& row : compare(a, a, all)) {
    CHECK(row.linf == 0.0);
    CHECK(row.l2 == 0.0);
  }
  const auto rows = compare(a, [](double x, double t) { return 1.1 * sech_soliton(x, t); }, all, 0.75);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].linf == doctest::Approx(0.1));
  CHECK(rows[1].linf == doctest::Approx(0.1 * std::pow(2.0, 0.75)));
  auto outside = [](double) { return std::pair<double, double>(30.0, 40.0); };
  CHECK_THROWS(compare(a, a, outside));
}

TEST_CASE("spectral tools") {
  const PeriodicGrid g{-20.0, 20.0, 512};
  const auto q = sample(g, 0.0);
  CHECK(std::abs(spectral_interpolate(q, g, g.x(100)) - q[100]) < 1e-13);
  CHECK(std::abs(spectral_interpolate(q, g, 0.123) - sech_soliton(0.123, 0.0)) < 1e-12);
  const auto dq = spectral_derivative(q, g.length(), 1);
  const double x = g.x(300);
  CHECK(std::abs(dq[300] + std::tanh(x) / std::cosh(x)) < 1e-10);
  CHECK(edge_mass_fraction(q) < 1e-12);
}
