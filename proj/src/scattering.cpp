#include "dpnls/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace dpnls {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<cplx, 4>;

// Columns of mu together with their z-derivatives:
//   first column  (mu11, mu21, dmu11, dmu21)
//   second column (mu12, mu22, dmu12, dmu22)
struct FirstColumn {
  const InitialProfile* q;
  cplx z;
  void operator()(const State& s, State& ds, double x) const {
    const cplx qx = (*q)(x);
    const cplx qb = std::conj(qx);
    const cplx e = 2.0 * I * z;
    ds[0] = qx * s[1];
    ds[1] = -qb * s[0] + e * s[1];
    ds[2] = qx * s[3];
    ds[3] = -qb * s[2] + e * s[3] + 2.0 * I * s[1];
  }
};

struct SecondColumn {
  const InitialProfile* q;
  cplx z;
  void operator()(const State& s, State& ds, double x) const {
    const cplx qx = (*q)(x);
    const cplx qb = std::conj(qx);
    const cplx e = 2.0 * I * z;
    ds[0] = qx * s[1] - e * s[0];
    ds[1] = -qb * s[0];
    ds[2] = qx * s[3] - e * s[2] - 2.0 * I * s[0];
    ds[3] = -qb * s[2];
  }
};

template <class System>
State integrate(System sys, State s, double from, double to, const InitialProfile& profile,
                const JostOptions& opt) {
  if (from == to) return s;
  const double max_dt = std::max(10.0 * profile.grid().step, 0.25);
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, max_dt,
                                         odeint::runge_kutta_fehlberg78<State>());
  try {
    if (to > from) {
      odeint::integrate_adaptive(stepper, sys, s, from, to, profile.grid().step);
    } else {
      // Backward sweeps run forward in u = -x; the controlled stepper's step cap assumes dt > 0.
      auto reversed = [&sys](const State& y, State& dy, double u) {
        sys(y, dy, -u);
        for (auto& v : dy) v = -v;
      };
      odeint::integrate_adaptive(stepper, reversed, s, -from, -to, profile.grid().step);
    }
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "Jost integration failed between x=" << from << " and x=" << to << ": " << e.what();
    throw IntegrationError(os.str(), opt.abs_tol);
  }
  for (const auto& v : s) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw IntegrationError("Jost integration produced a non-finite value", opt.abs_tol);
  }
  return s;
}

void check_profile(const InitialProfile& profile, const JostOptions& opt) {
  profile.check_tail(opt.tail_tol);
}

}  // namespace

JostPair integrate_jost(const InitialProfile& profile, cplx z, const JostOptions& opt) {
  check_profile(profile, opt);
  const double lo = profile.grid().lo;
  const double hi = profile.grid().hi();
  JostPair out;

  if (profile.max_abs() == 0.0) {
    out.full = z.imag() == 0.0;
    return out;
  }

  const State c1 = integrate(FirstColumn{&profile, z}, {1.0, 0.0, 0.0, 0.0}, lo, hi, profile, opt);
  const State c2 = integrate(SecondColumn{&profile, z}, {0.0, 1.0, 0.0, 0.0}, hi, lo, profile, opt);
  out.mu_minus(0, 0) = c1[0];
  out.mu_minus(1, 0) = c1[1];
  out.mu_plus(0, 1) = c2[0];
  out.mu_plus(1, 1) = c2[1];
  out.s11 = c1[0];
  out.s11_integral = c2[1];
  out.s11_prime = c1[2];

  if (z.imag() == 0.0) {
    const State m2 = integrate(SecondColumn{&profile, z}, {0.0, 1.0, 0.0, 0.0}, lo, hi, profile, opt);
    const State p1 = integrate(FirstColumn{&profile, z}, {1.0, 0.0, 0.0, 0.0}, hi, lo, profile, opt);
    out.mu_minus(0, 1) = m2[0];
    out.mu_minus(1, 1) = m2[1];
    out.mu_plus(0, 0) = p1[0];
    out.mu_plus(1, 0) = p1[1];
    out.s21 = std::exp(-2.0 * I * z * hi) * c1[1];
    out.full = true;
  }
  return out;
}

cplx s22_lower(const InitialProfile& profile, cplx z, const JostOptions& opt) {
  if (z.imag() > 0.0) throw DomainError("s22 is analytic in the lower half plane only");
  check_profile(profile, opt);
  if (profile.max_abs() == 0.0) return 1.0;
  const State m2 = integrate(SecondColumn{&profile, z}, {0.0, 1.0, 0.0, 0.0}, profile.grid().lo,
                             profile.grid().hi(), profile, opt);
  return m2[1];
}

JostColumnsAt jost_columns_at(const InitialProfile& profile, cplx z, double xm,
                              const JostOptions& opt) {
  check_profile(profile, opt);
  const double lo = profile.grid().lo;
  const double hi = profile.grid().hi();
  if (xm < lo || xm > hi) throw InputError("matching point lies outside the profile grid");
  const State c1 = integrate(FirstColumn{&profile, z}, {1.0, 0.0, 0.0, 0.0}, lo, xm, profile, opt);
  const State c2 = integrate(SecondColumn{&profile, z}, {0.0, 1.0, 0.0, 0.0}, hi, xm, profile, opt);
  JostColumnsAt out;
  out.x = xm;
  out.mu1_minus << c1[0], c1[1];
  out.dmu1_minus << c1[2], c1[3];
  out.mu2_plus << c2[0], c2[1];
  out.dmu2_plus << c2[2], c2[3];
  return out;
}

void DiscreteDatum::validate() const {
  if (!(z.imag() > 0.0)) throw InputError("discrete point must lie in the upper half plane");
  if (order != 1 && order != 2) throw InputError("discrete point order must be 1 or 2");
  if (order == 1 && c1 != 0.0) throw InputError("simple discrete point must have c1 = 0");
  if (order == 2 && c1 == 0.0) throw InputError("double discrete point needs c1 != 0");
}

bool ScatteringData::reflectionless() const {
  return std::all_of(r.begin(), r.end(), [](cplx v) { return v == 0.0; });
}

cplx ScatteringData::r_at(double z) const {
  if (r.empty()) return 0.0;
  const double u = (z - z_grid.lo) / z_grid.step;
  const double last = static_cast<double>(z_grid.size - 1);
  if (u < 0.0 || u > last) {
    std::ostringstream os;
    os << "z=" << z << " lies outside the sampled reflection grid [" << z_grid.lo << ", "
       << z_grid.hi() << "]";
    throw DomainError(os.str());
  }
  const auto i = std::min(static_cast<std::size_t>(u), z_grid.size - 2);
  const double w = u - static_cast<double>(i);
  return (1.0 - w) * r[i] + w * r[i + 1];
}

ScatteringData reflection_coefficient(const InitialProfile& profile, const UniformGrid& z_grid,
                                      const ReflectionOptions& opt) {
  if (z_grid.size < 2) throw InputError("reflection grid needs at least two points");
  ScatteringData out;
  out.z_grid = z_grid;
  out.r.resize(z_grid.size);
  out.s11.resize(z_grid.size);
  out.s21.resize(z_grid.size);
  for (std::size_t i = 0; i < z_grid.size; ++i) {
    const double z = z_grid[i];
    const JostPair j = integrate_jost(profile, z, opt.jost);
    if (std::abs(j.s11) < opt.singularity_tol) {
      std::ostringstream os;
      os << "s11 vanishes on the real line at z=" << z << " (|s11|=" << std::abs(j.s11) << ")";
      throw SpectralSingularityError(os.str(), z);
    }
    out.s11[i] = j.s11;
    out.s21[i] = j.s21;
    out.r[i] = j.s21 / j.s11;
  }
  return out;
}

ScatteringData reflectionless_data(std::vector<DiscreteDatum> discrete) {
  ScatteringData out;
  out.discrete = std::move(discrete);
  return out;
}

// ---------------------------------------------------------------------------
// Zeros of s11

S11Source s11_source(const InitialProfile& profile, const JostOptions& opt) {
  S11Source src;
  src.f = [&profile, opt](cplx z) { return integrate_jost(profile, z, opt).s11; };
  src.f_df = [&profile, opt](cplx z) {
    const JostPair j = integrate_jost(profile, z, opt);
    return std::pair{j.s11, j.s11_prime};
  };
  src.accuracy = 100.0 * std::max(opt.abs_tol, opt.rel_tol);
  return src;
}

namespace {

struct Taylor {
  cplx a0, a1, a2, a3;
};

Taylor taylor_at(const AnalyticFn& f, cplx c, double rho, int M = 32) {
  const auto a = laurent_on_circle(f, c, rho, M, 0, 3);
  return {a[0], a[1], a[2], a[3]};
}

class ZeroFinder {
 public:
  ZeroFinder(const S11Source& src, const ZeroSearchOptions& opt) : src_(src), opt_(opt) {}

  std::vector<Zero> search(const Box& box, int count, int depth) {
    if (count <= 0) return {};
    if (count == 1) {
      if (auto z = newton_simple(box.center(), box)) return {{*z, 1}};
    } else if (count == 2) {
      if (auto z = double_candidate(box)) return {{*z, 2}};
    }
    if (depth >= opt_.max_depth) return fallback(box, count);
    return subdivide(box, count, depth);
  }

 private:
  const S11Source& src_;
  const ZeroSearchOptions& opt_;

  std::optional<cplx> newton_simple(cplx z, const Box& box) {
    const double size = std::max(box.width(), box.height());
    for (int it = 0; it < 60; ++it) {
      const auto [f, df] = src_.f_df(z);
      if (df == 0.0) return std::nullopt;
      const cplx step = f / df;
      z -= step;
      if (!(z.imag() > 0.0) || std::abs(z - box.center()) > 2.0 * size) return std::nullopt;
      if (std::abs(step) < opt_.newton_tol * std::max(1.0, std::abs(z))) break;
      if (it == 59) return std::nullopt;
    }
    const double slack = 1e-9 * size;
    const Box grown{box.lo - cplx(slack, slack), box.hi + cplx(slack, slack)};
    if (!grown.contains(z)) return std::nullopt;
    return z;
  }

  double taylor_radius(cplx c, const Box& box) const {
    return std::min({0.25 * std::max(box.width(), box.height()), 0.5 * c.imag(), 0.5});
  }

  // Newton iteration on s11' using Cauchy-circle Taylor coefficients, then the combined
  // classification: |s11'| small relative to |s11''| at the point, and winding number 2 on a
  // small circle.
  std::optional<cplx> double_candidate(const Box& box) {
    cplx z = box.center();
    Taylor t{};
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
      const double rho = taylor_radius(z, box);
      if (!(rho > 0.0)) return std::nullopt;
      t = taylor_at(src_.f, z, rho);
      if (t.a2 == 0.0) return std::nullopt;
      const cplx step = -t.a1 / (2.0 * t.a2);
      z += step;
      if (!box.contains(z)) return std::nullopt;
      if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) return std::nullopt;
    t = taylor_at(src_.f, z, taylor_radius(z, box));
    const cplx d1 = t.a1;
    const cplx d2 = 2.0 * t.a2;
    // |s11'| at the nearest zero of the local quadratic, i.e. half the implied splitting.
    const double half_split = std::sqrt(std::abs(t.a0 / t.a2));
    const double scale = 1.0;
    if (!(std::abs(d1) < opt_.tol * std::abs(d2) * scale)) return std::nullopt;
    const bool unresolved = std::abs(t.a0) <= src_.accuracy;
    if (!(half_split < opt_.tol * scale) && !unresolved) return std::nullopt;
    const double rw = std::min(0.5 * z.imag(), std::max(opt_.merge_radius, 100.0 * half_split));
    int w = 0;
    try {
      w = circle_winding(src_.f, z, rw);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (w != 2) return std::nullopt;
    if (!(half_split < opt_.tol * scale)) {
      std::ostringstream os;
      os << "double zero at " << z << " accepted at evaluation accuracy (|s11| there "
         << std::abs(t.a0) << ", implied splitting " << 2.0 * half_split << ")";
      warn(os.str());
    }
    return z;
  }

  std::vector<Zero> subdivide(const Box& box, int count, int depth) {
    static constexpr double kFractions[] = {0.4871, 0.5317, 0.4519};
    for (double fr : kFractions) {
      const double xm = box.lo.real() + fr * box.width();
      const double ym = box.lo.imag() + (1.0 - fr) * box.height();
      const Box parts[4] = {
          {box.lo, {xm, ym}},
          {{xm, box.lo.imag()}, {box.hi.real(), ym}},
          {{box.lo.real(), ym}, {xm, box.hi.imag()}},
          {{xm, ym}, box.hi},
      };
      try {
        int counts[4];
        int sum = 0;
        for (int k = 0; k < 4; ++k) {
          counts[k] = box_winding(src_.f, parts[k], opt_.per_edge).count;
          sum += counts[k];
        }
        if (sum != count) continue;
        std::vector<Zero> out;
        for (int k = 0; k < 4; ++k) {
          auto found = search(parts[k], counts[k], depth + 1);
          out.insert(out.end(), found.begin(), found.end());
        }
        return out;
      } catch (const DomainError&) {
        continue;
      }
    }
    throw ConvergenceError("zero search: sub-box counts never matched the parent count",
                           static_cast<double>(count));
  }

  // Boxes are already tiny: the remaining zeros form a near-degenerate cluster.
  std::vector<Zero> fallback(const Box& box, int count) {
    if (count != 2)
      throw ConvergenceError("zero search: unresolved cluster of zeros", static_cast<double>(count));
    const cplx c = box.center();
    const Taylor t = taylor_at(src_.f, c, taylor_radius(c, box));
    const cplx mid = c - t.a1 / (2.0 * t.a2);
    const cplx h = std::sqrt(-(t.a0 - t.a1 * t.a1 / (4.0 * t.a2)) / t.a2);
    std::vector<Zero> out;
    for (cplx start : {mid + h, mid - h}) {
      cplx z = start;
      for (int it = 0; it < 60; ++it) {
        const auto [f, df] = src_.f_df(z);
        const cplx step = f / df;
        z -= step;
        if (std::abs(step) < opt_.newton_tol * std::max(1.0, std::abs(z))) break;
      }
      out.push_back({z, 1});
    }
    std::ostringstream os;
    os << "near-degenerate simple zeros at " << out[0].z << " and " << out[1].z
       << " (separation " << std::abs(out[0].z - out[1].z) << ")";
    warn(os.str());
    return out;
  }
};

}  // namespace

std::vector<Zero> locate_zeros(const S11Source& s11, Box box, const ZeroSearchOptions& opt) {
  if (!(box.lo.imag() > 0.0)) throw InputError("search box must lie in the open upper half plane");
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw InputError("search box is empty");

  ZeroFinder finder(s11, opt);
  int last_count = -1;
  std::size_t last_found = 0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double grow = 0.0173 * attempt;
    const Box b{box.lo - cplx(grow * box.width(), -0.0),
                box.hi + cplx(grow * box.width(), grow * box.height())};
    try {
      const BoxWinding w = box_winding(s11.f, b, opt.per_edge);
      if (w.min_abs < 1e-6) continue;
      std::vector<Zero> zeros = finder.search(b, w.count, 0);
      int total = 0;
      for (const auto& z : zeros) total += z.multiplicity;
      last_count = w.count;
      last_found = zeros.size();
      if (total != w.count) continue;
      std::sort(zeros.begin(), zeros.end(), [](const Zero& a, const Zero& b) {
        return a.z.imag() != b.z.imag() ? a.z.imag() < b.z.imag() : a.z.real() < b.z.real();
      });
      for (std::size_t i = 0; i < zeros.size(); ++i)
        for (std::size_t j = i + 1; j < zeros.size(); ++j)
          if (std::abs(zeros[i].z - zeros[j].z) < opt.merge_radius) {
            std::ostringstream os;
            os << "zeros " << zeros[i].z << " and " << zeros[j].z
               << " lie within the merge radius; reported separately";
            warn(os.str());
          }
      return zeros;
    } catch (const DomainError&) {
      continue;
    }
  }
  std::ostringstream os;
  os << "zero search failed: contour count " << last_count << ", refined " << last_found;
  throw ConvergenceError(os.str(), static_cast<double>(last_count));
}

std::vector<Zero> locate_zeros(const InitialProfile& profile, Box box,
                               const ZeroSearchOptions& opt) {
  profile.check_tail(opt.jost.tail_tol);
  if (profile.max_abs() == 0.0) return {};
  return locate_zeros(s11_source(profile, opt.jost), box, opt);
}

// ---------------------------------------------------------------------------
// Derivatives and norming constants

S11Derivatives s11_derivatives(const AnalyticFn& s11, cplx z, double radius, double agree_tol,
                               int M) {
  if (!(radius > 0.0)) throw InputError("Cauchy radius must be positive");
  double achieved = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 2; ++attempt, M *= 2) {
    const auto a = laurent_on_circle(s11, z, radius, M, 1, 3);
    const auto b = laurent_on_circle(s11, z, 0.5 * radius, M, 1, 3);
    const cplx da[3] = {a[0], 2.0 * a[1], 6.0 * a[2]};
    const cplx db[3] = {b[0], 2.0 * b[1], 6.0 * b[2]};
    const double scale = std::max({std::abs(da[0]), std::abs(da[1]), std::abs(da[2]), 1e-300});
    achieved = 0.0;
    for (int n = 0; n < 3; ++n) achieved = std::max(achieved, std::abs(da[n] - db[n]) / scale);
    if (achieved <= agree_tol) return {da[0], da[1], da[2], achieved};
  }
  std::ostringstream os;
  os << "Cauchy differentiation at z=" << z << " did not converge (disagreement " << achieved << ")";
  throw ConvergenceError(os.str(), achieved);
}

namespace {

double default_radius(cplx z, const std::vector<cplx>& others) {
  double d = z.imag();
  for (cplx w : others)
    if (w != z) d = std::min(d, std::abs(w - z));
  return 0.3 * std::min(d, 1.0);
}

}  // namespace

S11Derivatives s11_derivatives(const InitialProfile& profile, cplx z,
                               const std::vector<cplx>& other_zeros, const JostOptions& opt,
                               double agree_tol) {
  const AnalyticFn f = [&profile, opt](cplx w) { return integrate_jost(profile, w, opt).s11; };
  return s11_derivatives(f, z, default_radius(z, other_zeros), agree_tol);
}

cplx norming_ratio(const Vec2& mu1, const Vec2& mu2, cplx z, double x, double ratio_tol) {
  const cplx e = std::exp(2.0 * I * z * x);
  const double n2 = mu2.squaredNorm();
  if (!(n2 > 0.0)) throw DomainError("norming ratio: second Jost column vanishes");
  const cplx b = mu2.dot(mu1) / n2 / e;  // dot conjugates its first argument
  const double mismatch = (mu1 - b * e * mu2).norm() / std::max(mu1.norm(), 1e-300);
  if (mismatch > ratio_tol) {
    std::ostringstream os;
    os << "Jost columns are not parallel at z=" << z << " (relative mismatch " << mismatch
       << "); z is not a zero at working precision";
    throw ConvergenceError(os.str(), mismatch);
  }
  return b;
}

DiscreteDatum norming_constants(const InitialProfile& profile, cplx z, int order,
                                const std::vector<cplx>& other_zeros, const NormingOptions& opt) {
  if (order != 1 && order != 2) throw InputError("order must be 1 or 2");
  if (!(z.imag() > 0.0)) throw InputError("discrete point must lie in the upper half plane");
  const double lo = profile.grid().lo;
  const double hi = profile.grid().hi();
  const double xm = std::clamp(opt.x_match, lo, hi);
  const JostColumnsAt cols = jost_columns_at(profile, z, xm, opt.jost);

  DiscreteDatum out;
  out.z = z;
  out.order = order;
  const cplx b = norming_ratio(cols.mu1_minus, cols.mu2_plus, z, xm, opt.ratio_tol);
  out.b = b;

  if (order == 1) {
    const cplx ds = integrate_jost(profile, z, opt.jost).s11_prime;
    out.c0 = b / ds;
    out.c1 = 0.0;
    return out;
  }

  const cplx e = std::exp(2.0 * I * z * xm);
  const Vec2 w = cols.dmu1_minus / e - 2.0 * I * xm * b * cols.mu2_plus - b * cols.dmu2_plus;
  const cplx d = norming_ratio(w, cols.mu2_plus, 0.0, 0.0, opt.ratio_tol);
  out.d = d;

  const S11Derivatives s = s11_derivatives(profile, z, other_zeros, opt.jost);
  const cplx A = 2.0 * b / s.d2;
  const cplx B = d / b - s.d3 / (3.0 * s.d2);
  out.c1 = A;
  out.c0 = A * B;
  return out;
}

}  // namespace dpnls
