#include "dpnls/phase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dpnls {

ThetaPair theta(cplx z, double x, double t) {
  if (t == 0.0) throw DomainError("theta is undefined at t = 0");
  return {z * z + x * z / t, 2.0 * z + x / t};
}

double nu_of(double r_abs) { return -std::log1p(r_abs * r_abs) / (2.0 * pi); }

namespace {

// Adaptive Gauss-Kronrod on one piece, accepting when the error estimate is below either the
// relative tolerance or the absolute floor (pieces where the integrand is ~0 otherwise never
// converge in relative terms).
template <class F>
auto gk_piece(F f, double lo, double hi, double tol, double floor, unsigned depth) -> decltype(f(lo)) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  const auto est = gauss_kronrod<double, 15>::integrate(f, lo, hi, 0u, tol, &err);
  if (depth == 0 || err <= std::max(tol * std::abs(est), floor)) return est;
  const double mid = 0.5 * (lo + hi);
  return gk_piece(f, lo, mid, tol, floor / 2, depth - 1) + gk_piece(f, mid, hi, tol, floor / 2, depth - 1);
}

// Integrate over [a, b] split at the given breakpoints and at every knot of a uniform grid
// (lo, step); between knots the spline is a single cubic. `scale` sets the absolute floor
// tol * scale * (piece length). Next to `removable` the integrand is a difference quotient of
// one cubic, so a single rule is exact and refining only chases cancellation noise.
template <class F>
auto gk_split(F f, double a, double b, std::vector<double> breaks, double tol, double knot_lo,
              double knot_step, double scale, double removable = std::nan("")) {
  breaks.push_back(a);
  breaks.push_back(b);
  const double first = std::ceil((a - knot_lo) / knot_step);
  for (double k = first;; k += 1.0) {
    const double x = knot_lo + k * knot_step;
    if (x >= b) break;
    if (x > a) breaks.push_back(x);
  }
  std::sort(breaks.begin(), breaks.end());
  // A knot that coincides with an explicit breakpoint up to rounding would leave a sliver
  // dominated by cancellation.
  const double merge = 1e-9 * knot_step;
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [merge](double u, double v) { return v - u < merge; }),
               breaks.end());
  decltype(f(a)) acc{};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]);
    const double hi = std::min(b, breaks[i + 1]);
    if (!(hi > lo)) continue;
    const bool exact = std::abs(lo - removable) < merge || std::abs(hi - removable) < merge;
    acc += gk_piece(f, lo, hi, tol, tol * scale * (hi - lo), exact ? 0u : 20u);
  }
  return acc;
}

}  // namespace

struct DeltaFunction::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> s;
  double lo, hi, step;
};

DeltaFunction::DeltaFunction(const ScatteringData& scattering, double z0, double quad_tol)
    : z0_(z0), tol_(quad_tol) {
  if (scattering.r.empty() || scattering.reflectionless()) return;
  const UniformGrid& g = scattering.z_grid;
  std::vector<double> L(g.size);
  for (std::size_t i = 0; i < g.size; ++i) L[i] = std::log1p(std::norm(scattering.r[i]));
  spline_ = std::make_unique<Spline>(
      Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(L.begin(), L.end(), g.lo, g.step), g.lo,
             g.hi(), g.step});
  lo_ = g.lo;
  hi_ = std::min(z0, g.hi());
  scale_ = *std::max_element(L.begin(), L.end());
  trivial_ = !(hi_ > lo_);
}

DeltaFunction::~DeltaFunction() = default;
DeltaFunction::DeltaFunction(DeltaFunction&&) noexcept = default;
DeltaFunction& DeltaFunction::operator=(DeltaFunction&&) noexcept = default;

double DeltaFunction::L(double s) const {
  if (!spline_ || s < spline_->lo || s > spline_->hi) return 0.0;
  return spline_->s(s);
}

double DeltaFunction::nu0() const { return -L(z0_) / (2.0 * pi); }

cplx DeltaFunction::cauchy(cplx z, CutSide side) const {
  const double xr = z.real();
  const bool on_axis = z.imag() == 0.0;
  if (on_axis && (xr == lo_ || xr == hi_))
    throw DomainError("delta is singular at the end points of its cut");
  if (on_axis && xr > lo_ && xr < hi_ && side == CutSide::none)
    throw DomainError("z lies on the cut of delta; choose a boundary side");

  const double xz = std::clamp(xr, lo_, hi_);
  const double Lx = spline_->s(xz);
  auto f = [&](double s) { return cplx(spline_->s(s) - Lx) / (cplx(s) - z); };
  cplx acc = gk_split(f, lo_, hi_, {xz}, tol_, spline_->lo, spline_->step, scale_,
                      on_axis ? xz : std::nan(""));

  cplx log_hi = std::log(cplx(hi_) - z);
  cplx log_lo = std::log(cplx(lo_) - z);
  if (on_axis && xr > lo_ && xr < hi_) {
    // lo - z is a negative real; the boundary value from above has arg -pi.
    log_lo = cplx(std::log(xr - lo_), side == CutSide::plus ? -pi : pi);
  }
  return acc + Lx * (log_hi - log_lo);
}

cplx DeltaFunction::operator()(cplx z, CutSide side) const {
  if (trivial_) return 1.0;
  return std::exp(cauchy(z, side) / (2.0 * pi * I));
}

cplx DeltaFunction::log_derivative(cplx z) const {
  if (trivial_) return 0.0;
  if (z.imag() == 0.0) throw DomainError("delta'/delta is only evaluated off the real axis");
  // int L/(s-z)^2 = [-L/(s-z)] + int L'/(s-z), then subtract L'(x) for the remaining integral.
  const double xz = std::clamp(z.real(), lo_, hi_);
  const double dLx = spline_->s.prime(xz);
  auto f = [&](double s) { return cplx(spline_->s.prime(s) - dLx) / (cplx(s) - z); };
  cplx acc = gk_split(f, lo_, hi_, {xz}, tol_, spline_->lo, spline_->step, scale_);
  acc += dLx * (std::log(cplx(hi_) - z) - std::log(cplx(lo_) - z));
  acc += -spline_->s(hi_) / (hi_ - z) + spline_->s(lo_) / (lo_ - z);
  return acc / (2.0 * pi * I);
}

double DeltaFunction::nu_integral() const {
  if (trivial_) return 0.0;
  return -gk_split([&](double s) { return spline_->s(s); }, lo_, hi_, {}, tol_, spline_->lo, spline_->step, scale_) / (2.0 * pi);
}

double DeltaFunction::beta_at_z0() const {
  if (trivial_) return 0.0;
  const double n0 = nu0();
  auto nu = [&](double s) { return -L(s) / (2.0 * pi); };
  double acc = 0.0;
  const double cut = z0_ - 1.0;
  if (lo_ < cut) acc += gk_split([&](double s) { return nu(s) / (s - z0_); }, lo_, std::min(cut, hi_), {}, tol_,
                        spline_->lo, spline_->step, scale_);
  auto near = [&](double s) {
    if (s == z0_) return -spline_->s.prime(s) / (2.0 * pi);
    return (nu(s) - n0) / (s - z0_);
  };
  acc += gk_split(near, cut, z0_, {lo_, hi_}, tol_, spline_->lo, spline_->step, scale_, z0_);
  return acc;
}

double DeltaFunction::log_stieltjes() const {
  if (trivial_) return 0.0;
  const double L0 = L(z0_);
  auto f = [&](double s) {
    if (s == z0_) return spline_->s.prime(s);
    return (L(s) - L0) / (s - z0_);
  };
  const double upper = z0_;
  double acc = -gk_split(f, lo_, upper, {hi_}, tol_, spline_->lo, spline_->step, scale_, z0_);
  acc += -std::log(z0_ - lo_) * (L(lo_) - L0);
  return acc;
}

// ---------------------------------------------------------------------------

void Cone::validate() const {
  if (!(x1 <= x2) || !(v1 <= v2)) throw InputError("cone must satisfy x1 <= x2 and v1 <= v2");
}

bool Cone::contains(double x, double t) const {
  if (t > 0.0) return x >= x1 + v1 * t && x <= x2 + v2 * t;
  return x >= x1 + v2 * t && x <= x2 + v1 * t;
}

ConePartition partition(const std::vector<DiscreteDatum>& data, double z0,
                        const std::optional<Cone>& cone) {
  ConePartition p;
  p.cone = cone;
  if (cone) {
    cone->validate();
    p.I_lo = cone->I_lo();
    p.I_hi = cone->I_hi();
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    const int idx = static_cast<int>(k);
    const double re = data[k].z.real();
    if (re < z0) {
      p.delta_minus.push_back(idx);
    } else {
      if (re == z0) {
        std::ostringstream os;
        os << "spectral point " << data[k].z << " sits on the stationary point; assigned to Delta+";
        warn(os.str());
      }
      p.delta_plus.push_back(idx);
    }
    if (!cone || (re >= p.I_lo && re <= p.I_hi)) {
      p.zI.push_back(idx);
    } else {
      const double dist = re < p.I_lo ? p.I_lo - re : re - p.I_hi;
      p.mu_I = std::min(p.mu_I, data[k].z.imag() * dist);
    }
  }
  return p;
}

namespace {

cplx blaschke(cplx z, const std::vector<int>& delta_minus, const std::vector<DiscreteDatum>& data) {
  cplx acc = 1.0;
  for (int k : delta_minus) {
    const DiscreteDatum& d = data.at(static_cast<std::size_t>(k));
    const double guard = 1e-10 * std::max(1.0, std::abs(d.z));
    if (std::abs(z - d.z) < guard) {
      std::ostringstream os;
      os << "T evaluated at its pole " << d.z;
      throw DomainError(os.str());
    }
    acc *= std::pow((z - std::conj(d.z)) / (z - d.z), d.order);
  }
  return acc;
}

}  // namespace

cplx T_fn(cplx z, const std::vector<int>& delta_minus, const std::vector<DiscreteDatum>& data,
          const DeltaFunction& delta, CutSide side) {
  return blaschke(z, delta_minus, data) * delta(z, side);
}

cplx T_expansion_coefficient(const std::vector<int>& delta_minus,
                             const std::vector<DiscreteDatum>& data, const DeltaFunction& delta) {
  double s = 0.0;
  for (int k : delta_minus) {
    const DiscreteDatum& d = data.at(static_cast<std::size_t>(k));
    s += 2.0 * d.order * d.z.imag();
  }
  return I * (s - delta.nu_integral());
}

cplx T0_at_z0(const std::vector<int>& delta_minus, const std::vector<DiscreteDatum>& data,
              const DeltaFunction& delta) {
  return blaschke(delta.z0(), delta_minus, data) * std::exp(I * delta.beta_at_z0());
}

PhaseContext make_phase_context(const ScatteringData& scattering, const DeltaFunction& delta,
                                double x, double t) {
  if (t == 0.0) throw DomainError("phase context needs t != 0");
  PhaseContext c;
  c.x = x;
  c.t = t;
  c.z0 = -x / (2.0 * t);
  if (std::abs(c.z0 - delta.z0()) > 1e-14 * std::max(1.0, std::abs(c.z0)))
    throw InputError("delta function was built for a different stationary point");
  c.r_at_z0 = scattering.r_at(c.z0);
  c.nu0 = nu_of(std::abs(c.r_at_z0));
  c.delta_minus = partition(scattering.discrete, c.z0).delta_minus;
  c.T0_z0 = T0_at_z0(c.delta_minus, scattering.discrete, delta);
  return c;
}

cplx r0_modulated(const PhaseContext& ctx) {
  if (!(ctx.t > 0.0)) throw DomainError("r0 needs t > 0");
  if (ctx.r_at_z0 == 0.0) return 0.0;
  const double phase = 2.0 * (ctx.nu0 * std::log(2.0 * std::sqrt(ctx.t)) - ctx.t * ctx.z0 * ctx.z0);
  return ctx.r_at_z0 / (ctx.T0_z0 * ctx.T0_z0) * std::polar(1.0, phase);
}

}  // namespace dpnls
