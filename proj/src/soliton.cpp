#include "dpnls/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace dpnls {

OrientedData OrientedData::all_lower(std::vector<DiscreteDatum> points) {
  OrientedData d;
  d.orientation.assign(points.size(), Orientation::lower);
  d.points = std::move(points);
  return d;
}

void OrientedData::validate() const {
  if (points.size() != orientation.size())
    throw InputError("orientation map does not match the number of points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].validate();
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (std::abs(points[i].z - points[j].z) < 1e-12 * std::max(1.0, std::abs(points[i].z))) {
        std::ostringstream os;
        os << "coincident spectral points at z=" << points[i].z;
        throw InputError(os.str());
      }
    }
  }
}

GammaPair gamma_coeffs(const DiscreteDatum& d, double x, double t, Orientation o) {
  const double s = o == Orientation::lower ? 1.0 : -1.0;
  const cplx z = d.z;
  const cplx e = std::exp(s * 2.0 * I * (t * z * z + x * z));
  const cplx dphase = s * 2.0 * I * (2.0 * t * z + x);
  return {(d.c0 + dphase * d.c1) * e, d.c1 * e};
}

namespace {

struct Layout {
  std::vector<cplx> pu, pv;
  std::vector<double> s;
};

Layout layout(const OrientedData& data) {
  Layout l;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const cplx z = data.points[k].z;
    if (data.orientation[k] == Orientation::lower) {
      l.pu.push_back(z);
      l.pv.push_back(std::conj(z));
      l.s.push_back(-1.0);
    } else {
      l.pu.push_back(std::conj(z));
      l.pv.push_back(z);
      l.s.push_back(1.0);
    }
  }
  return l;
}

// Row coefficients of m11(w), m11'(w) in the u-unknowns and of m12(w), m12'(w) in the v-unknowns.
struct RowCoeffs {
  VecX m, dm;  // length 2N, acting on (x1, x2)
};

RowCoeffs u_row(const Layout& l, cplx w) {
  const auto n = static_cast<Eigen::Index>(l.pu.size());
  RowCoeffs r{VecX::Zero(2 * n), VecX::Zero(2 * n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = w - l.pu[j];
    r.m(j) = 1.0 / d;
    r.m(n + j) = 1.0 / (d * d);
    r.dm(j) = -1.0 / (d * d);
    r.dm(n + j) = -2.0 / (d * d * d);
  }
  return r;
}

RowCoeffs v_row(const Layout& l, cplx w) {
  const auto n = static_cast<Eigen::Index>(l.pv.size());
  RowCoeffs r{VecX::Zero(2 * n), VecX::Zero(2 * n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = w - l.pv[j];
    r.m(j) = l.s[j] / d;
    r.m(n + j) = l.s[j] / (d * d);
    r.dm(j) = -l.s[j] / (d * d);
    r.dm(n + j) = -2.0 * l.s[j] / (d * d * d);
  }
  return r;
}

}  // namespace

SolitonSystem assemble_system(const OrientedData& data, double x, double t) {
  data.validate();
  const auto n = static_cast<Eigen::Index>(data.size());
  const Layout l = layout(data);
  SolitonSystem sys;
  sys.gamma0 = VecX(n);
  sys.gamma1 = VecX(n);
  sys.matrix = MatX::Identity(4 * n, 4 * n);
  sys.rhs = VecX::Zero(4 * n);

  // Column offsets of the unknown groups.
  const Eigen::Index U = 0, V = 2 * n;
  for (Eigen::Index k = 0; k < n; ++k) {
    const DiscreteDatum& d = data.points[k];
    const auto g = gamma_coeffs(d, x, t, data.orientation[k]);
    sys.gamma0(k) = g.gamma0;
    sys.gamma1(k) = g.gamma1;
    const cplx g0b = std::conj(g.gamma0), g1b = std::conj(g.gamma1);
    const Eigen::Index r1 = k, r2 = n + k, r3 = 2 * n + k, r4 = 3 * n + k;

    if (data.orientation[k] == Orientation::lower) {
      // u1 = g0 m12(z) + g1 m12'(z), u2 = g1 m12(z)
      const RowCoeffs vr = v_row(l, d.z);
      sys.matrix.row(r1).segment(V, 2 * n) -= (g.gamma0 * vr.m + g.gamma1 * vr.dm).transpose();
      sys.matrix.row(r2).segment(V, 2 * n) -= (g.gamma1 * vr.m).transpose();
      // v1 = conj(g0) m11(zb) + conj(g1) m11'(zb), v2 = conj(g1) m11(zb)
      const RowCoeffs ur = u_row(l, std::conj(d.z));
      sys.matrix.row(r3).segment(U, 2 * n) -= (g0b * ur.m + g1b * ur.dm).transpose();
      sys.matrix.row(r4).segment(U, 2 * n) -= (g1b * ur.m).transpose();
      sys.rhs(r3) = g0b;
      sys.rhs(r4) = g1b;
    } else {
      // v1 = g0 m11(z) + g1 m11'(z), v2 = g1 m11(z)
      const RowCoeffs ur = u_row(l, d.z);
      sys.matrix.row(r3).segment(U, 2 * n) -= (g.gamma0 * ur.m + g.gamma1 * ur.dm).transpose();
      sys.matrix.row(r4).segment(U, 2 * n) -= (g.gamma1 * ur.m).transpose();
      sys.rhs(r3) = g.gamma0;
      sys.rhs(r4) = g.gamma1;
      // u1 = -(conj(g0) m12(zb) + conj(g1) m12'(zb)), u2 = -conj(g1) m12(zb)
      const RowCoeffs vr = v_row(l, std::conj(d.z));
      sys.matrix.row(r1).segment(V, 2 * n) += (g0b * vr.m + g1b * vr.dm).transpose();
      sys.matrix.row(r2).segment(V, 2 * n) += (g1b * vr.m).transpose();
    }
  }

  const bool all_lower = std::all_of(data.orientation.begin(), data.orientation.end(),
                                     [](Orientation o) { return o == Orientation::lower; });
  if (all_lower) {
    sys.A_blk = sys.matrix.block(0, 2 * n, n, n);
    sys.B_blk = sys.matrix.block(0, 3 * n, n, n);
    sys.C_blk = sys.matrix.block(n, 2 * n, n, n);
    sys.D_blk = sys.matrix.block(n, 3 * n, n, n);
  }
  return sys;
}

SolitonState solve_soliton(const OrientedData& data, double x, double t, const SolveOptions& opt) {
  SolitonState st;
  st.x = x;
  st.t = t;
  const auto n = static_cast<Eigen::Index>(data.size());
  const Layout l = layout(data);
  st.pole_u = l.pu;
  st.pole_v = l.pv;
  st.sign = l.s;
  if (n == 0) {
    data.validate();
    st.u1 = st.u2 = st.v1 = st.v2 = VecX(0);
    st.alpha1 = st.alpha2 = st.beta1 = st.beta2 = VecX(0);
    return st;
  }

  const SolitonSystem sys = assemble_system(data, x, t);
  if (!sys.matrix.allFinite() || !sys.rhs.allFinite()) {
    std::ostringstream os;
    os << "soliton system overflows at (x,t)=(" << x << "," << t
       << "); use an orientation that keeps the exponentials bounded";
    throw ConvergenceError(os.str(), std::numeric_limits<double>::infinity());
  }
  Eigen::PartialPivLU<MatX> lu(sys.matrix);
  st.rcond = lu.rcond();
  const VecX X = lu.solve(sys.rhs);
  if (!X.allFinite() || !(st.rcond > 0.0)) {
    std::ostringstream os;
    os << "soliton system is singular at (x,t)=(" << x << "," << t << "), rcond=" << st.rcond;
    throw ConvergenceError(os.str(), st.rcond);
  }
  st.residual = (sys.matrix * X - sys.rhs).lpNorm<Eigen::Infinity>() /
                std::max(1.0, sys.rhs.lpNorm<Eigen::Infinity>());
  if (1.0 / st.rcond > opt.condition_warning) {
    std::ostringstream os;
    os << "soliton system is ill-conditioned at (x,t)=(" << x << "," << t
       << "), condition estimate " << 1.0 / st.rcond;
    warn(os.str());
  }

  st.u1 = X.segment(0, n);
  st.u2 = X.segment(n, n);
  st.v1 = X.segment(2 * n, n);
  st.v2 = X.segment(3 * n, n);
  st.alpha1 = st.u1;
  st.alpha2 = st.u2;
  st.beta1 = st.v1.conjugate();
  st.beta2 = st.v2.conjugate();
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) acc += l.s[k] * st.v1(k);
  st.q = 2.0 * I * acc;
  return st;
}

SolitonState solve_soliton(const std::vector<DiscreteDatum>& data, double x, double t,
                           const SolveOptions& opt) {
  return solve_soliton(OrientedData::all_lower(data), x, t, opt);
}

cplx soliton_q(const std::vector<DiscreteDatum>& data, double x, double t, const SolveOptions& opt) {
  if (data.empty()) return 0.0;
  std::vector<int> grow;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const DiscreteDatum& d = data[k];
    // Re 2i(t z^2 + x z) = -2 Im z (2 t Re z + x)
    const bool flippable = d.order == 1 ? d.c0 != 0.0 : d.c1 != 0.0;
    if (flippable && 2.0 * t * d.z.real() + x < 0.0) grow.push_back(static_cast<int>(k));
  }
  if (grow.empty()) return solve_soliton(data, x, t, opt).q;
  return solve_soliton(orient(data, grow), x, t, opt).q;
}

std::pair<cplx, cplx> SolitonState::first_row(cplx z) const {
  cplx m11 = 1.0, m12 = 0.0;
  for (std::size_t k = 0; k < pole_u.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const cplx du = z - pole_u[k];
    const cplx dv = z - pole_v[k];
    m11 += u1(i) / du + u2(i) / (du * du);
    m12 += sign[k] * (v1(i) / dv + v2(i) / (dv * dv));
  }
  return {m11, m12};
}

Mat2 SolitonState::matrix(cplx z) const {
  const auto [m11, m12] = first_row(z);
  const auto [c11, c12] = first_row(std::conj(z));
  Mat2 m;
  m << m11, m12, -std::conj(c12), std::conj(c11);
  return m;
}

std::pair<cplx, cplx> outer_matrix_row(const OrientedData& data, double x, double t,
                                       cplx z_eval) {
  for (const auto& d : data.points) {
    const double guard = 1e-8 * std::max(1.0, std::abs(d.z));
    if (std::abs(z_eval - d.z) < guard || std::abs(z_eval - std::conj(d.z)) < guard) {
      std::ostringstream os;
      os << "m is evaluated at its pole " << d.z;
      throw DomainError(os.str());
    }
  }
  return solve_soliton(data, x, t).first_row(z_eval);
}

// ---------------------------------------------------------------------------
// Orientation transforms

BlaschkeLocal a_delta_local(const std::vector<DiscreteDatum>& data, const std::vector<int>& delta,
                            std::size_t k) {
  const cplx z = data.at(k).z;
  cplx value = 1.0;
  cplx logd = 0.0;
  for (int j : delta) {
    const DiscreteDatum& dj = data.at(static_cast<std::size_t>(j));
    const double o = dj.order;
    const cplx zb = std::conj(dj.z);
    if (static_cast<std::size_t>(j) == k) {
      // (z - z_k)^o is split off; what remains is (z - conj z_k)^{-o}.
      value *= std::pow(z - zb, -o);
      logd += -o / (z - zb);
    } else {
      value *= std::pow((z - dj.z) / (z - zb), o);
      logd += o * (1.0 / (z - dj.z) - 1.0 / (z - zb));
    }
  }
  return {value, logd};
}

std::pair<cplx, cplx> a_delta_derivatives(const std::vector<DiscreteDatum>& data,
                                          const std::vector<int>& delta, std::size_t k) {
  if (std::find(delta.begin(), delta.end(), static_cast<int>(k)) == delta.end() ||
      data.at(k).order != 2)
    throw InputError("a_delta_derivatives needs a double point inside Delta");
  const BlaschkeLocal g = a_delta_local(data, delta, k);
  // a = eps^2 g: a'' = 2 g, a''' = 6 g'.
  return {2.0 * g.value_or_lead, 6.0 * g.value_or_lead * g.log_derivative};
}

std::vector<DiscreteDatum> scale_lower(const std::vector<DiscreteDatum>& data,
                                       const std::vector<cplx>& f,
                                       const std::vector<cplx>& log_df) {
  if (f.size() != data.size() || log_df.size() != data.size())
    throw InputError("scale_lower: one value per point required");
  std::vector<DiscreteDatum> out = data;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const cplx f2 = f[k] * f[k];
    out[k].c0 = f2 * (data[k].c0 + 2.0 * data[k].c1 * log_df[k]);
    out[k].c1 = f2 * data[k].c1;
  }
  return out;
}

OrientedData orient(const std::vector<DiscreteDatum>& data, const std::vector<int>& delta) {
  OrientedData out = OrientedData::all_lower(data);
  for (int j : delta) {
    if (j < 0 || static_cast<std::size_t>(j) >= data.size())
      throw InputError("orientation index out of range");
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    const bool in_delta = std::find(delta.begin(), delta.end(), static_cast<int>(k)) != delta.end();
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (std::abs(data[k].z - std::conj(data[j].z)) < 1e-12)
        throw InputError("spectral point coincides with a conjugate point");
    }
    const BlaschkeLocal a = a_delta_local(data, delta, k);
    DiscreteDatum& d = out.points[k];
    if (!in_delta) {
      const cplx f2 = a.value_or_lead * a.value_or_lead;
      d.c0 = f2 * (data[k].c0 + 2.0 * data[k].c1 * a.log_derivative);
      d.c1 = f2 * data[k].c1;
      continue;
    }
    out.orientation[k] = Orientation::upper;
    const cplx lead2 = a.value_or_lead * a.value_or_lead;
    if (data[k].order == 1) {
      d.c0 = 1.0 / (data[k].c0 * lead2);
      d.c1 = 0.0;
    } else {
      // a = f2 eps^2 + f3 eps^3 + ..., f3/f2 = g'/g.
      d.c1 = 1.0 / (data[k].c1 * lead2);
      d.c0 = -(data[k].c0 / data[k].c1 + 2.0 * a.log_derivative) * d.c1;
    }
  }
  return out;
}

OrientedData transform_out(const std::vector<DiscreteDatum>& data, const std::vector<int>& delta_minus,
                           const std::vector<cplx>& delta_at, const std::vector<cplx>& dlog_delta_at) {
  std::vector<cplx> f(data.size()), lf(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    f[k] = 1.0 / delta_at.at(k);
    lf[k] = -dlog_delta_at.at(k);
  }
  return orient(scale_lower(data, f, lf), delta_minus);
}

OrientedData restrict_to(const OrientedData& data, const std::vector<int>& keep) {
  OrientedData out;
  for (int k : keep) {
    out.points.push_back(data.points.at(static_cast<std::size_t>(k)));
    out.orientation.push_back(data.orientation.at(static_cast<std::size_t>(k)));
  }
  return out;
}

}  // namespace dpnls
