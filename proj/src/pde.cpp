#include "dpnls/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fftw3.h>

namespace dpnls {

std::vector<double> PeriodicGrid::points() const {
  std::vector<double> x(modes);
  for (std::size_t j = 0; j < modes; ++j) x[j] = this->x(j);
  return x;
}

void PeriodicGrid::validate() const {
  if (!(hi > lo)) throw InputError("periodic grid needs hi > lo");
  if (modes < 8 || (modes & (modes - 1)) != 0)
    throw InputError("mode count must be a power of two (>= 8)");
}

namespace {

// Owns an FFTW plan pair for in-place transforms of one buffer.
class Fft {
 public:
  explicit Fft(std::vector<cplx>& buf) : n_(static_cast<int>(buf.size())) {
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fwd_ = fftw_plan_dft_1d(n_, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n_, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward() { fftw_execute(fwd_); }
  // Unnormalized; callers fold 1/n into their multipliers.
  void backward() { fftw_execute(bwd_); }

 private:
  int n_;
  fftw_plan fwd_, bwd_;
};

std::vector<double> wavenumbers(std::size_t n, double length) {
  std::vector<double> k(n);
  const double base = 2.0 * pi / length;
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<long>(j);
    const long m = jj < static_cast<long>(n / 2) ? jj : jj - static_cast<long>(n);
    k[j] = base * static_cast<double>(m);
  }
  return k;
}

void check_finite(const std::vector<cplx>& q, double t) {
  for (const auto& v : q) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "split-step produced a non-finite value at t=" << t;
      throw ConvergenceError(os.str(), t);
    }
  }
}

}  // namespace

SpaceTimeField sample_field(const FieldFn& q, const PeriodicGrid& grid,
                            const std::vector<double>& times) {
  grid.validate();
  SpaceTimeField f;
  f.grid = grid;
  f.t = times;
  f.dt = times.size() > 1 ? times[1] - times[0] : 0.0;
  const auto x = grid.points();
  f.q.assign(times.size(), std::vector<cplx>(grid.modes));
  parallel_for(times.size(), [&](std::size_t s) {
    for (std::size_t j = 0; j < grid.modes; ++j) f.q[s][j] = q(x[j], times[s]);
  });
  return f;
}

double edge_mass_fraction(const std::vector<cplx>& q) {
  const std::size_t n = q.size();
  const std::size_t band = std::max<std::size_t>(1, n / 20);
  double edge = 0.0, total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double m = std::norm(q[j]);
    total += m;
    if (j < band || j >= n - band) edge += m;
  }
  return total > 0.0 ? edge / total : 0.0;
}

SpaceTimeField split_step(const std::vector<cplx>& q0, const PeriodicGrid& grid,
                          const std::vector<double>& save_times, const SplitStepOptions& opt) {
  grid.validate();
  if (q0.size() != grid.modes) throw InputError("initial samples do not match the grid");
  if (!(opt.dt > 0.0)) throw InputError("time step must be positive");
  if (!std::is_sorted(save_times.begin(), save_times.end()) ||
      (!save_times.empty() && save_times.front() < 0.0))
    throw InputError("save times must be nonnegative and increasing");

  const std::size_t n = grid.modes;
  const auto k = wavenumbers(n, grid.length());
  std::vector<cplx> q = q0;
  Fft fft(q);

  SpaceTimeField field;
  field.grid = grid;
  field.dt = opt.dt;

  if (edge_mass_fraction(q) > opt.edge_guard) warn("initial profile has mass near the periodic edges");

  double t = 0.0;
  for (double target : save_times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<std::size_t>(std::ceil(span / opt.dt - 1e-9));
      const double h = span / static_cast<double>(steps);
      std::vector<cplx> half(n), full(n);
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t j = 0; j < n; ++j) {
        half[j] = std::polar(inv_n, -k[j] * k[j] * h / 4.0);
        full[j] = std::polar(inv_n, -k[j] * k[j] * h / 2.0);
      }
      auto linear = [&](const std::vector<cplx>& mult) {
        fft.forward();
        for (std::size_t j = 0; j < n; ++j) q[j] *= mult[j];
        fft.backward();
      };
      auto nonlinear = [&]() {
        for (auto& v : q) v *= std::polar(1.0, std::norm(v) * h);
      };
      linear(half);
      for (std::size_t s = 0; s < steps; ++s) {
        nonlinear();
        linear(s + 1 < steps ? full : half);
      }
      t = target;
      check_finite(q, t);
    }
    field.t.push_back(target);
    field.q.push_back(q);
  }
  if (!field.q.empty() && edge_mass_fraction(field.q.back()) > opt.edge_guard)
    warn("split-step field reached the periodic edges; enlarge the domain");
  return field;
}

std::vector<cplx> spectral_derivative(const std::vector<cplx>& q, double length, int order) {
  std::vector<cplx> out = q;
  const std::size_t n = q.size();
  const auto k = wavenumbers(n, length);
  Fft fft(out);
  fft.forward();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    // The Nyquist mode has no consistent odd derivative.
    if (order % 2 == 1 && j == n / 2) {
      out[j] = 0.0;
      continue;
    }
    out[j] *= std::pow(I * k[j], order) * inv_n;
  }
  fft.backward();
  return out;
}

Invariants invariants(const std::vector<cplx>& q, const PeriodicGrid& grid) {
  const auto qx = spectral_derivative(q, grid.length(), 1);
  Invariants inv;
  const double dx = grid.dx();
  cplx mom = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double a2 = std::norm(q[j]);
    inv.mass += a2 * dx;
    mom += std::conj(q[j]) * qx[j] * dx;
    inv.energy += (0.5 * std::norm(qx[j]) - 0.5 * a2 * a2) * dx;
  }
  inv.momentum = mom.imag();
  return inv;
}

std::vector<Invariants> conserved(const SpaceTimeField& field) {
  std::vector<Invariants> out;
  for (const auto& slice : field.q) out.push_back(invariants(slice, field.grid));
  return out;
}

double pde_residual(const SpaceTimeField& field, const std::optional<Window>& window) {
  const std::size_t ns = field.slices();
  if (ns < 5) throw InputError("pde_residual needs at least five time slices");
  const double h = field.t[1] - field.t[0];
  for (std::size_t s = 1; s < ns; ++s) {
    if (std::abs((field.t[s] - field.t[s - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw InputError("pde_residual needs uniformly spaced slices");
  }
  const auto x = field.grid.points();
  double worst = 0.0;
  for (std::size_t s = 2; s + 2 < ns; ++s) {
    const double t = field.t[s];
    if (window && (t < window->t_lo - 1e-12 || t > window->t_hi + 1e-12)) continue;
    const auto qxx = spectral_derivative(field.q[s], field.grid.length(), 2);
    for (std::size_t j = 0; j < field.grid.modes; ++j) {
      if (window && (x[j] < window->x_lo || x[j] > window->x_hi)) continue;
      const cplx qt = (-field.q[s + 2][j] + 8.0 * field.q[s + 1][j] - 8.0 * field.q[s - 1][j] +
                       field.q[s - 2][j]) /
                      (12.0 * h);
      const cplx v = field.q[s][j];
      worst = std::max(worst, std::abs(I * qt + 0.5 * qxx[j] + std::norm(v) * v));
    }
  }
  return worst;
}

double pde_residual(const FieldFn& q, const PeriodicGrid& grid, const Window& window,
                    double time_step) {
  if (!(window.t_hi >= window.t_lo)) throw InputError("empty time window");
  const auto inner = static_cast<std::size_t>(std::ceil((window.t_hi - window.t_lo) / time_step - 1e-9));
  const double h = inner > 0 ? (window.t_hi - window.t_lo) / static_cast<double>(inner) : time_step;
  std::vector<double> times;
  for (std::size_t s = 0; s < inner + 5; ++s)
    times.push_back(window.t_lo + (static_cast<double>(s) - 2.0) * h);
  return pde_residual(sample_field(q, grid, times), window);
}

namespace {

std::vector<ErrorRow> compare_impl(const SpaceTimeField& a,
                                   const std::function<cplx(std::size_t, double)>& b,
                                   const RegionFn& region, double scale_exponent) {
  std::vector<ErrorRow> rows;
  const auto x = a.grid.points();
  bool any = false;
  for (std::size_t s = 0; s < a.slices(); ++s) {
    const double t = a.t[s];
    const auto [lo, hi] = region(t);
    ErrorRow row;
    row.t = t;
    double sum = 0.0;
    for (std::size_t j = 0; j < a.grid.modes; ++j) {
      if (x[j] < lo || x[j] > hi) continue;
      any = true;
      const double e = std::abs(a.q[s][j] - b(s, x[j]));
      row.linf = std::max(row.linf, e);
      sum += e * e * a.grid.dx();
    }
    row.l2 = std::sqrt(sum);
    const double scale = scale_exponent == 0.0 ? 1.0 : std::pow(t, scale_exponent);
    row.linf *= scale;
    row.l2 *= scale;
    rows.push_back(row);
  }
  if (!any) throw InputError("comparison region does not intersect the field grid");
  return rows;
}

}  // namespace

std::vector<ErrorRow> compare(const SpaceTimeField& a, const FieldFn& b, const RegionFn& region,
                              double scale_exponent) {
  return compare_impl(
      a, [&](std::size_t s, double x) { return b(x, a.t[s]); }, region, scale_exponent);
}

std::vector<ErrorRow> compare(const SpaceTimeField& a, const SpaceTimeField& b,
                              const RegionFn& region, double scale_exponent) {
  if (a.slices() != b.slices()) throw InputError("fields have different slice counts");
  for (std::size_t s = 0; s < a.slices(); ++s)
    if (std::abs(a.t[s] - b.t[s]) > 1e-12) throw InputError("fields have different slice times");
  const bool same_grid = a.grid.lo == b.grid.lo && a.grid.hi == b.grid.hi && a.grid.modes == b.grid.modes;
  if (same_grid) {
    return compare_impl(
        a,
        [&](std::size_t s, double x) {
          const auto j = static_cast<std::size_t>(std::llround((x - a.grid.lo) / a.grid.dx()));
          return b.q[s][j];
        },
        region, scale_exponent);
  }
  return compare_impl(
      a, [&](std::size_t s, double x) { return spectral_interpolate(b.q[s], b.grid, x); }, region,
      scale_exponent);
}

cplx spectral_interpolate(const std::vector<cplx>& q, const PeriodicGrid& grid, double x) {
  std::vector<cplx> c = q;
  Fft fft(c);
  fft.forward();
  const std::size_t n = q.size();
  const auto k = wavenumbers(n, grid.length());
  cplx acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = j == n / 2 ? 0.5 : 1.0;  // split the Nyquist mode symmetrically
    acc += w * c[j] * std::polar(1.0, k[j] * (x - grid.lo));
    if (j == n / 2) acc += w * c[j] * std::polar(1.0, -k[j] * (x - grid.lo));
  }
  return acc / static_cast<double>(n);
}

}  // namespace dpnls
