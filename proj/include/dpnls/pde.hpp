// Split-step Fourier integrator for i q_t + q_xx/2 + |q|^2 q = 0 and validation helpers.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dpnls/core.hpp"

namespace dpnls {

/// Periodic grid x_j = lo + j (hi - lo)/modes, j = 0..modes-1 (hi excluded).
struct PeriodicGrid {
  double lo = -40.0 * pi;
  double hi = 40.0 * pi;
  std::size_t modes = 4096;

  double length() const { return hi - lo; }
  double dx() const { return length() / static_cast<double>(modes); }
  double x(std::size_t j) const { return lo + dx() * static_cast<double>(j); }
  std::vector<double> points() const;
  void validate() const;
};

struct SpaceTimeField {
  PeriodicGrid grid;
  std::vector<double> t;
  std::vector<std::vector<cplx>> q;  // q[slice][j]
  double dt = 0.0;                    // time step used (or slice spacing for sampled fields)

  std::size_t slices() const { return t.size(); }
};

using FieldFn = std::function<cplx(double x, double t)>;

/// Sample a closed-form field on a periodic grid at the given times.
SpaceTimeField sample_field(const FieldFn& q, const PeriodicGrid& grid,
                            const std::vector<double>& times);

struct SplitStepOptions {
  double dt = 1e-3;
  double edge_guard = 1e-10;  // warn if edge mass exceeds this fraction of the total
};

/// Strang splitting: linear half-steps e^{-i k^2 dt/4} in Fourier space around the exact
/// nonlinear rotation q e^{i |q|^2 dt}. Slices are stored at every requested time
/// (t = 0 included if requested); each interval is split into equal steps no longer than dt.
SpaceTimeField split_step(const std::vector<cplx>& q0, const PeriodicGrid& grid,
                          const std::vector<double>& save_times, const SplitStepOptions& opt = {});

/// k-th spectral derivative of periodic samples.
std::vector<cplx> spectral_derivative(const std::vector<cplx>& q, double length, int order);

struct Invariants {
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

/// mass = int |q|^2, momentum = Im int conj(q) q_x, energy = int |q_x|^2/2 - |q|^4/2.
Invariants invariants(const std::vector<cplx>& q, const PeriodicGrid& grid);
std::vector<Invariants> conserved(const SpaceTimeField& field);

/// Fraction of the mass in the outer 5% of the domain on each side.
double edge_mass_fraction(const std::vector<cplx>& q);

struct Window {
  double x_lo, x_hi, t_lo, t_hi;
};

/// max |i q_t + q_xx/2 + |q|^2 q| over the window; q_t by fourth-order central differences
/// across slices (uniform spacing, at least five slices), q_xx spectrally.
double pde_residual(const SpaceTimeField& field, const std::optional<Window>& window = std::nullopt);

/// Residual of a closed-form field: sampled on `grid` at times t_lo - 2h .. t_hi + 2h.
double pde_residual(const FieldFn& q, const PeriodicGrid& grid, const Window& window,
                    double time_step = 1e-2);

struct ErrorRow {
  double t = 0.0;
  double linf = 0.0;
  double l2 = 0.0;
};

/// Per-slice errors between a and b restricted to x in [x_lo(t), x_hi(t)], multiplied by
/// t^scale_exponent.
using RegionFn = std::function<std::pair<double, double>(double t)>;
std::vector<ErrorRow> compare(const SpaceTimeField& a, const FieldFn& b, const RegionFn& region,
                              double scale_exponent = 0.0);
std::vector<ErrorRow> compare(const SpaceTimeField& a, const SpaceTimeField& b,
                              const RegionFn& region, double scale_exponent = 0.0);

/// Band-limited interpolation of one periodic slice at arbitrary x.
cplx spectral_interpolate(const std::vector<cplx>& q, const PeriodicGrid& grid, double x);

}  // namespace dpnls
