// Initial profiles q0(x) sampled on a uniform grid.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dpnls/core.hpp"

namespace dpnls {

using ProfileFn = std::function<cplx(double)>;

/// q0 sampled on a uniform grid. Outside [x_lo, x_hi] the potential is taken to be zero.
/// An optional closed form, when present, is used for evaluation between samples;
/// otherwise an 8-point local Lagrange interpolant of the samples is used.
class InitialProfile {
 public:
  InitialProfile(UniformGrid grid, std::vector<cplx> samples, ProfileFn exact = {});

  /// Sample a closed form onto the grid and keep it for off-grid evaluation.
  static InitialProfile from_function(UniformGrid grid, ProfileFn fn);

  const UniformGrid& grid() const { return grid_; }
  const std::vector<cplx>& samples() const { return samples_; }
  bool has_closed_form() const { return static_cast<bool>(exact_); }

  cplx operator()(double x) const;

  double max_abs() const;
  /// max(|q0(x_lo)|, |q0(x_hi)|) / max|q0|; zero for the zero profile.
  double relative_tail() const;
  /// Throws TailTruncationError when relative_tail() exceeds tol.
  void check_tail(double tol) const;

 private:
  UniformGrid grid_;
  std::vector<cplx> samples_;
  ProfileFn exact_;
};

InitialProfile sech_profile(double amplitude, UniformGrid grid, double width = 1.0);
InitialProfile gaussian_profile(double amplitude, UniformGrid grid, double center = 0.0,
                                double chirp = 0.0);

/// Reads "x,re,im" rows (header lines starting with a non-numeric token are skipped).
InitialProfile read_profile_csv(const std::string& path);

}  // namespace dpnls
