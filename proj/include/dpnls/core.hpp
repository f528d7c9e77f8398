// Shared scalar/matrix types and the error hierarchy used across dpnls.
#pragma once

#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dpnls {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;
using VecX = Eigen::VectorXcd;
using MatX = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Base of all recoverable failures. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input (grids, tolerances, data sets).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Profile does not decay at the grid ends.
class TailTruncationError : public Error {
 public:
  TailTruncationError(const std::string& what, double tail)
      : Error(what), tail_(tail) {}
  double tail() const { return tail_; }

 private:
  double tail_;
};

/// Adaptive ODE integration failed to meet its tolerance.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double worst_error)
      : Error(what), worst_error_(worst_error) {}
  double worst_error() const { return worst_error_; }

 private:
  double worst_error_;
};

/// s11 (nearly) vanishes on the real line, violating the no-spectral-singularity assumption.
class SpectralSingularityError : public Error {
 public:
  SpectralSingularityError(const std::string& what, double z)
      : Error(what), z_(z) {}
  double z() const { return z_; }

 private:
  double z_;
};

/// Point evaluation requested at (or too near) a pole or on a branch cut.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerical procedure (root refinement, contour quadrature) did not converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// Non-fatal diagnostics (near-degenerate zeros, ill-conditioning, partition ties).
/// Default sink writes to stderr; tests and the CLI may redirect it.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each index is handled
/// exactly once; results must be written to preallocated slots so the output order is fixed.
/// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Uniform real grid lo, lo+h, ..., lo+(n-1)h.
struct UniformGrid {
  double lo = 0.0;
  double step = 1.0;
  std::size_t size = 0;

  double operator[](std::size_t i) const { return lo + step * static_cast<double>(i); }
  double hi() const { return size == 0 ? lo : (*this)[size - 1]; }

  static UniformGrid span(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw InputError("UniformGrid::span needs n >= 2 and hi > lo");
    return {lo, (hi - lo) / static_cast<double>(n - 1), n};
  }
};

}  // namespace dpnls
