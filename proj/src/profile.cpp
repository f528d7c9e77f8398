#include "dpnls/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dpnls {

namespace {

constexpr int kStencil = 8;

// Barycentric weights of equispaced nodes 0..7: (-1)^j C(7, j).
constexpr std::array<double, kStencil> kBaryWeights{1, -7, 21, -35, 35, -21, 7, -1};

}  // namespace

InitialProfile::InitialProfile(UniformGrid grid, std::vector<cplx> samples, ProfileFn exact)
    : grid_(grid), samples_(std::move(samples)), exact_(std::move(exact)) {
  if (grid_.size != samples_.size())
    throw InputError("InitialProfile: grid size and sample count differ");
  if (grid_.size < static_cast<std::size_t>(kStencil))
    throw InputError("InitialProfile: at least 8 samples required");
  if (!(grid_.step > 0.0)) throw InputError("InitialProfile: grid must be strictly increasing");
}

InitialProfile InitialProfile::from_function(UniformGrid grid, ProfileFn fn) {
  std::vector<cplx> s(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) s[i] = fn(grid[i]);
  return InitialProfile(grid, std::move(s), std::move(fn));
}

cplx InitialProfile::operator()(double x) const {
  if (x < grid_.lo || x > grid_.hi()) return 0.0;
  if (exact_) return exact_(x);

  const double u = (x - grid_.lo) / grid_.step;
  const auto n = static_cast<long>(grid_.size);
  long first = static_cast<long>(std::floor(u)) - kStencil / 2 + 1;
  first = std::clamp(first, 0L, n - kStencil);
  const double local = u - static_cast<double>(first);

  cplx num = 0.0;
  double den = 0.0;
  for (int j = 0; j < kStencil; ++j) {
    const double d = local - j;
    if (d == 0.0) return samples_[static_cast<std::size_t>(first + j)];
    const double w = kBaryWeights[j] / d;
    num += w * samples_[static_cast<std::size_t>(first + j)];
    den += w;
  }
  return num / den;
}

double InitialProfile::max_abs() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double InitialProfile::relative_tail() const {
  const double m = max_abs();
  if (m == 0.0) return 0.0;
  return std::max(std::abs(samples_.front()), std::abs(samples_.back())) / m;
}

void InitialProfile::check_tail(double tol) const {
  const double tail = relative_tail();
  if (tail > tol) {
    std::ostringstream os;
    os << "profile does not decay at the grid ends: relative tail " << tail << " > " << tol;
    throw TailTruncationError(os.str(), tail);
  }
}

InitialProfile sech_profile(double amplitude, UniformGrid grid, double width) {
  return InitialProfile::from_function(
      grid, [amplitude, width](double x) { return cplx(amplitude / std::cosh(x / width)); });
}

InitialProfile gaussian_profile(double amplitude, UniformGrid grid, double center, double chirp) {
  return InitialProfile::from_function(grid, [=](double x) {
    const double y = x - center;
    return amplitude * std::exp(-y * y) * std::exp(I * (chirp * y * y));
  });
}

InitialProfile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile CSV: " + path);
  std::vector<double> xs;
  std::vector<cplx> qs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x = 0, re = 0, im = 0;
    if (!(ls >> x >> re)) continue;  // header or comment
    ls >> im;
    xs.push_back(x);
    qs.emplace_back(re, im);
  }
  if (xs.size() < 8) throw InputError("profile CSV has fewer than 8 rows: " + path);
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (std::abs((xs[i] - xs[i - 1]) - h) > 1e-8 * std::max(1.0, std::abs(h)))
      throw InputError("profile CSV grid is not uniform and increasing: " + path);
  }
  return InitialProfile({xs.front(), h, xs.size()}, std::move(qs));
}

}  // namespace dpnls
