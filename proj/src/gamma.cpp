#include "dpnls/gamma.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace dpnls {

namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cplx log_gamma_lanczos(cplx w) {
  if (w.real() < 0.5) throw DomainError("log_gamma_lanczos needs Re w >= 1/2");
  const cplx z = w - 1.0;
  cplx series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

cplx complex_gamma(cplx w) {
  if (w.imag() == 0.0 && w.real() <= 0.0 && w.real() == std::round(w.real())) {
    std::ostringstream os;
    os << "Gamma has a pole at w=" << w.real();
    throw DomainError(os.str());
  }
  if (w.real() < 0.5) return pi / (std::sin(pi * w) * std::exp(log_gamma_lanczos(1.0 - w)));
  return std::exp(log_gamma_lanczos(w));
}

}  // namespace dpnls
