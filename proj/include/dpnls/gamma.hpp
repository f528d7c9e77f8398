// Complex Gamma function.
#pragma once

#include "dpnls/core.hpp"

namespace dpnls {

/// Gamma(w) by the Lanczos approximation (g = 7, nine terms), with the reflection formula for
/// Re w < 1/2. Throws DomainError at the poles w = 0, -1, -2, ...
cplx complex_gamma(cplx w);

/// log Gamma(w) on the principal branch of the Lanczos representation (Re w >= 1/2).
cplx log_gamma_lanczos(cplx w);

}  // namespace dpnls
