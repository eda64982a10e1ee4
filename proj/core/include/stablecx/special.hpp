#pragma once

namespace stablecx {

/// Gamma function via the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula below 1/2. About 15 significant digits for moderate x.
double lanczos_gamma(double x);

/// Tail constant c_alpha = sin(pi alpha / 2) Gamma(alpha) / pi of a stable law.
double stable_tail_constant(double alpha);

}  // namespace stablecx
