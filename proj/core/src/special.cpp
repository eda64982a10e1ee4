#include "stablecx/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stablecx {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double lanczos_gamma(double x) {
  using std::numbers::pi;
  if (!std::isfinite(x)) throw std::domain_error("lanczos_gamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("lanczos_gamma: pole at non-positive integer");
  if (x < 0.5) return pi / (std::sin(pi * x) * lanczos_gamma(1.0 - x));

  const double z = x - 1.0;
  double sum = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) sum += kLanczosCoef[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  // t^(z+1/2) e^-t split in two halves to postpone overflow near x ~ 171.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * pi) * half * (half * std::exp(-t)) * sum;
}

double stable_tail_constant(double alpha) {
  using std::numbers::pi;
  return std::sin(pi * alpha / 2.0) * lanczos_gamma(alpha) / pi;
}

}  // namespace stablecx
