#include "stablecx/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"
#include "stablecx/special.hpp"

namespace stablecx {
namespace {

using std::numbers::pi;

constexpr double kCrossoverTolerance = 1e-5;
// The tail integrand carries ~1e-13 relative rounding noise from the nested
// logarithms; tighter tolerances only exhaust the recursion depth. The moment
// integral sees the tail quadrature error as noise in turn.
constexpr double kTailTolerance = 1e-10;
constexpr double kMomentTolerance = 1e-8;

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

template <typename F>
double integrate(F&& f, double a, double b, double tolerance) {
  return detail::GaussKronrod15(tolerance).integrate(f, a, b);
}

/// Root of a monotone function on [lo, hi] by bisection; `increasing` gives the direction.
template <typename F>
double bisect(F&& f, double lo, double hi, double target, bool increasing) {
  for (int it = 0; it < 1100 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    const bool below = increasing ? (v < target) : (v > target);
    (below ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Integral over [0, pi/4] of the tail integrand, in a variable v in which
/// log(gV) is monotone (`increasing` gives the direction). When `cutoff` is
/// finite the part where log(gV) exceeds it is dropped.
template <typename LogGV, typename Integrand>
double monotone_piece(LogGV log_gv, Integrand integrand, bool increasing, double cutoff) {
  double lo = 0.0;
  double hi = pi / 4.0;
  if (std::isfinite(cutoff)) {
    if (increasing) {
      if (log_gv(lo) >= cutoff) return 0.0;
      if (log_gv(hi) > cutoff) hi = bisect(log_gv, lo, hi, cutoff, true);
    } else {
      if (log_gv(hi) >= cutoff) return 0.0;
      if (log_gv(lo) > cutoff) lo = bisect(log_gv, lo, hi, cutoff, false);
    }
  }
  // Features live on the scale of the breakpoints, which can be many orders
  // of magnitude below pi/4; geometric sub-panels keep each panel resolvable.
  auto geometric = [&](double a, double b) {
    double total = 0.0;
    if (a == 0.0) {
      a = std::min(b, 1e-3 * b);
      total += integrate(integrand, 0.0, a, kTailTolerance);
    }
    for (double left = a; left < b; left *= 4.0) total += integrate(integrand, left, std::min(4.0 * left, b), kTailTolerance);
    return total;
  };
  const double at_lo = log_gv(lo);
  const double at_hi = log_gv(hi);
  if ((at_lo < 0.0) != (at_hi < 0.0)) {
    const double mid = bisect(log_gv, lo, hi, 0.0, increasing);
    return geometric(lo, mid) + geometric(mid, hi);
  }
  return geometric(lo, hi);
}

/// P(Z > x) for Z ~ S(alpha, 0, 1, 0; 0), x > 0.
double standard_upper_tail(double alpha, double x) {
  if (alpha == 1.0) return x > 1.0 ? std::atan(1.0 / x) / pi : 0.5 - std::atan(x) / pi;

  // Nolan (1997) with theta_0 = 0, zeta = 0 (beta = 0):
  //   P(Z > x) = (1/pi) int_0^{pi/2} exp(-g V(theta)) d theta              (alpha > 1)
  //   P(Z > x) = (1/pi) int_0^{pi/2} (1 - exp(-g V(theta))) d theta        (alpha < 1)
  //   V(theta) = (cos theta / sin(alpha theta))^(alpha/(alpha-1)) cos((alpha-1) theta) / cos theta,
  //   g = x^(alpha/(alpha-1)).
  // Mass sits near theta = pi/2 for large x and near theta = 0 for small x, so
  // [pi/4, pi/2] is integrated in phi = pi/2 - theta to keep relative precision
  // at both ends.
  const bool gaussian = alpha == 2.0;
  const double sin_a = gaussian ? 0.0 : std::sin(pi * alpha / 2.0);
  const double cos_a = gaussian ? -1.0 : std::cos(pi * alpha / 2.0);
  const double sin_b = gaussian ? 1.0 : std::sin(pi * (alpha - 1.0) / 2.0);
  const double cos_b = gaussian ? 0.0 : std::cos(pi * (alpha - 1.0) / 2.0);
  const double e = alpha / (alpha - 1.0);
  const double log_g = e * std::log(x);

  auto in_theta = [&](double theta) {
    const double c = std::cos(theta);
    return log_g + e * (std::log(c) - std::log(std::sin(alpha * theta))) +
           std::log(std::cos((alpha - 1.0) * theta)) - std::log(c);
  };
  auto in_phi = [&](double phi) {
    const double cos_theta = std::sin(phi);
    const double sin_alpha_theta = sin_a * std::cos(alpha * phi) - cos_a * std::sin(alpha * phi);
    const double cos_rest = cos_b * std::cos((alpha - 1.0) * phi) + sin_b * std::sin((alpha - 1.0) * phi);
    return log_g + e * (std::log(cos_theta) - std::log(sin_alpha_theta)) + std::log(cos_rest) -
           std::log(cos_theta);
  };

  if (alpha > 1.0) {
    // exp(-gV) is below e^-60 once gV > 60; that part is dropped.
    const double cutoff = std::log(60.0);
    auto f_theta = [&](double v) { return std::exp(-std::exp(in_theta(v))); };
    auto f_phi = [&](double v) { return std::exp(-std::exp(in_phi(v))); };
    return (monotone_piece(in_theta, f_theta, false, cutoff) + monotone_piece(in_phi, f_phi, true, cutoff)) / pi;
  }
  const double none = std::numeric_limits<double>::infinity();
  auto f_theta = [&](double v) { return -std::expm1(-std::exp(in_theta(v))); };
  auto f_phi = [&](double v) { return -std::expm1(-std::exp(in_phi(v))); };
  return (monotone_piece(in_theta, f_theta, true, none) + monotone_piece(in_phi, f_phi, false, none)) / pi;
}

double standard_tail(double alpha, double x) {
  if (x == 0.0) return 0.5;
  if (x < 0.0) return 1.0 - standard_upper_tail(alpha, -x);
  return standard_upper_tail(alpha, x);
}

/// P(|Z + shift| > t) for t >= 0.
double standard_abs_tail(double alpha, double shift, double t) {
  if (shift == 0.0) return 2.0 * standard_tail(alpha, t);
  return standard_tail(alpha, t - shift) + standard_tail(alpha, t + shift);
}

void require_symmetric(const StableParams& params, const char* where) {
  if (!params.symmetric()) throw std::domain_error(std::string(where) + ": requires beta = 0");
}

/// Doubling grid point where the asymptote 2 c t^-alpha matches the computed
/// two-sided tail to kCrossoverTolerance at two consecutive grid points.
double crossover_point(double alpha, double shift) {
  const double two_c = 2.0 * stable_tail_constant(alpha);
  auto rel_gap = [&](double t) {
    const double exact = standard_abs_tail(alpha, shift, t);
    return std::abs(two_c * std::pow(t, -alpha) / exact - 1.0);
  };
  double t = std::max(1.0, 2.0 * std::abs(shift));
  bool previous_ok = false;
  for (int step = 0; step < 80; ++step, t *= 2.0) {
    const bool ok = rel_gap(t) < kCrossoverTolerance;
    if (ok && previous_ok) return t / 2.0;
    previous_ok = ok;
  }
  throw std::runtime_error("abs_moment: tail asymptote never reached the crossover tolerance");
}

}  // namespace

StableParams::StableParams(double alpha, double beta, double gamma, double delta)
    : alpha_(alpha), beta_(beta), gamma_(gamma), delta_(delta) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::domain_error("StableParams: alpha must lie in (0, 2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw std::domain_error("StableParams: beta must lie in [-1, 1]");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::domain_error("StableParams: gamma must be positive");
  if (!std::isfinite(delta)) throw std::domain_error("StableParams: delta must be finite");
}

StableParams make_p_stable(const PStableSpec& spec) {
  if (!(spec.p > 1.0 && spec.p < 2.0)) throw std::domain_error("make_p_stable: p must lie in (1, 2)");
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma))
    throw std::domain_error("make_p_stable: sigma must be positive");
  return StableParams(spec.p, 0.0, spec.sigma / std::pow(2.0, 1.0 / spec.p), 0.0);
}

std::complex<double> cf(const StableParams& params, double t) {
  if (t == 0.0) return {1.0, 0.0};
  const double a = params.alpha();
  const double s = sign_of(t);
  const double scaled = params.gamma() * std::abs(t);  // gamma |t|
  double imag = params.delta() * t;
  double real;
  if (a == 1.0) {
    real = -scaled;
    imag -= params.beta() * (2.0 / pi) * s * scaled * std::log(scaled);
  } else {
    const double powered = std::pow(scaled, a);
    real = -powered;
    // gamma^a |t|^a ((gamma|t|)^(1-a) - 1) = gamma|t| - (gamma|t|)^a
    imag -= params.beta() * std::tan(pi * a / 2.0) * s * (scaled - powered);
  }
  return std::exp(std::complex<double>(real, imag));
}

StableParams scale_shift(const StableParams& params, double a, double b) {
  if (a == 0.0 || !std::isfinite(a)) throw std::domain_error("scale_shift: a must be finite and non-zero");
  return StableParams(params.alpha(), sign_of(a) * params.beta(), std::abs(a) * params.gamma(),
                      a * params.delta() + b);
}

StableParams add(const StableParams& p1, const StableParams& p2) {
  if (p1.alpha() != p2.alpha()) throw std::domain_error("add: alpha must match exactly");
  const double a = p1.alpha();
  const double w1 = std::pow(p1.gamma(), a);
  const double w2 = std::pow(p2.gamma(), a);
  const double gamma = std::pow(w1 + w2, 1.0 / a);
  const double beta = std::clamp((p1.beta() * w1 + p2.beta() * w2) / (w1 + w2), -1.0, 1.0);
  double delta = p1.delta() + p2.delta();
  if (a == 1.0) {
    auto term = [](double b, double g) { return b == 0.0 ? 0.0 : b * g * std::log(g); };
    delta += (2.0 / pi) * (term(beta, gamma) - term(p1.beta(), p1.gamma()) - term(p2.beta(), p2.gamma()));
  } else {
    delta += std::tan(pi * a / 2.0) * (beta * gamma - p1.beta() * p1.gamma() - p2.beta() * p2.gamma());
  }
  return StableParams(a, beta, gamma, delta);
}

StableSampler::StableSampler(const StableParams& params)
    : params_(params),
      unit_alpha_(params.alpha() == 1.0),
      inv_alpha_(1.0 / params.alpha()),
      exponent_((1.0 - params.alpha()) / params.alpha()),
      skew_angle_(0.0),
      skew_scale_(1.0),
      zero_shift_(0.0) {
  if (!unit_alpha_) {
    const double tan_half = std::tan(pi * params.alpha() / 2.0);
    const double bt = params.beta() * tan_half;
    skew_angle_ = std::atan(bt) / params.alpha();
    skew_scale_ = std::pow(1.0 + bt * bt, 1.0 / (2.0 * params.alpha()));
    zero_shift_ = bt;
  }
}

double StableSampler::operator()(RandomWords words) const noexcept {
  const double u = pi * (open_unit(words.first) - 0.5);  // uniform on (-pi/2, pi/2)
  const double w = -std::log(open_unit(words.second));   // standard exponential
  const double beta = params_.beta();
  if (unit_alpha_) {
    const double half_pi = pi / 2.0;
    const double lever = half_pi + beta * u;
    const double z = (2.0 / pi) * (lever * std::tan(u) - beta * std::log(half_pi * w * std::cos(u) / lever));
    return params_.gamma() * z + params_.delta();
  }
  const double a = params_.alpha();
  const double angle = a * (u + skew_angle_);
  const double z = skew_scale_ * std::sin(angle) / std::pow(std::cos(u), inv_alpha_) *
                   std::pow(std::cos(u - angle) / w, exponent_);
  return params_.gamma() * (z - zero_shift_) + params_.delta();
}

SampleBatch sample(const StableParams& params, std::size_t count, std::uint64_t seed, Workers workers) {
  const StableSampler sampler(params);
  const CounterStream rng(seed);
  SampleBatch batch{params, seed, std::vector<double>(count)};
  parallel_fill(batch.values, workers, [&](std::size_t j) { return sampler.draw(rng, 0, j); });
  return batch;
}

double tail_asymptote(const StableParams& params, double x) {
  if (!(params.alpha() < 2.0)) throw std::domain_error("tail_asymptote: alpha = 2 has Gaussian tails");
  if (!(params.beta() > -1.0 && params.beta() < 1.0))
    throw std::domain_error("tail_asymptote: beta must lie in (-1, 1)");
  if (!(x > 0.0)) throw std::domain_error("tail_asymptote: x must be positive");
  const double a = params.alpha();
  return std::pow(params.gamma(), a) * stable_tail_constant(a) * (1.0 + params.beta()) * std::pow(x, -a);
}

TailFrequency empirical_tail(const StableParams& params, std::size_t count, double level, std::uint64_t seed,
                             Workers workers) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("empirical_tail: level must lie in (0, 1)");
  const auto exceed = static_cast<std::size_t>(std::floor(level * static_cast<double>(count)));
  if (exceed == 0 || exceed >= count) throw std::domain_error("empirical_tail: too few draws for this level");
  SampleBatch batch = sample(params, count, seed, workers);
  auto& v = batch.values;
  // x is the order statistic with exactly `exceed` draws above it (ties aside).
  const auto pos = v.begin() + static_cast<std::ptrdiff_t>(count - exceed - 1);
  std::nth_element(v.begin(), pos, v.end());
  const double x = *pos;
  const auto above = std::count_if(v.begin(), v.end(), [x](double y) { return y > x; });
  const double frequency = static_cast<double>(above) / static_cast<double>(count);
  const double asymptote = tail_asymptote(params, x);
  return {x, frequency, asymptote, frequency / asymptote};
}

double upper_tail_probability(const StableParams& params, double x) {
  require_symmetric(params, "upper_tail_probability");
  return standard_tail(params.alpha(), (x - params.delta()) / params.gamma());
}

double abs_moment_crossover(const StableParams& params) {
  require_symmetric(params, "abs_moment_crossover");
  if (params.alpha() == 2.0) return std::numeric_limits<double>::infinity();
  return params.gamma() * crossover_point(params.alpha(), params.delta() / params.gamma());
}

double abs_moment(const StableParams& params, double r) {
  require_symmetric(params, "abs_moment");
  const double a = params.alpha();
  if (!(r > 0.0)) throw std::domain_error("abs_moment: r must be positive");
  if (!(r < a)) throw std::domain_error("abs_moment: r must be below alpha (the moment diverges)");

  const double shift = params.delta() / params.gamma();
  // Panels in u = t^r over a doubling grid in t; each panel is smooth.
  auto panel = [&](double t0, double t1) {
    auto f = [&](double u) { return standard_abs_tail(a, shift, std::pow(u, 1.0 / r)); };
    return integrate(f, std::pow(t0, r), std::pow(t1, r), kMomentTolerance);
  };

  double upper;
  double closure = 0.0;
  if (a == 2.0) {
    upper = 16.0 + std::abs(shift);  // P(|Z| > t) < 1e-28 beyond here
  } else {
    upper = crossover_point(a, shift);
    closure = 2.0 * stable_tail_constant(a) * r * std::pow(upper, r - a) / (a - r);
  }

  double total = panel(0.0, std::min(1.0, upper));
  for (double t = 1.0; t < upper; t *= 2.0) total += panel(t, std::min(2.0 * t, upper));
  total += closure;
  return std::pow(params.gamma(), r) * total;
}

}  // namespace stablecx
