#include "stablecx/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stablecx/empirical_sums.hpp"

namespace stablecx {
namespace {

constexpr double kLipschitzRounding = 1e-12;
constexpr std::size_t kBatches = 100;

double lipschitz_slack(double a, double b) { return kLipschitzRounding * (1.0 + std::abs(a) + std::abs(b)); }

/// Sign eps_q of trial j: +1 when bit q % 128 of words(q / 128, j) is set.
class SignBlock {
 public:
  SignBlock(const CounterStream& rng, std::uint64_t trial) : rng_(rng), trial_(trial) {}

  double operator()(std::size_t q) {
    const std::size_t block = q / 128;
    if (block != cached_) {
      words_ = rng_.words(block, trial_);
      cached_ = block;
    }
    const std::size_t bit = q % 128;
    const std::uint64_t word = bit < 64 ? words_.first : words_.second;
    return ((word >> (bit % 64)) & 1U) != 0 ? 1.0 : -1.0;
  }

 private:
  const CounterStream& rng_;
  std::uint64_t trial_;
  std::size_t cached_ = std::numeric_limits<std::size_t>::max();
  RandomWords words_{};
};

double max_of(std::span<const double> xs) { return *std::max_element(xs.begin(), xs.end()); }

/// Partial sums of the rows [first, first + count) for every sign mask over them.
std::vector<double> signed_partial_sums(const RealTable& values, std::size_t first, std::size_t count) {
  const std::size_t m = values.cols();
  const std::size_t masks = std::size_t{1} << count;
  std::vector<double> out(masks * m, 0.0);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    double* dst = out.data() + mask * m;
    for (std::size_t b = 0; b < count; ++b) {
      const bool plus = ((mask >> b) & 1U) != 0;
      const auto row = values.row(first + b);
      for (std::size_t s = 0; s < m; ++s) dst[s] += plus ? row[s] : -row[s];
    }
  }
  return out;
}

double enumerate_signs(const RealTable& values, Workers workers) {
  const std::size_t n = values.rows();
  const std::size_t m = values.cols();
  const std::size_t low_rows = n / 2;
  const std::size_t high_rows = n - low_rows;
  const std::vector<double> low = signed_partial_sums(values, 0, low_rows);
  const std::vector<double> high = signed_partial_sums(values, low_rows, high_rows);
  const std::size_t low_masks = std::size_t{1} << low_rows;
  const std::size_t high_masks = std::size_t{1} << high_rows;

  std::vector<long double> partial(high_masks, 0.0L);
  parallel_chunks(high_masks, 4, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t h = begin; h < end; ++h) {
      const double* hs = high.data() + h * m;
      long double acc = 0.0L;
      for (std::size_t l = 0; l < low_masks; ++l) {
        const double* ls = low.data() + l * m;
        double best = hs[0] + ls[0];
        for (std::size_t s = 1; s < m; ++s) best = std::max(best, hs[s] + ls[s]);
        acc += best;
      }
      partial[h] = acc;
    }
  });
  long double total = 0.0L;
  for (long double x : partial) total += x;
  return static_cast<double>(total / std::ldexp(1.0L, static_cast<int>(n)));
}

bool rows_identical(const RealTable& values) {
  for (std::size_t i = 1; i < values.rows(); ++i) {
    const auto a = values.row(0);
    const auto b = values.row(i);
    if (!std::equal(a.begin(), a.end(), b.begin())) return false;
  }
  return true;
}

/// All rows equal to r: the signed sum is (2k - n) r(s) with k ~ Binomial(n, 1/2).
/// Classes k and n - k share a weight and are added pairwise.
double enumerate_plus_counts(const RealTable& values) {
  const std::size_t n = values.rows();
  const auto row = values.row(0);
  auto class_value = [&](std::size_t k) {
    const double c = static_cast<double>(2 * static_cast<long long>(k) - static_cast<long long>(n));
    double best = c * row[0];
    for (double x : row) best = std::max(best, c * x);
    return best;
  };
  std::vector<long double> weight(n + 1);
  weight[0] = std::ldexp(1.0L, -static_cast<int>(n));
  for (std::size_t k = 0; k < n; ++k) weight[k + 1] = weight[k] * (n - k) / (k + 1);
  long double total = 0.0L;
  for (std::size_t k = 0; 2 * k < n; ++k) total += weight[k] * (class_value(k) + class_value(n - k));
  if (n % 2 == 0) total += weight[n / 2] * class_value(n / 2);
  return static_cast<double>(total);
}

void require_coupling(const FunctionClassTable& table, const char* who) {
  const auto violations = check_lipschitz(table);
  if (violations.empty()) return;
  const auto& v = violations.front();
  std::ostringstream msg;
  msg << who << ": Lipschitz coupling violated at i=" << v.i << ", s=" << v.s << ", s'=" << v.s2
      << " (gap " << v.gap << ")";
  throw std::invalid_argument(msg.str());
}

/// Per-trial max_s (scale * sum_{i,k} X_ik phi_i(s)_k + offset(s)).
std::vector<double> stable_sup_values(const FunctionClassTable& table, const StableParams& params, double scale,
                                      std::span<const double> offset, std::size_t trials, std::uint64_t seed,
                                      Workers workers) {
  const StableSampler sampler(params);
  const CounterStream rng(seed);
  const std::size_t m = table.m();
  const std::size_t rows = table.n() * table.K();
  const auto phi = table.phi_data();
  std::vector<double> out(trials);
  parallel_chunks(trials, 1024, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(m);
    for (std::size_t j = begin; j < end; ++j) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t q = 0; q < rows; ++q) {
        const double x = sampler.draw(rng, q, j);
        const double* col = phi.data() + q * m;
        for (std::size_t s = 0; s < m; ++s) acc[s] += x * col[s];
      }
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < m; ++s) {
        const double v = offset.empty() ? scale * acc[s] : scale * acc[s] + offset[s];
        best = std::max(best, v);
      }
      out[j] = best;
    }
  });
  return out;
}

StableParams unit_p_stable(double p) { return StableParams(p, 0.0, 1.0, 0.0); }

}  // namespace

RealTable::RealTable(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealTable::RealTable(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("RealTable: data size does not match rows x cols");
}

FunctionClassTable::FunctionClassTable(RealTable psi, std::vector<double> phi, std::size_t K, double p)
    : psi_(std::move(psi)), phi_(std::move(phi)), K_(K), p_(p) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("FunctionClassTable: p must lie in (1, 2]");
  if (m() == 0) throw std::invalid_argument("FunctionClassTable: hypothesis set S must be nonempty (m >= 1)");
  if (K == 0) throw std::invalid_argument("FunctionClassTable: K must be at least 1");
  if (phi_.size() != n() * K * m())
    throw std::invalid_argument("FunctionClassTable: phi must have n x K x m entries");
  for (double x : psi_.data())
    if (!std::isfinite(x)) throw std::invalid_argument("FunctionClassTable: psi entries must be finite");
  for (double x : phi_)
    if (!std::isfinite(x)) throw std::invalid_argument("FunctionClassTable: phi entries must be finite");
}

std::vector<LipschitzViolation> check_lipschitz(const FunctionClassTable& table) {
  std::vector<LipschitzViolation> out;
  std::vector<double> diff(table.K());
  for (std::size_t i = 0; i < table.n(); ++i) {
    for (std::size_t s = 0; s < table.m(); ++s) {
      for (std::size_t s2 = 0; s2 < table.m(); ++s2) {
        if (s == s2) continue;
        for (std::size_t k = 0; k < table.K(); ++k) diff[k] = table.phi(i, k, s) - table.phi(i, k, s2);
        const double a = table.psi(i, s);
        const double b = table.psi(i, s2);
        const double gap = (a - b) - p_norm(diff, table.p());
        if (gap > lipschitz_slack(a, b)) out.push_back({i, s, s2, gap});
      }
    }
  }
  return out;
}

double rademacher_complexity_exact(const RealTable& values, Workers workers) {
  if (values.cols() == 0) throw std::invalid_argument("rademacher_complexity_exact: table has no columns");
  if (values.rows() == 0) return 0.0;
  if (values.rows() <= kMaxExactRows) return enumerate_signs(values, workers);
  if (rows_identical(values)) return enumerate_plus_counts(values);
  throw std::domain_error("rademacher_complexity_exact: more than 22 rows; use rademacher_complexity_mc");
}

StatResult rademacher_complexity_mc(const RealTable& values, std::size_t trials, std::uint64_t seed,
                                    Workers workers) {
  if (values.cols() == 0) throw std::invalid_argument("rademacher_complexity_mc: table has no columns");
  if (trials == 0) throw std::invalid_argument("rademacher_complexity_mc: trials must be positive");
  const CounterStream rng(seed);
  const std::size_t m = values.cols();
  std::vector<double> sups(trials);
  parallel_chunks(trials, 1024, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(m);
    for (std::size_t j = begin; j < end; ++j) {
      std::fill(acc.begin(), acc.end(), 0.0);
      SignBlock sign(rng, j);
      for (std::size_t i = 0; i < values.rows(); ++i) {
        const double e = sign(i);
        const auto row = values.row(i);
        for (std::size_t s = 0; s < m; ++s) acc[s] += e * row[s];
      }
      sups[j] = max_of(acc);
    }
  });
  return mean_estimate(sups, seed);
}

StatResult stable_complexity_mc(const FunctionClassTable& table, const StableParams& params, std::size_t trials,
                                std::uint64_t seed, Workers workers) {
  if (trials == 0) throw std::invalid_argument("stable_complexity_mc: trials must be positive");
  const auto sups = stable_sup_values(table, params, 1.0, {}, trials, seed, workers);
  return batch_mean_estimate(sups, kBatches, seed);
}

VerificationReport verify_lemma_instance(std::span<const double> psi, const RealTable& phi,
                                         std::span<const double> f, double p, std::size_t trials,
                                         std::uint64_t seed, Workers workers) {
  const std::size_t m = psi.size();
  if (phi.cols() != m || f.size() != m)
    throw std::invalid_argument("verify_lemma_instance: psi, phi and f must share the hypothesis count");
  if (trials == 0) throw std::invalid_argument("verify_lemma_instance: trials must be positive");
  for (double x : f)
    if (!std::isfinite(x)) throw std::invalid_argument("verify_lemma_instance: offset entries must be finite");
  const FunctionClassTable table(RealTable(1, m, std::vector<double>(psi.begin(), psi.end())),
                                 std::vector<double>(phi.data().begin(), phi.data().end()), phi.rows(), p);
  require_coupling(table, "verify_lemma_instance");
  const double constant = contraction_constant(p);

  double plus = -std::numeric_limits<double>::infinity();
  double minus = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < m; ++s) {
    plus = std::max(plus, psi[s] + f[s]);
    minus = std::max(minus, -psi[s] + f[s]);
  }
  const auto sups = stable_sup_values(table, unit_p_stable(p), constant, f, trials, seed, workers);
  const StatResult rhs = batch_mean_estimate(sups, kBatches, seed);

  VerificationReport report;
  report.name = "lemma";
  report.rule = VerdictRule::kConstantInsideRhs;
  report.lhs = 0.5 * (plus + minus);
  report.rhs = rhs.estimate;
  report.rhs_err = rhs.std_error;
  report.constant = constant;
  report.rhs_seed = seed;
  report.rhs_trials = trials;
  return finalize(report);
}

VerificationReport verify_vector_contraction(const FunctionClassTable& table, std::size_t trials, std::uint64_t seed,
                                             Workers workers) {
  if (table.n() > kMaxExactRows)
    throw std::invalid_argument("verify_vector_contraction: exact left side needs n <= 22");
  require_coupling(table, "verify_vector_contraction");
  const double constant = contraction_constant(table.p());
  const double lhs = rademacher_complexity_exact(table.psi(), workers);
  const StatResult rhs = stable_complexity_mc(table, unit_p_stable(table.p()), trials, seed, workers);

  VerificationReport report;
  report.name = "vector-contraction";
  report.lhs = lhs;
  report.rhs = rhs.estimate;
  report.rhs_err = rhs.std_error;
  report.constant = constant;
  report.rhs_seed = seed;
  report.rhs_trials = trials;
  return finalize(report);
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values, double left_slope,
                                 double right_slope)
    : knots_(std::move(knots)), values_(std::move(values)), left_slope_(left_slope), right_slope_(right_slope) {
  if (knots_.empty() || knots_.size() != values_.size())
    throw std::invalid_argument("PiecewiseLinear: need matching, nonempty knots and values");
  for (std::size_t j = 1; j < knots_.size(); ++j)
    if (!(knots_[j] > knots_[j - 1])) throw std::invalid_argument("PiecewiseLinear: knots must strictly increase");
  for (double x : knots_)
    if (!std::isfinite(x)) throw std::invalid_argument("PiecewiseLinear: knots must be finite");
  for (double y : values_)
    if (!std::isfinite(y)) throw std::invalid_argument("PiecewiseLinear: values must be finite");
  if (!std::isfinite(left_slope_) || !std::isfinite(right_slope_))
    throw std::invalid_argument("PiecewiseLinear: slopes must be finite");
}

PiecewiseLinear PiecewiseLinear::identity() { return PiecewiseLinear({0.0}, {0.0}, 1.0, 1.0); }

PiecewiseLinear PiecewiseLinear::absolute() { return PiecewiseLinear({0.0}, {0.0}, -1.0, 1.0); }

PiecewiseLinear PiecewiseLinear::clamp(double lo, double hi) { return PiecewiseLinear({lo, hi}, {lo, hi}, 0.0, 0.0); }

PiecewiseLinear PiecewiseLinear::random(SequentialRng& rng, double lo, double hi, std::size_t pieces) {
  if (!(hi > lo) || pieces == 0) throw std::invalid_argument("PiecewiseLinear::random: empty grid");
  std::vector<double> knots(pieces + 1);
  std::vector<double> values(pieces + 1);
  const double width = (hi - lo) / static_cast<double>(pieces);
  knots[0] = lo;
  values[0] = rng.uniform(-1.0, 1.0);
  for (std::size_t j = 1; j <= pieces; ++j) {
    knots[j] = j == pieces ? hi : lo + width * static_cast<double>(j);
    values[j] = values[j - 1] + rng.uniform(-1.0, 1.0) * (knots[j] - knots[j - 1]);
  }
  const double left = rng.uniform(-1.0, 1.0);
  const double right = rng.uniform(-1.0, 1.0);
  return PiecewiseLinear(std::move(knots), std::move(values), left, right);
}

double PiecewiseLinear::operator()(double x) const noexcept {
  if (x <= knots_.front()) return values_.front() + left_slope_ * (x - knots_.front());
  if (x >= knots_.back()) return values_.back() + right_slope_ * (x - knots_.back());
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
  const double x0 = knots_[j - 1];
  const double x1 = knots_[j];
  const double t = (x - x0) / (x1 - x0);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

double PiecewiseLinear::lipschitz_constant() const noexcept {
  double best = std::max(std::abs(left_slope_), std::abs(right_slope_));
  for (std::size_t j = 1; j < knots_.size(); ++j)
    best = std::max(best, std::abs((values_[j] - values_[j - 1]) / (knots_[j] - knots_[j - 1])));
  return best;
}

VerificationReport verify_scalar_contraction(const RealTable& f_values, std::span<const PiecewiseLinear> h,
                                             double lipschitz, Workers workers) {
  if (h.size() != f_values.rows())
    throw std::invalid_argument("verify_scalar_contraction: need one function per row");
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz))
    throw std::invalid_argument("verify_scalar_contraction: Lipschitz constant must be positive and finite");
  for (double x : f_values.data())
    if (!std::isfinite(x)) throw std::invalid_argument("verify_scalar_contraction: table entries must be finite");

  RealTable image(f_values.rows(), f_values.cols());
  for (std::size_t i = 0; i < f_values.rows(); ++i)
    for (std::size_t s = 0; s < f_values.cols(); ++s) image(i, s) = h[i](f_values(i, s));

  for (std::size_t i = 0; i < f_values.rows(); ++i) {
    for (std::size_t s = 0; s < f_values.cols(); ++s) {
      for (std::size_t s2 = s + 1; s2 < f_values.cols(); ++s2) {
        const double dy = std::abs(image(i, s) - image(i, s2));
        const double dx = std::abs(f_values(i, s) - f_values(i, s2));
        if (dy > lipschitz * dx + lipschitz_slack(image(i, s), image(i, s2))) {
          std::ostringstream msg;
          msg << "verify_scalar_contraction: h_" << i << " exceeds Lipschitz constant " << lipschitz
              << " between columns " << s << " and " << s2;
          throw std::invalid_argument(msg.str());
        }
      }
    }
  }

  VerificationReport report;
  report.name = "scalar-contraction";
  report.lhs = rademacher_complexity_exact(image, workers);
  report.rhs = rademacher_complexity_exact(f_values, workers);
  report.constant = lipschitz;
  return finalize(report);
}

VerificationReport verify_corollary_p2(const FunctionClassTable& table, std::size_t trials, std::uint64_t seed,
                                       Workers workers) {
  if (table.p() != 2.0) throw std::invalid_argument("verify_corollary_p2: table must have p = 2");
  if (trials == 0) throw std::invalid_argument("verify_corollary_p2: trials must be positive");
  if (table.n() > kMaxExactRows)
    throw std::invalid_argument("verify_corollary_p2: exact left side needs n <= 22");
  require_coupling(table, "verify_corollary_p2");
  const double lhs = rademacher_complexity_exact(table.psi(), workers);

  const CounterStream rng(seed);
  const std::size_t m = table.m();
  const std::size_t rows = table.n() * table.K();
  const auto phi = table.phi_data();
  std::vector<double> sups(trials);
  parallel_chunks(trials, 1024, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(m);
    for (std::size_t j = begin; j < end; ++j) {
      std::fill(acc.begin(), acc.end(), 0.0);
      SignBlock sign(rng, j);
      for (std::size_t q = 0; q < rows; ++q) {
        const double e = sign(q);
        const double* col = phi.data() + q * m;
        for (std::size_t s = 0; s < m; ++s) acc[s] += e * col[s];
      }
      sups[j] = max_of(acc);
    }
  });
  const StatResult rhs = mean_estimate(sups, seed);

  VerificationReport report;
  report.name = "corollary-p2";
  report.lhs = lhs;
  report.rhs = rhs.estimate;
  report.rhs_err = rhs.std_error;
  report.constant = std::numbers::sqrt2;
  report.rhs_seed = seed;
  report.rhs_trials = trials;
  return finalize(report);
}

FunctionClassTable generate_instance(std::size_t n, std::size_t m, std::size_t K, double p, std::uint64_t seed) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("generate_instance: p must lie in (1, 2]");
  if (m == 0 || K == 0) throw std::invalid_argument("generate_instance: m and K must be positive");
  SequentialRng rng(seed, 0);
  std::vector<double> phi(n * K * m);
  for (double& x : phi) x = rng.uniform(-1.0, 1.0);

  const double q = p == 2.0 ? 2.0 : p / (p - 1.0);
  RealTable psi(n, m);
  std::vector<double> point(K);
  std::vector<double> w(K);
  for (std::size_t i = 0; i < n; ++i) {
    const bool linear = rng.uniform() < 0.5;
    if (linear) {
      for (double& x : w) x = rng.uniform(-1.0, 1.0);
      // Rescale so the dual norm is at most 0.999; Hoelder then gives the coupling.
      const double target = 0.999 * rng.uniform();
      const double norm = p_norm(w, q);
      for (double& x : w) x *= target / norm;
    }
    const PiecewiseLinear h = PiecewiseLinear::random(rng);
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t k = 0; k < K; ++k) point[k] = phi[(i * K + k) * m + s];
      double g = 0.0;
      if (linear) {
        for (std::size_t k = 0; k < K; ++k) g += w[k] * point[k];
      } else {
        g = p_norm(point, p);
      }
      psi(i, s) = h(g);
    }
  }
  return FunctionClassTable(std::move(psi), std::move(phi), K, p);
}

}  // namespace stablecx
