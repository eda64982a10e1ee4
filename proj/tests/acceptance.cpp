// Acceptance suite: one PASS/FAIL line per criterion, then a byte-for-byte
// rerun of every criterion's serialized reports. Exit code 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stablecx/cli/report_io.hpp"
#include "stablecx/complexity.hpp"
#include "stablecx/counterexample.hpp"
#include "stablecx/empirical_sums.hpp"
#include "stablecx/special.hpp"
#include "stablecx/stable.hpp"
#include "stablecx/stats.hpp"

using namespace stablecx;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string log;  // serialized reports, compared across reruns
};

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

void record(Outcome& out, const VerificationReport& check) {
  cli::Report r;
  r.command = check.name;
  r.check = check;
  r.verdict = check.pass;
  out.log += cli::to_json(r);
}

void record(Outcome& out, const std::string& command, std::vector<std::string> columns,
            std::vector<std::vector<double>> rows, bool verdict) {
  cli::Report r;
  r.command = command;
  r.columns = std::move(columns);
  r.rows = std::move(rows);
  r.verdict = verdict;
  out.log += cli::to_json(r);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

StableParams symmetric(double alpha) { return StableParams(alpha, 0.0, 1.0, 0.0); }

Outcome ac1_stability(Workers w) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const CoefVector v({3.0, 4.0}, 1.5);
  int passed = 0;
  double lowest = 1.0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto r = verify_stability_law(v, symmetric(1.5), 100000, 1000 + rep, w);
    record(out, r);
    if (r.pass) ++passed;
    lowest = std::min(lowest, *r.p_value);
  }
  const double elapsed = seconds_since(start);
  out.pass = passed >= 19 && elapsed < 30.0;
  out.detail = fmt("stability law, p=1.5, v=(3,4): %d/20 reps with KS p > 0.01 (min p %.3g), %.1f s", passed, lowest,
                   elapsed);
  return out;
}

Outcome ac2_cpr_constancy(Workers w) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const double quad = abs_moment(symmetric(1.5), 1.0);
  const std::vector<std::vector<double>> vs{{1.0}, {1.0, 1.0}, {3.0, 4.0, 5.0}};
  std::vector<double> est;
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < vs.size(); ++j) {
    const StatResult r = c_pr_estimate(1.5, 1.0, CoefVector(vs[j], 1.5), 1000000, 2000 + j, w);
    est.push_back(r.estimate);
    rows.push_back({static_cast<double>(j), r.estimate, r.std_error, quad});
  }
  double worst_pair = 0.0;
  double worst_quad = 0.0;
  for (std::size_t a = 0; a < est.size(); ++a) {
    worst_quad = std::max(worst_quad, std::abs(est[a] - quad) / quad);
    for (std::size_t b = a + 1; b < est.size(); ++b)
      worst_pair = std::max(worst_pair, std::abs(est[a] - est[b]) / std::min(est[a], est[b]));
  }
  const double elapsed = seconds_since(start);
  out.pass = worst_pair <= 0.02 && worst_quad <= 0.02 && elapsed < 120.0;
  record(out, "c_pr", {"v", "estimate", "stderr", "quadrature"}, rows, out.pass);
  out.detail = fmt("c_{1.5,1} for v=(1),(1,1),(3,4,5): max pairwise gap %.4f, max gap to quadrature %.4f, %.1f s",
                   worst_pair, worst_quad, elapsed);
  return out;
}

Outcome ac3_tail_constant(Workers w) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::vector<double>> rows;
  std::string ratios;
  for (double alpha : {1.2, 1.5, 1.8}) {
    const TailFrequency t = empirical_tail(symmetric(alpha), 10000000, 1e-3, 3000 + static_cast<int>(alpha * 10), w);
    const bool ok = t.ratio >= 0.85 && t.ratio <= 1.15;
    out.pass = out.pass && ok;
    rows.push_back({alpha, t.x, t.frequency, t.asymptote, t.ratio});
    ratios += fmt(" %.3f", t.ratio);
  }
  const double elapsed = seconds_since(start);
  out.pass = out.pass && elapsed < 300.0;
  record(out, "tail", {"alpha", "x", "frequency", "asymptote", "ratio"}, rows, out.pass);
  out.detail = fmt("x^a P(X>x) / c_a at the 1-1e-3 quantile, a=1.2,1.5,1.8:%s, %.1f s", ratios.c_str(), elapsed);
  return out;
}

Outcome ac4_cf_agreement(Workers w) {
  Outcome out;
  const std::size_t n = 1000000;
  const SampleBatch batch = sample(symmetric(1.5), n, 4000, w);
  const double bound = 4.0 / std::sqrt(static_cast<double>(n));
  double worst = 0.0;
  std::vector<std::vector<double>> rows;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    const double emp = empirical_cf(batch.values, t).real();
    const double exact = std::exp(-std::pow(std::abs(t), 1.5));
    worst = std::max(worst, std::abs(emp - exact));
    rows.push_back({t, emp, exact});
  }
  out.pass = worst <= bound;
  record(out, "cf", {"t", "mean_cos", "exact"}, rows, out.pass);
  out.detail = fmt("S(1.5,0,1,0), N=1e6: max |mean cos(tX) - exp(-|t|^1.5)| = %.5f (bound %.4f)", worst, bound);
  return out;
}

Outcome ac5_norm_bound(Workers w) {
  Outcome out;
  SequentialRng rng(5, 0);
  int passed = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::vector<double> v(1 + rng.uniform_int(0, 9));
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    const auto r = verify_norm_bound(CoefVector(v, 1.5), 1000000, 5000 + i, w);
    record(out, r);
    if (r.pass) ++passed;
  }
  out.pass = passed == 50;
  out.detail = fmt("||v||_1.5 <= C(1.5) E|sum v_k X_k| + 3 stderr: %d/50 random v", passed);
  return out;
}

Outcome ac6_vector_contraction(Workers w) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  int passed = 0;
  double tightest = INFINITY;
  for (double p : {1.2, 1.5, 1.8}) {
    SequentialRng shape(static_cast<std::uint64_t>(p * 10), 6);
    for (std::uint64_t i = 0; i < 100; ++i) {
      const std::size_t n = 1 + shape.uniform_int(0, 4);
      const std::size_t K = 1 + shape.uniform_int(0, 3);
      const std::size_t m = 1 + shape.uniform_int(0, 7);
      const std::uint64_t seed = 6000 + static_cast<std::uint64_t>(p * 1000) + i;
      const auto r = verify_vector_contraction(generate_instance(n, m, K, p, seed), 200000, seed, w);
      record(out, r);
      if (r.pass) ++passed;
      if (r.rhs > 0.0) tightest = std::min(tightest, r.constant * r.rhs - r.lhs);
    }
  }
  const double elapsed = seconds_since(start);
  out.pass = passed == 300 && elapsed < 600.0;
  out.detail = fmt("vector contraction, p=1.2,1.5,1.8: %d/300 instances (smallest margin %.4f), %.1f s", passed,
                   tightest, elapsed);
  return out;
}

Outcome ac7_corollary(Workers w) {
  Outcome out;
  SequentialRng shape(7, 0);
  int passed = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::size_t n = 1 + shape.uniform_int(0, 4);
    const std::size_t K = 1 + shape.uniform_int(0, 3);
    const std::size_t m = 1 + shape.uniform_int(0, 7);
    const auto r = verify_corollary_p2(generate_instance(n, m, K, 2.0, 7000 + i), 200000, 7000 + i, w);
    record(out, r);
    if (r.pass) ++passed;
  }
  out.pass = passed == 100;
  out.detail = fmt("p=2 corollary with doubly indexed signs, constant sqrt(2): %d/100 instances", passed);
  return out;
}

Outcome ac8_scalar_contraction(Workers w) {
  Outcome out;
  SequentialRng rng(8, 0);
  int passed = 0;
  double identity_gap = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.uniform_int(0, 9);
    const std::size_t m = 1 + rng.uniform_int(0, 7);
    RealTable f(n, m);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < m; ++s) f(r, s) = rng.uniform(-3.0, 3.0);
    std::vector<PiecewiseLinear> h;
    for (std::size_t r = 0; r < n; ++r) {
      switch (i % 3) {
        case 0: h.push_back(PiecewiseLinear::absolute()); break;
        case 1: {
          const double lo = rng.uniform(-2.0, 0.0);
          h.push_back(PiecewiseLinear::clamp(lo, lo + rng.uniform(0.1, 3.0)));
          break;
        }
        default: h.push_back(PiecewiseLinear::random(rng)); break;
      }
    }
    const auto r = verify_scalar_contraction(f, h, 1.0, w);
    record(out, r);
    if (r.pass) ++passed;
    const std::vector<PiecewiseLinear> id(n, PiecewiseLinear::identity());
    const auto e = verify_scalar_contraction(f, id, 1.0, w);
    identity_gap = std::max(identity_gap, std::abs(e.lhs - e.rhs) / std::max(1.0, std::abs(e.rhs)));
  }
  const double eps = 1e-15;
  out.pass = passed == 100 && identity_gap <= eps;
  out.detail = fmt("scalar contraction with |x|, clamp, random h: %d/100 pass; identity h relative gap %.3g", passed,
                   identity_gap);
  return out;
}

Outcome ac9_counterexample(Workers) {
  Outcome out;
  const std::vector<std::size_t> ns{4, 16, 64, 256};
  const DivergenceTable t = divergence_table(ns, 1.5);
  const double lhs[] = {2.0, 8.0, 32.0, 128.0};
  bool ok = t.strictly_increasing;
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const auto& r = t.rows[j];
    const double n = static_cast<double>(ns[j]);
    const double reference = std::cbrt(n * n);  // n^(2/3)
    ok = ok && r.lhs == lhs[j] && std::abs(r.rhs_bound - reference) <= 4e-16 * reference;
    rows.push_back({n, 1.5, r.lhs, r.rhs_bound, r.ratio});
  }
  ok = ok && t.rows[2].rhs_bound == 16.0 && t.rows[2].ratio == 2.0;
  const DivergenceTable flat = divergence_table(ns, 1.0);
  for (const auto& r : flat.rows) {
    ok = ok && r.ratio == 0.5;
    rows.push_back({static_cast<double>(r.n), 1.0, r.lhs, r.rhs_bound, r.ratio});
  }
  out.pass = ok;
  record(out, "counterexample", {"n", "p", "lhs", "rhs_bound", "ratio"}, rows, ok);
  out.detail = fmt("n=4,16,64,256 at p=1.5: ratios %.4f %.4f %.4f %.4f; p=1 ratios all 0.5: %s", t.rows[0].ratio,
                   t.rows[1].ratio, t.rows[2].ratio, t.rows[3].ratio, ok ? "yes" : "no");
  return out;
}

Outcome ac10_sphere(Workers w) {
  Outcome out;
  std::vector<std::vector<double>> rows;
  for (std::size_t n : {1u, 10u, 100u}) {
    const SphereCase c = sphere_family_case(n, w);
    out.pass = out.pass && c.lhs == 0.0 && c.rhs_bound == static_cast<double>(n);
    rows.push_back({static_cast<double>(n), c.lhs, c.rhs_bound});
  }
  record(out, "sphere", {"n", "lhs", "rhs_bound"}, rows, out.pass);
  out.detail = fmt("l_1 sphere family n=1,10,100: lhs %g %g %g, rhs_bound %g %g %g", rows[0][1], rows[1][1],
                   rows[2][1], rows[0][2], rows[1][2], rows[2][2]);
  return out;
}

Outcome ac11_truncation(Workers w) {
  Outcome out;
  // v_k = 1/k for k <= L, then the whole tail sum_{k>L} v_k X_k collapsed into
  // one coefficient ||(v_k)_{k>L}||_p, which has the same law.
  const std::size_t L = 10000;
  const double p = 1.5;
  std::vector<double> v(L + 1);
  for (std::size_t k = 1; k <= L; ++k) v[k - 1] = 1.0 / static_cast<double>(k);
  // sum_{k>L} k^-1.5 by the midpoint integral 2 / sqrt(L + 1/2); error O(L^-3.5).
  v[L] = std::pow(2.0 / std::sqrt(L + 0.5), 1.0 / p);
  const std::vector<std::size_t> cutoffs{10, 100, 1000};
  const auto points = lr_truncation_convergence(CoefVector(v, p), 1.0, cutoffs, 20000, 11000, w);
  auto estimate = [](double K) { return std::pow(2.0 / std::sqrt(K), 2.0 / 3.0); };
  const double scale = points[2].error.estimate / estimate(1000.0);
  bool decreasing = true;
  double worst = 1.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double K = static_cast<double>(points[j].cutoff);
    const double e = points[j].error.estimate;
    const double ratio = e / (scale * estimate(K));
    worst = std::max({worst, ratio, 1.0 / ratio});
    if (j > 0 && !(e < points[j - 1].error.estimate)) decreasing = false;
    rows.push_back({K, e, points[j].error.std_error, scale * estimate(K)});
  }
  out.pass = decreasing && worst <= 2.0;
  record(out, "truncation", {"K", "error", "stderr", "expected"}, rows, out.pass);
  out.detail = fmt("L_1 truncation error at K=10,100,1000: %.4f %.4f %.4f, strictly decreasing: %s, worst factor %.3f",
                   rows[0][1], rows[1][1], rows[2][1], decreasing ? "yes" : "no", worst);
  return out;
}

struct Criterion {
  const char* id;
  std::function<Outcome(Workers)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", ac1_stability},          {"AC2", ac2_cpr_constancy},      {"AC3", ac3_tail_constant},
      {"AC4", ac4_cf_agreement},       {"AC5", ac5_norm_bound},         {"AC6", ac6_vector_contraction},
      {"AC7", ac7_corollary},          {"AC8", ac8_scalar_contraction}, {"AC9", ac9_counterexample},
      {"AC10", ac10_sphere},           {"AC11", ac11_truncation},
  };
  bool all = true;
  std::vector<std::string> logs;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run(Workers{});
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    std::printf("%-4s %s  %s\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
    logs.push_back(std::move(o.log));
  }

  // Rerun with a different worker count; reports must match byte for byte.
  std::size_t identical = 0;
  std::string mismatched;
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    std::string again;
    try {
      again = criteria[j].run(Workers{3}).log;
    } catch (const std::exception&) {
      again = "<threw>";
    }
    if (!logs[j].empty() && again == logs[j]) ++identical;
    else mismatched += std::string(" ") + criteria[j].id;
  }
  const bool reproducible = identical == criteria.size();
  std::printf("%-4s %s  rerun of AC1-AC11 gives byte-identical reports: %zu/%zu%s%s\n", "AC12",
              reproducible ? "PASS" : "FAIL", identical, criteria.size(), mismatched.empty() ? "" : ", differ:",
              mismatched.c_str());
  all = all && reproducible;
  return all ? 0 : 1;
}
