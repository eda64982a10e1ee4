#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "stablecx/complexity.hpp"
#include "stablecx/empirical_sums.hpp"

using namespace stablecx;

namespace {

RealTable random_table(std::size_t n, std::size_t m, std::uint64_t seed) {
  SequentialRng rng(seed, 0);
  RealTable t(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < m; ++s) t(i, s) = rng.uniform(-1.0, 1.0);
  return t;
}

/// Direct 2^n enumeration without the split, as an independent reference.
double brute_force(const RealTable& v) {
  const std::size_t n = v.rows();
  double total = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double best = -INFINITY;
    for (std::size_t s = 0; s < v.cols(); ++s) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += ((mask >> i) & 1U) ? v(i, s) : -v(i, s);
      best = std::max(best, acc);
    }
    total += best;
  }
  return total / std::ldexp(1.0, static_cast<int>(n));
}

/// Single-index table psi(s) = ||phi(s)||_p.
FunctionClassTable norm_table(std::size_t K, std::size_t m, double p, std::uint64_t seed) {
  SequentialRng rng(seed, 0);
  std::vector<double> phi(K * m);
  for (double& x : phi) x = rng.uniform(-1.0, 1.0);
  RealTable psi(1, m);
  std::vector<double> col(K);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t k = 0; k < K; ++k) col[k] = phi[k * m + s];
    psi(0, s) = p_norm(col, p);
  }
  return FunctionClassTable(psi, phi, K, p);
}

}  // namespace

TEST_SUITE("complexity") {
  TEST_CASE("real table") {
    RealTable t(2, 3, 1.5);
    CHECK(t(1, 2) == 1.5);
    t(1, 2) = -4.0;
    CHECK(t.row(1)[2] == -4.0);
    CHECK_THROWS_AS(RealTable(2, 2, std::vector<double>(3)), std::invalid_argument);
  }

  TEST_CASE("function class table validation") {
    CHECK_NOTHROW(FunctionClassTable(RealTable(2, 3), std::vector<double>(12), 2, 1.5));
    CHECK_THROWS_AS(FunctionClassTable(RealTable(2, 3), std::vector<double>(11), 2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(FunctionClassTable(RealTable(2, 0), std::vector<double>(0), 2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(FunctionClassTable(RealTable(2, 3), std::vector<double>(0), 0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(FunctionClassTable(RealTable(2, 3), std::vector<double>(12), 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FunctionClassTable(RealTable(2, 3), std::vector<double>(12), 2, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(FunctionClassTable(RealTable(2, 3, NAN), std::vector<double>(12), 2, 1.5), std::invalid_argument);
    std::vector<double> bad(12);
    bad[5] = INFINITY;
    CHECK_THROWS_AS(FunctionClassTable(RealTable(2, 3), bad, 2, 1.5), std::invalid_argument);
    std::vector<double> phi(12);
    for (std::size_t j = 0; j < phi.size(); ++j) phi[j] = static_cast<double>(j);
    const FunctionClassTable t(RealTable(2, 3), phi, 2, 1.5);
    CHECK(t.phi(1, 0, 2) == 8.0);  // [i][k][s] row-major
  }

  TEST_CASE("Lipschitz check") {
    const FunctionClassTable good = norm_table(3, 6, 1.5, 1);
    CHECK(check_lipschitz(good).empty());

    RealTable doubled = good.psi();
    for (std::size_t s = 0; s < doubled.cols(); ++s) doubled(0, s) *= 2.0;
    const FunctionClassTable bad(doubled, std::vector<double>(good.phi_data().begin(), good.phi_data().end()), 3, 1.5);
    const auto v = check_lipschitz(bad);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().gap > 0.0);
    CHECK(v.front().i == 0);
    CHECK(v.front().s != v.front().s2);

    for (double p : {1.2, 1.5, 1.8, 2.0})
      for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(check_lipschitz(generate_instance(5, 8, 4, p, seed)).empty());
  }

  TEST_CASE("exact Rademacher complexity: small cases") {
    CHECK(rademacher_complexity_exact(RealTable(4, 1, 3.0)) == 0.0);
    CHECK(rademacher_complexity_exact(random_table(6, 1, 2)) == doctest::Approx(0.0).scale(1.0));
    RealTable pm(2, 2);
    pm(0, 0) = pm(1, 0) = 1.0;
    pm(0, 1) = pm(1, 1) = -1.0;
    CHECK(rademacher_complexity_exact(pm) == 1.0);
    CHECK(rademacher_complexity_exact(RealTable(0, 3)) == 0.0);
    CHECK_THROWS_AS(rademacher_complexity_exact(RealTable(3, 0)), std::invalid_argument);
  }

  TEST_CASE("exact Rademacher complexity agrees with brute force") {
    for (std::size_t n : {1u, 2u, 5u, 9u, 12u}) {
      const RealTable t = random_table(n, 5, n);
      CHECK(rademacher_complexity_exact(t) == doctest::Approx(brute_force(t)).epsilon(1e-13));
    }
  }

  TEST_CASE("exact Rademacher complexity properties") {
    const RealTable t = random_table(10, 6, 3);
    const double base = rademacher_complexity_exact(t);
    CHECK(base >= 0.0);

    RealTable flipped = t;
    for (std::size_t s = 0; s < t.cols(); ++s) flipped(4, s) = -t(4, s);
    CHECK(rademacher_complexity_exact(flipped) == doctest::Approx(base).epsilon(1e-13));

    RealTable shifted = t;
    for (std::size_t s = 0; s < t.cols(); ++s) shifted(2, s) += 0.75;
    CHECK(rademacher_complexity_exact(shifted) == doctest::Approx(base).epsilon(1e-12));

    RealTable scaled = t;
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t s = 0; s < t.cols(); ++s) scaled(i, s) = 2.0 * t(i, s);
    CHECK(rademacher_complexity_exact(scaled) == 2.0 * base);

    RealTable wider(t.rows(), t.cols() + 1);
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t s = 0; s < t.cols(); ++s) wider(i, s) = t(i, s);
      wider(i, t.cols()) = 0.3 * static_cast<double>(i % 3) - 0.3;
    }
    CHECK(rademacher_complexity_exact(wider) >= base);

    // Closed under negation: equals E max_s |sum eps_i psi_i(s)|.
    RealTable both(t.rows(), 2 * t.cols());
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t s = 0; s < t.cols(); ++s) {
        both(i, s) = t(i, s);
        both(i, t.cols() + s) = -t(i, s);
      }
    CHECK(rademacher_complexity_exact(both) >= base);
  }

  TEST_CASE("exact enumeration is independent of the worker count") {
    const RealTable t = random_table(16, 4, 8);
    CHECK(rademacher_complexity_exact(t, Workers{1}) == rademacher_complexity_exact(t, Workers{4}));
  }

  TEST_CASE("identical rows beyond the enumeration limit") {
    RealTable ones(100, 7, 1.0);
    CHECK(rademacher_complexity_exact(ones) == 0.0);
    // Row r = (1, -1): E |sum eps_i| for n = 30.
    RealTable pm(30, 2);
    for (std::size_t i = 0; i < 30; ++i) {
      pm(i, 0) = 1.0;
      pm(i, 1) = -1.0;
    }
    double expect = 0.0;
    for (int k = 0; k <= 30; ++k)
      expect += std::exp(std::lgamma(31.0) - std::lgamma(k + 1.0) - std::lgamma(31.0 - k) - 30.0 * std::log(2.0)) *
                std::abs(2.0 * k - 30.0);
    CHECK(rademacher_complexity_exact(pm) == doctest::Approx(expect).epsilon(1e-12));
    // Both paths agree where both apply.
    RealTable same(12, 3);
    for (std::size_t i = 0; i < 12; ++i) {
      same(i, 0) = 0.4;
      same(i, 1) = -1.1;
      same(i, 2) = 0.9;
    }
    RealTable big(24, 3);
    for (std::size_t i = 0; i < 24; ++i)
      for (std::size_t s = 0; s < 3; ++s) big(i, s) = same(0, s);
    CHECK(rademacher_complexity_exact(same) == doctest::Approx(brute_force(same)).epsilon(1e-13));
    CHECK(rademacher_complexity_exact(big) > rademacher_complexity_exact(same));
    CHECK_THROWS_AS(rademacher_complexity_exact(random_table(23, 2, 1)), std::domain_error);
  }

  TEST_CASE("Monte Carlo Rademacher complexity") {
    const StatResult zero = rademacher_complexity_mc(RealTable(5, 3), 1000, 1);
    CHECK(zero.estimate == 0.0);
    CHECK(zero.std_error == 0.0);
    const StatResult single = rademacher_complexity_mc(random_table(6, 1, 4), 20000, 2);
    CHECK(std::abs(single.estimate) <= 3.0 * single.std_error);

    const RealTable t = random_table(8, 5, 6);
    const double exact = rademacher_complexity_exact(t);
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const StatResult mc = rademacher_complexity_mc(t, 2000, seed);
      if (std::abs(mc.estimate - exact) <= 3.0 * mc.std_error) ++inside;
    }
    CHECK(inside >= 97);
    CHECK_THROWS_AS(rademacher_complexity_mc(t, 0, 1), std::invalid_argument);
  }

  TEST_CASE("signs beyond the first 128 rows use further streams") {
    // 200 identical +-1 rows: E |sum eps_i| = 2^-200 sum_k C(200,k) |2k - 200|.
    RealTable pm(200, 2);
    for (std::size_t i = 0; i < 200; ++i) {
      pm(i, 0) = 1.0;
      pm(i, 1) = -1.0;
    }
    const double exact = rademacher_complexity_exact(pm);
    const StatResult mc = rademacher_complexity_mc(pm, 20000, 3);
    CHECK(std::abs(mc.estimate - exact) < 4.0 * mc.std_error);
  }

  TEST_CASE("stable complexity") {
    const FunctionClassTable zero(RealTable(2, 3), std::vector<double>(12), 2, 1.5);
    const StatResult z = stable_complexity_mc(zero, StableParams(1.5, 0.0, 1.0, 0.0), 5000, 1);
    CHECK(z.estimate == 0.0);
    CHECK(z.std_error == 0.0);

    const FunctionClassTable constant(RealTable(1, 1), std::vector<double>{0.7}, 1, 1.8);
    const StatResult c = stable_complexity_mc(constant, StableParams(1.8, 0.0, 1.0, 0.0), 200000, 2);
    CHECK(std::abs(c.estimate) <= 3.0 * c.std_error);

    const FunctionClassTable pm(RealTable(1, 2), std::vector<double>{1.0, -1.0}, 1, 1.8);
    const StatResult a = stable_complexity_mc(pm, StableParams(1.8, 0.0, 1.0, 0.0), 400000, 3);
    CHECK(std::abs(a.estimate - 1.0 / contraction_constant(1.8)) <= 3.0 * a.std_error);

    const FunctionClassTable g = generate_instance(3, 5, 2, 1.5, 9);
    std::vector<double> phi2(g.phi_data().begin(), g.phi_data().end());
    for (double& x : phi2) x *= 2.0;
    const FunctionClassTable g2(g.psi(), phi2, 2, 1.5);
    const StableParams law(1.5, 0.0, 1.0, 0.0);
    const StatResult e1 = stable_complexity_mc(g, law, 10000, 4);
    const StatResult e2 = stable_complexity_mc(g2, law, 10000, 4);
    CHECK(e2.estimate == 2.0 * e1.estimate);
    CHECK(stable_complexity_mc(g, law, 10000, 4, Workers{1}).estimate ==
          stable_complexity_mc(g, law, 10000, 4, Workers{3}).estimate);
  }

  TEST_CASE("stable complexity is monotone in the hypothesis set") {
    const FunctionClassTable g = generate_instance(3, 4, 2, 1.5, 10);
    std::vector<double> phi(3 * 2 * 5);
    for (std::size_t q = 0; q < 6; ++q) {
      for (std::size_t s = 0; s < 4; ++s) phi[q * 5 + s] = g.phi_data()[q * 4 + s];
      phi[q * 5 + 4] = 0.1;
    }
    const FunctionClassTable wider(RealTable(3, 5), phi, 2, 1.5);
    const StableParams law(1.5, 0.0, 1.0, 0.0);
    CHECK(stable_complexity_mc(wider, law, 5000, 1).estimate >= stable_complexity_mc(g, law, 5000, 1).estimate);
  }

  TEST_CASE("lemma instances") {
    const FunctionClassTable t = norm_table(3, 6, 1.5, 2);
    const RealTable phi(3, 6, std::vector<double>(t.phi_data().begin(), t.phi_data().end()));
    const std::vector<double> zero(6, 0.0);
    const auto r = verify_lemma_instance(t.psi().row(0), phi, zero, 1.5, 100000, 1);
    CHECK(r.pass);
    CHECK(r.rule == VerdictRule::kConstantInsideRhs);
    CHECK(r.constant == contraction_constant(1.5));

    // Constant psi: the left side is max f.
    const std::vector<double> flat(6, 0.3);
    const std::vector<double> f{0.1, -0.2, 0.5, 0.0, 0.4, -1.0};
    const auto rc = verify_lemma_instance(flat, phi, f, 1.5, 100000, 2);
    CHECK(rc.lhs == doctest::Approx(0.5));
    CHECK(rc.pass);

    // phi = 0 forces psi constant: both sides equal max f.
    const auto r0 = verify_lemma_instance(flat, RealTable(2, 6), f, 1.8, 1000, 3);
    CHECK(r0.lhs == 0.5);
    CHECK(r0.rhs == 0.5);
    CHECK(r0.rhs_err == 0.0);
    CHECK(r0.pass);

    std::vector<double> steep(t.psi().row(0).begin(), t.psi().row(0).end());
    for (double& x : steep) x *= 3.0;
    CHECK_THROWS_AS(verify_lemma_instance(steep, phi, zero, 1.5, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma_instance(flat, phi, std::vector<double>(5), 1.5, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma_instance(flat, phi, zero, 2.0, 100, 1), std::domain_error);
  }

  TEST_CASE("vector contraction") {
    for (double p : {1.2, 1.5, 1.8}) {
      const auto r = verify_vector_contraction(generate_instance(4, 6, 3, p, 100), 50000, 5);
      CHECK(r.pass);
      CHECK(r.lhs_trials == 0);
      CHECK(r.rhs_trials == 50000);
    }
    // A single hypothesis has zero complexity.
    const auto one = verify_vector_contraction(generate_instance(3, 1, 2, 1.5, 1), 1000, 1);
    CHECK(one.lhs == 0.0);
    CHECK(one.pass);

    // Identity coupling psi_i(s) = phi_i(s)_1 with K = 1.
    const FunctionClassTable g = generate_instance(4, 5, 1, 1.5, 3);
    const FunctionClassTable id(RealTable(4, 5, std::vector<double>(g.phi_data().begin(), g.phi_data().end())),
                                std::vector<double>(g.phi_data().begin(), g.phi_data().end()), 1, 1.5);
    CHECK(verify_vector_contraction(id, 100000, 2).pass);

    const FunctionClassTable bad(RealTable(1, 2, std::vector<double>{0.0, 5.0}), std::vector<double>{0.0, 1.0}, 1, 1.5);
    CHECK_THROWS_AS(verify_vector_contraction(bad, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_vector_contraction(generate_instance(2, 2, 1, 2.0, 1), 100, 1), std::domain_error);
  }

  TEST_CASE("piecewise linear maps") {
    const auto id = PiecewiseLinear::identity();
    const auto ab = PiecewiseLinear::absolute();
    const auto cl = PiecewiseLinear::clamp(-1.0, 1.0);
    for (double x : {-3.0, -0.5, 0.0, 0.25, 7.0}) {
      CHECK(id(x) == x);
      CHECK(ab(x) == std::abs(x));
      CHECK(cl(x) == std::clamp(x, -1.0, 1.0));
    }
    CHECK(ab.lipschitz_constant() == 1.0);
    CHECK(cl.lipschitz_constant() == 1.0);
    const PiecewiseLinear h({0.0, 1.0, 3.0}, {0.0, 2.0, 1.0}, 0.5, -0.25);
    CHECK(h(0.5) == 1.0);
    CHECK(h(2.0) == 1.5);
    CHECK(h(-2.0) == -1.0);
    CHECK(h(5.0) == 0.5);
    CHECK(h.lipschitz_constant() == 2.0);
    SequentialRng rng(1, 0);
    for (int j = 0; j < 50; ++j) CHECK(PiecewiseLinear::random(rng).lipschitz_constant() <= 1.0);
    CHECK_THROWS_AS(PiecewiseLinear({}, {}, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinear({1.0, 1.0}, {0.0, 0.0}, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinear({0.0}, {0.0, 1.0}, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinear({0.0}, {0.0}, NAN, 0.0), std::invalid_argument);
  }

  TEST_CASE("scalar contraction") {
    const RealTable f = random_table(10, 7, 12);
    const std::vector<PiecewiseLinear> ids(10, PiecewiseLinear::identity());
    const auto eq = verify_scalar_contraction(f, ids, 1.0);
    CHECK(eq.lhs == eq.rhs);
    CHECK(eq.pass);

    const std::vector<PiecewiseLinear> abs(10, PiecewiseLinear::absolute());
    CHECK(verify_scalar_contraction(f, abs, 1.0).pass);
    const std::vector<PiecewiseLinear> clamps(10, PiecewiseLinear::clamp(-0.5, 0.5));
    CHECK(verify_scalar_contraction(f, clamps, 1.0).pass);
    SequentialRng rng(4, 0);
    std::vector<PiecewiseLinear> rnd;
    for (int i = 0; i < 10; ++i) rnd.push_back(PiecewiseLinear::random(rng, -1.0, 1.0, 8));
    CHECK(verify_scalar_contraction(f, rnd, 1.0).pass);

    // A 3-Lipschitz map against L = 1 is rejected; against L = 3 it passes.
    const std::vector<PiecewiseLinear> steep(10, PiecewiseLinear({0.0}, {0.0}, 3.0, 3.0));
    CHECK_THROWS_AS(verify_scalar_contraction(f, steep, 1.0), std::invalid_argument);
    CHECK(verify_scalar_contraction(f, steep, 3.0).pass);
    CHECK_THROWS_AS(verify_scalar_contraction(f, abs, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(verify_scalar_contraction(f, std::vector<PiecewiseLinear>(3, PiecewiseLinear::identity()), 1.0),
                    std::invalid_argument);
  }

  TEST_CASE("p = 2 corollary") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = verify_corollary_p2(generate_instance(5, 8, 4, 2.0, seed), 50000, seed);
      CHECK(r.pass);
      CHECK(r.constant == std::numbers::sqrt2);
    }
    // K = 1 with psi = phi: both sides estimate the same quantity.
    const FunctionClassTable g = generate_instance(5, 6, 1, 2.0, 7);
    const FunctionClassTable id(RealTable(5, 6, std::vector<double>(g.phi_data().begin(), g.phi_data().end())),
                                std::vector<double>(g.phi_data().begin(), g.phi_data().end()), 1, 2.0);
    const auto r = verify_corollary_p2(id, 200000, 1);
    CHECK(std::abs(r.lhs - r.rhs) <= 3.0 * r.rhs_err);
    CHECK(r.pass);

    const auto zero = verify_corollary_p2(FunctionClassTable(RealTable(3, 2), std::vector<double>(12), 2, 2.0), 1000, 1);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);
    CHECK(zero.pass);
    CHECK_THROWS_AS(verify_corollary_p2(generate_instance(2, 2, 1, 1.5, 1), 100, 1), std::invalid_argument);
  }

  TEST_CASE("instance generator") {
    const FunctionClassTable a = generate_instance(5, 8, 4, 1.5, 3);
    const FunctionClassTable b = generate_instance(5, 8, 4, 1.5, 3);
    CHECK(a == b);
    CHECK_FALSE(a == generate_instance(5, 8, 4, 1.5, 4));
    CHECK(a.n() == 5);
    CHECK(a.m() == 8);
    CHECK(a.K() == 4);
    for (double x : a.phi_data()) {
      CHECK(x > -1.0);
      CHECK(x < 1.0);
    }
    CHECK_THROWS_AS(generate_instance(2, 0, 1, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_instance(2, 2, 1, 1.0, 1), std::invalid_argument);
  }
}
