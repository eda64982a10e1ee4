#include "stablecx/cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "stablecx/cli/report_io.hpp"
#include "stablecx/cli/table_io.hpp"
#include "stablecx/complexity.hpp"
#include "stablecx/counterexample.hpp"
#include "stablecx/empirical_sums.hpp"
#include "stablecx/special.hpp"
#include "stablecx/stable.hpp"
#include "stablecx/stats.hpp"

namespace stablecx::cli {
namespace {

using nlohmann::ordered_json;

struct Outcome {
  Report report;
  std::optional<std::string> document;  // written verbatim instead of a report
  bool has_points = false;
};

struct Law {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;

  StableParams params() const { return StableParams(alpha, beta, gamma, delta); }
  void record(ordered_json& config) const {
    config["alpha"] = alpha;
    config["beta"] = beta;
    config["gamma"] = gamma;
    config["delta"] = delta;
  }
};

void add_law(CLI::App* app, Law& law) {
  app->add_option("--alpha", law.alpha, "Characteristic exponent in (0, 2]")->required();
  app->add_option("--beta", law.beta, "Skewness in [-1, 1]")->capture_default_str();
  app->add_option("--gamma", law.gamma, "Scale, positive")->capture_default_str();
  app->add_option("--delta", law.delta, "Location")->capture_default_str();
}

Report from_check(std::string command, ordered_json config, const VerificationReport& check, std::uint64_t seed,
                  std::uint64_t trials) {
  Report r;
  r.command = std::move(command);
  r.config = std::move(config);
  r.check = check;
  r.verdict = check.pass;
  r.seed = seed;
  r.trials = trials;
  return r;
}

ordered_json table_config(const std::string& path, const FunctionClassTable& t) {
  ordered_json c;
  c["table"] = path;
  c["n"] = t.n();
  c["m"] = t.m();
  c["K"] = t.K();
  c["p"] = t.p();
  return c;
}

double unit_c_pr(double p, double r) { return std::pow(abs_moment(StableParams(p, 0.0, 1.0, 0.0), r), 1.0 / r); }

struct Settings {
  std::string format = "json";
  std::string output;
  std::string points;
  unsigned workers = 0;
};

int emit(const Outcome& outcome, const Settings& settings, std::ostream& out, std::ostream& err) {
  const std::string body = outcome.document
                               ? *outcome.document
                               : (settings.format == "csv" ? to_csv(outcome.report) : to_json(outcome.report));
  if (settings.output.empty()) {
    out << body;
  } else {
    std::ofstream file(settings.output, std::ios::binary);
    if (!(file << body)) {
      err << "error: cannot write report to '" << settings.output << "'\n";
      return kExitUsage;
    }
  }
  if (!settings.points.empty()) {
    std::ofstream file(settings.points, std::ios::binary);
    if (!(file << points_csv(outcome.report))) {
      err << "error: cannot write points to '" << settings.points << "'\n";
      return kExitUsage;
    }
  }
  if (!outcome.report.verdict) return kExitPass;
  return *outcome.report.verdict ? kExitPass : kExitFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable-law numerics and contraction-inequality checks", "stablecx"};
  app.fallthrough();
  app.require_subcommand(1);
  Settings settings;
  app.add_option("--format", settings.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", settings.output, "Write the report here instead of stdout");
  app.add_option("--emit-points", settings.points, "Also write (x, y) CSV pairs for plotting");
  app.add_option("--workers", settings.workers, "Worker threads, 0 = all cores (never changes results)");

  struct Leaf {
    CLI::App* app;
    std::function<Outcome()> handler;
  };
  std::vector<Leaf> leaves;
  Workers workers;

  // sample
  Law sample_law;
  std::size_t sample_count = 0;
  std::uint64_t sample_seed = 0;
  {
    auto* c = app.add_subcommand("sample", "Draw from S(alpha, beta, gamma, delta; 0)");
    add_law(c, sample_law);
    c->add_option("--count", sample_count, "Number of draws")->required()->check(CLI::PositiveNumber);
    c->add_option("--seed", sample_seed, "Random seed")->required();
    leaves.push_back({c, [&] {
                        const SampleBatch batch = sample(sample_law.params(), sample_count, sample_seed, workers);
                        Outcome o;
                        o.has_points = true;
                        auto& r = o.report;
                        r.command = "sample";
                        sample_law.record(r.config);
                        r.config["count"] = sample_count;
                        r.config["seed"] = sample_seed;
                        r.seed = sample_seed;
                        r.trials = sample_count;
                        r.columns = {"index", "value"};
                        for (std::size_t j = 0; j < batch.count(); ++j) {
                          r.rows.push_back({static_cast<double>(j), batch.values[j]});
                          r.points.emplace_back(static_cast<double>(j), batch.values[j]);
                        }
                        return o;
                      }});
  }

  // cf-check
  Law cf_law;
  std::vector<double> cf_ts{0.25, 0.5, 1.0, 2.0};
  std::size_t cf_samples = 1000000;
  std::uint64_t cf_seed = 0;
  {
    auto* c = app.add_subcommand("cf-check", "Compare the empirical and exact characteristic functions");
    add_law(c, cf_law);
    c->add_option("--t", cf_ts, "Comma-separated arguments")->delimiter(',')->capture_default_str();
    c->add_option("--samples", cf_samples, "Draws")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--seed", cf_seed, "Random seed")->required();
    leaves.push_back({c, [&] {
                        const StableParams params = cf_law.params();
                        const SampleBatch batch = sample(params, cf_samples, cf_seed, workers);
                        const double bound = 4.0 / std::sqrt(static_cast<double>(cf_samples));
                        Outcome o;
                        o.has_points = true;
                        auto& r = o.report;
                        r.command = "cf-check";
                        cf_law.record(r.config);
                        r.config["t"] = cf_ts;
                        r.config["samples"] = cf_samples;
                        r.config["seed"] = cf_seed;
                        r.columns = {"t", "cf_re", "cf_im", "empirical_re", "empirical_im", "bound"};
                        bool pass = true;
                        for (double t : cf_ts) {
                          const auto exact = cf(params, t);
                          const auto emp = empirical_cf(batch.values, t);
                          pass = pass && std::abs(emp.real() - exact.real()) <= bound &&
                                 std::abs(emp.imag() - exact.imag()) <= bound;
                          r.rows.push_back({t, exact.real(), exact.imag(), emp.real(), emp.imag(), bound});
                          r.points.emplace_back(t, emp.real());
                        }
                        r.verdict = pass;
                        r.seed = cf_seed;
                        r.trials = cf_samples;
                        return o;
                      }});
  }

  // tail-check
  Law tail_law;
  std::size_t tail_samples = 10000000;
  double tail_level = 1e-3;
  double tail_tolerance = 0.15;
  std::uint64_t tail_seed = 0;
  {
    auto* c = app.add_subcommand("tail-check", "Empirical exceedance at a high quantile against the tail asymptote");
    c->add_option("--alpha", tail_law.alpha, "Characteristic exponent in (0, 2)")->required();
    c->add_option("--beta", tail_law.beta, "Skewness in (-1, 1)")->capture_default_str();
    c->add_option("--gamma", tail_law.gamma, "Scale")->capture_default_str();
    c->add_option("--samples", tail_samples, "Draws")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--level", tail_level, "Upper tail mass of the quantile")->capture_default_str();
    c->add_option("--tolerance", tail_tolerance, "Allowed relative deviation of the ratio")->capture_default_str();
    c->add_option("--seed", tail_seed, "Random seed")->required();
    leaves.push_back({c, [&] {
                        const StableParams params = tail_law.params();
                        const TailFrequency tf = empirical_tail(params, tail_samples, tail_level, tail_seed, workers);
                        Outcome o;
                        auto& r = o.report;
                        r.command = "tail-check";
                        tail_law.record(r.config);
                        r.config["samples"] = tail_samples;
                        r.config["level"] = tail_level;
                        r.config["tolerance"] = tail_tolerance;
                        r.config["seed"] = tail_seed;
                        r.columns = {"x", "frequency", "asymptote", "ratio", "scaled_tail", "c_alpha"};
                        const double scaled = std::pow(tf.x, params.alpha()) * tf.frequency;
                        r.rows.push_back({tf.x, tf.frequency, tf.asymptote, tf.ratio, scaled,
                                          stable_tail_constant(params.alpha())});
                        r.verdict = std::abs(tf.ratio - 1.0) <= tail_tolerance;
                        r.seed = tail_seed;
                        r.trials = tail_samples;
                        return o;
                      }});
  }

  // stability, also reachable as "verify stability"
  double stab_p = 0.0;
  std::vector<double> stab_coefs;
  std::size_t stab_samples = 100000;
  std::uint64_t stab_seed = 0;
  auto stability_handler = [&] {
    const CoefVector v(stab_coefs, stab_p);
    const auto check = verify_stability_law(v, StableParams(stab_p, 0.0, 1.0, 0.0), stab_samples, stab_seed,
                                            workers);
    ordered_json config;
    config["p"] = stab_p;
    config["coefs"] = stab_coefs;
    config["samples"] = stab_samples;
    config["seed"] = stab_seed;
    return Outcome{from_check("stability", config, check, stab_seed, stab_samples), {}, false};
  };
  auto add_stability = [&](CLI::App* c) {
    c->add_option("--p", stab_p, "Stability index in (1, 2]")->required();
    c->add_option("--coefs", stab_coefs, "Comma-separated coefficients")->required()->delimiter(',');
    c->add_option("--samples", stab_samples, "Draws per side")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--seed", stab_seed, "Random seed")->required();
    leaves.push_back({c, stability_handler});
  };
  add_stability(app.add_subcommand("stability", "KS test of sum v_k X_k against the single equivalent law"));
  {
    auto* verify = app.add_subcommand("verify", "Alias group for verification commands");
    verify->require_subcommand(1);
    add_stability(verify->add_subcommand("stability", "Same as the top-level stability command"));
  }

  // moments
  double mom_p = 0.0;
  double mom_r = 1.0;
  std::vector<double> mom_coefs{1.0};
  std::size_t mom_trials = 1000000;
  double mom_tol = 0.02;
  std::uint64_t mom_seed = 0;
  {
    auto* c = app.add_subcommand("moments", "Monte Carlo c_{p,r} against quadrature, and C(p)");
    c->add_option("--p", mom_p, "Stability index in (1, 2]")->required();
    c->add_option("--r", mom_r, "Moment order, 0 < r < p")->capture_default_str();
    c->add_option("--coefs", mom_coefs, "Comma-separated coefficients")->delimiter(',')->capture_default_str();
    c->add_option("--trials", mom_trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--rel-tol", mom_tol, "Allowed relative gap to quadrature")->capture_default_str();
    c->add_option("--seed", mom_seed, "Random seed")->required();
    leaves.push_back({c, [&] {
                        const CoefVector v(mom_coefs, mom_p);
                        const StatResult mc = c_pr_estimate(mom_p, mom_r, v, mom_trials, mom_seed, workers);
                        const double quad = unit_c_pr(mom_p, mom_r);
                        const double gap = std::abs(mc.estimate - quad) / quad;
                        Outcome o;
                        auto& r = o.report;
                        r.command = "moments";
                        r.config["p"] = mom_p;
                        r.config["r"] = mom_r;
                        r.config["coefs"] = mom_coefs;
                        r.config["trials"] = mom_trials;
                        r.config["rel_tol"] = mom_tol;
                        r.config["seed"] = mom_seed;
                        r.columns = {"p", "r", "c_pr_mc", "c_pr_mc_err", "c_pr_quadrature", "relative_gap"};
                        std::vector<double> row{mom_p, mom_r, mc.estimate, mc.std_error, quad, gap};
                        if (mom_p < 2.0) {
                          r.columns.emplace_back("contraction_constant");
                          row.push_back(contraction_constant(mom_p));
                        }
                        r.rows.push_back(row);
                        r.verdict = gap <= mom_tol;
                        r.seed = mom_seed;
                        r.trials = mom_trials;
                        return o;
                      }});
  }

  // truncation
  double tr_p = 1.5;
  double tr_r = 1.0;
  std::size_t tr_length = 10000;
  double tr_decay = 1.0;
  std::vector<std::size_t> tr_cutoffs{10, 100, 1000};
  std::size_t tr_trials = 20000;
  std::uint64_t tr_seed = 0;
  {
    auto* c = app.add_subcommand("truncation", "L_r error of truncating sum_k k^-decay X_k after K terms");
    c->add_option("--p", tr_p, "Stability index in (1, 2)")->capture_default_str();
    c->add_option("--r", tr_r, "Moment order, 0 < r < p")->capture_default_str();
    c->add_option("--length", tr_length, "Number of coefficients")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--decay", tr_decay, "v_k = k^-decay")->capture_default_str();
    c->add_option("--cutoffs", tr_cutoffs, "Ascending truncation points")->delimiter(',')->capture_default_str();
    c->add_option("--trials", tr_trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--seed", tr_seed, "Random seed")->required();
    leaves.push_back({c, [&] {
                        std::vector<double> coefs(tr_length);
                        for (std::size_t k = 0; k < tr_length; ++k)
                          coefs[k] = std::pow(static_cast<double>(k + 1), -tr_decay);
                        const CoefVector v(coefs, tr_p);
                        const auto points =
                            lr_truncation_convergence(v, tr_r, tr_cutoffs, tr_trials, tr_seed, workers);
                        const double c_pr = unit_c_pr(tr_p, tr_r);
                        Outcome o;
                        o.has_points = true;
                        auto& r = o.report;
                        r.command = "truncation";
                        r.config["p"] = tr_p;
                        r.config["r"] = tr_r;
                        r.config["length"] = tr_length;
                        r.config["decay"] = tr_decay;
                        r.config["cutoffs"] = tr_cutoffs;
                        r.config["trials"] = tr_trials;
                        r.config["seed"] = tr_seed;
                        r.columns = {"K", "error", "stderr", "expected"};
                        for (const auto& pt : points) {
                          const auto tail = std::span<const double>(coefs).subspan(pt.cutoff);
                          const double expected = c_pr * p_norm(tail, tr_p);
                          const auto K = static_cast<double>(pt.cutoff);
                          r.rows.push_back({K, pt.error.estimate, pt.error.std_error, expected});
                          r.points.emplace_back(K, pt.error.estimate);
                        }
                        r.verdict = nonincreasing_within(points);
                        r.seed = tr_seed;
                        r.trials = tr_trials;
                        return o;
                      }});
  }

  // contraction scalar|vector|corollary|lemma
  std::string ct_table;
  std::string ct_h = "abs";
  double ct_lipschitz = 1.0;
  double ct_clamp_lo = -1.0;
  double ct_clamp_hi = 1.0;
  std::size_t ct_trials = 200000;
  std::optional<std::uint64_t> ct_seed;
  {
    auto* group = app.add_subcommand("contraction", "Contraction inequalities on a function-class table");
    group->require_subcommand(1);

    auto* scalar = group->add_subcommand("scalar", "Scalar contraction with h applied to the table's psi");
    scalar->add_option("--table", ct_table, "Table JSON")->required();
    scalar->add_option("--map", ct_h, "Lipschitz map applied to every row")
        ->check(CLI::IsMember({"abs", "clamp", "identity", "random"}))
        ->capture_default_str();
    scalar->add_option("--lipschitz", ct_lipschitz, "Lipschitz constant L")->capture_default_str();
    scalar->add_option("--clamp-lo", ct_clamp_lo, "Lower clamp bound")->capture_default_str();
    scalar->add_option("--clamp-hi", ct_clamp_hi, "Upper clamp bound")->capture_default_str();
    scalar->add_option("--seed", ct_seed, "Seed for --map random");
    leaves.push_back({scalar, [&] {
                        const LoadedTable loaded = load_table(ct_table);
                        const RealTable& f = loaded.table.psi();
                        if (ct_h == "random" && !ct_seed) throw std::invalid_argument("--map random needs --seed");
                        std::vector<PiecewiseLinear> h;
                        std::optional<SequentialRng> rng;
                        if (ct_seed) rng.emplace(*ct_seed, 0);
                        for (std::size_t i = 0; i < f.rows(); ++i) {
                          if (ct_h == "abs") h.push_back(PiecewiseLinear::absolute());
                          else if (ct_h == "clamp") h.push_back(PiecewiseLinear::clamp(ct_clamp_lo, ct_clamp_hi));
                          else if (ct_h == "identity") h.push_back(PiecewiseLinear::identity());
                          else h.push_back(PiecewiseLinear::random(*rng));
                        }
                        const auto check = verify_scalar_contraction(f, h, ct_lipschitz, workers);
                        ordered_json config = table_config(ct_table, loaded.table);
                        config["h"] = ct_h;
                        config["lipschitz"] = ct_lipschitz;
                        if (ct_h == "clamp") {
                          config["clamp_lo"] = ct_clamp_lo;
                          config["clamp_hi"] = ct_clamp_hi;
                        }
                        Report r = from_check("contraction scalar", config, check, 0, 0);
                        r.trials.reset();
                        if (ct_seed) {
                          r.config["seed"] = *ct_seed;
                          r.seed = *ct_seed;
                        } else {
                          r.seed.reset();
                        }
                        return Outcome{r, {}, false};
                      }});

    auto add_mc = [&](const char* name, const char* help, auto verify) {
      auto* c = group->add_subcommand(name, help);
      c->add_option("--table", ct_table, "Table JSON")->required();
      c->add_option("--trials", ct_trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
      c->add_option("--seed", ct_seed, "Random seed")->required();
      leaves.push_back({c, [&, name, verify] {
                          const LoadedTable loaded = load_table(ct_table);
                          const VerificationReport check = verify(loaded);
                          ordered_json config = table_config(ct_table, loaded.table);
                          config["trials"] = ct_trials;
                          config["seed"] = *ct_seed;
                          return Outcome{from_check(std::string("contraction ") + name, config, check, *ct_seed,
                                                    ct_trials),
                                         {},
                                         false};
                        }});
    };
    add_mc("vector", "Vector contraction with p-stable bounding variables", [&](const LoadedTable& t) {
      return verify_vector_contraction(t.table, ct_trials, *ct_seed, workers);
    });
    add_mc("corollary", "p = 2 corollary with doubly indexed Rademacher signs", [&](const LoadedTable& t) {
      return verify_corollary_p2(t.table, ct_trials, *ct_seed, workers);
    });
    add_mc("lemma", "Single-index lemma with offset (table with n = 1)", [&](const LoadedTable& t) {
      if (t.table.n() != 1) throw std::invalid_argument("table: the lemma needs n = 1");
      const auto psi = t.table.psi().row(0);
      const std::size_t m = t.table.m();
      const RealTable phi(t.table.K(), m, std::vector<double>(t.table.phi_data().begin(), t.table.phi_data().end()));
      const std::vector<double> f = t.offset ? *t.offset : std::vector<double>(m, 0.0);
      return verify_lemma_instance(psi, phi, f, t.table.p(), ct_trials, *ct_seed, workers);
    });
  }

  // counterexample exact|mc|table|sphere
  std::size_t ce_n = 0;
  double ce_p = 0.0;
  std::vector<std::size_t> ce_ns;
  std::size_t ce_trials = 100000;
  std::uint64_t ce_seed = 0;
  {
    auto* group = app.add_subcommand("counterexample", "Arithmetic of the l_p-norm counter-example");
    group->require_subcommand(1);
    auto row_columns = std::vector<std::string>{"n", "p", "lhs", "rhs_bound", "ratio"};
    auto row_values = [](const CounterexampleRow& row) {
      return std::vector<double>{static_cast<double>(row.n), row.p, row.lhs, row.rhs_bound, row.ratio};
    };

    auto* exact = group->add_subcommand("exact", "lhs = n/2 and rhs_bound = n^(1/p)");
    exact->add_option("--n", ce_n, "Dimension")->required()->check(CLI::PositiveNumber);
    exact->add_option("--p", ce_p, "Exponent in [1, 2]")->required();
    leaves.push_back({exact, [&, row_columns, row_values] {
                        Outcome o;
                        auto& r = o.report;
                        r.command = "counterexample exact";
                        r.config["n"] = ce_n;
                        r.config["p"] = ce_p;
                        r.columns = row_columns;
                        r.rows.push_back(row_values(counterexample_exact(ce_n, ce_p)));
                        return o;
                      }});

    auto* mc = group->add_subcommand("mc", "Simulate T_eps for random signs");
    mc->add_option("--n", ce_n, "Dimension, at most 30")->required()->check(CLI::PositiveNumber);
    mc->add_option("--p", ce_p, "Exponent in [1, 2]")->required();
    mc->add_option("--trials", ce_trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
    mc->add_option("--seed", ce_seed, "Random seed")->required();
    leaves.push_back({mc, [&] {
                        const CounterexampleMc res = counterexample_mc(ce_n, ce_p, ce_trials, ce_seed, workers);
                        const double exact_lhs = static_cast<double>(ce_n) / 2.0;
                        Outcome o;
                        auto& r = o.report;
                        r.command = "counterexample mc";
                        r.config["n"] = ce_n;
                        r.config["p"] = ce_p;
                        r.config["trials"] = ce_trials;
                        r.config["seed"] = ce_seed;
                        r.columns = {"n", "p", "lhs_mc", "lhs_mc_err", "lhs_exact", "rhs_exact", "max_rhs_deviation"};
                        r.rows.push_back({static_cast<double>(ce_n), ce_p, res.lhs.estimate, res.lhs.std_error,
                                          exact_lhs, res.rhs_exact, res.max_rhs_deviation});
                        r.verdict = std::abs(res.lhs.estimate - exact_lhs) <= 3.0 * res.lhs.std_error &&
                                    res.max_rhs_deviation <= 1e-12 * res.rhs_exact;
                        r.seed = ce_seed;
                        r.trials = ce_trials;
                        return o;
                      }});

    auto* table = group->add_subcommand("table", "Ratio column for ascending n");
    table->add_option("--p", ce_p, "Exponent in [1, 2]")->required();
    table->add_option("--ns", ce_ns, "Strictly ascending dimensions")->required()->delimiter(',');
    leaves.push_back({table, [&, row_columns, row_values] {
                        const DivergenceTable t = divergence_table(ce_ns, ce_p);
                        Outcome o;
                        o.has_points = true;
                        auto& r = o.report;
                        r.command = "counterexample table";
                        r.config["p"] = ce_p;
                        r.config["ns"] = ce_ns;
                        r.columns = row_columns;
                        bool constant_half = true;
                        for (const auto& row : t.rows) {
                          r.rows.push_back(row_values(row));
                          r.points.emplace_back(static_cast<double>(row.n), row.ratio);
                          constant_half = constant_half && row.ratio == 0.5;
                        }
                        r.verdict = t.divergent ? t.strictly_increasing : constant_half;
                        return o;
                      }});

    auto* sphere = group->add_subcommand("sphere", "p = 1 unit-sphere family");
    sphere->add_option("--n", ce_n, "Dimension")->required()->check(CLI::PositiveNumber);
    leaves.push_back({sphere, [&] {
                        const SphereCase sc = sphere_family_case(ce_n, workers);
                        Outcome o;
                        auto& r = o.report;
                        r.command = "counterexample sphere";
                        r.config["n"] = ce_n;
                        r.columns = {"n", "lhs", "rhs_bound"};
                        r.rows.push_back({static_cast<double>(ce_n), sc.lhs, sc.rhs_bound});
                        r.verdict = sc.lhs == 0.0 && sc.rhs_bound == static_cast<double>(ce_n);
                        return o;
                      }});
  }

  // gen-instance
  std::size_t gen_n = 0;
  std::size_t gen_m = 0;
  std::size_t gen_K = 0;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 0;
  bool gen_offset = false;
  {
    auto* c = app.add_subcommand("gen-instance", "Emit a random table satisfying the Lipschitz coupling");
    c->add_option("--n", gen_n, "Rows (sample points)")->required();
    c->add_option("--m", gen_m, "Hypotheses")->required()->check(CLI::PositiveNumber);
    c->add_option("--K", gen_K, "Feature dimension")->required()->check(CLI::PositiveNumber);
    c->add_option("--p", gen_p, "Exponent in (1, 2]")->required();
    c->add_option("--seed", gen_seed, "Random seed")->required();
    c->add_flag("--offset", gen_offset, "Add a random offset row f for the lemma");
    leaves.push_back({c, [&] {
                        const FunctionClassTable t = generate_instance(gen_n, gen_m, gen_K, gen_p, gen_seed);
                        std::optional<std::vector<double>> f;
                        if (gen_offset) {
                          SequentialRng rng(gen_seed, 1);
                          f.emplace(gen_m);
                          for (double& x : *f) x = rng.uniform(-1.0, 1.0);
                        }
                        Outcome o;
                        o.report.command = "gen-instance";
                        o.document = table_to_json(t, f);
                        return o;
                      }});
  }

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("stablecx");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  workers.count = settings.workers;

  for (const auto& leaf : leaves) {
    if (!leaf.app->parsed()) continue;
    Outcome outcome;
    try {
      outcome = leaf.handler();
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    if (!settings.points.empty() && !outcome.has_points) {
      err << "error: --emit-points is not available for '" << outcome.report.command << "'\n";
      return kExitUsage;
    }
    return emit(outcome, settings, out, err);
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace stablecx::cli
