// Acceptance suite. One PASS/FAIL line per criterion; `--criterion k` runs a
// single one. Exit status is nonzero when any selected criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "icoutage/analysis.hpp"
#include "icoutage/channel.hpp"
#include "icoutage/simulator.hpp"
#include "oracles.hpp"

using namespace icoutage;

namespace {

// Pinned tolerances.
constexpr double kRegressionTol = 5e-4;
constexpr double kOracleTol = 1e-9;
constexpr double kLimitTol = 1e-3;
constexpr double kMinOverNTol = 1e-9;
constexpr double kLimitGapTol = 5e-3;
constexpr double kAlgebraTol = 1e-12;
constexpr double kSigmaBand = 3.0;
constexpr double kPositionTol = 0.02;
constexpr double kPositionProb = 0.99;
constexpr double kRateRelTol = 0.01;
constexpr double kHalfKappaTol = 1e-12;

struct Detail {
  bool ok;
  std::string text;
};

struct Outcome {
  std::vector<Detail> details;
  void add(bool ok, std::string text) { details.push_back({ok, std::move(text)}); }
  bool ok() const {
    return std::all_of(details.begin(), details.end(), [](const Detail& d) { return d.ok; });
  }
};

std::string fmt(const char* f, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string near_text(const char* name, double got, double want, double tol) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s = %.6f, expected %.4f +- %.0e", name, got, want, tol);
  return buf;
}

const GaussianIC kExample3{1000.0, 1000.0, 0.8, 1.5};

DiscreteIC kernel39() {
  const std::vector<double> k{0.3266, 0.1314, 0.1674, 0.3588, 0.0158,  //
                              0.3148, 0.0612, 0.2158, 0.1898, 0.2184,  //
                              0.1905, 0.3272, 0.4279, 0.0102, 0.0442,  //
                              0.4091, 0.2734, 0.0970, 0.1693, 0.0512};
  return DiscreteIC{2, 2, 5, 5, k, k, 0, 0};
}

// Thresholds consistent with rho1 = 0.016 and rho2 = 0.0501 at the
// discrete example's operating point (lambda = 0.1, r = 1.1).
InfoQuantities example1_thresholds() {
  InfoQuantities q;
  q.c_star = {0.725, 0.08 + 0.03 / 0.0501};
  q.c = {0.1, 0.08};
  q.c_cross = q.c_star;
  q.c_tilde_star = q.c_star;
  q.c_tilde = q.c;
  return q;
}

// ------------------------------------------------------------------ 1
Outcome criterion1() {
  Outcome o;
  const InfoQuantities q = gaussian_info_quantities(kExample3);
  auto near = [&](const char* name, double got, double want) {
    o.add(std::abs(got - want) <= kRegressionTol, near_text(name, got, want, kRegressionTol));
  };
  near("C1", q.c[0], 0.5845);
  near("C2", q.c[1], 0.3683);
  near("C1*", q.c_star[0], 4.9836);
  near("C2*", q.c_star[1], 4.9836);
  near("C~1", q.c_tilde[0], 0.4237);
  near("C~2", q.c_tilde[1], 0.6605);
  near("C~1*", q.c_tilde_star[0], 4.8228);
  near("C~2*", q.c_tilde_star[1], 5.2759);
  const LambdaThresholds t = lambda_thresholds(q);
  near("lambda_TIN", t.tin, 0.3720);
  near("lambda_bar", lambda_bar(kExample3), 4.9836);
  o.add(true, "lambda_DI recomputed = " + fmt("%.6f", t.di) + " (reference figure 0.4279 noted)");
  return o;
}

// ------------------------------------------------------------------ 2
Outcome criterion2() {
  Outcome o;
  const auto pi = InputDistribution::bernoulli(0.2);
  const InfoQuantities q = info_quantities(kernel39(), pi, pi);
  const double r1 = rho(q, 0, 1.1, 0.1, DecoderMode::tin).value;
  const double r2 = rho(q, 1, 1.1, 0.1, DecoderMode::tin).value;
  o.add(std::abs(r1 - 0.016) <= kRegressionTol, near_text("rho1", r1, 0.016, kRegressionTol));
  o.add(std::abs(r2 - 0.0501) <= kRegressionTol, near_text("rho2", r2, 0.0501, kRegressionTol));
  return o;
}

// ------------------------------------------------------------------ 3
Outcome criterion3() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240301);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int tuples = 10000;
  double worst = 0.0;
  std::array<int, 4> branches{};
  for (int k = 0; k < tuples; ++k) {
    const int n = 1 + static_cast<int>(rng() % 500);
    const double r = 1.0 + 2.0 * u(rng);
    double rho_v = std::min(1.0, r - 1.0) * u(rng);
    if (rho_v <= 0.0) rho_v = 1e-12;
    const double alpha = 0.05 + 4.95 * u(rng);
    const double lambda = 0.01 + 0.99 * u(rng);
    const OutageInputs in = make_outage_inputs(alpha, {rho_v, rho_v}, r);
    const OutageBound b = outage_ub_finite_n(in, n, 0);
    ++branches[static_cast<std::size_t>(b.branch)];
    const double ref = oracle::outage_by_intervals(n, r, rho_v, lambda, alpha / lambda, true, true);
    worst = std::max(worst, std::abs(b.p - ref));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "max |closed form - interval oracle| = %.3e over %d tuples (tol %.0e); branches %d/%d/%d",
                worst, tuples, kOracleTol, branches[1], branches[2], branches[3]);
  o.add(worst <= kOracleTol, buf);
  o.add(secs < 10.0, "runtime " + fmt("%.2f", secs) + " s (limit 10 s)");
  return o;
}

// ------------------------------------------------------------------ 4
Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4444);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double r = 1.0 + 2.0 * u(rng);
    const double rho_v = std::min(1.0, r - 1.0) * u(rng);
    const OutageInputs in = make_outage_inputs(0.05 + 4.95 * u(rng), {rho_v, rho_v}, r);
    if (!in.chi1[0]) continue;
    worst = std::max(worst, std::abs(outage_ub_finite_n(in, 100000, 0).p - in.kappa * in.beta[0]));
  }
  o.add(worst < kLimitTol, "max |p(N=1e5) - kappa beta| = " + fmt("%.3e", worst) + " over 100 tuples (tol 1e-3)");
  return o;
}

// ------------------------------------------------------------------ 5
Outcome criterion5() {
  Outcome o;
  const InfoQuantities q = example1_thresholds();
  for (int i = 0; i < 2; ++i) {
    const SchemeParams hi{0.1, 1.1, 1, 1.5 / 0.1, {}};
    const OutageInputs in_hi = outage_inputs(q, hi);
    double min_step = 1e300;
    int first_drop = 0;
    double prev = outage_ub_finite_n(in_hi, 1, i).p;
    for (int n = 2; n <= 200; ++n) {
      const double p = outage_ub_finite_n(in_hi, n, i).p;
      min_step = std::min(min_step, p - prev);
      if (p < prev && first_drop == 0) first_drop = n;
      prev = p;
    }
    o.add(first_drop == 0, "user " + std::to_string(i + 1) + ", alpha=1.5: nondecreasing over N=1..200, min step " +
                               fmt("%.3e", min_step));

    const SchemeParams lo{0.1, 1.1, 1, 0.5 / 0.1, {}};
    const OutageInputs in_lo = outage_inputs(q, lo);
    const double lim = outage_ub_limit(in_lo, i);
    double min_p = 1e300;
    for (int n = 1; n <= 200; ++n) min_p = std::min(min_p, outage_ub_finite_n(in_lo, n, i).p);
    const double gap = outage_ub_finite_n(in_lo, 200, i).p - lim;
    o.add(min_p >= lim - kMinOverNTol, "user " + std::to_string(i + 1) + ", alpha=0.5: min_N p - limit = " +
                                           fmt("%.3e", min_p - lim) + " (>= -1e-9)");
    o.add(gap < kLimitGapTol, "user " + std::to_string(i + 1) + ", alpha=0.5: p(200) - limit = " + fmt("%.3e", gap) +
                                  " (< 5e-3)");
  }
  return o;
}

// ------------------------------------------------------------------ 6
Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int region_mismatch = 0, inside = 0;
  for (int k = 0; k < 1000; ++k) {
    const double beta = 0.5 * u(rng);
    const double alpha = (1.0 + beta) / 2.0 + 1e-9 + 2.5 * u(rng);
    const double r = 2.0;
    const OutageInputs in = make_outage_inputs(alpha, {beta * r, beta * r}, r);
    const double diff = outage_ub_finite_n(in, 2, 0).p - outage_ub_finite_n(in, 1, 0).p;
    worst = std::max(worst, std::abs(diff - beta / (alpha * alpha) * (0.75 * beta + alpha - 1.0)));
    const bool region = beta < 0.4 && alpha < 1.0 - 0.75 * beta;
    inside += region ? 1 : 0;
    if ((diff < 0.0) != region) ++region_mismatch;
  }
  o.add(worst <= kAlgebraTol, "max |(p2 - p1) - closed difference| = " + fmt("%.3e", worst) + " (tol 1e-12)");
  o.add(region_mismatch == 0, "N=2 beats N=1 exactly on the stated region: " + std::to_string(region_mismatch) +
                                  " mismatches, " + std::to_string(inside) + " samples inside");
  return o;
}

// ------------------------------------------------------------------ 7
Outcome criterion7() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const InfoQuantities q = example1_thresholds();
  const long long trials = 100000;
  int outside = 0, compared = 0;
  long long disagreements = 0, membership_checked = 0;
  double worst_z = 0.0;
  std::uint64_t seed = 700;
  for (int k = 1; k <= 8; ++k) {
    const double alpha = 0.25 * k;
    for (int n : {1, 4, 16}) {
      SimConfig cfg;
      cfg.scheme = SchemeParams{0.1, 1.1, n, alpha / 0.1, {DecoderMode::tin, DecoderMode::tin}};
      cfg.trials = trials;
      cfg.seed = seed++;
      const SimResult res = run_trials(cfg, q);
      const OutageInputs in = outage_inputs(q, cfg.scheme);
      for (int i = 0; i < 2; ++i) {
        const double p = outage_ub_finite_n(in, n, i).p;
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
        const double dev = std::abs(res.outage[i] - p);
        const bool ok = sigma > 0.0 ? dev <= kSigmaBand * sigma : dev == 0.0;
        if (!ok) ++outside;
        if (sigma > 0.0) worst_z = std::max(worst_z, dev / sigma);
        ++compared;
      }
      const double theta = 1.0 / (n * 1.1 * 0.1);
      for (long long t = 0; t < trials; ++t) {
        const TrialOutcome tr = simulate_trial(cfg, q, t);
        const double dn = std::abs(tr.d2 - tr.d1) / theta;
        for (int i = 0; i < 2; ++i) {
          const bool member = oracle::admissible(dn, n, 1.1, in.rho[i], in.chi1[i], in.chi2[i]);
          if (member == tr.outage[i]) ++disagreements;
          ++membership_checked;
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.add(outside == 0, std::to_string(compared - outside) + "/" + std::to_string(compared) +
                          " empirical outages within 3 sigma of the closed form (max deviation " +
                          fmt("%.2f", worst_z) + " sigma)");
  o.add(disagreements == 0, std::to_string(disagreements) + " disagreements between simulated decoding and "
                                "admissible-set membership over " + std::to_string(membership_checked) + " checks");
  o.add(secs < 60.0, "runtime " + fmt("%.1f", secs) + " s (limit 60 s)");
  return o;
}

// ------------------------------------------------------------------ 8
Outcome criterion8() {
  Outcome o;
  const long long n = 1000000;
  const int packets = 10;
  const double lambda = 0.1, r = 1.5;
  const int runs = 100;
  int within = 0;
  double worst = 0.0;
  std::vector<double> mean_pos(packets, 0.0);
  std::array<double, 2> rate_sum{};
  for (int run = 0; run < runs; ++run) {
    CounterRng rng(8000 + static_cast<std::uint64_t>(run), 0);
    double run_max = 0.0;
    for (int i = 0; i < 2; ++i) {
      const TauTrace t = simulate_tau(lambda, n, packets, r, rng);
      for (int j = 1; j <= packets; ++j) {
        const double pos = t.tau[static_cast<std::size_t>(j - 1)] / t.codeword_length;
        run_max = std::max(run_max, std::abs(pos - j * r));
        mean_pos[static_cast<std::size_t>(j - 1)] += pos / (2.0 * runs);
      }
      rate_sum[i] += static_cast<double>(n) / (t.tau.back() + t.codeword_length);
    }
    worst = std::max(worst, run_max);
    if (run_max < kPositionTol) ++within;
  }
  const double frac = static_cast<double>(within) / runs;
  o.add(frac >= kPositionProb, "runs with max_j |tau_j/(n theta) - j r| < 0.02: " + std::to_string(within) + "/" +
                                   std::to_string(runs) + " (need >= 99%), worst " + fmt("%.4f", worst));
  double mean_dev = 0.0;
  for (int j = 1; j <= packets; ++j)
    mean_dev = std::max(mean_dev, std::abs(mean_pos[static_cast<std::size_t>(j - 1)] - j * r));
  o.add(true, "position averaged over runs deviates by at most " + fmt("%.4f", mean_dev) +
                  "; single-run std at j=N is sqrt(n(1-lambda))/(lambda L) = " +
                  fmt("%.4f", std::sqrt(n * (1.0 - lambda)) / lambda / (n / (packets * r * lambda))));
  const double want = avg_rate(packets, r, lambda);
  for (int i = 0; i < 2; ++i) {
    const double mean = rate_sum[i] / runs;
    o.add(std::abs(mean - want) < kRateRelTol * want,
          "user " + std::to_string(i + 1) + " mean rate " + fmt("%.6f", mean) + " vs " + fmt("%.6f", want) +
              " (rel err " + fmt("%.2e", std::abs(mean - want) / want) + ", tol 1%)");
  }
  return o;
}

// ------------------------------------------------------------------ 9
Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int middle = 0, chi_cases = 0, violations = 0;
  for (int k = 0; k < 2000; ++k) {
    InfoQuantities q;
    for (int i = 0; i < 2; ++i) {
      q.c[i] = 0.05 + 0.4 * u(rng);
      q.c_star[i] = q.c[i] + 0.05 + 0.8 * u(rng);
    }
    q.c_cross = q.c_star;
    q.c_tilde_star = q.c_star;
    q.c_tilde = q.c;
    const double d = 0.2 + 30.0 * u(rng);
    const int user = static_cast<int>(rng() % 2);
    const double lambda = std::min(1.0, q.c[user] + (q.c_star[user] - q.c[user]) * u(rng));
    if (lambda > q.c[user] && lambda <= q.c_star[user]) {
      const double lim = outage_ub_subunit_rate(q, user, lambda, 0.5, 10, d).limit;
      worst = std::max(worst, std::abs(lim - 0.5 * kappa(lambda * d)));
      ++middle;
    }
    const double r = 1.0 + 2.0 * u(rng);
    const OutageInputs in = outage_inputs(q, SchemeParams{lambda, r, 1, d, {}});
    for (int i = 0; i < 2; ++i) {
      if (!in.chi1[i]) continue;
      ++chi_cases;
      if (!(in.kappa * in.beta[i] < 0.5 * in.kappa)) ++violations;
    }
  }
  o.add(worst <= kHalfKappaTol, "max |r<1 limit - kappa/2| = " + fmt("%.3e", worst) + " over " +
                                    std::to_string(middle) + " cases (tol 1e-12)");
  o.add(violations == 0 && chi_cases > 0, "kappa beta < kappa/2 in " + std::to_string(chi_cases - violations) + "/" +
                                              std::to_string(chi_cases) + " cases with chi1 = 1");
  return o;
}

// ------------------------------------------------------------------ 10
Outcome criterion10() {
  Outcome o;
  const InfoQuantities q = gaussian_info_quantities(kExample3);
  const double bar = lambda_bar(kExample3);
  const double d = 5.0;
  auto eps = [&](double lambda, DecoderMode m) {
    const EpsilonResult e = epsilon_bound(q, lambda, d, {m, m}, bar);
    return e.kind == EpsilonResult::Kind::not_applicable ? std::nan("") : e.value;
  };
  auto diff = [&](double lambda) { return eps(lambda, DecoderMode::di) - eps(lambda, DecoderMode::tin); };

  int hi_bad = 0, hi_n = 0;
  for (int k = 0; k <= 105; ++k) {
    const double lambda = 1.35 + 0.01 * k;
    ++hi_n;
    if (!(diff(lambda) < 0.0)) ++hi_bad;
  }
  int lo_bad = 0, lo_n = 0;
  for (int k = 0; k <= 65; ++k) {
    const double lambda = 0.45 + 0.01 * k;
    ++lo_n;
    if (!(diff(lambda) > 0.0)) ++lo_bad;
  }
  o.add(hi_bad == 0, "eps_DI < eps_TIN on [1.35, 2.4]: holds at " + std::to_string(hi_n - hi_bad) + "/" +
                         std::to_string(hi_n) + " points (diff at 2.0 = " + fmt("%+.4f", diff(2.0)) + ")");
  o.add(lo_bad == 0, "eps_DI > eps_TIN on [0.45, 1.1]: holds at " + std::to_string(lo_n - lo_bad) + "/" +
                         std::to_string(lo_n) + " points (diff at 0.8 = " + fmt("%+.4f", diff(0.8)) + ")");

  // Sign change of the difference between the two ranges.
  double a = 1.1, b = 1.4;
  const double fa = diff(a), fb = diff(b);
  bool bracket = std::isfinite(fa) && std::isfinite(fb) && (fa > 0.0) != (fb > 0.0);
  if (bracket) {
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (a + b);
      ((diff(m) > 0.0) == (fa > 0.0) ? a : b) = m;
    }
  }
  o.add(bracket, bracket ? "curves cross at lambda = " + fmt("%.4f", 0.5 * (a + b)) + ", inside [1.1, 1.4]"
                         : std::string("no crossing inside [1.1, 1.4]"));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Gaussian regression constants", criterion1},
      {2, "discrete regression rho values", criterion2},
      {3, "finite-N bound equals the interval-sum oracle", criterion3},
      {4, "finite-N bound tends to kappa beta", criterion4},
      {5, "phase transition in N", criterion5},
      {6, "two-packet versus one-packet algebra", criterion6},
      {7, "fluid simulation versus closed form", criterion7},
      {8, "stochastic convergence of positions and rates", criterion8},
      {9, "sub-unit rate limit versus kappa beta", criterion9},
      {10, "TIN/DI crossover", criterion10},
  };
  int only = 0;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--criterion") == 0 && k + 1 < argc) only = std::atoi(argv[++k]);
  }
  bool all_ok = true;
  bool any = false;
  for (const Criterion& c : all) {
    if (only != 0 && c.id != only) continue;
    any = true;
    Outcome out;
    bool ok = false;
    try {
      out = c.run();
      ok = out.ok();
    } catch (const std::exception& e) {
      out.add(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %d %s: %s\n", c.id, ok ? "PASS" : "FAIL", c.title);
    for (const Detail& d : out.details) std::printf("    [%s] %s\n", d.ok ? "ok" : "FAIL", d.text.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  if (!any) {
    std::fprintf(stderr, "unknown criterion %d\n", only);
    return 2;
  }
  return all_ok ? 0 : 1;
}
