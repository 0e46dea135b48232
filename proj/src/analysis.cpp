#include "icoutage/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace icoutage {

namespace {

constexpr double kAdditiveTolerance = 1e-9;
constexpr double kRangeTolerance = 1e-12;

double sq(double x) { return x * x; }

std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void require_user(int user) {
  if (user != 0 && user != 1) throw AnalysisError("user index must be 0 or 1");
}

Interval intersect(const Interval& x, const Interval& y) {
  if (x.empty() || y.empty()) return Interval::empty_interval();
  Interval out;
  out.lo = std::max(x.lo, y.lo);
  out.unbounded = x.unbounded && y.unbounded;
  if (!out.unbounded) {
    if (x.unbounded) out.hi = y.hi;
    else if (y.unbounded) out.hi = x.hi;
    else out.hi = std::min(x.hi, y.hi);
  }
  return out.empty() ? Interval::empty_interval() : out;
}

// Feasible r set of one user: rho_i(r) < min{1, r-1}.
Interval user_feasible_set(const InfoQuantities& info, int i, double lambda, DecoderMode mode) {
  auto checked = [](double a, double b, const char* what) {
    if (!(a > b)) {
      throw AnalysisError(std::string("nonpositive denominator in rho: ") + what);
    }
  };
  if (mode == DecoderMode::tin) {
    checked(info.c_star[i], info.c[i], "C* - C");
    return lemma1_interval(info.c_star[i], info.c[i], lambda);
  }
  checked(info.c_tilde_star[i], info.c_tilde[i], "C~* - C~");
  Interval tilde = lemma1_interval(info.c_tilde_star[i], info.c_tilde[i], lambda);
  if (std::abs(info.c_star[i] - info.c_cross[i]) < kAdditiveTolerance) {
    return intersect(tilde, Interval{1.0, info.c_star[i] / lambda, false});
  }
  checked(info.c_star[i], info.c_cross[i], "C* - C_cross");
  return intersect(tilde, lemma1_interval(info.c_star[i], info.c_cross[i], lambda));
}

bool feasible_at(const InfoQuantities& info, double lambda, std::array<DecoderMode, 2> modes,
                 double r) {
  if (!(r > 1.0)) return false;
  for (int i = 0; i < 2; ++i) {
    const Rho p = rho(info, i, r, lambda, modes[i]);
    if (!(p.value < std::min(1.0, r - 1.0))) return false;
    if (p.r_cap && !(r < *p.r_cap)) return false;
  }
  return true;
}

double threshold(const InfoQuantities& info, int i, DecoderMode mode) {
  return mode == DecoderMode::tin ? info.c[i] : std::min(info.c_cross[i], info.c_tilde[i]);
}

}  // namespace

ConverseViolation::ConverseViolation(double lambda, double threshold)
    : std::runtime_error("lambda exceeds converse threshold " + format_fixed4(threshold)),
      lambda_(lambda),
      threshold_(threshold) {}

void validate(const SchemeParams& s) {
  if (!(s.lambda > 0.0 && s.lambda <= 1.0)) throw AnalysisError("lambda must lie in (0, 1]");
  if (!(s.r > 0.0)) throw AnalysisError("r must be positive");
  if (s.n_packets < 1) throw AnalysisError("n_packets must be at least 1");
  if (!(s.d_max > 0.0)) throw AnalysisError("d_max must be positive");
}

Rho rho(const InfoQuantities& info, int user, double r, double lambda, DecoderMode mode) {
  require_user(user);
  if (!(r > 0.0)) throw AnalysisError("rho: r must be positive");
  const int i = user;
  const double rate = lambda * r;
  Rho out;
  if (mode == DecoderMode::tin) {
    const double den = info.c_star[i] - info.c[i];
    if (!(den > 0.0)) throw AnalysisError("rho: nonpositive denominator C* - C");
    out.value = (rate - info.c[i]) / den;
    return out;
  }
  const double den_tilde = info.c_tilde_star[i] - info.c_tilde[i];
  if (!(den_tilde > 0.0)) throw AnalysisError("rho: nonpositive denominator C~* - C~");
  const double tilde = (rate - info.c_tilde[i]) / den_tilde;
  if (std::abs(info.c_star[i] - info.c_cross[i]) < kAdditiveTolerance) {
    out.value = tilde;
    out.r_cap = info.c_star[i] / lambda;
    out.additive = true;
    return out;
  }
  const double den = info.c_star[i] - info.c_cross[i];
  if (!(den > 0.0)) throw AnalysisError("rho: nonpositive denominator C* - C_cross");
  out.value = std::max((rate - info.c_cross[i]) / den, tilde);
  return out;
}

double kappa(double alpha) {
  if (!(alpha > 0.0)) throw AnalysisError("kappa: alpha must be positive");
  if (alpha < 1.0) return 2.0;
  return (2.0 / alpha) * (2.0 - 1.0 / alpha);
}

double delta_cdf(double delta, double d_max) {
  if (!(d_max > 0.0)) throw AnalysisError("delta_cdf: d_max must be positive");
  if (delta <= 0.0) return 0.0;
  if (delta >= d_max) return 1.0;
  const double u = delta / d_max;
  return u * (2.0 - u);
}

std::vector<Interval> admissible_intervals(double r, double rho_i, int n_packets) {
  if (!(r > 1.0)) throw AnalysisError("admissible_intervals: r must exceed 1");
  if (n_packets < 1) throw AnalysisError("admissible_intervals: N must be at least 1");
  std::vector<Interval> out;
  out.reserve(static_cast<std::size_t>(n_packets));
  for (int j = 1; j < n_packets; ++j) {
    Interval a{(j - 1) * r + rho_i, j * r - rho_i, false};
    out.push_back(a.empty() ? Interval::empty_interval() : a);
  }
  out.push_back(Interval{(n_packets - 1) * r + rho_i, 0.0, true});
  return out;
}

Interval lemma1_interval(double a, double b, double lambda) {
  if (!(a > b) || !(b >= 0.0)) throw AnalysisError("lemma1_interval: requires a > b >= 0");
  if (!(lambda > 0.0)) throw AnalysisError("lemma1_interval: lambda must be positive");
  const double half = a / 2.0;
  if (lambda < std::min(b, half)) return {1.0, a / lambda, false};
  if (half <= lambda && lambda < b) return {1.0, (a - 2.0 * b) / (a - b - lambda), false};
  if (b <= lambda && lambda < half) return {(a - 2.0 * b) / (a - b - lambda), a / lambda, false};
  return Interval::empty_interval();
}

OutageInputs make_outage_inputs(double alpha, std::array<double, 2> rho_values, double r,
                                std::array<std::optional<double>, 2> caps) {
  if (!(alpha > 0.0)) throw AnalysisError("alpha must be positive");
  if (!(r > 0.0)) throw AnalysisError("r must be positive");
  OutageInputs in;
  in.alpha = alpha;
  in.kappa = kappa(alpha);
  for (int i = 0; i < 2; ++i) {
    const bool within_cap = !caps[i] || r < *caps[i];
    in.rho[i] = rho_values[i];
    in.beta[i] = rho_values[i] / r;
    in.chi1[i] = within_cap && rho_values[i] < std::min(1.0, r - 1.0);
    in.chi2[i] = within_cap && rho_values[i] < 1.0;
    if (in.chi1[i] && !(in.beta[i] < 0.5)) {
      throw std::logic_error("chi1 holds but beta >= 1/2");
    }
  }
  return in;
}

OutageInputs outage_inputs(const InfoQuantities& info, const SchemeParams& scheme) {
  std::array<double, 2> values{};
  std::array<std::optional<double>, 2> caps;
  for (int i = 0; i < 2; ++i) {
    const Rho p = rho(info, i, scheme.r, scheme.lambda, scheme.decoder[i]);
    values[i] = p.value;
    caps[i] = p.r_cap;
  }
  return make_outage_inputs(scheme.lambda * scheme.d_max, values, scheme.r, caps);
}

OutageBound outage_ub_finite_n(const OutageInputs& in, int n_packets, int user) {
  require_user(user);
  if (n_packets < 1) throw AnalysisError("outage_ub_finite_n: N must be at least 1");
  const double beta = in.beta[user];
  if (in.rho[user] < 0.0) {
    throw AnalysisError("outage_ub_finite_n: rho is negative; the outage is zero");
  }
  const double n = n_packets;
  const double x = n * in.alpha;
  const double c1 = in.chi1[user] ? 1.0 : 0.0;
  const double c2 = in.chi2[user] ? 1.0 : 0.0;
  const long long m = static_cast<long long>(std::ceil(x - beta));

  OutageBound out;
  out.m = m;
  out.rho_zero = in.rho[user] == 0.0;
  if (m <= 0 || (m <= n_packets - 1 && static_cast<double>(m) <= x + beta)) {
    const double u = static_cast<double>(std::max(m, 0LL)) / x;
    out.branch = 1;
    out.p = 1.0 - (1.0 - 2.0 * beta) * (2.0 - u) * u * c1;
  } else if (m <= n_packets - 1) {
    const double u = static_cast<double>(m - 1) / x;
    out.branch = 2;
    out.p = 1.0 - ((1.0 - 2.0 * beta) * (2.0 - u) * u +
                   sq(1.0 - (static_cast<double>(m - 1) + beta) / x)) * c1;
  } else {
    const double u = (n - 1.0) / x;
    out.branch = 3;
    out.p = 1.0 - (1.0 - 2.0 * beta) * (2.0 - u) * u * c1 -
            sq(1.0 - (n - 1.0 + beta) / x) * c2;
  }
  out.out_of_range = out.p < -kRangeTolerance || out.p > 1.0 + kRangeTolerance;
  return out;
}

double outage_ub_numeric_oracle(double r, double rho_i, int n_packets, double lambda,
                                double d_max, bool chi1, bool chi2) {
  if (!(r > 1.0)) throw AnalysisError("numeric oracle: r must exceed 1");
  if (rho_i < 0.0) throw AnalysisError("numeric oracle: rho must be nonnegative");
  const double theta = 1.0 / (n_packets * r * lambda);
  const auto intervals = admissible_intervals(r, rho_i, n_packets);
  double covered = 0.0;
  if (chi1) {
    for (std::size_t j = 0; j + 1 < intervals.size(); ++j) {
      const Interval& a = intervals[j];
      if (a.empty()) continue;
      covered += delta_cdf(theta * a.hi, d_max) - delta_cdf(theta * a.lo, d_max);
    }
  }
  if (chi2) covered += 1.0 - delta_cdf(theta * intervals.back().lo, d_max);
  return 1.0 - covered;
}

double outage_ub_limit(const OutageInputs& in, int user) {
  require_user(user);
  const double beta = in.beta[user];
  const double c1 = in.chi1[user] ? 1.0 : 0.0;
  const double c2 = in.chi2[user] ? 1.0 : 0.0;
  if (in.alpha < 1.0) return 1.0 - (1.0 - 2.0 * beta) * c1;
  const double inv = 1.0 / in.alpha;
  return 1.0 - inv * (2.0 - inv) * (1.0 - 2.0 * beta) * c1 - sq(1.0 - inv) * c2;
}

R0Result r0(const InfoQuantities& info, double lambda, std::array<DecoderMode, 2> modes) {
  if (!(lambda > 0.0)) throw AnalysisError("r0: lambda must be positive");
  Interval set{1.0, 0.0, true};
  for (int i = 0; i < 2; ++i) set = intersect(set, user_feasible_set(info, i, lambda, modes[i]));
  R0Result out;
  if (set.empty()) return out;
  out.feasible = true;
  out.value = set.lo;
  out.upper = set.unbounded ? std::numeric_limits<double>::infinity() : set.hi;
  return out;
}

R0Result r0_bisection(const InfoQuantities& info, double lambda,
                      std::array<DecoderMode, 2> modes, double tol) {
  if (!(lambda > 0.0)) throw AnalysisError("r0: lambda must be positive");
  // rho_i < 1 forces lambda r < C_i*.
  const double r_hi = std::min(info.c_star[0], info.c_star[1]) / lambda;
  R0Result out;
  if (!(r_hi > 1.0)) return out;

  constexpr int kScan = 20000;
  double r_feas = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k <= kScan; ++k) {
    const double r = 1.0 + (r_hi - 1.0) * k / (kScan + 1.0);
    if (feasible_at(info, lambda, modes, r)) {
      r_feas = r;
      break;
    }
  }
  if (std::isnan(r_feas)) return out;

  double lo = 1.0, hi = r_feas;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(info, lambda, modes, mid) ? hi : lo) = mid;
  }
  out.feasible = true;
  out.value = hi;

  lo = r_feas;
  hi = r_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(info, lambda, modes, mid) ? lo : hi) = mid;
  }
  out.upper = lo;
  return out;
}

std::string to_string(EpsilonResult::Kind kind) {
  switch (kind) {
    case EpsilonResult::Kind::zero: return "zero";
    case EpsilonResult::Kind::value: return "value";
    case EpsilonResult::Kind::not_applicable: return "not_applicable";
  }
  return "unknown";
}

EpsilonResult epsilon_bound(const InfoQuantities& info, double lambda, double d_max,
                            std::array<DecoderMode, 2> modes, double lambda_bar) {
  if (!(lambda > 0.0)) throw AnalysisError("epsilon_bound: lambda must be positive");
  if (!(d_max > 0.0)) throw AnalysisError("epsilon_bound: d_max must be positive");
  if (lambda > lambda_bar) throw ConverseViolation(lambda, lambda_bar);

  EpsilonResult out;
  out.kappa = kappa(lambda * d_max);
  if (lambda < std::min(threshold(info, 0, modes[0]), threshold(info, 1, modes[1]))) {
    out.kind = EpsilonResult::Kind::zero;
    out.value = 0.0;
    out.label = "below-threshold";
    return out;
  }

  const R0Result r = r0(info, lambda, modes);
  if (!r.feasible) {
    out.kind = EpsilonResult::Kind::not_applicable;
    out.label = "r0-infeasible";
    out.diagnostics = "no r > 1 satisfies max_i rho_i(r) < min{1, r-1}";
    return out;
  }

  out.r0 = r.value;
  double best_beta = -std::numeric_limits<double>::infinity();
  double best_rho = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    out.rho_at_r0[i] = rho(info, i, r.value, lambda, modes[i]).value;
    const double b = out.rho_at_r0[i] / r.value;
    if (b > best_beta) {
      best_beta = b;
      out.user = i;
    }
    best_rho = std::max(best_rho, out.rho_at_r0[i]);
  }
  out.kind = EpsilonResult::Kind::value;
  out.value = out.kappa * best_beta;
  const double rho_form = out.kappa / r.value * best_rho;
  if (std::abs(rho_form - out.value) > 1e-12 * std::max(1.0, std::abs(out.value))) {
    throw std::logic_error("epsilon_bound: beta and rho forms disagree");
  }
  out.label = "r0-user" + std::to_string(out.user + 1);
  return out;
}

SubunitRateBound outage_ub_subunit_rate(const InfoQuantities& info, int user, double lambda,
                                        double r, int n_packets, double d_max) {
  require_user(user);
  if (!(r > 0.0 && r < 1.0)) throw AnalysisError("outage_ub_subunit_rate: requires 0 < r < 1");
  if (n_packets < 1) throw AnalysisError("outage_ub_subunit_rate: N must be at least 1");
  if (!(lambda > 0.0)) throw AnalysisError("outage_ub_subunit_rate: lambda must be positive");
  const double p = rho(info, user, r, lambda, DecoderMode::tin).value;
  const double theta = 1.0 / (n_packets * r * lambda);
  const double below_one = p < 1.0 ? 1.0 : 0.0;
  const double negative = p < 0.0 ? 1.0 : 0.0;

  SubunitRateBound out;
  out.finite_n = 1.0 - (1.0 - delta_cdf((n_packets - 1 + p) * theta, d_max)) * below_one -
                 delta_cdf((n_packets - 1) * theta, d_max) * negative;
  const double f_inf = delta_cdf(1.0 / (r * lambda), d_max);
  out.limit_n = 1.0 - (1.0 - f_inf) * below_one - f_inf * negative;
  if (lambda <= info.c[user]) out.limit = 0.0;
  else if (lambda <= info.c_star[user]) out.limit = delta_cdf(1.0 / lambda, d_max);
  else out.limit = 1.0;
  return out;
}

double avg_rate(int n_packets, double r, double lambda) {
  if (n_packets < 1 || !(r > 0.0)) throw AnalysisError("avg_rate: requires N >= 1 and r > 0");
  const double n = n_packets;
  return r > 1.0 ? n * r / (n * r + 1.0) * lambda : n * r / (n + r) * lambda;
}

}  // namespace icoutage
