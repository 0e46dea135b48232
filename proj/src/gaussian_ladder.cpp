#include <algorithm>
#include <cmath>
#include <string>

#include "icoutage/analysis.hpp"

namespace icoutage {

namespace {

// Per-user ingredients of a ladder: a = C*-type, b = C-type constant.
struct Rung {
  double a = 0.0;
  double b = 0.0;
  double lower(double lambda) const { return (a - 2.0 * b) / (a - b - lambda); }
  bool mid(double lambda) const { return b <= lambda && lambda < a / 2.0; }
};

EpsilonResult ladder_value(const char* prefix, int k, int user, const Rung& rung, double lambda,
                           double d_max) {
  EpsilonResult out;
  out.kind = EpsilonResult::Kind::value;
  out.kappa = kappa(lambda * d_max);
  out.value = out.kappa * (lambda - rung.b) / (rung.a - 2.0 * rung.b);
  out.r0 = rung.lower(lambda);
  out.user = user;
  out.label = std::string(prefix) + "-case" + std::to_string(k) + "-user" + std::to_string(user + 1);
  return out;
}

EpsilonResult not_applicable(const char* prefix, double lambda) {
  EpsilonResult out;
  out.kind = EpsilonResult::Kind::not_applicable;
  out.label = std::string(prefix) + "-none";
  out.diagnostics = "no ladder case applies at lambda=" + std::to_string(lambda);
  return out;
}

void check_domain(const GaussianIC& channel, double lambda, double d_max) {
  validate(channel);
  if (!(lambda > 0.0)) throw AnalysisError("lambda must be positive");
  if (!(d_max > 0.0)) throw AnalysisError("d_max must be positive");
  const double bar = lambda_bar(channel);
  if (lambda > bar) throw ConverseViolation(lambda, bar);
}

EpsilonResult zero_result(const char* prefix, double lambda, double d_max) {
  EpsilonResult out;
  out.kind = EpsilonResult::Kind::zero;
  out.value = 0.0;
  out.kappa = kappa(lambda * d_max);
  out.label = std::string(prefix) + "-zero";
  return out;
}

}  // namespace

EpsilonResult epsilon_gaussian_tin(const GaussianIC& channel, double lambda, double d_max) {
  check_domain(channel, lambda, d_max);
  const InfoQuantities q = gaussian_info_quantities(channel);
  if (lambda < std::min(q.c[0], q.c[1])) return zero_result("tin", lambda, d_max);

  const std::array<Rung, 2> rung{Rung{q.c_star[0], q.c[0]}, Rung{q.c_star[1], q.c[1]}};
  for (int i = 0; i < 2; ++i) {
    const int o = 1 - i;
    if (!rung[i].mid(lambda)) continue;
    if (lambda < std::min(rung[o].b, rung[o].a / 2.0)) {
      return ladder_value("tin", 1, i, rung[i], lambda, d_max);
    }
    if (rung[o].a / 2.0 <= lambda && lambda < rung[o].b &&
        rung[i].lower(lambda) < rung[o].lower(lambda)) {
      return ladder_value("tin", 2, i, rung[i], lambda, d_max);
    }
    if (rung[o].mid(lambda) && rung[o].lower(lambda) <= rung[i].lower(lambda)) {
      return ladder_value("tin", 3, i, rung[i], lambda, d_max);
    }
  }
  return not_applicable("tin", lambda);
}

EpsilonResult epsilon_gaussian_di(const GaussianIC& channel, double lambda, double d_max) {
  check_domain(channel, lambda, d_max);
  const InfoQuantities q = gaussian_info_quantities(channel);
  if (lambda < std::min({q.c_cross[0], q.c_tilde[0], q.c_cross[1], q.c_tilde[1]})) {
    return zero_result("di", lambda, d_max);
  }

  const std::array<Rung, 2> rung{Rung{q.c_tilde_star[0], q.c_tilde[0]},
                                 Rung{q.c_tilde_star[1], q.c_tilde[1]}};
  const double cap = std::min(q.c_star[0], q.c_star[1]) / lambda;
  for (int i = 0; i < 2; ++i) {
    const int o = 1 - i;
    if (!rung[i].mid(lambda)) continue;
    const double li = rung[i].lower(lambda);
    if (lambda < std::min(rung[o].b, rung[o].a / 2.0) && li < cap) {
      return ladder_value("di", 1, i, rung[i], lambda, d_max);
    }
    if (rung[o].a / 2.0 <= lambda && lambda < rung[o].b &&
        li < std::min({rung[o].lower(lambda), q.c_star[o] / lambda, q.c_star[i] / lambda})) {
      return ladder_value("di", 2, i, rung[i], lambda, d_max);
    }
    if (rung[o].mid(lambda) && rung[o].lower(lambda) <= li && li < cap) {
      return ladder_value("di", 3, i, rung[i], lambda, d_max);
    }
  }
  return not_applicable("di", lambda);
}

}  // namespace icoutage
