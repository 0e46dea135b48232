// Closed-form outage analysis for the block-transmission scheme.
#pragma once

#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "icoutage/channel.hpp"

namespace icoutage {

class AnalysisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the arrival rate lies above the converse threshold.
class ConverseViolation : public std::runtime_error {
 public:
  ConverseViolation(double lambda, double threshold);
  double lambda() const { return lambda_; }
  double threshold() const { return threshold_; }

 private:
  double lambda_;
  double threshold_;
};

struct SchemeParams {
  double lambda = 0.1;  // bits per slot
  double r = 1.1;       // code rate over arrival rate
  int n_packets = 1;
  double d_max = 1.0;
  std::array<DecoderMode, 2> decoder{DecoderMode::tin, DecoderMode::tin};
};

/// 0 < lambda <= 1, r > 0, N >= 1, D > 0.
void validate(const SchemeParams& scheme);

struct Rho {
  double value = 0.0;
  std::optional<double> r_cap;  // strict upper bound on r (additive DI case)
  bool additive = false;
};

Rho rho(const InfoQuantities& info, int user, double r, double lambda, DecoderMode mode);

double kappa(double alpha);
double delta_cdf(double delta, double d_max);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool unbounded = false;

  static Interval empty_interval() { return {0.0, 0.0, false}; }
  bool empty() const { return !unbounded && !(lo < hi); }
  bool contains(double x) const { return x > lo && (unbounded || x < hi); }
};

/// N intervals on the normalized asynchrony axis; the last is unbounded.
std::vector<Interval> admissible_intervals(double r, double rho_i, int n_packets);

/// Solution set in r > 1 of (lambda r - b)/(a - b) < min{1, r - 1}.
/// Requires a > b >= 0.
Interval lemma1_interval(double a, double b, double lambda);

struct OutageInputs {
  double alpha = 0.0;
  double kappa = 0.0;
  std::array<double, 2> rho{};
  std::array<double, 2> beta{};
  std::array<bool, 2> chi1{};
  std::array<bool, 2> chi2{};
};

/// Builds the derived scalars from raw rho values. `caps` carries the
/// optional additive-DI bound on r per user.
OutageInputs make_outage_inputs(double alpha, std::array<double, 2> rho_values, double r,
                                std::array<std::optional<double>, 2> caps = {});
OutageInputs outage_inputs(const InfoQuantities& info, const SchemeParams& scheme);

struct OutageBound {
  double p = 1.0;
  int branch = 0;  // 1: all intervals inside, 2: last one straddles D, 3: m >= N
  long long m = 0;
  bool out_of_range = false;
  bool rho_zero = false;
};

/// Finite-N upper bound on the outage probability of `user`.
OutageBound outage_ub_finite_n(const OutageInputs& inputs, int n_packets, int user);

/// 1 - P(delta in union of scaled admissible intervals), summed interval by
/// interval.
double outage_ub_numeric_oracle(double r, double rho_i, int n_packets, double lambda,
                                double d_max, bool chi1, bool chi2);

double outage_ub_limit(const OutageInputs& inputs, int user);

struct R0Result {
  bool feasible = false;
  double value = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();  // end of the feasible r range
};

/// Infimum of r > 1 with max_i rho_i(r) < min{1, r - 1}, by interval algebra.
R0Result r0(const InfoQuantities& info, double lambda, std::array<DecoderMode, 2> modes);

/// Same infimum located by a scan for a feasible point and bisection.
R0Result r0_bisection(const InfoQuantities& info, double lambda,
                      std::array<DecoderMode, 2> modes, double tol = 1e-12);

struct EpsilonResult {
  enum class Kind { zero, value, not_applicable };
  Kind kind = Kind::not_applicable;
  double value = std::numeric_limits<double>::quiet_NaN();
  double r0 = std::numeric_limits<double>::quiet_NaN();
  double kappa = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 2> rho_at_r0{};
  int user = -1;
  std::string label;
  std::string diagnostics;
};

std::string to_string(EpsilonResult::Kind kind);

/// Achievable outage level. Throws ConverseViolation when lambda > lambda_bar.
EpsilonResult epsilon_bound(const InfoQuantities& info, double lambda, double d_max,
                            std::array<DecoderMode, 2> modes, double lambda_bar);

/// Case ladders for the Gaussian channel, treating interference as noise
/// and decoding it respectively.
EpsilonResult epsilon_gaussian_tin(const GaussianIC& channel, double lambda, double d_max);
EpsilonResult epsilon_gaussian_di(const GaussianIC& channel, double lambda, double d_max);

struct SubunitRateBound {
  double finite_n = 1.0;
  double limit_n = 1.0;  // N -> infinity at this r
  double limit = 1.0;    // N -> infinity, then r -> 1 from below
};

/// Outage bound when the code rate is below the arrival rate (0 < r < 1),
/// treating interference as noise.
SubunitRateBound outage_ub_subunit_rate(const InfoQuantities& info, int user, double lambda,
                                        double r, int n_packets, double d_max);

double avg_rate(int n_packets, double r, double lambda);

}  // namespace icoutage
