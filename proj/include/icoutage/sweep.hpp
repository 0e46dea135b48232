// Parameter sweeps over the closed forms, written as CSV.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "icoutage/analysis.hpp"
#include "icoutage/config.hpp"

namespace icoutage {

enum class SweepVariable { alpha, lambda, n_packets, r };

SweepVariable parse_sweep_variable(const std::string& text);
std::string to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::alpha;
  std::vector<double> values;
  double lambda = 0.1;
  double r = 1.1;
  double d_max = 1.0;
  std::vector<int> n_list{1};
  std::vector<DecoderMode> modes{DecoderMode::tin};
};

/// Evenly spaced grid, lo and hi included. Requires lo < hi and steps >= 2.
std::vector<double> linear_grid(double lo, double hi, int steps);

struct SweepRow {
  std::string variable;
  double value = 0.0;
  std::optional<int> user;  // 1-based
  std::optional<int> n_packets;
  std::string mode;
  std::optional<double> rho;
  std::optional<double> beta;
  std::optional<double> kappa;
  std::optional<bool> chi1;
  std::optional<bool> chi2;
  std::optional<double> p_finite;
  std::optional<double> p_limit;
  std::optional<double> epsilon;
  std::string case_label;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ResolvedChannel& channel);

extern const char* const kSweepHeader;

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace icoutage
