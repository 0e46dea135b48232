#include "icoutage/sweep.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace icoutage {

const char* const kSweepHeader =
    "variable,value,user,N,mode,rho,beta,kappa,chi1,chi2,p_outage_finiteN,p_outage_limit,"
    "epsilon,case_label";

namespace {

std::string branch_label(const OutageBound& b) {
  std::string s = "branch" + std::to_string(b.branch);
  if (b.rho_zero) s += "-rho-zero";
  if (b.out_of_range) s += "-out-of-range";
  return s;
}

// One row per N per user at a fixed (lambda, r, D).
void outage_rows(std::vector<SweepRow>& rows, const SweepSpec& spec, const InfoQuantities& info,
                 double value, double lambda, double r, double d_max,
                 const std::vector<int>& n_list) {
  for (DecoderMode mode : spec.modes) {
    SchemeParams scheme{lambda, r, 1, d_max, {mode, mode}};
    const OutageInputs in = outage_inputs(info, scheme);
    for (int n : n_list) {
      for (int i = 0; i < 2; ++i) {
        SweepRow row;
        row.variable = to_string(spec.variable);
        row.value = value;
        row.user = i + 1;
        row.n_packets = n;
        row.mode = std::string(to_string(mode));
        row.rho = in.rho[i];
        row.beta = in.beta[i];
        row.kappa = in.kappa;
        row.chi1 = in.chi1[i];
        row.chi2 = in.chi2[i];
        if (in.rho[i] < 0.0) {
          row.p_finite = 0.0;
          row.p_limit = 0.0;
          row.case_label = "rho-negative";
        } else {
          const OutageBound b = outage_ub_finite_n(in, n, i);
          row.p_finite = b.p;
          row.p_limit = outage_ub_limit(in, i);
          row.case_label = branch_label(b);
        }
        rows.push_back(std::move(row));
      }
    }
  }
}

void epsilon_rows(std::vector<SweepRow>& rows, const SweepSpec& spec,
                  const ResolvedChannel& channel, double lambda) {
  for (DecoderMode mode : spec.modes) {
    SweepRow row;
    row.variable = to_string(spec.variable);
    row.value = lambda;
    row.mode = std::string(to_string(mode));
    row.kappa = kappa(lambda * spec.d_max);
    try {
      const EpsilonResult e =
          epsilon_bound(channel.info, lambda, spec.d_max, {mode, mode}, channel.lambda_bar);
      if (e.kind != EpsilonResult::Kind::not_applicable) row.epsilon = e.value;
      row.case_label = e.label;
      if (channel.gaussian) {
        const EpsilonResult ladder = mode == DecoderMode::tin
                                         ? epsilon_gaussian_tin(*channel.gaussian, lambda, spec.d_max)
                                         : epsilon_gaussian_di(*channel.gaussian, lambda, spec.d_max);
        row.case_label = ladder.label;
      }
    } catch (const ConverseViolation&) {
      row.case_label = "converse-violation";
    }
    rows.push_back(std::move(row));
  }
}

}  // namespace

SweepVariable parse_sweep_variable(const std::string& text) {
  if (text == "alpha") return SweepVariable::alpha;
  if (text == "lambda") return SweepVariable::lambda;
  if (text == "n_packets" || text == "N") return SweepVariable::n_packets;
  if (text == "r") return SweepVariable::r;
  throw AnalysisError("unknown sweep variable '" + text + "'");
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::alpha: return "alpha";
    case SweepVariable::lambda: return "lambda";
    case SweepVariable::n_packets: return "n_packets";
    case SweepVariable::r: return "r";
  }
  return "unknown";
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
  if (!(lo < hi)) throw AnalysisError("sweep range requires lo < hi");
  if (steps < 2) throw AnalysisError("sweep range requires steps >= 2");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (steps - 1);
  out.back() = hi;
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ResolvedChannel& channel) {
  if (spec.values.empty()) throw AnalysisError("sweep has no grid points");
  if (spec.modes.empty()) throw AnalysisError("sweep needs at least one decoder mode");
  std::vector<SweepRow> rows;
  for (double v : spec.values) {
    switch (spec.variable) {
      case SweepVariable::alpha:
        outage_rows(rows, spec, channel.info, v, spec.lambda, spec.r, v / spec.lambda, spec.n_list);
        break;
      case SweepVariable::r:
        outage_rows(rows, spec, channel.info, v, spec.lambda, v, spec.d_max, spec.n_list);
        break;
      case SweepVariable::n_packets: {
        const double rounded = std::round(v);
        if (rounded < 1.0 || rounded != v) throw AnalysisError("n_packets values must be positive integers");
        outage_rows(rows, spec, channel.info, v, spec.lambda, spec.r, spec.d_max,
                    {static_cast<int>(rounded)});
        break;
      }
      case SweepVariable::lambda:
        epsilon_rows(rows, spec, channel, v);
        break;
    }
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto num = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto flag = [](const std::optional<bool>& v) { return v ? std::string(*v ? "1" : "0") : std::string(); };
  auto integer = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    out << r.variable << ',' << format_double(r.value) << ',' << integer(r.user) << ','
        << integer(r.n_packets) << ',' << r.mode << ',' << num(r.rho) << ',' << num(r.beta) << ','
        << num(r.kappa) << ',' << flag(r.chi1) << ',' << flag(r.chi2) << ',' << num(r.p_finite)
        << ',' << num(r.p_limit) << ',' << num(r.epsilon) << ',' << r.case_label << '\n';
  }
}

}  // namespace icoutage
