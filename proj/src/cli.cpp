#include "icoutage/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "icoutage/analysis.hpp"
#include "icoutage/config.hpp"
#include "icoutage/simulator.hpp"
#include "icoutage/sweep.hpp"
#include "json.hpp"

namespace icoutage {

namespace {

using nlohmann::ordered_json;

class FlagError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelFlags {
  std::string path;
  std::optional<double> p1, p2, p1_dbw, p2_dbw, c1, c2;
  std::vector<double> pi1, pi2;
  int grid = 64;

  void attach(CLI::App* app) {
    app->add_option("--channel", path, "channel config JSON");
    app->add_option("--p1", p1, "Gaussian power of Tx 1 (linear)");
    app->add_option("--p2", p2, "Gaussian power of Tx 2 (linear)");
    app->add_option("--p1-dbw", p1_dbw, "Gaussian power of Tx 1 (dBW)");
    app->add_option("--p2-dbw", p2_dbw, "Gaussian power of Tx 2 (dBW)");
    app->add_option("--c1", c1, "crossover gain into Rx 1");
    app->add_option("--c2", c2, "crossover gain into Rx 2");
    app->add_option("--pi1", pi1, "input pmf of Tx 1, comma separated")->delimiter(',');
    app->add_option("--pi2", pi2, "input pmf of Tx 2, comma separated")->delimiter(',');
    app->add_option("--grid", grid, "simplex grid resolution for lambda_bar")->check(CLI::PositiveNumber);
  }

  ResolvedChannel resolve_channel() const {
    const bool gauss = p1 || p2 || p1_dbw || p2_dbw || c1 || c2;
    if (gauss && !path.empty()) throw FlagError("use either --channel or the Gaussian flags");
    ChannelConfig cfg;
    if (!path.empty()) {
      cfg = load_channel_config(path);
    } else if (gauss) {
      auto pick = [](const std::optional<double>& lin, const std::optional<double>& dbw,
                     const char* name) {
        if (lin.has_value() == dbw.has_value()) {
          throw FlagError(std::string("exactly one of --") + name + " and --" + name +
                          "-dbw is required");
        }
        return lin ? *lin : dbw_to_watts(*dbw);
      };
      if (!c1 || !c2) throw FlagError("Gaussian channel needs --c1 and --c2");
      GaussianIC g{pick(p1, p1_dbw, "p1"), pick(p2, p2_dbw, "p2"), *c1, *c2};
      try {
        validate(g);
      } catch (const ChannelError& e) {
        throw ConfigError(e.what());
      }
      cfg.channel = g;
    } else {
      throw FlagError("a channel is required: --channel FILE or Gaussian flags");
    }
    if (!pi1.empty() || !pi2.empty()) {
      const auto* d = std::get_if<DiscreteIC>(&cfg.channel);
      if (!d) throw FlagError("--pi1/--pi2 apply to discrete channels only");
      try {
        if (!pi1.empty()) {
          cfg.pi1 = InputDistribution{pi1};
          cfg.pi1->validate(d->x1_size);
        }
        if (!pi2.empty()) {
          cfg.pi2 = InputDistribution{pi2};
          cfg.pi2->validate(d->x2_size);
        }
      } catch (const ChannelError& e) {
        throw ConfigError(e.what());
      }
    }
    return resolve(cfg, LambdaBarOptions{grid, true});
  }
};

std::array<DecoderMode, 2> parse_modes(const std::vector<std::string>& items) {
  if (items.empty() || items.size() > 2) throw FlagError("decoder mode takes one or two values");
  const DecoderMode a = parse_decoder_mode(items[0]);
  const DecoderMode b = items.size() == 2 ? parse_decoder_mode(items[1]) : a;
  return {a, b};
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

ordered_json info_json(const InfoQuantities& q) {
  ordered_json j;
  j["c_star"] = q.c_star;
  j["c"] = q.c;
  j["c_cross"] = q.c_cross;
  j["c_tilde_star"] = q.c_tilde_star;
  j["c_tilde"] = q.c_tilde;
  return j;
}

ordered_json epsilon_json(const EpsilonResult& e) {
  ordered_json j;
  j["kind"] = to_string(e.kind);
  j["value"] = e.kind == EpsilonResult::Kind::not_applicable ? ordered_json() : ordered_json(e.value);
  j["r0"] = std::isnan(e.r0) ? ordered_json() : ordered_json(e.r0);
  j["kappa"] = e.kappa;
  j["user"] = e.user >= 0 ? ordered_json(e.user + 1) : ordered_json();
  j["label"] = e.label;
  if (!e.diagnostics.empty()) j["diagnostics"] = e.diagnostics;
  return j;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  ChannelFlags channel;
  double lambda = 0.0;
  std::optional<double> r;
  double d_max = 1.0;
  std::vector<std::string> mode{"tin"};
  std::optional<int> n;
  bool json = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const ResolvedChannel ch = a.channel.resolve_channel();
  const auto modes = parse_modes(a.mode);
  const InfoQuantities& q = ch.info;
  const LambdaThresholds th = lambda_thresholds(q);

  EpsilonResult eps = epsilon_bound(q, a.lambda, a.d_max, modes, ch.lambda_bar);
  std::string ladder_label;
  if (ch.gaussian && modes[0] == modes[1]) {
    ladder_label = (modes[0] == DecoderMode::tin ? epsilon_gaussian_tin(*ch.gaussian, a.lambda, a.d_max)
                                                 : epsilon_gaussian_di(*ch.gaussian, a.lambda, a.d_max))
                       .label;
  }

  std::optional<OutageInputs> in;
  if (a.r) {
    in = make_outage_inputs(a.lambda * a.d_max,
                            {rho(q, 0, *a.r, a.lambda, modes[0]).value,
                             rho(q, 1, *a.r, a.lambda, modes[1]).value},
                            *a.r,
                            {rho(q, 0, *a.r, a.lambda, modes[0]).r_cap,
                             rho(q, 1, *a.r, a.lambda, modes[1]).r_cap});
  }
  std::array<std::optional<OutageBound>, 2> finite;
  if (in && a.n && *a.r > 1.0) {
    for (int i = 0; i < 2; ++i) {
      if (in->rho[i] >= 0.0) finite[i] = outage_ub_finite_n(*in, *a.n, i);
    }
  }

  if (a.json) {
    ordered_json j;
    j["channel"] = ch.kind;
    j["info"] = info_json(q);
    j["lambda_tin"] = th.tin;
    j["lambda_di"] = th.di;
    j["lambda_bar"] = ch.lambda_bar;
    j["lambda"] = a.lambda;
    j["d_max"] = a.d_max;
    j["mode"] = {std::string(to_string(modes[0])), std::string(to_string(modes[1]))};
    if (in) {
      j["r"] = *a.r;
      j["rho"] = in->rho;
      j["beta"] = in->beta;
      j["chi1"] = in->chi1;
      j["chi2"] = in->chi2;
      j["p_outage_limit"] = {outage_ub_limit(*in, 0), outage_ub_limit(*in, 1)};
      if (a.n) {
        j["N"] = *a.n;
        ordered_json p = ordered_json::array();
        for (int i = 0; i < 2; ++i) p.push_back(finite[i] ? ordered_json(finite[i]->p) : ordered_json(0.0));
        j["p_outage_finiteN"] = p;
      }
    }
    j["epsilon"] = epsilon_json(eps);
    if (!ladder_label.empty()) j["case_label"] = ladder_label;
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  out << "channel: " << ch.kind << '\n';
  out << "quantity      user 1    user 2\n";
  auto line = [&](const char* name, const std::array<double, 2>& v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-12s %8.4f  %8.4f\n", name, v[0], v[1]);
    out << buf;
  };
  line("C*", q.c_star);
  line("C", q.c);
  line("C_cross", q.c_cross);
  line("C~*", q.c_tilde_star);
  line("C~", q.c_tilde);
  out << "lambda_TIN   " << fixed4(th.tin) << '\n';
  out << "lambda_DI    " << fixed4(th.di) << '\n';
  out << "lambda_bar   " << fixed4(ch.lambda_bar) << '\n';
  if (in) {
    line("rho(r)", in->rho);
    line("beta", in->beta);
    out << "chi1         " << in->chi1[0] << "         " << in->chi1[1] << '\n';
    out << "chi2         " << in->chi2[0] << "         " << in->chi2[1] << '\n';
    line("p_limit", {outage_ub_limit(*in, 0), outage_ub_limit(*in, 1)});
    if (a.n) {
      line("p_finiteN", {finite[0] ? finite[0]->p : 0.0, finite[1] ? finite[1]->p : 0.0});
    }
  }
  out << "r0           " << (std::isnan(eps.r0) ? std::string("-") : fixed4(eps.r0)) << '\n';
  out << "kappa        " << fixed4(eps.kappa) << '\n';
  out << "epsilon      ";
  if (eps.kind == EpsilonResult::Kind::not_applicable) out << "not applicable";
  else out << fixed4(eps.value);
  out << " (" << (ladder_label.empty() ? eps.label : ladder_label) << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  ChannelFlags channel;
  std::string variable;
  std::optional<double> lo, hi;
  int steps = 0;
  std::vector<double> values;
  double lambda = 0.1;
  double r = 1.1;
  double d_max = 1.0;
  std::vector<int> n_list{1};
  std::vector<std::string> modes{"tin"};
  std::string out = "-";
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepSpec spec;
  spec.variable = parse_sweep_variable(a.variable);
  if (!a.values.empty()) {
    if (a.lo || a.hi || a.steps) throw FlagError("use either --values or --lo/--hi/--steps");
    spec.values = a.values;
  } else {
    if (!a.lo || !a.hi) throw FlagError("sweep needs --values or --lo, --hi and --steps");
    spec.values = linear_grid(*a.lo, *a.hi, a.steps);
  }
  spec.lambda = a.lambda;
  spec.r = a.r;
  spec.d_max = a.d_max;
  spec.n_list = a.n_list;
  spec.modes.clear();
  for (const auto& m : a.modes) spec.modes.push_back(parse_decoder_mode(m));
  for (int n : spec.n_list) {
    if (n < 1) throw FlagError("--n-list entries must be positive");
  }

  const ResolvedChannel ch = a.channel.resolve_channel();
  const auto rows = run_sweep(spec, ch);
  if (a.out == "-") {
    write_csv(out, rows);
  } else {
    std::ofstream file(a.out);
    if (!file) throw ConfigError("cannot write output file '" + a.out + "'");
    write_csv(file, rows);
    if (!file) throw ConfigError("failed writing output file '" + a.out + "'");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  ChannelFlags channel;
  double lambda = 0.1;
  double r = 1.1;
  int n_packets = 1;
  double d_max = 1.0;
  std::vector<std::string> decoder{"tin"};
  std::string mode = "fluid";
  std::optional<long long> n;
  long long trials = 1000;
  std::uint64_t seed = 1;
  bool check = false;
  std::string csv;
  int threads = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  SimConfig cfg;
  cfg.mode = parse_sim_mode(a.mode);
  if (cfg.mode == SimMode::stochastic && !a.n) throw FlagError("stochastic mode requires --n");
  if (cfg.mode == SimMode::fluid && a.n) throw FlagError("--n applies to stochastic mode only");
  cfg.scheme = SchemeParams{a.lambda, a.r, a.n_packets, a.d_max, parse_modes(a.decoder)};
  cfg.n_bits = a.n.value_or(0);
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  validate(cfg);

  const ResolvedChannel ch = a.channel.resolve_channel();
  const SimResult res = run_trials(cfg, ch.info);

  ordered_json j;
  j["outage"] = res.outage;
  j["halfwidth"] = res.halfwidth;
  j["rates"] = res.rates;
  j["trials"] = res.trials;
  j["seed"] = res.seed;
  j["mode"] = std::string(to_string(res.mode));
  j["failures"] = res.failures;
  j["failure_histogram"] = res.failure_histogram;
  out << j.dump() << '\n';

  if (!a.csv.empty()) {
    std::ofstream file(a.csv);
    if (!file) throw ConfigError("cannot write output file '" + a.csv + "'");
    file << "user,codeword,failures\n";
    for (int i = 0; i < 2; ++i) {
      for (std::size_t k = 0; k < res.failure_histogram[i].size(); ++k) {
        file << i + 1 << ',' << k + 1 << ',' << res.failure_histogram[i][k] << '\n';
      }
    }
  }

  if (!a.check) return kExitOk;
  if (!(cfg.scheme.r > 1.0)) throw FlagError("--check needs r > 1");
  const OutageInputs in = outage_inputs(ch.info, cfg.scheme);
  bool ok = true;
  for (int i = 0; i < 2; ++i) {
    const double p = in.rho[i] < 0.0 ? 0.0 : outage_ub_finite_n(in, cfg.scheme.n_packets, i).p;
    const double sigma = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(res.trials));
    const double dev = std::abs(res.outage[i] - p);
    const bool pass = sigma > 0.0 ? dev <= 4.0 * sigma : dev == 0.0;
    ok = ok && pass;
    err << "check user " << i + 1 << ": empirical " << format_double(res.outage[i]) << ", closed form "
        << format_double(p) << ", 4 sigma " << format_double(4.0 * sigma) << (pass ? " ok" : " FAIL")
        << '\n';
  }
  return ok ? kExitOk : kExitCheck;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Outage analysis and simulation for two-user interference channels with gradual data arrival",
               "ic_outage"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "information quantities, thresholds and the outage bound");
  analyze.channel.attach(an);
  an->add_option("--lambda", analyze.lambda, "arrival rate (bits per slot)")->required();
  an->add_option("--r", analyze.r, "normalized code rate");
  an->add_option("--d", analyze.d_max, "asynchrony window D")->check(CLI::PositiveNumber);
  an->add_option("--mode", analyze.mode, "tin or di, or one per receiver (tin,di)")->delimiter(',');
  an->add_option("--n", analyze.n, "number of packets N for the finite-N bound")->check(CLI::PositiveNumber);
  an->add_flag("--json", analyze.json, "machine-readable output");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "CSV sweep over alpha, lambda, n_packets or r");
  sweep.channel.attach(sw);
  sw->add_option("--variable", sweep.variable, "alpha, lambda, n_packets or r")->required();
  sw->add_option("--lo", sweep.lo, "grid start");
  sw->add_option("--hi", sweep.hi, "grid end");
  sw->add_option("--steps", sweep.steps, "grid points");
  sw->add_option("--values", sweep.values, "explicit grid, comma separated")->delimiter(',');
  sw->add_option("--lambda", sweep.lambda, "arrival rate");
  sw->add_option("--r", sweep.r, "normalized code rate");
  sw->add_option("--d", sweep.d_max, "asynchrony window D")->check(CLI::PositiveNumber);
  sw->add_option("--n-list", sweep.n_list, "packet counts, comma separated")->delimiter(',');
  sw->add_option("--modes", sweep.modes, "decoder modes, comma separated")->delimiter(',');
  sw->add_option("--out", sweep.out, "output CSV path, - for stdout");

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Monte Carlo simulation of the scheme");
  sim.channel.attach(si);
  si->add_option("--lambda", sim.lambda, "arrival rate")->required();
  si->add_option("--r", sim.r, "normalized code rate")->required();
  si->add_option("--n-packets", sim.n_packets, "packets per source N")->check(CLI::PositiveNumber);
  si->add_option("--d", sim.d_max, "asynchrony window D")->check(CLI::PositiveNumber);
  si->add_option("--decoder", sim.decoder, "tin or di, or one per receiver")->delimiter(',');
  si->add_option("--mode", sim.mode, "fluid or stochastic");
  si->add_option("--n", sim.n, "bits per source (stochastic mode)");
  si->add_option("--trials", sim.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  si->add_option("--seed", sim.seed, "64-bit seed");
  si->add_flag("--check", sim.check, "compare with the closed form, fail outside 4 sigma");
  si->add_option("--csv", sim.csv, "write the per-codeword failure histogram");
  si->add_option("--threads", sim.threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (an->parsed()) return cmd_analyze(analyze, out);
    if (sw->parsed()) return cmd_sweep(sweep, out);
    return cmd_simulate(sim, out, err);
  } catch (const ConverseViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitConverse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FlagError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace icoutage
