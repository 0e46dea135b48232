#include "icoutage/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace icoutage {

namespace {

constexpr double kZ95 = 1.96;

std::vector<double> starts_from_tau(const TauTrace& trace, double offset) {
  std::vector<double> s(trace.tau.size());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = offset + trace.tau[j] / trace.codeword_length;
  return s;
}

long long bits_before_packet(long long j, long long n, long long n_packets) {
  return (j * n + n_packets - 1) / n_packets;
}

void check_stream_args(double lambda, long long n, int n_packets, double r) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw AnalysisError("lambda must lie in (0, 1]");
  if (n_packets < 1) throw AnalysisError("n_packets must be at least 1");
  if (!(r > 0.0)) throw AnalysisError("r must be positive");
  if (n < n_packets) throw AnalysisError("packet size rounds to zero bits (n < N)");
}

class GapSampler {
 public:
  explicit GapSampler(double lambda)
      : deterministic_(lambda >= 1.0), inv_log_(deterministic_ ? 0.0 : 1.0 / std::log1p(-lambda)) {}

  long long next(CounterRng& rng) const {
    if (deterministic_) return 1;
    return 1 + static_cast<long long>(std::floor(std::log(rng.uniform_open()) * inv_log_));
  }

 private:
  bool deterministic_;
  double inv_log_;
};

TauTrace recursion_skeleton(long long n, int n_packets, double r, double lambda) {
  TauTrace t;
  t.codeword_length = static_cast<double>(n) / (n_packets * r * lambda);
  t.xi.resize(static_cast<std::size_t>(n_packets));
  t.tau.resize(static_cast<std::size_t>(n_packets));
  return t;
}

void apply_recursion(TauTrace& t) {
  for (std::size_t j = 0; j < t.tau.size(); ++j) {
    t.tau[j] = j == 0 ? t.xi[0] : std::max(t.tau[j - 1] + t.codeword_length, t.xi[j]);
  }
}

bool user_succeeds(const OverlapResult& ov, const InfoQuantities& info, int i, double r_code,
                   DecoderMode mode, std::vector<bool>& failed) {
  const int o = 1 - i;
  const auto& mu = ov.mu[i];
  failed.assign(mu.size(), false);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    if (!decode_success(mu[j], info, i, r_code, mode)) failed[j] = true;
  }
  if (mode == DecoderMode::di) {
    for (const Overlap& p : ov.pairs[i]) {
      const double m = ov.mu[o][static_cast<std::size_t>(p.other)];
      if (!(r_code < (1.0 - m) * info.c_tilde_star[i] + m * info.c_tilde[i])) {
        failed[static_cast<std::size_t>(p.own)] = true;
      }
    }
  }
  return std::none_of(failed.begin(), failed.end(), [](bool f) { return f; });
}

struct Partial {
  std::array<long long, 2> failures{};
  std::array<std::vector<long long>, 2> histogram;
};

}  // namespace

std::string_view to_string(SimMode mode) { return mode == SimMode::fluid ? "fluid" : "stochastic"; }

SimMode parse_sim_mode(std::string_view text) {
  if (text == "fluid") return SimMode::fluid;
  if (text == "stochastic") return SimMode::stochastic;
  throw AnalysisError("unknown simulation mode '" + std::string(text) +
                      "' (expected fluid or stochastic)");
}

void validate(const SimConfig& config) {
  validate(config.scheme);
  if (config.trials < 1) throw AnalysisError("trials must be at least 1");
  if (config.threads < 0) throw AnalysisError("threads must be nonnegative");
  if (config.mode == SimMode::stochastic) {
    if (config.n_bits < 1) throw AnalysisError("stochastic mode requires n bits per source");
    if (config.n_bits < config.scheme.n_packets) {
      throw AnalysisError("packet size rounds to zero bits (n < N)");
    }
  }
}

double tau_bar(int j, double r) {
  if (j < 1 || !(r > 0.0)) throw AnalysisError("tau_bar: requires j >= 1 and r > 0");
  return r > 1.0 ? j * r : r + (j - 1);
}

Schedule fluid_schedule(const SchemeParams& scheme, double d1, double d2) {
  const double scale = scheme.n_packets * scheme.r * scheme.lambda;  // 1 / theta
  Schedule s;
  const std::array<double, 2> d{d1, d2};
  for (int i = 0; i < 2; ++i) {
    s.starts[i].resize(static_cast<std::size_t>(scheme.n_packets));
    for (int j = 1; j <= scheme.n_packets; ++j) {
      s.starts[i][static_cast<std::size_t>(j - 1)] = d[i] * scale + tau_bar(j, scheme.r);
    }
  }
  return s;
}

OverlapResult overlap_fractions(const Schedule& schedule) {
  const auto& a = schedule.starts[0];
  const auto& b = schedule.starts[1];
  OverlapResult out;
  out.mu[0].assign(a.size(), 0.0);
  out.mu[1].assign(b.size(), 0.0);
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    const double len = std::min(a[i], b[k]) + 1.0 - std::max(a[i], b[k]);
    if (len > 0.0) {
      out.mu[0][i] += len;
      out.mu[1][k] += len;
      out.pairs[0].push_back({static_cast<int>(i), static_cast<int>(k), len});
      out.pairs[1].push_back({static_cast<int>(k), static_cast<int>(i), len});
    }
    if (a[i] < b[k]) ++i;
    else ++k;
  }
  return out;
}

bool decode_success(double mu, const InfoQuantities& info, int user, double r_code,
                    DecoderMode mode) {
  const int i = user;
  if (mode == DecoderMode::tin) return r_code < (1.0 - mu) * info.c_star[i] + mu * info.c[i];
  return r_code < (1.0 - mu) * info.c_tilde_star[i] + mu * info.c_tilde[i] &&
         r_code < (1.0 - mu) * info.c_star[i] + mu * info.c_cross[i];
}

ArrivalTrace generate_arrivals(double lambda, long long n, CounterRng& rng) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw AnalysisError("lambda must lie in (0, 1]");
  const GapSampler gap(lambda);
  ArrivalTrace t;
  t.arrival_slots.resize(static_cast<std::size_t>(n));
  long long slot = 0;
  for (auto& s : t.arrival_slots) {
    slot += gap.next(rng);
    s = slot;
  }
  return t;
}

TauTrace tau_from_arrivals(const ArrivalTrace& trace, long long n, int n_packets, double r,
                           double lambda) {
  check_stream_args(lambda, n, n_packets, r);
  if (static_cast<long long>(trace.arrival_slots.size()) < n) {
    throw AnalysisError("arrival trace shorter than n");
  }
  TauTrace t = recursion_skeleton(n, n_packets, r, lambda);
  for (int j = 1; j <= n_packets; ++j) {
    const long long k = bits_before_packet(j, n, n_packets);
    t.xi[static_cast<std::size_t>(j - 1)] =
        static_cast<double>(trace.arrival_slots[static_cast<std::size_t>(k - 1)]);
  }
  apply_recursion(t);
  return t;
}

TauTrace simulate_tau(double lambda, long long n, int n_packets, double r, CounterRng& rng) {
  check_stream_args(lambda, n, n_packets, r);
  const GapSampler gap(lambda);
  TauTrace t = recursion_skeleton(n, n_packets, r, lambda);
  long long slot = 0;
  long long bits = 0;
  for (int j = 1; j <= n_packets; ++j) {
    const long long need = bits_before_packet(j, n, n_packets);
    while (bits < need) {
      slot += gap.next(rng);
      ++bits;
    }
    t.xi[static_cast<std::size_t>(j - 1)] = static_cast<double>(slot);
  }
  // Drain the remainder so the generator state matches generate_arrivals.
  while (bits < n) {
    slot += gap.next(rng);
    ++bits;
  }
  apply_recursion(t);
  return t;
}

TrialOutcome simulate_trial(const SimConfig& config, const InfoQuantities& info,
                            long long trial_index) {
  const SchemeParams& s = config.scheme;
  CounterRng rng(config.seed, static_cast<std::uint64_t>(trial_index));
  TrialOutcome out;
  out.d1 = s.d_max * rng.uniform();
  out.d2 = s.d_max * rng.uniform();

  if (config.mode == SimMode::fluid) {
    out.schedule = fluid_schedule(s, out.d1, out.d2);
    out.rate.fill(avg_rate(s.n_packets, s.r, s.lambda));
  } else {
    const double scale = s.n_packets * s.r * s.lambda;
    const std::array<double, 2> d{out.d1, out.d2};
    for (int i = 0; i < 2; ++i) {
      const TauTrace t = simulate_tau(s.lambda, config.n_bits, s.n_packets, s.r, rng);
      out.schedule.starts[i] = starts_from_tau(t, d[i] * scale);
      out.rate[i] = static_cast<double>(config.n_bits) / (t.tau.back() + t.codeword_length);
    }
  }

  const OverlapResult ov = overlap_fractions(out.schedule);
  const double r_code = s.r * s.lambda;
  for (int i = 0; i < 2; ++i) {
    out.outage[i] = !user_succeeds(ov, info, i, r_code, s.decoder[i], out.failed[i]);
  }
  return out;
}

int resolve_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("IC_OUTAGE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<long>(n, cap);
  }
  return n;
}

SimResult run_trials(const SimConfig& config, const InfoQuantities& info) {
  validate(config);
  const long long trials = config.trials;
  const std::size_t n_packets = static_cast<std::size_t>(config.scheme.n_packets);
  const int workers =
      static_cast<int>(std::min<long long>(resolve_threads(config.threads), trials));

  std::vector<Partial> partial(static_cast<std::size_t>(workers));
  std::array<std::vector<double>, 2> rates;
  rates[0].resize(static_cast<std::size_t>(trials));
  rates[1].resize(static_cast<std::size_t>(trials));

  auto work = [&](int w) {
    Partial& part = partial[static_cast<std::size_t>(w)];
    part.histogram[0].assign(n_packets, 0);
    part.histogram[1].assign(n_packets, 0);
    const long long begin = trials * w / workers;
    const long long end = trials * (w + 1) / workers;
    for (long long t = begin; t < end; ++t) {
      const TrialOutcome o = simulate_trial(config, info, t);
      for (int i = 0; i < 2; ++i) {
        if (o.outage[i]) ++part.failures[i];
        for (std::size_t j = 0; j < n_packets; ++j) {
          if (o.failed[i][j]) ++part.histogram[i][j];
        }
        rates[i][static_cast<std::size_t>(t)] = o.rate[i];
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  SimResult res;
  res.trials = trials;
  res.seed = config.seed;
  res.mode = config.mode;
  for (int i = 0; i < 2; ++i) {
    res.failure_histogram[i].assign(n_packets, 0);
    for (const Partial& part : partial) {
      res.failures[i] += part.failures[i];
      for (std::size_t j = 0; j < n_packets; ++j) res.failure_histogram[i][j] += part.histogram[i][j];
    }
    const double p = static_cast<double>(res.failures[i]) / static_cast<double>(trials);
    res.outage[i] = p;
    res.halfwidth[i] = kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    double sum = 0.0;
    for (double v : rates[i]) sum += v;
    res.rates[i] = sum / static_cast<double>(trials);
  }
  return res;
}

}  // namespace icoutage
