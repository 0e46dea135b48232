// Monte Carlo realization of the block-transmission scheme under the
// capacity-threshold decoding rule.
#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "icoutage/analysis.hpp"
#include "icoutage/channel.hpp"
#include "icoutage/rng.hpp"

namespace icoutage {

enum class SimMode { fluid, stochastic };

std::string_view to_string(SimMode mode);
SimMode parse_sim_mode(std::string_view text);

struct SimConfig {
  SchemeParams scheme;
  long long n_bits = 0;  // bits per source; unused in fluid mode
  long long trials = 1000;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::fluid;
  int threads = 0;  // 0: hardware concurrency
};

void validate(const SimConfig& config);

/// Limiting codeword start position (in codeword lengths).
double tau_bar(int j, double r);

/// Unit-length codeword intervals [start, start + 1) on the normalized axis.
struct Schedule {
  std::array<std::vector<double>, 2> starts;
};

Schedule fluid_schedule(const SchemeParams& scheme, double d1, double d2);

struct Overlap {
  int own = 0;    // codeword index of the user
  int other = 0;  // codeword index of the interferer
  double length = 0.0;
};

struct OverlapResult {
  std::array<std::vector<double>, 2> mu;
  std::array<std::vector<Overlap>, 2> pairs;  // pairs[i]: overlaps seen from user i
};

/// Total intersection length of each codeword with the other user's codewords.
OverlapResult overlap_fractions(const Schedule& schedule);

bool decode_success(double mu, const InfoQuantities& info, int user, double r_code,
                    DecoderMode mode);

/// Bit arrival slots (1-based) of one source.
struct ArrivalTrace {
  std::vector<long long> arrival_slots;
};

/// First n arrival slots of a Bernoulli(lambda) stream.
ArrivalTrace generate_arrivals(double lambda, long long n, CounterRng& rng);

struct TauTrace {
  std::vector<double> xi;   // slot at which packet j is fully buffered
  std::vector<double> tau;  // transmission start of packet j
  double codeword_length = 0.0;
};

/// Applies the tau recursion to a stored arrival trace.
TauTrace tau_from_arrivals(const ArrivalTrace& trace, long long n, int n_packets, double r,
                           double lambda);

/// Streams arrivals and applies the recursion without storing the trace.
/// Consumes the generator exactly like generate_arrivals.
TauTrace simulate_tau(double lambda, long long n, int n_packets, double r, CounterRng& rng);

struct TrialOutcome {
  double d1 = 0.0;
  double d2 = 0.0;
  std::array<bool, 2> outage{};
  std::array<std::vector<bool>, 2> failed;
  std::array<double, 2> rate{};
  Schedule schedule;
};

TrialOutcome simulate_trial(const SimConfig& config, const InfoQuantities& info,
                            long long trial_index);

struct SimResult {
  std::array<double, 2> outage{};
  std::array<double, 2> halfwidth{};
  std::array<double, 2> rates{};
  std::array<long long, 2> failures{};
  std::array<std::vector<long long>, 2> failure_histogram;
  long long trials = 0;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::fluid;
};

SimResult run_trials(const SimConfig& config, const InfoQuantities& info);

/// Worker count after applying IC_OUTAGE_THREADS.
int resolve_threads(int requested);

}  // namespace icoutage
