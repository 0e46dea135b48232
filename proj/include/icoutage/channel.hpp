// Two-user interference channels and the mutual-information constants that
// drive the outage analysis.
//
// All information quantities are in bits per channel use. User indices are
// zero-based throughout the library: user 0 is Tx/Rx 1, user 1 is Tx/Rx 2.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace icoutage {

class ChannelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DecoderMode { tin, di };

std::string_view to_string(DecoderMode mode);
DecoderMode parse_decoder_mode(std::string_view text);

/// Probability vector over a finite input alphabet.
struct InputDistribution {
  std::vector<double> probs;

  static InputDistribution uniform(std::size_t size);
  /// Ber(p) on {0,1}: probability p on symbol 1.
  static InputDistribution bernoulli(double p);

  std::size_t size() const { return probs.size(); }
  /// Throws ChannelError unless nonnegative, summing to 1 within 1e-12 and of
  /// the expected size.
  void validate(std::size_t expected_size) const;
};

/// Finite-alphabet two-user interference channel.
///
/// Both kernels are stored row-major with one row per input pair, rows indexed
/// by x1 * x2_size + x2 for both receivers. kernel1 has y1_size columns and
/// kernel2 has y2_size columns.
struct DiscreteIC {
  std::size_t x1_size = 0;
  std::size_t x2_size = 0;
  std::size_t y1_size = 0;
  std::size_t y2_size = 0;
  std::vector<double> kernel1;
  std::vector<double> kernel2;
  std::size_t idle1 = 0;
  std::size_t idle2 = 0;

  std::size_t input_size(int user) const { return user == 0 ? x1_size : x2_size; }
  std::size_t output_size(int receiver) const { return receiver == 0 ? y1_size : y2_size; }
  std::size_t idle(int user) const { return user == 0 ? idle1 : idle2; }

  /// Row p_receiver(. | x1, x2).
  std::span<const double> row(int receiver, std::size_t x1, std::size_t x2) const;
};

/// Throws ChannelError naming the first violated invariant.
void validate(const DiscreteIC& channel);

/// y_i = x_i + sqrt(c_i) x_i' + z_i with unit-variance noise. Powers are linear.
struct GaussianIC {
  double p1 = 1.0;
  double p2 = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double power(int user) const { return user == 0 ? p1 : p2; }
  double cross_gain(int receiver) const { return receiver == 0 ? c1 : c2; }
};

void validate(const GaussianIC& channel);

double dbw_to_watts(double dbw);

/// The ten constants of the analysis, indexed by receiver.
///
///   c_star[i]       I(x_i; y_i | x_i' = idle)
///   c[i]            I(x_i; y_i)
///   c_cross[i]      I(x_i; y_i | x_i')
///   c_tilde_star[i] I(x_i'; y_i | x_i = idle)
///   c_tilde[i]      I(x_i'; y_i)
struct InfoQuantities {
  std::array<double, 2> c_star{};
  std::array<double, 2> c{};
  std::array<double, 2> c_cross{};
  std::array<double, 2> c_tilde_star{};
  std::array<double, 2> c_tilde{};
};

/// I(X;Y) in bits for input pmf px and channel rows w (px.size() rows of
/// `columns` entries each).
double mutual_information(std::span<const double> px, std::span<const double> w,
                          std::size_t columns);

InfoQuantities info_quantities(const DiscreteIC& channel, const InputDistribution& pi1,
                               const InputDistribution& pi2);

/// Shannon's C(x) = 0.5 log2(1 + x).
double gaussian_capacity(double snr);

/// Closed forms under Gaussian point-to-point codebooks.
InfoQuantities gaussian_info_quantities(const GaussianIC& channel);

struct LambdaBarOptions {
  int grid_resolution = 64;  // simplex grid step 1/grid_resolution
  bool refine = true;
};

struct LambdaBar {
  double value = 0.0;
  int user = 0;  // receiver attaining the outer minimum
  std::array<double, 2> per_user{};
  InputDistribution pi1;  // achieving pair for `user`
  InputDistribution pi2;
};

/// min_i max_{pi1,pi2} C_{i,i'} over product input distributions.
///
/// C_{i,i'} is linear in pi_i', so the inner maximum over pi_i' sits on a
/// point mass and is taken exactly; pi_i is searched on the simplex grid and
/// then refined by a pairwise-exchange pattern search (the objective is
/// concave in pi_i).
LambdaBar lambda_bar(const DiscreteIC& channel, const LambdaBarOptions& options = {});
double lambda_bar(const GaussianIC& channel);

struct LambdaThresholds {
  double tin = 0.0;  // min{C_1, C_2}
  double di = 0.0;   // min{C_{1,2}, C~_1, C_{2,1}, C~_2}
};

LambdaThresholds lambda_thresholds(const InfoQuantities& info);

/// Enumerates every point of the probability simplex of dimension `size` with
/// coordinates on the grid k/resolution.
std::vector<std::vector<double>> simplex_grid(std::size_t size, int resolution);

}  // namespace icoutage
