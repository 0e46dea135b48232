#include "icoutage/channel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace icoutage {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr std::size_t kMaxGridPoints = 5'000'000;

double clamp_tiny_negative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

void validate_kernel(const std::vector<double>& kernel, std::size_t rows, std::size_t cols,
                     const char* name) {
  if (kernel.size() != rows * cols) {
    std::ostringstream msg;
    msg << name << ": expected " << rows << "x" << cols << " entries, got " << kernel.size();
    throw ChannelError(msg.str());
  }
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = kernel[r * cols + c];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << name << " row " << r << ": negative or non-finite entry at column " << c;
        throw ChannelError(msg.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      std::ostringstream msg;
      msg << name << " row " << r << " sums to " << sum << " (deviation " << sum - 1.0 << ")";
      throw ChannelError(msg.str());
    }
  }
}

// Rows of p_receiver(y | own = u, other = v) with the own/other roles mapped
// back onto the (x1, x2) row index.
std::span<const double> row_own(const DiscreteIC& ch, int receiver, std::size_t own,
                                std::size_t other) {
  return receiver == 0 ? ch.row(0, own, other) : ch.row(1, other, own);
}

std::vector<double> uniform_probs(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

// Capacity-style objective for receiver i with the interferer pinned to
// symbol v: I(x_i; y_i | x_i' = v) as a function of pi_i.
double pinned_mi(const DiscreteIC& ch, int receiver, std::size_t v, std::span<const double> pi) {
  const std::size_t nx = ch.input_size(receiver);
  const std::size_t ny = ch.output_size(receiver);
  std::vector<double> w(nx * ny);
  for (std::size_t u = 0; u < nx; ++u) {
    auto r = row_own(ch, receiver, u, v);
    std::copy(r.begin(), r.end(), w.begin() + static_cast<std::ptrdiff_t>(u * ny));
  }
  return mutual_information(pi, w, ny);
}

// Pairwise mass-exchange pattern search on the simplex.
double refine_on_simplex(std::vector<double>& p, double value, double step,
                         const std::function<double(std::span<const double>)>& f) {
  const std::size_t k = p.size();
  while (step > 1e-12) {
    bool improved = false;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a == b || p[b] <= 0.0) continue;
        const double move = std::min(step, p[b]);
        std::vector<double> q = p;
        q[a] += move;
        q[b] -= move;
        const double v = f(q);
        if (v > value + 1e-15) {
          p = std::move(q);
          value = v;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return value;
}

}  // namespace

std::string_view to_string(DecoderMode mode) { return mode == DecoderMode::tin ? "tin" : "di"; }

DecoderMode parse_decoder_mode(std::string_view text) {
  if (text == "tin" || text == "TIN") return DecoderMode::tin;
  if (text == "di" || text == "DI") return DecoderMode::di;
  throw ChannelError("unknown decoder mode '" + std::string(text) + "' (expected tin or di)");
}

InputDistribution InputDistribution::uniform(std::size_t size) {
  if (size == 0) throw ChannelError("input alphabet must be nonempty");
  return {uniform_probs(size)};
}

InputDistribution InputDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ChannelError("Bernoulli parameter outside [0,1]");
  return {{1.0 - p, p}};
}

void InputDistribution::validate(std::size_t expected_size) const {
  if (probs.size() != expected_size) {
    std::ostringstream msg;
    msg << "input distribution has " << probs.size() << " entries, alphabet has "
        << expected_size;
    throw ChannelError(msg.str());
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ChannelError("input distribution has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "input distribution sums to " << sum;
    throw ChannelError(msg.str());
  }
}

std::span<const double> DiscreteIC::row(int receiver, std::size_t x1, std::size_t x2) const {
  const auto& kernel = receiver == 0 ? kernel1 : kernel2;
  const std::size_t cols = output_size(receiver);
  const std::size_t r = x1 * x2_size + x2;
  return {kernel.data() + r * cols, cols};
}

void validate(const DiscreteIC& channel) {
  if (channel.x1_size == 0 || channel.x2_size == 0 || channel.y1_size == 0 ||
      channel.y2_size == 0) {
    throw ChannelError("alphabet sizes must be positive");
  }
  const std::size_t rows = channel.x1_size * channel.x2_size;
  validate_kernel(channel.kernel1, rows, channel.y1_size, "kernel1");
  validate_kernel(channel.kernel2, rows, channel.y2_size, "kernel2");
  if (channel.idle1 >= channel.x1_size) throw ChannelError("idle1: idle index out of range");
  if (channel.idle2 >= channel.x2_size) throw ChannelError("idle2: idle index out of range");
}

void validate(const GaussianIC& channel) {
  if (!(channel.p1 > 0.0) || !(channel.p2 > 0.0)) throw ChannelError("transmit powers must be positive");
  if (!(channel.c1 >= 0.0) || !(channel.c2 >= 0.0)) throw ChannelError("crossover gains must be nonnegative");
}

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

double mutual_information(std::span<const double> px, std::span<const double> w,
                          std::size_t columns) {
  if (w.size() != px.size() * columns) throw ChannelError("mutual_information: dimension mismatch");
  std::vector<double> q(columns, 0.0);
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t y = 0; y < columns; ++y) q[y] += px[x] * w[x * columns + y];

  double mi = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] <= 0.0) continue;
    for (std::size_t y = 0; y < columns; ++y) {
      const double p = w[x * columns + y];
      if (p <= 0.0) continue;
      mi += px[x] * p * std::log2(p / q[y]);
    }
  }
  return clamp_tiny_negative(mi);
}

InfoQuantities info_quantities(const DiscreteIC& channel, const InputDistribution& pi1,
                               const InputDistribution& pi2) {
  validate(channel);
  pi1.validate(channel.x1_size);
  pi2.validate(channel.x2_size);

  InfoQuantities info;
  for (int i = 0; i < 2; ++i) {
    const int other = 1 - i;
    const auto& own_pi = i == 0 ? pi1.probs : pi2.probs;
    const auto& other_pi = i == 0 ? pi2.probs : pi1.probs;
    const std::size_t nu = channel.input_size(i);
    const std::size_t nv = channel.input_size(other);
    const std::size_t ny = channel.output_size(i);
    const std::size_t idle_other = channel.idle(other);
    const std::size_t idle_own = channel.idle(i);

    std::vector<double> w_star(nu * ny), w_avg(nu * ny, 0.0);
    for (std::size_t u = 0; u < nu; ++u) {
      auto r = row_own(channel, i, u, idle_other);
      std::copy(r.begin(), r.end(), w_star.begin() + static_cast<std::ptrdiff_t>(u * ny));
      for (std::size_t v = 0; v < nv; ++v) {
        auto rv = row_own(channel, i, u, v);
        for (std::size_t y = 0; y < ny; ++y) w_avg[u * ny + y] += other_pi[v] * rv[y];
      }
    }
    info.c_star[i] = mutual_information(own_pi, w_star, ny);
    info.c[i] = mutual_information(own_pi, w_avg, ny);

    double cross = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      if (other_pi[v] <= 0.0) continue;
      cross += other_pi[v] * pinned_mi(channel, i, v, own_pi);
    }
    info.c_cross[i] = cross;

    std::vector<double> t_star(nv * ny), t_avg(nv * ny, 0.0);
    for (std::size_t v = 0; v < nv; ++v) {
      auto r = row_own(channel, i, idle_own, v);
      std::copy(r.begin(), r.end(), t_star.begin() + static_cast<std::ptrdiff_t>(v * ny));
      for (std::size_t u = 0; u < nu; ++u) {
        auto ru = row_own(channel, i, u, v);
        for (std::size_t y = 0; y < ny; ++y) t_avg[v * ny + y] += own_pi[u] * ru[y];
      }
    }
    info.c_tilde_star[i] = mutual_information(other_pi, t_star, ny);
    info.c_tilde[i] = mutual_information(other_pi, t_avg, ny);
  }
  return info;
}

double gaussian_capacity(double snr) { return 0.5 * std::log2(1.0 + snr); }

InfoQuantities gaussian_info_quantities(const GaussianIC& channel) {
  validate(channel);
  InfoQuantities info;
  for (int i = 0; i < 2; ++i) {
    const double own = channel.power(i);
    const double other = channel.power(1 - i);
    const double gain = channel.cross_gain(i);
    info.c_star[i] = gaussian_capacity(own);
    info.c_cross[i] = gaussian_capacity(own);
    info.c[i] = gaussian_capacity(own / (1.0 + gain * other));
    info.c_tilde_star[i] = gaussian_capacity(gain * other);
    info.c_tilde[i] = gaussian_capacity(gain * other / (1.0 + own));
  }
  return info;
}

std::vector<std::vector<double>> simplex_grid(std::size_t size, int resolution) {
  if (size == 0 || resolution < 1) throw ChannelError("simplex_grid: invalid size or resolution");
  // Number of compositions of `resolution` into `size` parts.
  double count = 1.0;
  for (std::size_t k = 1; k < size; ++k)
    count = count * static_cast<double>(resolution + static_cast<int>(k)) / static_cast<double>(k);
  if (count > static_cast<double>(kMaxGridPoints))
    throw ChannelError("simplex_grid: too many grid points; lower the resolution");

  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(count));
  std::vector<int> parts(size, 0);
  const double step = 1.0 / resolution;
  std::function<void(std::size_t, int)> fill = [&](std::size_t pos, int remaining) {
    if (pos + 1 == size) {
      parts[pos] = remaining;
      std::vector<double> p(size);
      for (std::size_t k = 0; k < size; ++k) p[k] = parts[k] * step;
      points.push_back(std::move(p));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      parts[pos] = v;
      fill(pos + 1, remaining - v);
    }
  };
  fill(0, resolution);
  return points;
}

LambdaBar lambda_bar(const DiscreteIC& channel, const LambdaBarOptions& options) {
  validate(channel);
  LambdaBar result;
  std::array<std::vector<double>, 2> best_own;
  std::array<std::size_t, 2> best_pin{};

  for (int i = 0; i < 2; ++i) {
    const std::size_t nu = channel.input_size(i);
    const std::size_t nv = channel.input_size(1 - i);
    const auto grid = simplex_grid(nu, options.grid_resolution);
    double best = -1.0;
    for (std::size_t v = 0; v < nv; ++v) {
      std::vector<double> arg;
      double local = -1.0;
      for (const auto& p : grid) {
        const double val = pinned_mi(channel, i, v, p);
        if (val > local) {
          local = val;
          arg = p;
        }
      }
      if (options.refine) {
        local = refine_on_simplex(arg, local, 0.5 / options.grid_resolution,
                                  [&](std::span<const double> q) { return pinned_mi(channel, i, v, q); });
      }
      if (local > best) {
        best = local;
        best_own[i] = arg;
        best_pin[i] = v;
      }
    }
    result.per_user[i] = best;
  }

  result.user = result.per_user[0] <= result.per_user[1] ? 0 : 1;
  result.value = result.per_user[result.user];
  const int u = result.user;
  std::vector<double> pinned(channel.input_size(1 - u), 0.0);
  pinned[best_pin[u]] = 1.0;
  if (u == 0) {
    result.pi1 = {best_own[0]};
    result.pi2 = {pinned};
  } else {
    result.pi1 = {pinned};
    result.pi2 = {best_own[1]};
  }
  return result;
}

double lambda_bar(const GaussianIC& channel) {
  validate(channel);
  return std::min(gaussian_capacity(channel.p1), gaussian_capacity(channel.p2));
}

LambdaThresholds lambda_thresholds(const InfoQuantities& info) {
  return {std::min(info.c[0], info.c[1]),
          std::min({info.c_cross[0], info.c_tilde[0], info.c_cross[1], info.c_tilde[1]})};
}

}  // namespace icoutage
