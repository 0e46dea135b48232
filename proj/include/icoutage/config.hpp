// Channel configuration files.
//
//   {"type":"discrete","x1":2,"x2":2,"y1":5,"y2":5,
//    "kernel1":[[...],...],"kernel2":[[...],...],"idle1":0,"idle2":0,
//    "pi1":[...],"pi2":[...]}                          (pi optional, default uniform)
//   {"type":"gaussian","p1_dbw":30,"p2_dbw":30,"c1":0.8,"c2":1.5}
//                                                      (p1 or p1_dbw, not both)
//   {"type":"info","c_star":[..],"c":[..],"c_cross":[..],
//    "c_tilde_star":[..],"c_tilde":[..],"lambda_bar":x} (lambda_bar optional)
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "icoutage/channel.hpp"

namespace icoutage {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelConfig {
  std::variant<DiscreteIC, GaussianIC, InfoQuantities> channel;
  std::optional<InputDistribution> pi1;
  std::optional<InputDistribution> pi2;
  std::optional<double> lambda_bar;  // info configs only
};

ChannelConfig parse_channel_config(std::string_view json_text);
ChannelConfig load_channel_config(const std::string& path);

/// Everything the analysis needs from a configured channel.
struct ResolvedChannel {
  InfoQuantities info;
  double lambda_bar = 0.0;
  std::optional<GaussianIC> gaussian;
  std::string kind;
};

ResolvedChannel resolve(const ChannelConfig& config, const LambdaBarOptions& options = {});

}  // namespace icoutage
