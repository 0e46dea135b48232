#include "icoutage/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace icoutage {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::size_t count(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> kernel_rows(const json& j, const char* key, std::size_t rows,
                                std::size_t cols) {
  const json& v = field(j, key);
  if (!v.is_array() || v.size() != rows) {
    throw ConfigError(std::string("field '") + key + "' must hold " + std::to_string(rows) +
                      " rows");
  }
  std::vector<double> flat;
  flat.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = v[r];
    if (!row.is_array() || row.size() != cols) {
      throw ConfigError(std::string(key) + " row " + std::to_string(r) + " must hold " +
                        std::to_string(cols) + " entries");
    }
    for (const json& x : row) {
      if (!x.is_number()) throw ConfigError(std::string(key) + " entries must be numbers");
      flat.push_back(x.get<double>());
    }
  }
  return flat;
}

std::array<double, 2> pair(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string("field '") + key + "' must be a two-number array");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::optional<InputDistribution> distribution(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string("field '") + key + "' must be an array");
  InputDistribution d;
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError(std::string(key) + " entries must be numbers");
    d.probs.push_back(x.get<double>());
  }
  return d;
}

double power(const json& j, const char* linear, const char* dbw) {
  const bool has_linear = j.contains(linear);
  const bool has_dbw = j.contains(dbw);
  if (has_linear == has_dbw) {
    throw ConfigError(std::string("exactly one of '") + linear + "' and '" + dbw +
                      "' is required");
  }
  return has_linear ? number(j, linear) : dbw_to_watts(number(j, dbw));
}

}  // namespace

ChannelConfig parse_channel_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("channel config must be a JSON object");
  const json& type = field(j, "type");
  if (!type.is_string()) throw ConfigError("field 'type' must be a string");
  const std::string kind = type.get<std::string>();

  ChannelConfig cfg;
  try {
    if (kind == "discrete") {
      DiscreteIC ch;
      ch.x1_size = count(j, "x1");
      ch.x2_size = count(j, "x2");
      ch.y1_size = count(j, "y1");
      ch.y2_size = count(j, "y2");
      const std::size_t rows = ch.x1_size * ch.x2_size;
      ch.kernel1 = kernel_rows(j, "kernel1", rows, ch.y1_size);
      ch.kernel2 = kernel_rows(j, "kernel2", rows, ch.y2_size);
      ch.idle1 = j.contains("idle1") ? count(j, "idle1") : 0;
      ch.idle2 = j.contains("idle2") ? count(j, "idle2") : 0;
      validate(ch);
      cfg.pi1 = distribution(j, "pi1");
      cfg.pi2 = distribution(j, "pi2");
      if (cfg.pi1) cfg.pi1->validate(ch.x1_size);
      if (cfg.pi2) cfg.pi2->validate(ch.x2_size);
      cfg.channel = ch;
    } else if (kind == "gaussian") {
      GaussianIC ch;
      ch.p1 = power(j, "p1", "p1_dbw");
      ch.p2 = power(j, "p2", "p2_dbw");
      ch.c1 = number(j, "c1");
      ch.c2 = number(j, "c2");
      validate(ch);
      cfg.channel = ch;
    } else if (kind == "info") {
      InfoQuantities q;
      q.c_star = pair(j, "c_star");
      q.c = pair(j, "c");
      q.c_cross = pair(j, "c_cross");
      q.c_tilde_star = pair(j, "c_tilde_star");
      q.c_tilde = pair(j, "c_tilde");
      for (const auto* arr : {&q.c_star, &q.c, &q.c_cross, &q.c_tilde_star, &q.c_tilde}) {
        for (double v : *arr) {
          if (!(v >= 0.0)) throw ConfigError("information quantities must be nonnegative");
        }
      }
      if (j.contains("lambda_bar")) cfg.lambda_bar = number(j, "lambda_bar");
      cfg.channel = q;
    } else {
      throw ConfigError("unknown channel type '" + kind + "'");
    }
  } catch (const ChannelError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ChannelConfig load_channel_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read channel config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_config(buf.str());
}

ResolvedChannel resolve(const ChannelConfig& config, const LambdaBarOptions& options) {
  ResolvedChannel out;
  if (const auto* d = std::get_if<DiscreteIC>(&config.channel)) {
    const InputDistribution pi1 = config.pi1.value_or(InputDistribution::uniform(d->x1_size));
    const InputDistribution pi2 = config.pi2.value_or(InputDistribution::uniform(d->x2_size));
    try {
      out.info = info_quantities(*d, pi1, pi2);
    } catch (const ChannelError& e) {
      throw ConfigError(e.what());
    }
    out.lambda_bar = lambda_bar(*d, options).value;
    out.kind = "discrete";
  } else if (const auto* g = std::get_if<GaussianIC>(&config.channel)) {
    out.info = gaussian_info_quantities(*g);
    out.lambda_bar = lambda_bar(*g);
    out.gaussian = *g;
    out.kind = "gaussian";
  } else {
    const auto& q = std::get<InfoQuantities>(config.channel);
    out.info = q;
    out.lambda_bar = config.lambda_bar.value_or(std::min(q.c_cross[0], q.c_cross[1]));
    out.kind = "info";
  }
  return out;
}

}  // namespace icoutage
