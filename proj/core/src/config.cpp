#include "sbc/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sbc/error.hpp"
#include "sbc/plant.hpp"

namespace sbc {

namespace {

constexpr std::array<std::string_view, 11> kKnownKeys = {
    "plant", "n",     "q",        "delay_pmf", "p_inf",            "rho",
    "alpha", "steps", "episodes", "seed",      "init_state_stddev"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view key, std::string_view value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    return std::string(value.substr(1, value.size() - 2));
  }
  if (value.find('"') != std::string_view::npos) {
    throw ConfigError(std::string(key), "unbalanced quotes in '" + std::string(value) + "'");
  }
  return std::string(value);
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) {
    throw ConfigError(std::string(key), "value must be finite");
  }
  return value;
}

template <typename Int>
Int to_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  Int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key),
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> to_double_array(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError(std::string(key), "expected an array like [0.5, 0.5]");
  }
  std::vector<double> values;
  std::string_view body = trim(text.substr(1, text.size() - 2));
  if (body.empty()) return values;
  while (true) {
    const auto comma = body.find(',');
    values.push_back(to_double(key, body.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  return values;
}

const std::string* find(const RawConfig& raw, std::string_view key) {
  const auto it = raw.find(key);
  return it == raw.end() ? nullptr : &it->second;
}

const std::string& require(const RawConfig& raw, std::string_view key) {
  const std::string* value = find(raw, key);
  if (value == nullptr) throw ConfigError(std::string(key), "missing required key");
  return *value;
}

}  // namespace

std::vector<std::size_t> HorizonRange::values() const {
  std::vector<std::size_t> out;
  for (std::size_t n = first; n <= last; ++n) out.push_back(n);
  return out;
}

HorizonRange parse_horizon_range(std::string_view text, std::string_view key) {
  text = trim(text);
  HorizonRange range;
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    range.first = range.last = to_unsigned<std::size_t>(key, text);
  } else {
    range.first = to_unsigned<std::size_t>(key, text.substr(0, dots));
    range.last = to_unsigned<std::size_t>(key, text.substr(dots + 2));
  }
  if (range.first == 0) throw ConfigError(std::string(key), "horizon N must be >= 1");
  if (range.last < range.first) {
    throw ConfigError(std::string(key), "empty horizon range '" + std::string(text) + "'");
  }
  return range;
}

RawConfig parse_key_values(std::string_view document) {
  RawConfig raw;
  std::size_t line_no = 0;
  while (!document.empty()) {
    ++line_no;
    const auto newline = document.find('\n');
    std::string_view line = document.substr(0, newline);
    document = newline == std::string_view::npos ? std::string_view{}
                                                 : document.substr(newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ConfigError(key, "unknown key (line " + std::to_string(line_no) + ")");
    }
    if (value.empty()) throw ConfigError(key, "missing value");
    if (!raw.emplace(key, unquote(key, value)).second) {
      throw ConfigError(key, "duplicate key (line " + std::to_string(line_no) + ")");
    }
  }
  return raw;
}

RunConfig build_config(const RawConfig& raw) {
  RunConfig cfg;
  if (const std::string* v = find(raw, "plant")) cfg.plant = *v;
  PlantBundle plant;
  try {
    plant = make_plant(cfg.plant);
  } catch (const InvalidArgument& e) {
    throw ConfigError("plant", e.what());
  }

  cfg.horizons = parse_horizon_range(require(raw, "n"), "n");

  cfg.channel.q = to_double("q", require(raw, "q"));
  cfg.channel.delay_pmf = to_double_array("delay_pmf", require(raw, "delay_pmf"));
  cfg.channel.p_inf = to_double("p_inf", require(raw, "p_inf"));
  if (!(cfg.channel.q >= 0.0 && cfg.channel.q <= 1.0)) {
    throw ConfigError("q", "must lie in [0, 1]");
  }
  if (!(cfg.channel.p_inf >= 0.0 && cfg.channel.p_inf <= 1.0)) {
    throw ConfigError("p_inf", "must lie in [0, 1]");
  }
  try {
    validate(cfg.channel);
  } catch (const DistributionError& e) {
    throw ConfigError("delay_pmf", e.what());
  }

  cfg.rho = plant.certificate.rho;
  cfg.alpha = plant.certificate.alpha;
  if (const std::string* v = find(raw, "rho")) cfg.rho = to_double("rho", *v);
  if (const std::string* v = find(raw, "alpha")) cfg.alpha = to_double("alpha", *v);
  if (!(cfg.rho >= 0.0 && cfg.rho < 1.0)) throw ConfigError("rho", "must lie in [0, 1)");
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha", "must be > 0");

  if (const std::string* v = find(raw, "steps")) {
    cfg.steps = to_unsigned<std::size_t>("steps", *v);
  }
  if (cfg.steps == 0) throw ConfigError("steps", "must be >= 1");
  if (const std::string* v = find(raw, "episodes")) {
    cfg.episodes = to_unsigned<std::size_t>("episodes", *v);
  }
  if (cfg.episodes == 0) throw ConfigError("episodes", "must be >= 1");
  if (const std::string* v = find(raw, "seed")) {
    cfg.seed = to_unsigned<std::uint64_t>("seed", *v);
  }
  if (const std::string* v = find(raw, "init_state_stddev")) {
    cfg.init_state_stddev = to_double("init_state_stddev", *v);
  }
  if (!(cfg.init_state_stddev >= 0.0)) {
    throw ConfigError("init_state_stddev", "must be >= 0");
  }
  return cfg;
}

RunConfig parse_config(std::string_view document) {
  return build_config(parse_key_values(document));
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  return parse_config(text.str());
}

EpisodeConfig episode_config(const RunConfig& cfg, std::size_t horizon) {
  EpisodeConfig ep;
  ep.plant = make_plant(cfg.plant);
  ep.plant.certificate.rho = cfg.rho;
  ep.plant.certificate.alpha = cfg.alpha;
  ep.horizon = horizon;
  ep.channel = cfg.channel;
  ep.steps = cfg.steps;
  ep.initial_state = InitialStateSpec::gaussian(cfg.init_state_stddev);
  ep.seed = cfg.seed;
  return ep;
}

}  // namespace sbc
