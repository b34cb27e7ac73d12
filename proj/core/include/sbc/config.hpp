#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sbc/network.hpp"
#include "sbc/sim.hpp"

namespace sbc {

// Inclusive horizon range "a..b" (a single integer is "a..a").
struct HorizonRange {
  std::size_t first = 1;
  std::size_t last = 1;

  std::vector<std::size_t> values() const;
  bool operator==(const HorizonRange&) const = default;
};

// Validated run configuration.
//
// Document grammar, one entry per line:
//
//   # comment
//   key = value
//
// where value is a number, a bare or double-quoted string, an array
// `[v1, v2, ...]`, or (for `n`) a range `a..b`.
//
// Keys: plant, n, q, delay_pmf, p_inf, rho, alpha, steps, episodes, seed,
// init_state_stddev. n, q, delay_pmf and p_inf are required; rho and alpha
// default to the plant's certificate.
struct RunConfig {
  std::string plant = std::string(kSaturatingExampleName);
  HorizonRange horizons;
  DelayDistribution channel;
  double rho = 0.5;
  double alpha = 1.618;
  std::size_t steps = 50;
  std::size_t episodes = 100;
  std::uint64_t seed = 0;
  double init_state_stddev = 1.0;
  std::filesystem::path output_dir = ".";
};

using RawConfig = std::map<std::string, std::string, std::less<>>;

// Splits a document into raw key/value text. Throws ConfigError on syntax
// errors, duplicate keys and unknown keys.
RawConfig parse_key_values(std::string_view document);

// Converts and validates raw entries; every failure names its key.
RunConfig build_config(const RawConfig& raw);

RunConfig parse_config(std::string_view document);
RunConfig load_config(const std::filesystem::path& path);

// Parses "a..b" or "a". Throws ConfigError tagged with `key`.
HorizonRange parse_horizon_range(std::string_view text, std::string_view key = "n");

// Episode template for one horizon of the run.
EpisodeConfig episode_config(const RunConfig& cfg, std::size_t horizon);

}  // namespace sbc
