#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "sbc/commands.hpp"
#include "sbc/config.hpp"
#include "sbc/error.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kRuntimeError = 3,
  kVerificationFailed = 4,
};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> n;
  std::optional<std::size_t> episodes;
  std::optional<std::size_t> steps;
  std::size_t jobs = 1;
};

void add_common_options(CLI::App& cmd, Options& opt) {
  cmd.add_option("--config", opt.config_path, "Config file (key = value lines)");
  cmd.add_option("--seed", opt.seed, "Master seed (overrides config)");
  cmd.add_option("--out", opt.out, "Output directory (default: .)");
  cmd.add_option("--n", opt.n, "Horizon N or range a..b (overrides config)");
  cmd.add_option("--episodes", opt.episodes, "Episodes per N (overrides config)");
  cmd.add_option("--steps", opt.steps, "Steps K per episode (overrides config)");
  cmd.add_option("--jobs", opt.jobs, "Worker threads for Monte Carlo runs")
      ->check(CLI::PositiveNumber);
}

sbc::RunConfig resolve_config(const Options& opt) {
  sbc::RawConfig raw;
  if (!opt.config_path.empty()) {
    std::ifstream file(opt.config_path, std::ios::binary);
    if (!file) throw sbc::ConfigError("", "cannot read config file " + opt.config_path);
    std::ostringstream text;
    text << file.rdbuf();
    raw = sbc::parse_key_values(text.str());
  }
  if (opt.seed) raw["seed"] = std::to_string(*opt.seed);
  if (opt.n) raw["n"] = *opt.n;
  if (opt.episodes) raw["episodes"] = std::to_string(*opt.episodes);
  if (opt.steps) raw["steps"] = std::to_string(*opt.steps);

  sbc::RunConfig cfg = sbc::build_config(raw);
  if (opt.out) cfg.output_dir = *opt.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-based networked control: analysis and simulation"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* analyze = app.add_subcommand("analyze", "Buffer chain, return times, Omega verdict");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo closed-loop cost per N");
  CLI::App* sweep = app.add_subcommand("sweep", "Omega, verdict and mean cost per N");
  CLI::App* verify = app.add_subcommand("verify", "Compare simulators against the analytic model");
  for (CLI::App* cmd : {analyze, simulate, sweep, verify}) add_common_options(*cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const sbc::RunConfig cfg = resolve_config(opt);
    if (analyze->parsed()) {
      sbc::cmd_analyze(cfg, std::cout);
    } else if (simulate->parsed()) {
      sbc::cmd_simulate(cfg, std::cout, opt.jobs);
    } else if (sweep->parsed()) {
      sbc::cmd_sweep(cfg, std::cout, opt.jobs);
    } else if (verify->parsed()) {
      if (!sbc::cmd_verify(cfg, std::cout)) {
        std::cerr << "verification failed\n";
        return kVerificationFailed;
      }
    }
  } catch (const sbc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const sbc::DistributionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
