#include <gtest/gtest.h>

#include "sbc/config.hpp"
#include "sbc/error.hpp"

namespace sbc {
namespace {

constexpr const char* kWorkedExample = R"(# worked example
plant = "saturating2d"
n = 1..10
q = 0.9
delay_pmf = [0.2, 0.25, 0.25, 0.1, 0.1, 0.05]
p_inf = 0.05
rho = 0.5
alpha = 1.618
steps = 50
episodes = 100
seed = 7
init_state_stddev = 1.0
)";

std::string key_of(const std::string& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

TEST(Config, ParsesWorkedExample) {
  const RunConfig c = parse_config(kWorkedExample);
  EXPECT_EQ(c.plant, "saturating2d");
  EXPECT_EQ(c.horizons.first, 1u);
  EXPECT_EQ(c.horizons.last, 10u);
  EXPECT_EQ(c.horizons.values().size(), 10u);
  EXPECT_EQ(c.channel.q, 0.9);
  EXPECT_EQ(c.channel.delay_pmf, (std::vector<double>{0.2, 0.25, 0.25, 0.1, 0.1, 0.05}));
  EXPECT_EQ(c.channel.p_inf, 0.05);
  EXPECT_EQ(c.rho, 0.5);
  EXPECT_EQ(c.alpha, 1.618);
  EXPECT_EQ(c.steps, 50u);
  EXPECT_EQ(c.episodes, 100u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.init_state_stddev, 1.0);
}

TEST(Config, MinimalDocumentUsesDefaults) {
  const RunConfig c = parse_config("n = 3\nq = 1\ndelay_pmf = [1]\np_inf = 0\n");
  EXPECT_EQ(c.plant, "saturating2d");
  EXPECT_EQ(c.rho, 0.5);
  EXPECT_EQ(c.alpha, 1.618);
  EXPECT_EQ(c.horizons.values(), (std::vector<std::size_t>{3}));
}

TEST(Config, NormalizationErrorNamesDelayPmf) {
  EXPECT_EQ(key_of("n = 3\nq = 0.9\ndelay_pmf = [0.2, 0.25, 0.25, 0.1, 0.1]\np_inf = 0.05\n"),
            "delay_pmf");
}

TEST(Config, ErrorsNameTheirKey) {
  const std::string base = "q = 0.9\ndelay_pmf = [0.95]\np_inf = 0.05\n";
  EXPECT_EQ(key_of(base + "n = 0\n"), "n");
  EXPECT_EQ(key_of(base + "n = 5..2\n"), "n");
  EXPECT_EQ(key_of(base), "n");
  EXPECT_EQ(key_of("n = 2\ndelay_pmf = [1]\np_inf = 0\n"), "q");
  EXPECT_EQ(key_of(base + "n = 2\nrho = 1\n"), "rho");
  EXPECT_EQ(key_of(base + "n = 2\nalpha = 0\n"), "alpha");
  EXPECT_EQ(key_of(base + "n = 2\nsteps = 0\n"), "steps");
  EXPECT_EQ(key_of(base + "n = 2\nepisodes = -3\n"), "episodes");
  EXPECT_EQ(key_of(base + "n = 2\nseed = abc\n"), "seed");
  EXPECT_EQ(key_of(base + "n = 2\nplant = mystery\n"), "plant");
  EXPECT_EQ(key_of(base + "n = 2\nq = 0.5\n"), "q");  // duplicate
  EXPECT_EQ(key_of(base + "n = 2\nhorizon = 3\n"), "horizon");
  EXPECT_EQ(key_of(base + "n = 2\ninit_state_stddev = -1\n"), "init_state_stddev");
  EXPECT_EQ(key_of("n = 2\nq = 2\ndelay_pmf = [1]\np_inf = 0\n"), "q");
  EXPECT_EQ(key_of("n = 2\nq = 1\ndelay_pmf = 1\np_inf = 0\n"), "delay_pmf");
}

TEST(Config, SyntaxErrors) {
  EXPECT_THROW(parse_key_values("n 3\n"), ConfigError);
  EXPECT_THROW(parse_key_values("n =\n"), ConfigError);
  EXPECT_THROW(parse_key_values("plant = \"abc\n"), ConfigError);
  const RawConfig raw = parse_key_values("  n = 2   # trailing comment\r\n\n# only a comment\n");
  EXPECT_EQ(raw.at("n"), "2");
}

TEST(Config, HorizonRanges) {
  EXPECT_EQ(parse_horizon_range("4").values(), (std::vector<std::size_t>{4}));
  EXPECT_EQ(parse_horizon_range("2..4").values(), (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_THROW(parse_horizon_range("0..3"), ConfigError);
  EXPECT_THROW(parse_horizon_range("3..1"), ConfigError);
  EXPECT_THROW(parse_horizon_range("x"), ConfigError);
  EXPECT_THROW(parse_horizon_range("1..2..3"), ConfigError);
}

TEST(Config, EpisodeTemplateCarriesSettings) {
  const RunConfig c = parse_config(kWorkedExample);
  const EpisodeConfig e = episode_config(c, 4);
  EXPECT_EQ(e.horizon, 4u);
  EXPECT_EQ(e.steps, 50u);
  EXPECT_EQ(e.seed, 7u);
  EXPECT_EQ(e.plant.certificate.alpha, 1.618);
  EXPECT_EQ(e.initial_state.stddev, 1.0);
  EXPECT_EQ(e.channel.delay_pmf.size(), 6u);
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/dir/cfg.txt"), ConfigError);
}

}  // namespace
}  // namespace sbc
