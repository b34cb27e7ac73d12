#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sbc/commands.hpp"
#include "sbc/csv.hpp"

namespace sbc {
namespace {

RunConfig worked_run(const std::string& n = "1..10") {
  RawConfig raw{{"n", n},
                {"q", "0.9"},
                {"delay_pmf", "[0.2, 0.25, 0.25, 0.1, 0.1, 0.05]"},
                {"p_inf", "0.05"},
                {"episodes", "20"},
                {"seed", "3"}};
  return build_config(raw);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sbc_commands_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
    EXPECT_EQ(std::stod(csv::format_double(v)), v);
  }
  EXPECT_EQ(csv::format_double(0.5), "0.5");
  EXPECT_EQ(csv::format_double(1.0 / 0.0), "inf");
  std::string out;
  csv::append_row(out, {"a", "b"});
  EXPECT_EQ(out, "a,b\n");
}

TEST(Analyze, StabilityCsvFlipsAtThree) {
  const auto rows = parse_csv(stability_csv(worked_run()));
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"N", "omega", "inv_alpha", "verdict"}));
  for (std::size_t n = 1; n <= 10; ++n) {
    EXPECT_EQ(rows[n][0], std::to_string(n));
    EXPECT_EQ(rows[n][3], n >= 3 ? "stable" : "not-certified");
  }
}

TEST(Analyze, NoTransmissionOmegaIsOne) {
  RunConfig cfg = worked_run("1..4");
  cfg.channel = {0.0, {1.0}, 0.0};
  const auto rows = parse_csv(stability_csv(cfg));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][1], "1");
}

TEST(Analyze, SingleHorizonOneRow) {
  EXPECT_EQ(parse_csv(stability_csv(worked_run("4"))).size(), 2u);
}

TEST(Analyze, TransitionAndReturnCsvShapes) {
  const RunConfig cfg = worked_run("2..3");
  const auto tm = parse_csv(transition_matrix_csv(cfg));
  EXPECT_EQ(tm[0], (std::vector<std::string>{"N", "from", "to", "probability"}));
  EXPECT_EQ(tm.size(), 1u + 9u + 16u);
  const auto rp = parse_csv(return_pmf_csv(cfg));
  EXPECT_EQ(rp[0], (std::vector<std::string>{"N", "j", "probability"}));
  EXPECT_EQ(rp.size(), 1u + 2u * kDefaultMaxReturnTime);
}

TEST(Analyze, WritesFilesWithLfEndings) {
  RunConfig cfg = worked_run("3");
  cfg.output_dir = scratch_dir("analyze");
  std::ostringstream log;
  cmd_analyze(cfg, log);
  for (const char* f : {"transition_matrix.csv", "return_pmf.csv", "stability.csv"}) {
    const std::string text = read_file(cfg.output_dir / f);
    ASSERT_FALSE(text.empty()) << f;
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text.back(), '\n');
  }
  EXPECT_NE(log.str().find("verdict=stable"), std::string::npos);
  std::filesystem::remove_all(cfg.output_dir);
}

TEST(Sweep, OmegaColumnMatchesAnalyze) {
  const RunConfig cfg = worked_run();
  const auto sweep = parse_csv(sweep_csv(cfg));
  const auto stab = parse_csv(stability_csv(cfg));
  ASSERT_EQ(sweep.size(), stab.size());
  EXPECT_EQ(sweep[0], (std::vector<std::string>{"N", "omega", "verdict", "mean_J", "stderr_J"}));
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    EXPECT_EQ(sweep[i][1], stab[i][1]);
    EXPECT_EQ(sweep[i][2], stab[i][3]);
  }
}

TEST(Sweep, SingleEpisodeReportsNa) {
  RunConfig cfg = worked_run("2");
  cfg.episodes = 1;
  EXPECT_EQ(parse_csv(sweep_csv(cfg))[1][4], "NA");
}

TEST(Sweep, ByteIdenticalAcrossRunsAndWorkers) {
  const RunConfig cfg = worked_run();
  EXPECT_EQ(sweep_csv(cfg, 1), sweep_csv(cfg, 1));
  EXPECT_EQ(sweep_csv(cfg, 1), sweep_csv(cfg, 3));
}

TEST(Simulate, EpisodeAndSummaryCsv) {
  RunConfig cfg = worked_run("2..3");
  cfg.output_dir = scratch_dir("simulate");
  std::ostringstream log;
  cmd_simulate(cfg, log, 2);
  const auto eps = parse_csv(read_file(cfg.output_dir / "episodes.csv"));
  EXPECT_EQ(eps[0], (std::vector<std::string>{"N", "episode", "seed", "J", "diverged"}));
  EXPECT_EQ(eps.size(), 1u + 2u * 20u);
  const auto sum = parse_csv(read_file(cfg.output_dir / "summary.csv"));
  EXPECT_EQ(sum[0], (std::vector<std::string>{"N", "mean_J", "stderr_J"}));
  EXPECT_EQ(sum.size(), 3u);
  std::filesystem::remove_all(cfg.output_dir);
}

TEST(Verify, ShortHorizonsPass) {
  const RunConfig cfg = worked_run("1..5");
  const VerifyReport r = run_verification(cfg);
  EXPECT_EQ(r.checks.size(), 5u * 4u);
  for (const VerifyCheck& c : r.checks) {
    EXPECT_TRUE(c.applicable && !c.skipped && c.passed)
        << "N=" << c.horizon << " " << c.name << " value " << c.value << " limit " << c.limit;
  }
  EXPECT_TRUE(r.all_passed());
}

TEST(Verify, ExpensiveChecksAreSkippedNotPassed) {
  const VerifyReport r = run_verification(worked_run("8"));
  std::size_t skipped = 0;
  for (const VerifyCheck& c : r.checks) skipped += c.skipped;
  EXPECT_EQ(skipped, 2u);
  EXPECT_NE(verify_csv(r).find("skipped"), std::string::npos);
}

TEST(Verify, NoReturnLawMarksChecksNotApplicable) {
  RunConfig cfg = worked_run("3");
  cfg.channel = {1.0, {1.0}, 0.0};
  const VerifyReport r = run_verification(cfg);
  EXPECT_TRUE(r.all_passed());
  EXPECT_NE(verify_csv(r).find("not-applicable"), std::string::npos);
}

}  // namespace
}  // namespace sbc
