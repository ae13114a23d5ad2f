#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lwrctl/output.hpp"

using namespace lwrctl;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lwrctl_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Csv, EmptyIsHeaderOnly) {
  EXPECT_EQ(format_csv({}), std::string(kCsvHeader) + "\n");
}

TEST(Csv, OneRecordHasTwelveColumns) {
  TimeSeriesRecord r;
  r.time = 0.015;
  r.V = 1.0 / 3.0;
  r.feasible_b = false;
  r.mass = 0.5;
  const auto ls = lines(format_csv({r}));
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(std::count(ls[0].begin(), ls[0].end(), ','), 11);
  EXPECT_EQ(std::count(ls[1].begin(), ls[1].end(), ','), 11);
  EXPECT_EQ(ls[1], "0.015,0.333333333333,0,0,0,0,0,0,0,1,0,0.5");
}

TEST(Csv, NumberFormat) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-6.18e-4), "-0.000618");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(30.0), "30");
}

TEST(Csv, FileNaming) {
  EXPECT_EQ(output_stem("lwr", "compound", "timeseries"), "lwr_compound_timeseries");
  EXPECT_EQ(snapshot_kind(1.5), "snapshot_1.5");
  EXPECT_EQ(snapshot_kind(30.0), "snapshot_30");
}

TEST(Plots, ZeroSnapshotsWritesTimeSeriesOnly) {
  ScenarioConfig cfg;
  cfg.t_final = 0.03;
  cfg.output.snapshot_times.clear();
  const ScenarioRun run = run_scenario(cfg);
  const fs::path dir = fresh_dir("zero");
  const auto written = emit_plots({&run}, dir, "p");
  ASSERT_EQ(written.size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "p_stability-left_timeseries.csv"));
  EXPECT_TRUE(fs::exists(dir / "p_stability-left_timeseries.plt"));
  EXPECT_EQ(lines(slurp(dir / "p_stability-left_timeseries.csv")).size(), 4u);
  fs::remove_all(dir);
}

TEST(Plots, OverlayCombinesRuns) {
  ScenarioConfig cfg;
  cfg.t_final = 0.03;
  cfg.output.snapshot_times = {0.0};
  const ScenarioRun a = run_scenario(cfg);
  cfg.mode = ControlMode::kCompound;
  const ScenarioRun b = run_scenario(cfg);
  const fs::path dir = fresh_dir("overlay");
  const auto written = emit_plots({&a, &b}, dir, "p");
  EXPECT_EQ(written.size(), 10u);
  const std::string script = slurp(dir / "p_overlay_timeseries.plt");
  EXPECT_NE(script.find("p_stability-left_timeseries.csv"), std::string::npos);
  EXPECT_NE(script.find("p_compound_timeseries.csv"), std::string::npos);
  const std::string snap = slurp(dir / "p_overlay_snapshot_0.plt");
  EXPECT_NE(snap.find("p_stability-left_snapshot_0.csv"), std::string::npos);
  EXPECT_NE(snap.find("p_compound_snapshot_0.csv"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Plots, UnwritableDirectoryThrows) {
  const fs::path blocker = fresh_dir("blocker");
  std::ofstream(blocker) << "not a directory";
  ScenarioConfig cfg;
  cfg.t_final = 0.015;
  const ScenarioRun run = run_scenario(cfg);
  EXPECT_THROW(emit_plots({&run}, blocker / "sub", "p"), OutputError);
  EXPECT_THROW(emit_csv(run.records, blocker / "sub" / "x.csv"), OutputError);
  fs::remove(blocker);
}
