#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "slsv/errors.hpp"
#include "slsv/runner.hpp"

using namespace slsv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("slsv_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig tiny_config(const fs::path& out) {
  RunConfig c = parse_config(std::string(SLSV_FIXTURE_DIR) + "/tiny_vp.ini");
  c.output_dir = out.string();
  return c;
}

}  // namespace

TEST(RunVP, ZeroEndTimeWritesOneRow) {
  const fs::path dir = scratch("t0");
  RunConfig c = tiny_config(dir);
  c.t_end = 0.0;
  c.snapshot_times = {0.0};
  const VPRunOutput out = run_vp(c);
  EXPECT_EQ(out.records.size(), 1u);
  EXPECT_EQ(out.steps, 0);
  const std::string csv = slurp(dir / "timeseries.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_TRUE(fs::exists(dir / "snapshot_t0.txt"));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
}

TEST(RunVP, MatchesGoldenFiles) {
  const fs::path dir = scratch("golden");
  (void)run_vp(tiny_config(dir));
  const fs::path golden = fs::path(SLSV_FIXTURE_DIR) / "golden";
  for (const char* f : {"timeseries.csv", "snapshot_t0.5.txt", "snapshot_t1.txt"}) {
    EXPECT_EQ(slurp(dir / f), slurp(golden / f)) << f;
  }
  const Snapshot s = load_snapshot((golden / "snapshot_t1.txt").string());
  EXPECT_EQ(s.t, 1.0);
  EXPECT_EQ(s.nx, 8);
  EXPECT_EQ(s.ny, 16);
}

TEST(RunVP, RowCountFollowsStride) {
  RunConfig c = tiny_config("");
  c.output_dir.clear();
  c.record_stride = 2;
  const VPRunOutput out = run_vp(c);
  EXPECT_EQ(static_cast<int>(out.records.size()), 1 + out.steps / 2 + (out.steps % 2));
  if (out.min_sampled < -1e-12) EXPECT_GT(out.pp_failure_steps, 0);
}

TEST(RunVP, MissingPeaksReportedNotFatal) {
  RunConfig c = tiny_config("");
  c.output_dir.clear();
  c.fits = {{1, 30, FitMode::LeastSquares}};
  const VPRunOutput out = run_vp(c);
  ASSERT_EQ(out.fits.size(), 1u);
  EXPECT_FALSE(out.fits[0].fit.has_value());
  EXPECT_FALSE(out.fits[0].error.empty());
}

TEST(Convergence, SingleResolutionHasNoOrders) {
  const fs::path dir = scratch("conv1");
  const RunConfig c = parse_config_text("[run]\nmode = Convergence\nk = 1\ncfl = 0.4\nt_end = 1\n[scenario]\nname = "
                                        "Linear1D\n[output]\ndir = " + dir.string() + "\n[convergence]\nladder = 16\n");
  const auto tables = run_convergence(c);
  ASSERT_EQ(tables.size(), 1u);
  ASSERT_EQ(tables[0].rows.size(), 1u);
  EXPECT_FALSE(tables[0].rows[0].l2_order);
  EXPECT_GT(tables[0].rows[0].err.l2, 0.0);
  EXPECT_TRUE(fs::exists(dir / "convergence.csv"));
  EXPECT_TRUE(fs::exists(dir / "convergence.txt"));
}

TEST(Convergence, TransportLadderPerCfl) {
  const RunConfig c = parse_config_text(
      "[run]\nmode = Convergence\nk = 2\ncfl = 0.4\nt_end = 2\n[scenario]\nname = Linear1D\n[output]\ndir =\n"
      "[convergence]\nladder = 20, 40, 80\ncfls = 0.4, 2.4\n");
  const auto tables = run_convergence(c);
  ASSERT_EQ(tables.size(), 2u);
  for (const auto& t : tables) EXPECT_GT(*t.rows.back().l2_order, 2.7);
}

TEST(Convergence, CflLadder) {
  const RunConfig c = parse_config_text(
      "[run]\nmode = Convergence\nk = 2\nnx = 20\nny = 20\ncfl = 1\nt_end = 1\n[scenario]\nname = RigidBody\n"
      "[output]\ndir =\n[convergence]\nvary = cfl\ncfls = 2, 4\n");
  const auto tables = run_convergence(c);
  ASSERT_EQ(tables.size(), 1u);
  EXPECT_EQ(tables[0].key_name, "cfl");
  EXPECT_EQ(tables[0].rows.size(), 2u);
}

TEST(Convergence, NeedsExactSolution) {
  const RunConfig c = parse_config_text("[run]\nmode = Convergence\nk = 1\ncfl = 0.5\nt_end = 0.75\n[scenario]\nname = "
                                        "Swirling\n[output]\ndir =\n[convergence]\nladder = 8, 16\n");
  EXPECT_THROW((void)run_convergence(c), ConfigError);
}

TEST(Reversibility, ConfigRun) {
  RunConfig c = parse_config_text("[run]\nmode = Reversibility\nk = 2\nnx = 16\nnv = 16\ncfl = 0.1\nt_end = 0.5\n"
                                  "[scenario]\nname = StrongLandau\n[output]\ndir =\n");
  const ReversibilityResult r = run_reversibility_config(c);
  EXPECT_GT(r.err.l2, 6.31e-4 / 3);
  EXPECT_LT(r.err.l2, 6.31e-4 * 3);
}
