#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtran/runner.hpp"
#include "qtran/trace_io.hpp"

using namespace qtran;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(QTRAN_TEST_TMP) / "runner" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

const char* kShortRun = R"({
  "model": {"builtin": "single_site", "eps_d": 0.0, "lambda_L": 0.1, "lambda_R": 0.1},
  "bias": {"R": {"kind": "smooth_step", "delta_v": -2.0, "rise_time": 0.1}},
  "dt": 0.02, "t_end": 2.0, "decimation": 10
})";

}  // namespace

TEST(Runner, SubcommandNames) {
  for (Subcommand c : {Subcommand::GroundState, Subcommand::Propagate, Subcommand::Steady, Subcommand::Transmission,
                       Subcommand::Oracle, Subcommand::Verify}) {
    EXPECT_EQ(parse_subcommand(to_string(c)), c);
  }
  EXPECT_FALSE(parse_subcommand("simulate").has_value());
}

TEST(Runner, SteadyAtZeroBias) {
  const fs::path dir = scratch("steady");
  const auto cfg = write_file(dir / "c.json", R"({"model": {"builtin": "single_site", "lambda_L": 0.1, "lambda_R": 0.1}, "bias": {}})");
  std::ostringstream out, err;
  EXPECT_EQ(run_cli(Subcommand::Steady, cfg.string(), "", out, err), 0);
  EXPECT_EQ(out.str(), "J_L_uA 0\nJ_R_uA 0\n");
  EXPECT_TRUE(err.str().empty());
}

TEST(Runner, PropagateWritesCsvAndPlot) {
  const fs::path dir = scratch("propagate");
  const auto cfg = write_file(dir / "c.json", kShortRun);
  std::ostringstream out, err;
  ASSERT_EQ(run_cli(Subcommand::Propagate, cfg.string(), (dir / "run.csv").string(), out, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(dir / "run.gp"));
  std::ifstream is(dir / "run.csv");
  const TraceRecord rec = read_csv(is);
  EXPECT_EQ(rec.size(), 11u);
  EXPECT_GT(rec.j_R.back(), 0.0);
}

TEST(Runner, RepeatedRunsAreByteIdentical) {
  const fs::path dir = scratch("determinism");
  const auto cfg = write_file(dir / "c.json", kShortRun);
  std::ostringstream out, err;
  ASSERT_EQ(run_cli(Subcommand::Propagate, cfg.string(), (dir / "a.csv").string(), out, err), 0);
  ASSERT_EQ(run_cli(Subcommand::Propagate, cfg.string(), (dir / "b.csv").string(), out, err), 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

TEST(Runner, ConfigErrorExitCode) {
  const fs::path dir = scratch("config_error");
  const auto cfg = write_file(dir / "c.json", "{}");
  std::ostringstream out, err;
  EXPECT_EQ(run_cli(Subcommand::Propagate, cfg.string(), "", out, err), 2);
  EXPECT_EQ(err.str().rfind("CONFIG: ", 0), 0u);
}

TEST(Runner, MissingFileExitCode) {
  std::ostringstream out, err;
  EXPECT_EQ(run_cli(Subcommand::Steady, "/nonexistent/qtran.json", "", out, err), 4);
  EXPECT_EQ(err.str().rfind("IO: ", 0), 0u);
}

TEST(Runner, NumericErrorExitCode) {
  // A single-site CSO run with the level exactly at the Fermi energy.
  const fs::path dir = scratch("numeric_error");
  const auto cfg = write_file(dir / "c.json", R"({"model": {"builtin": "single_site", "lambda_L": 0.1, "lambda_R": 0.1},
    "bias": {}, "dissipator": "cso", "t_end": 1.0})");
  std::ostringstream out, err;
  EXPECT_EQ(run_cli(Subcommand::Propagate, cfg.string(), "", out, err), 3);
  EXPECT_EQ(err.str().rfind("NUMERIC: ", 0), 0u);
}

TEST(Runner, SweepWritesOneFilePerEntry) {
  const fs::path dir = scratch("sweep");
  std::string text = kShortRun;
  text.insert(1, R"("sweep": [{"bias": {"R": {"delta_v": -1.0}}}, {"bias": {"R": {"delta_v": -3.0}}}],)");
  const auto cfg = write_file(dir / "c.json", text);
  std::ostringstream out, err;
  ASSERT_EQ(run_cli(Subcommand::Propagate, cfg.string(), (dir / "iv.csv").string(), out, err), 0) << err.str();
  ASSERT_TRUE(fs::exists(dir / "iv_0.csv"));
  ASSERT_TRUE(fs::exists(dir / "iv_1.csv"));
  // Each entry reproduces a plain run of the merged document.
  std::string single = kShortRun;
  single.replace(single.find("-2.0"), 4, "-3.0");
  const auto direct = write_file(dir / "direct.json", single);
  std::ostringstream o2, e2;
  ASSERT_EQ(run_cli(Subcommand::Propagate, direct.string(), (dir / "direct.csv").string(), o2, e2), 0);
  EXPECT_EQ(slurp(dir / "iv_1.csv"), slurp(dir / "direct.csv"));
  EXPECT_NE(slurp(dir / "iv_0.csv"), slurp(dir / "iv_1.csv"));
  EXPECT_EQ(out.str(), (dir / "iv_0.csv").string() + "\n" + (dir / "iv_1.csv").string() + "\n");
}

TEST(Runner, SweepNeedsOutputPath) {
  const fs::path dir = scratch("sweep_no_out");
  std::string text = kShortRun;
  text.insert(1, R"("sweep": [{"t_end": 1.0}],)");
  const auto cfg = write_file(dir / "c.json", text);
  std::ostringstream out, err;
  EXPECT_EQ(run_cli(Subcommand::Propagate, cfg.string(), "", out, err), 2);
}
