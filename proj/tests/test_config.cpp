#include <gtest/gtest.h>

#include <cstdlib>

#include "qtran/config.hpp"
#include "qtran/error.hpp"

using namespace qtran;

namespace {

const char* kBench = R"({
  "model": {"builtin": "single_site", "eps_d": 0.0, "lambda_L": 0.1, "lambda_R": 0.1, "mu0": 0.0},
  "bias": {"R": {"kind": "smooth_step", "delta_v": -2.0, "rise_time": 0.1}},
  "rule": {"kind": "half_sum"},
  "dissipator": "wbl_adiabatic",
  "dt": 0.02,
  "t_end": 60.0,
  "decimation": 5
})";

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, BenchmarkDocument) {
  const RunConfig cfg = parse_config(kBench);
  EXPECT_EQ(cfg.model.kind, ModelSpec::Kind::SingleSite);
  EXPECT_EQ(cfg.dissipator, DissipatorKind::WblAdiabatic);
  EXPECT_DOUBLE_EQ(cfg.t_end, 60.0);
  EXPECT_EQ(cfg.decimation, 5);
  EXPECT_EQ(cfg.bias.right.kind, LeadBias::Kind::SmoothStep);
  EXPECT_EQ(cfg.bias.left.kind, LeadBias::Kind::Zero);
  const DeviceModel m = cfg.model.build();
  EXPECT_EQ(m.n_orb, 1);
  EXPECT_NEAR(m.lambda_R(0, 0).real(), 0.1, 0.0);
}

TEST(Config, EmptyDocumentNamesMissingKeys) {
  EXPECT_EQ(kind_of("{}"), ErrorKind::ValidationError);
  const std::string msg = message_of("{}");
  EXPECT_NE(msg.find("model"), std::string::npos);
  EXPECT_NE(msg.find("bias"), std::string::npos);
}

TEST(Config, SyntaxErrorReportsPosition) {
  EXPECT_EQ(kind_of("{\n  \"model\": ,\n}"), ErrorKind::ParseError);
  EXPECT_NE(message_of("{\n  \"model\": ,\n}").find("2:"), std::string::npos);
}

TEST(Config, UnknownKeyRejected) {
  std::string text = kBench;
  text.insert(1, "\"colour\": 3,");
  EXPECT_EQ(kind_of(text), ErrorKind::ValidationError);
  EXPECT_NE(message_of(text).find("colour"), std::string::npos);
}

TEST(Config, NonHermitianExplicitModel) {
  const std::string text = R"({
    "model": {"h0": [[0.0, 0.1], [0.2, 0.0]], "lambda_L": [[0.1, 0], [0, 0]], "lambda_R": [[0, 0], [0, 0.1]]},
    "bias": {}
  })";
  EXPECT_EQ(kind_of(text), ErrorKind::ValidationError);
  EXPECT_NE(message_of(text).find("h0 not Hermitian"), std::string::npos);
}

TEST(Config, ComplexExplicitModel) {
  const std::string text = R"({
    "model": {"h0": [[0.0, [0.1, 0.05]], [[0.1, -0.05], 0.3]],
              "lambda_L": [[0.1, 0], [0, 0]], "lambda_R": [[0, 0], [0, 0.1]], "mu0": 0.1},
    "bias": {"L": {"kind": "tabulated", "times": [0, 1, 2], "voltages": [0, 0.5, 1.0]}}
  })";
  const RunConfig cfg = parse_config(text);
  EXPECT_EQ(cfg.model.kind, ModelSpec::Kind::Explicit);
  EXPECT_EQ(cfg.model.h0(0, 1), cplx(0.1, 0.05));
  EXPECT_EQ(cfg.bias.left.kind, LeadBias::Kind::Tabulated);
}

TEST(Config, RejectsBadValues) {
  std::string text = kBench;
  EXPECT_EQ(kind_of(std::string(kBench).replace(text.find("0.02"), 4, "-1.0")), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of(std::string(kBench).replace(text.find("wbl_adiabatic"), 13, "markov")), ErrorKind::ValidationError);
}

TEST(Config, RoundTrip) {
  RunConfig cfg = parse_config(kBench);
  cfg.oracle = OracleSpec{};
  cfg.iv_voltages = {-0.5, -1.0};
  const RunConfig again = parse_config(serialize_config(cfg));
  EXPECT_TRUE(again == cfg);
  EXPECT_EQ(serialize_config(again), serialize_config(cfg));
}

TEST(Config, SweepEntriesMergeOverBase) {
  std::string text = kBench;
  text.insert(1, R"("sweep": [{"bias": {"R": {"delta_v": -1.0}}}, {"t_end": 5.0}],)");
  const RunConfig base = parse_config(text);
  ASSERT_EQ(base.sweep.size(), 2u);
  const RunConfig a = sweep_entry(text, 0);
  EXPECT_DOUBLE_EQ(a.bias.right.amplitude, -1.0);
  EXPECT_DOUBLE_EQ(a.bias.right.rise_time, 0.1);
  EXPECT_TRUE(a.sweep.empty());
  const RunConfig b = sweep_entry(text, 1);
  EXPECT_DOUBLE_EQ(b.t_end, 5.0);
  EXPECT_DOUBLE_EQ(b.bias.right.amplitude, -2.0);
}

TEST(Config, EnvironmentOverridesCutoff) {
  const RunConfig cfg = parse_config(kBench);
  ::unsetenv("QTRAN_EPS_MIN");
  EXPECT_DOUBLE_EQ(effective_eps_min(cfg), cfg.eps_min);
  ::setenv("QTRAN_EPS_MIN", "-2500", 1);
  EXPECT_DOUBLE_EQ(effective_eps_min(cfg), -2500.0);
  EXPECT_DOUBLE_EQ(cfg.propagator_options().eps_min, -2500.0);
  ::setenv("QTRAN_EPS_MIN", "abc", 1);
  EXPECT_THROW(effective_eps_min(cfg), Error);
  ::unsetenv("QTRAN_EPS_MIN");
}
