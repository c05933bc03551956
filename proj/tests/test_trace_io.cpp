#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtran/error.hpp"
#include "qtran/trace_io.hpp"

using namespace qtran;

namespace {

TraceRecord sample_record() {
  TraceRecord rec;
  rec.occupations.assign(2, {});
  for (int i = 0; i < 4; ++i) {
    rec.times.push_back(0.1 * i);
    rec.j_L.push_back(-1.0 / 3.0 * i);
    rec.j_R.push_back(1.0 / 3.0 * i + 1e-20);
    rec.trace_sigma.push_back(1.0 + 0.25 * i);
    rec.occupations[0].push_back(0.5 + 0.125 * i);
    rec.occupations[1].push_back(0.5 + 0.125 * i);
  }
  return rec;
}

}  // namespace

TEST(TraceIo, Header) {
  EXPECT_EQ(csv_header(1), "t_fs,J_L_uA,J_R_uA,trace_sigma,occ_0");
  EXPECT_EQ(csv_header(3), "t_fs,J_L_uA,J_R_uA,trace_sigma,occ_0,occ_1,occ_2");
}

TEST(TraceIo, TwelveSignificantDigits) {
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_double(42.0), "42");
  EXPECT_EQ(format_double(-1.5e-20), "-1.5e-20");
  EXPECT_EQ(format_double(-0.0), "0");
}

TEST(TraceIo, RoundTrip) {
  const TraceRecord rec = sample_record();
  std::stringstream ss;
  write_csv(ss, rec);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), csv_header(2));
  const TraceRecord back = read_csv(ss);
  ASSERT_EQ(back.size(), rec.size());
  ASSERT_EQ(back.occupations.size(), 2u);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    EXPECT_NEAR(back.j_L[i], rec.j_L[i], 1e-12);
    EXPECT_NEAR(back.j_R[i], rec.j_R[i], 1e-12);
    EXPECT_DOUBLE_EQ(back.trace_sigma[i], rec.trace_sigma[i]);
    EXPECT_DOUBLE_EQ(back.occupations[1][i], rec.occupations[1][i]);
  }
}

TEST(TraceIo, MalformedInputRejected) {
  std::istringstream bad_header("t,J\n0,1\n");
  EXPECT_THROW(read_csv(bad_header), Error);
  std::istringstream short_row(csv_header(1) + "\n0,1,2\n");
  EXPECT_THROW(read_csv(short_row), Error);
}

TEST(TraceIo, FilesAndPlotScript) {
  const std::filesystem::path dir = std::filesystem::path(QTRAN_TEST_TMP) / "trace_io";
  std::filesystem::create_directories(dir);
  const auto csv = dir / "run.csv";
  write_csv(csv, sample_record());
  write_gnuplot(csv);
  ASSERT_TRUE(std::filesystem::exists(dir / "run.gp"));
  std::ifstream gp(dir / "run.gp");
  const std::string script((std::istreambuf_iterator<char>(gp)), std::istreambuf_iterator<char>());
  EXPECT_NE(script.find("run.csv"), std::string::npos);
  EXPECT_EQ(gnuplot_script("run.csv"), script);
  EXPECT_THROW(write_csv(dir / "missing" / "x.csv", sample_record()), Error);
}
