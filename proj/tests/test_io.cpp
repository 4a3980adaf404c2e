#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "btrate/btrate.hpp"
#include "support/fixtures.hpp"

using namespace btrate;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text, ComparisonMatrix (*parse)(std::string_view)) {
  try {
    parse(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseResults, Accumulates) {
  const auto c = parse_results("A,B\nA,B\nB,A\n");
  EXPECT_EQ(c.items(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(c(0, 1), 2);
  EXPECT_EQ(c(1, 0), 1);
  const auto h = parse_results("winner,loser\nA,B\nA,B\nB,A\n");
  EXPECT_EQ(h, c);
}

TEST(ParseResults, Table2a) {
  const auto c = parse_results("F,G,10\nG,F,5\nF,H,12\nH,F,3\nG,H,10\nH,G,5");
  EXPECT_EQ(c, fixtures::table2a());
  EXPECT_EQ(parse_results(slurp(BTRATE_TEST_DATA "/table2a_results.csv")), fixtures::table2a());
}

TEST(ParseResults, ErrorsNameTheLine) {
  EXPECT_EQ(error_of("A,A,1", parse_results), "line 1: 'A' cannot beat itself");
  EXPECT_NE(error_of("winner,loser,count\nA,B,1\nB,A,-2\n", parse_results).find("line 3"),
            std::string::npos);
  EXPECT_NE(error_of("winner,loser,count\nA,B,x\n", parse_results).find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of("winner,loser\nA,B\nA\n", parse_results).find("line 3"), std::string::npos);
  EXPECT_NE(error_of("winner,loser,count\nA,B\n", parse_results).find("line 2"), std::string::npos);
  EXPECT_NE(error_of("winner,loser\n\nA,B,1\n", parse_results).find("line 3"), std::string::npos);
  EXPECT_NE(error_of("", parse_results), "");
}

TEST(ParseResults, CrlfAndBom) {
  const auto c = parse_results("\xEF\xBB\xBFwinner,loser,count\r\nX,Y,2\r\nY,X,1\r\n");
  EXPECT_EQ(c.items(), (std::vector<std::string>{"X", "Y"}));
  EXPECT_EQ(c(0, 1), 2);
}

TEST(ParseMatrix, Table1) {
  const auto c = parse_matrix(slurp(BTRATE_TEST_DATA "/table1.csv"));
  EXPECT_EQ(c, fixtures::table1());
  EXPECT_EQ(wins(c).values, (std::vector<double>{3, 3, 2, 1, 1}));
}

TEST(ParseMatrix, ZeroMatrixLoadsButFitRefuses) {
  const auto c = parse_matrix(",A,B\nA,0,0\nB,0,0\n");
  EXPECT_THROW(fit_bt(c), PreconditionViolation);
}

TEST(ParseMatrix, Errors) {
  EXPECT_THROW(parse_matrix(",A,B\nA,1,0\nB,0,0\n"), InvalidInput);
  EXPECT_THROW(parse_matrix(",A,B\nA,0,-1\nB,0,0\n"), InvalidInput);
  EXPECT_THROW(parse_matrix(",A,B\nB,0,1\nA,1,0\n"), InvalidInput);
  EXPECT_THROW(parse_matrix(",A,B\nA,0,1\n"), InvalidInput);
  EXPECT_THROW(parse_matrix(",A,B\nA,0,1,2\nB,1,0\n"), InvalidInput);
  EXPECT_THROW(parse_matrix(",A,B\nA,0,one\nB,1,0\n"), InvalidInput);
}

TEST(DetectFormat, HeaderDecides) {
  EXPECT_EQ(detect_format("winner,loser\nA,B\n"), InputFormat::results);
  EXPECT_EQ(detect_format(",A,B\nA,0,1\nB,1,0\n"), InputFormat::matrix);
  EXPECT_EQ(parse_comparisons(slurp(BTRATE_TEST_DATA "/table2a_results.csv")), fixtures::table2a());
  EXPECT_EQ(parse_comparisons(slurp(BTRATE_TEST_DATA "/table2b.csv")), fixtures::table2b());
}

TEST(RoundTrip, ResultsToMatrixAndBack) {
  const auto c = parse_results("winner,loser,count\nB,A,2.5\nA,C,1\nC,B,4\nA,B,1e-3\n");
  EXPECT_EQ(parse_matrix(write_matrix_csv(c)), c);
  EXPECT_EQ(parse_matrix(write_matrix_csv(fixtures::table2b())), fixtures::table2b());
}

TEST(Format, FixedAndShortest) {
  EXPECT_EQ(format_fixed6(7.5685551), "7.568555");
  EXPECT_EQ(format_fixed6(-1e-12), "0.000000");
  EXPECT_EQ(format_shortest(0.1), "0.1");
  EXPECT_EQ(format_shortest(1e-10), "1e-10");
}

TEST(ParseRaces, File) {
  const auto d = parse_races(slurp(BTRATE_TEST_DATA "/races.csv"));
  EXPECT_EQ(d.items, (std::vector<std::string>{"A", "B", "C", "D"}));
  ASSERT_EQ(d.races.size(), 3u);
  EXPECT_EQ(d.races[2].participants, (std::vector<std::size_t>{0, 2, 3, 1}));
  EXPECT_EQ(d.races[2].ranks, (std::vector<int>{1, 2, 3, 4}));
}

TEST(ParseRaces, Errors) {
  EXPECT_THROW(parse_races("race,who,rank\n"), InvalidInput);
  EXPECT_THROW(parse_races("race_id,competitor,rank\nr,A,0\n"), InvalidInput);
  EXPECT_THROW(parse_races("race_id,competitor,rank\nr,A,first\n"), InvalidInput);
  EXPECT_THROW(parse_races("race_id,competitor,rank\n"), InvalidInput);
}
