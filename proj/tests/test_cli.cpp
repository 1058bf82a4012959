#include "test_support.hpp"

#include "cli.hpp"
#include "fan_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

using namespace stackheight;
using stackheight::testing::fan_path;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("stackheight_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, CountP1) {
  const Result r = run({"count", "--fan", fan_path("p1"), "--bound", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["N_H"], 6);
}

TEST(Cli, CountNaiveAndCustomRaisedVector) {
  const Result r =
      run({"count", "--fan", fan_path("p12"), "--bound", "300", "--s", "[\"3/2\", 1, 0.25]", "--naive"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Result fast = run({"count", "--fan", fan_path("p12"), "--bound", "300", "--s", "[\"3/2\", 1, 0.25]"});
  EXPECT_EQ(nlohmann::json::parse(r.out)["N_H"], nlohmann::json::parse(fast.out)["N_H"]);
}

TEST(Cli, CountAppendsCsv) {
  const auto path = std::filesystem::temp_directory_path() / "stackheight_count.csv";
  std::filesystem::remove(path);
  ASSERT_EQ(run({"count", "--fan", fan_path("p1"), "--bound", "4", "--out", path.string()}).code, 0);
  ASSERT_EQ(run({"count", "--fan", fan_path("p1"), "--bound", "10", "--out", path.string()}).code, 0);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), "B,N\n4,6\n10,14\n");
}

TEST(Cli, SectorsP12) {
  const Result r = run({"fan", "sectors", fan_path("p12")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["sectors"].size(), 2u);
  EXPECT_TRUE(doc["sectors"][0]["untwisted"].get<bool>());
  EXPECT_EQ(doc["sectors"][1]["y"], nlohmann::json::array({-1}));
  EXPECT_EQ(doc["sectors"][1]["age"], "1/2");
  EXPECT_EQ(doc["anticanonical"], nlohmann::json::array({"1", "1", "1/2"}));
}

TEST(Cli, ValidateIncompleteReportsWitness) {
  const Result r = run({"fan", "validate", fan_path("incomplete")});
  EXPECT_EQ(r.code, 1);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_FALSE(doc["valid"].get<bool>());
  bool found = false;
  for (const auto& c : doc["checks"])
    if (c["check"] == "complete") {
      found = true;
      EXPECT_EQ(c["witness"], nlohmann::json::array({"-1"}));
    }
  EXPECT_TRUE(found);
}

TEST(Cli, ValidateBundledFans) {
  for (const auto& name : stackheight::testing::kBundledFans) EXPECT_EQ(run({"fan", "validate", fan_path(name)}).code, 0);
}

TEST(Cli, InvalidFanExitsOneWithReport) {
  const Result r = run({"count", "--fan", fan_path("incomplete"), "--bound", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("complete"), std::string::npos);
}

TEST(Cli, MalformedJsonReportsPosition) {
  const auto path = temp_file("broken.json", "{\n  \"name\": \"x\",\n  \"rig_rank\": 1,\n  \"rays\": [ oops ]\n}\n");
  const Result r = run({"fan", "validate", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("column"), std::string::npos) << r.err;
}

TEST(Cli, MissingFieldIsAParseError) {
  const auto path = temp_file("nofield.json", R"({"rig_rank": 1, "rays": []})");
  EXPECT_EQ(run({"fan", "validate", path}).code, 2);
}

TEST(Cli, UnknownRayIdFailsValidation) {
  const auto path = temp_file("unknown.json",
                              R"({"rig_rank": 1, "rays": [{"id": "a", "b": [1]}, {"id": "b", "b": [-1]}],
                                  "max_cones": [["a"], ["zz"]]})");
  EXPECT_EQ(run({"fan", "validate", path}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"count", "--fan", fan_path("p1")}).code, 2);
  EXPECT_EQ(run({"count", "--fan", fan_path("p1"), "--bound", "abc"}).code, 2);
  EXPECT_EQ(run({"count", "--fan", fan_path("p1"), "--bound", "4", "--s", "[1]"}).code, 2);
  EXPECT_EQ(run({"count", "--fan", "/nonexistent.json", "--bound", "4"}).code, 2);
  EXPECT_EQ(run({"zeta", "local", "--fan", fan_path("p1"), "--prime", "4"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DomainErrorOutsideLambda) {
  EXPECT_EQ(run({"count", "--fan", fan_path("p12"), "--bound", "4", "--s", "[1, 1, -1]"}).code, 2);
}

TEST(Cli, NormalizeRoundTrips) {
  for (const auto& name : stackheight::testing::kBundledFans) {
    const Result r = run({"fan", "normalize", fan_path(name)});
    ASSERT_EQ(r.code, 0) << r.err;
    const StackyFan reparsed = cli::parse_fan(r.out);
    EXPECT_EQ(reparsed, cli::normalize(stackheight::testing::load_bundled_spec(name))) << name;
  }
}

TEST(Cli, ZetaLocalWithOracle) {
  const Result r = run({"zeta", "local", "--fan", fan_path("p12"), "--prime", "2", "--oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(doc["value"].get<double>(), 4.0);
  EXPECT_TRUE(doc["oracle"]["agrees"].get<bool>());
  EXPECT_EQ(doc["Q_Sigma"], "1 + Y1 - X_plus*Y1 - X_plus*X_minus");
}

TEST(Cli, Predict) {
  const Result r = run({"predict", "--fan", fan_path("p1"), "--prime-bound", "100000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["b"], 1);
  EXPECT_EQ(doc["X"]["exact"], "1/2");
  EXPECT_NEAR(doc["C"].get<double>(), 1.2158542, 1e-5);
}

TEST(Cli, SweepCsv) {
  const Result r = run({"count-sweep", "--fan", fan_path("p1"), "--bounds", "4,10,100"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "B,N\n4,6\n10,14\n100,126\n");
  EXPECT_EQ(run({"count-sweep", "--fan", fan_path("p1"), "--bounds", "10,4"}).code, 2);
}

TEST(Cli, CompareColumns) {
  const Result r =
      run({"compare", "--fan", fan_path("p1"), "--bounds", "100,1000,10000,100000", "--prime-bound", "10000"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "B,N,predicted_C,predicted_b,C_hat,exponent_hat");
  std::string row;
  int rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 5) << row;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Cli, NumbersUseTwelveSignificantDigits) {
  EXPECT_EQ(cli::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(cli::format_number(1234567.0), "1234567");
  EXPECT_EQ(cli::number(2.0 / 3.0).get<double>(), 0.666666666667);
}
