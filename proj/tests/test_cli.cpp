#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "cli_support.hpp"

using namespace hermite_obs::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  auto p = fs::temp_directory_path() / ("hermite_obs_cli_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(HERMITE_OBS_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(IntList, RangeAndCommaForms) {
  EXPECT_EQ(parse_int_list("4:16:4"), (std::vector<int>{4, 8, 12, 16}));
  EXPECT_EQ(parse_int_list("2:4"), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(parse_int_list("9,16,25"), (std::vector<int>{9, 16, 25}));
  EXPECT_THROW(parse_int_list("4:x"), ConfigError);
  EXPECT_THROW(parse_int_list("1:5:0"), ConfigError);
}

TEST(Csv, FixedFormat) {
  CsvTable t;
  t.header = {"a", "b", "c"};
  t.rows.push_back({0.1, 3LL, std::string("x")});
  EXPECT_EQ(t.render(), "a,b,c\n0.10000000000000001,3,x\n");
}

TEST(Fnv, KnownVector) {
  EXPECT_EQ(fnv1a(""), 14695981039346656037ULL);
  EXPECT_EQ(hex64(fnv1a("a")), "af63dc4c8601ec8c");
}

TEST(Config, EmptyFileLeavesFlags) {
  auto d = scratch();
  write(d / "empty.json", "");
  auto m = merge_config({"constant", "--config", (d / "empty.json").string(), "--N", "3"});
  EXPECT_EQ(m.args, (std::vector<std::string>{"constant", "--N", "3"}));
  EXPECT_TRUE(m.warnings.empty());
}

TEST(Config, FlagWinsWithWarning) {
  auto d = scratch();
  write(d / "c.json", R"({"N": 12, "region": "halfline", "mkdirs": true})");
  auto m = merge_config({"constant", "--N", "4", "--config=" + (d / "c.json").string()});
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NE(m.warnings[0].find("N=12"), std::string::npos);
  EXPECT_EQ(m.args, (std::vector<std::string>{"constant", "--N", "4", "--mkdirs", "--region", "halfline"}));
}

TEST(Config, ListsJoinWithCommas) {
  auto d = scratch();
  write(d / "l.json", R"({"N": [4, 8, 16]})");
  auto m = merge_config({"scaling", "--config", (d / "l.json").string()});
  EXPECT_EQ(m.args, (std::vector<std::string>{"scaling", "--N", "4,8,16"}));
}

TEST(Config, MalformedReportsLine) {
  auto d = scratch();
  write(d / "bad.json", "{\n  \"N\": 4,\n  \"region\": \n}");
  try {
    merge_config({"constant", "--config", (d / "bad.json").string()});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  write(d / "obj.json", R"({"N": {"a": 1}})");
  EXPECT_THROW(merge_config({"constant", "--config", (d / "obj.json").string()}), ConfigError);
}

TEST(WriteFile, MissingDirectory) {
  auto d = scratch() / "nested" / "deeper";
  fs::remove_all(d.parent_path());
  EXPECT_THROW(write_file((d / "x.csv").string(), "a\n", false), IoError);
  write_file((d / "x.csv").string(), "a\n", true);
  EXPECT_EQ(slurp(d / "x.csv"), "a\n");
}

TEST(Binary, ExitCodes) {
  auto d = scratch();
  EXPECT_EQ(run("constant --region halfline --n 1 --N 8"), 0);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("constant --no-such-flag 1"), 1);
  EXPECT_EQ(run("constant --region periodic:L=1,gamma=1.5"), 1);
  fs::remove_all(d / "missing");
  EXPECT_EQ(run("constant --region halfline --N 2 --out " + (d / "missing" / "c.json").string()), 4);
  EXPECT_EQ(run("constant --region halfline --N 2 --mkdirs --out " + (d / "missing" / "c.json").string()), 0);
  EXPECT_TRUE(fs::exists(d / "missing" / "c.json"));
  EXPECT_EQ(run("constant --region empty --N 2"), 3);
}

TEST(Binary, ConstantMatchesLibraryValue) {
  auto d = scratch();
  ASSERT_EQ(run("constant --region halfline --n 1 --N 1 --out " + (d / "c1.json").string()), 0);
  const std::string s = slurp(d / "c1.json");
  auto pos = s.find("\"C_N\": ");
  ASSERT_NE(pos, std::string::npos);
  const double C = std::stod(s.substr(pos + 7));
  EXPECT_NEAR(C, 1 / std::sqrt(0.5 - 1 / std::sqrt(2 * M_PI)), 1e-8);
  EXPECT_NE(s.find("\"lambda_min\""), std::string::npos);
}

TEST(Binary, ScalingCsvSchemaAndDeterminism) {
  auto d = scratch();
  const std::string base = "scaling --region periodic:L=1,gamma=0.5 --n 1 --N 4:64:4 --plot-data " + (d / "p.csv").string();
  ASSERT_EQ(run(base + " --csv " + (d / "a.csv").string()), 0);
  ASSERT_EQ(run(base + " --csv " + (d / "b.csv").string()), 0);
  const std::string a = slurp(d / "a.csv");
  EXPECT_EQ(a, slurp(d / "b.csv"));
  EXPECT_EQ(a.substr(0, a.find('\n')), "N,dim,C_measured,lambda_min,bound,bound_variant,precision_bits");
  EXPECT_EQ(a.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 17);
  EXPECT_EQ(slurp(d / "p.csv").substr(0, 15), "sqrt_N,log_C_N\n");
}

TEST(Binary, ConfigFileDrivesRun) {
  auto d = scratch();
  write(d / "cfg.json", R"({"region": "halfline", "N": 6})");
  ASSERT_EQ(run("constant --config " + (d / "cfg.json").string() + " --N 1 --out " + (d / "o.json").string()), 0);
  const std::string s = slurp(d / "o.json");
  EXPECT_NE(s.find("\"N\": 1,"), std::string::npos);
  EXPECT_NE(s.find("\"warnings\""), std::string::npos);
  write(d / "bad.json", "{\"N\": ");
  EXPECT_EQ(run("constant --config " + (d / "bad.json").string()), 1);
}
