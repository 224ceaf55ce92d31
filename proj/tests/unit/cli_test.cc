#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hybridnet_cli/cli.h"

namespace hybridnet {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hybridnet");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hybridnet_cli_" + std::string(
                                   ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  // Path a-b-c with unit links and one unit of demand from a to c.
  void write_path_instance() {
    write("topology.txt", "S 0 1 1 1\nS 1 2 1 1\n");
    write("demands.csv", "i,j,demand\n0,2,1\n");
  }

  std::string arg(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"generate", "--n", "8"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run_cli({"generate", "--n", "7", "--k", "3", "--out-dir", arg("g")}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  Result a = run_cli({"generate", "--n", "10", "--k", "4", "--seed", "5", "--out-dir", arg("a")});
  Result b = run_cli({"generate", "--n", "10", "--k", "4", "--seed", "5", "--out-dir", arg("b")});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  ASSERT_EQ(b.code, cli::kExitOk) << b.err;
  EXPECT_EQ(slurp(dir_ / "a" / "topology.txt"), slurp(dir_ / "b" / "topology.txt"));
  EXPECT_EQ(slurp(dir_ / "a" / "demands.csv"), slurp(dir_ / "b" / "demands.csv"));
  auto hash_line = [](const std::string& s) { return s.substr(s.find("instance hash")); };
  EXPECT_EQ(hash_line(a.out), hash_line(b.out));
  Result c = run_cli({"generate", "--n", "10", "--k", "4", "--seed", "6", "--out-dir", arg("c")});
  EXPECT_NE(hash_line(a.out), hash_line(c.out));
}

TEST_F(CliTest, SolvePathInstance) {
  write_path_instance();
  std::vector<std::string> base{"solve", "--topology", arg("topology.txt"), "--demands",
                                arg("demands.csv"), "--capacity", "1"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> all = base;
    all.insert(all.end(), extra.begin(), extra.end());
    return run_cli(all);
  };
  Result mc = with({"--path-limit", "unlimited"});
  ASSERT_EQ(mc.code, cli::kExitOk) << mc.err;
  EXPECT_NE(mc.out.find("lambda: 1\n"), std::string::npos) << mc.out;
  EXPECT_NE(mc.out.find("lp bound: 0.5\n"), std::string::npos) << mc.out;

  Result exact = with({"--algo", "exact"});
  ASSERT_EQ(exact.code, cli::kExitOk) << exact.err;
  EXPECT_NE(exact.out.find("lambda: 1\n"), std::string::npos);

  // Sharing the a-c link lets half the demand take each route.
  Result shared = with({"--algo", "exact", "--tau", "sn"});
  ASSERT_EQ(shared.code, cli::kExitOk) << shared.err;
  EXPECT_NE(shared.out.find("lambda: 0.5\n"), std::string::npos) << shared.out;

  Result json = with({"--json"});
  EXPECT_NE(json.out.find("\"lambda\":\"1\""), std::string::npos) << json.out;

  write("matching.txt", "0 2\n");
  Result eval = run_cli({"evaluate", "--topology", arg("topology.txt"), "--demands",
                         arg("demands.csv"), "--capacity", "1", "--matching",
                         arg("matching.txt"), "--tau", "us"});
  ASSERT_EQ(eval.code, cli::kExitOk) << eval.err;
  EXPECT_NE(eval.out.find("lambda: 1\n"), std::string::npos) << eval.out;

  EXPECT_EQ(with({"--algo", "nope"}).code, cli::kExitUsage);
  EXPECT_EQ(with({"--tau", "xx"}).code, cli::kExitUsage);
}

TEST_F(CliTest, ExitCodesForIoAndCapability) {
  write_path_instance();
  EXPECT_EQ(run_cli({"solve", "--topology", arg("missing.txt"), "--demands", arg("demands.csv"),
                     "--capacity", "1"})
                .code,
            cli::kExitIo);
  write("bad.txt", "S 0 1 x 1\n");
  EXPECT_EQ(run_cli({"solve", "--topology", arg("bad.txt"), "--demands", arg("demands.csv"),
                     "--capacity", "1"})
                .code,
            cli::kExitUsage);
  ASSERT_EQ(run_cli({"generate", "--n", "10", "--k", "3", "--out-dir", arg("big")}).code,
            cli::kExitOk);
  Result big = run_cli({"solve", "--topology", (dir_ / "big" / "topology.txt").string(),
                        "--demands", (dir_ / "big" / "demands.csv").string(), "--algo", "exact"});
  EXPECT_EQ(big.code, cli::kExitCapability) << big.out << big.err;
  EXPECT_FALSE(big.err.empty());
}

std::string without_timing(const std::string& csv) {
  // Drops the wall_time_ms column (the ninth).
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() > 8) cells.erase(cells.begin() + 8);
    for (const std::string& c : cells) out += c + ",";
    out += "\n";
  }
  return out;
}

TEST_F(CliTest, ExperimentReproducible) {
  write("plan.json", R"({"n": [8, 10], "k": [4],
      "demand": {"model": "pfabric", "rate": 40, "duration": 1, "sizes": 1},
      "algorithms": ["MC_SS", "Greedy", "MWM", "Oblivious", "LP"],
      "eval": [{"tau": "SS", "path_limit": 3}],
      "repetitions": 2, "seed": 4})");
  Result first = run_cli({"experiment", "--plan", arg("plan.json"), "--out-dir", arg("r1")});
  ASSERT_EQ(first.code, cli::kExitOk) << first.err;
  Result second = run_cli({"experiment", "--plan", arg("plan.json"), "--out-dir", arg("r2"),
                           "--parallel", "2", "--jsonl"});
  ASSERT_EQ(second.code, cli::kExitOk) << second.err;
  std::string records = slurp(dir_ / "r1" / "records.csv");
  EXPECT_EQ(std::count(records.begin(), records.end(), '\n'), 1 + 2 * 2 * 5);
  EXPECT_EQ(without_timing(records), without_timing(slurp(dir_ / "r2" / "records.csv")));
  std::string jsonl = slurp(dir_ / "r2" / "records.jsonl");
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 2 * 2 * 5);
  EXPECT_TRUE(fs::exists(dir_ / "r1" / "summary.csv"));

  write("trace_plan.json", R"({"n": [8], "k": [4],
      "demand": {"model": "trace", "path": "no_such_trace.csv"},
      "algorithms": ["LP"], "eval": [{"tau": "SS"}], "repetitions": 1})");
  EXPECT_EQ(run_cli({"experiment", "--plan", arg("trace_plan.json"), "--out-dir", arg("r3")}).code,
            cli::kExitIo);
  EXPECT_EQ(run_cli({"experiment", "--plan", arg("absent.json")}).code, cli::kExitIo);
}

}  // namespace
}  // namespace hybridnet
