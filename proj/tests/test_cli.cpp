#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "beamforge/cli.hpp"
#include "beamforge/instance.hpp"
#include "test_support.hpp"

namespace beamforge {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("beamforge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
  std::string example = test::data_path("cwp000.json");
};

TEST_F(Cli, BoundOneLine) {
  const CliRun r = run({"bound", "--instance", example});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "{\"makespan_lb\":2,\"waste_lb\":0.2,\"total\":2.2}\n");
}

TEST_F(Cli, MissingFileIsIoError) {
  const CliRun r = run({"solve", "--instance", path("missing.json")});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("missing.json"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(Cli, UnknownFlagIsValidationError) {
  EXPECT_EQ(run({"bound", "--instance", example, "--bogus"}).code, kExitValidation);
  EXPECT_EQ(run({"frobnicate"}).code, kExitValidation);
  EXPECT_EQ(run({}).code, kExitValidation);
  EXPECT_EQ(run({"gen", "--types", "1"}).code, kExitValidation);
}

TEST_F(Cli, InvalidInstanceIsValidationError) {
  test::read_text(example);
  std::ofstream(path("bad.json")) << "{\"C\": 1";
  EXPECT_EQ(run({"bound", "--instance", path("bad.json")}).code, kExitValidation);
  std::ofstream(path("neg.json")) << "{\"C\": 1}";
  EXPECT_EQ(run({"patterns", "--instance", path("neg.json")}).code, kExitValidation);
}

TEST_F(Cli, InfeasibleInstanceExitCode) {
  Instance inst = cwp000();
  inst.stock = {0, 0, 0, 0, 0};
  std::ofstream(path("empty.json")) << serialize_instance(inst);
  const CliRun r = run({"solve", "--instance", path("empty.json"), "--ng-mult", "1"});
  EXPECT_EQ(r.code, kExitInfeasible);
}

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run({"gen", "--seed", "7", "--types", "1", "--molds", "5", "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"gen", "--seed", "7", "--types", "1", "--molds", "5", "--out", path("b.json")}).code, 0);
  EXPECT_EQ(test::read_text(path("a.json")), test::read_text(path("b.json")));
  EXPECT_EQ(parse_instance(test::read_text(path("a.json"))), generate_instance(7, 1, 5));
  EXPECT_EQ(run({"gen", "--seed", "7"}).out, test::read_text(path("a.json")));
}

TEST_F(Cli, PatternsDocument) {
  const CliRun r = run({"patterns", "--instance", example});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"packing\""), std::string::npos);
  EXPECT_NE(r.out.find("\"used_capacity\": 5.54"), std::string::npos);
  EXPECT_NE(r.out.find("\"overlapping\""), std::string::npos);
}

TEST_F(Cli, EmitLp) {
  ASSERT_EQ(run({"emit-lp", "--instance", example, "--out", path("m.lp")}).code, 0);
  const std::string text = test::read_text(path("m.lp"));
  EXPECT_EQ(text.rfind("Minimize", 0), 0u);
  EXPECT_EQ(run({"emit-lp", "--instance", example}).out, text);
}

TEST_F(Cli, SolveWritesSolutionTraceAndGantt) {
  const CliRun r = run({"solve", "--instance", example, "--seed", "1", "--out", path("s.json"),
                     "--trace", path("t.csv"), "--gantt"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "  1   5.95 |2..|\n"
            "  2   5.95 |2..|\n"
            "  3   5.95 |2..|\n"
            "  4   5.95 |2..|\n"
            "  5  11.95 |66.|\n");
  const std::string sol = test::read_text(path("s.json"));
  EXPECT_NE(sol.find("\"objective\": 2.3"), std::string::npos);
  EXPECT_NE(sol.find("\"makespan\": 2"), std::string::npos);
  EXPECT_NE(sol.find("\"gantt\""), std::string::npos);
  const std::string trace = test::read_text(path("t.csv"));
  EXPECT_EQ(trace.rfind("generation,best_fitness,mean_fitness\n0,", 0), 0u);

  ASSERT_EQ(run({"solve", "--instance", example, "--seed", "1", "--out", path("s2.json")}).code, 0);
  EXPECT_EQ(test::read_text(path("s2.json")), sol);
}

TEST_F(Cli, BenchWritesBothFiles) {
  fs::create_directories(dir / "set");
  fs::copy_file(example, dir / "set" / "cwp000.json");
  const std::vector<std::string> args{"bench", "--instances", path("set"), "--reps", "2",
                                      "--seed", "4", "--scale", "0.01", "--no-time",
                                      "--trial", "1", "--trial", "5", "--out", path("r.csv")};
  ASSERT_EQ(run(args).code, 0);
  const std::string results = test::read_text(path("r.csv"));
  const std::string trials = test::read_text(path("trials.csv"));
  EXPECT_EQ(std::count(results.begin(), results.end(), '\n'), 5);
  EXPECT_EQ(std::count(trials.begin(), trials.end(), '\n'), 3);
  std::vector<std::string> threaded = args;
  threaded.back() = path("r2.csv");
  threaded.insert(threaded.end(), {"--threads", "4", "--trials-out", path("t2.csv")});
  ASSERT_EQ(run(threaded).code, 0);
  EXPECT_EQ(test::read_text(path("r2.csv")), results);
  EXPECT_EQ(test::read_text(path("t2.csv")), trials);
  EXPECT_EQ(run({"bench", "--instances", path("nowhere")}).code, kExitIo);
}

}  // namespace
}  // namespace beamforge
