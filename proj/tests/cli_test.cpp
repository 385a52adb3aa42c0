#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const std::string kCli = CLICKSEG_CLI;
const std::string kData = CLICKSEG_TEST_DATA;

struct Result {
  int code;
  std::string output;
};

Result run(const std::string& args) {
  const std::string command = "'" + kCli + "' " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string output;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("clickseg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  std::string inputs() const {
    return " --paths.log " + kData + "/running_example.csv --paths.link_graph " + kData + "/running_example_graph.txt";
  }

  Result generate(const std::string& out, const std::string& extra = "") {
    return run("generate" + inputs() + " --paths.training_log " + p(out) + " --sampler.n 1000" + extra);
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpListsSubcommands) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"generate", "train", "segment", "eval", "dfg"}) {
    EXPECT_NE(r.output.find(sub), std::string::npos) << sub;
  }
  EXPECT_NE(run("segment --help").output.find("--segment.b1"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("train --train.d abc").code, 1);
  EXPECT_EQ(run("train --paths.training_log x").code, 1);  // paths.model missing
  const auto r = generate("lt.txt", " --ts.end_mode sideways");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("ts.end_mode"), std::string::npos);
}

TEST_F(CliTest, GenerateReportsPruning) {
  const auto r = generate("lt.txt");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("link graph pruning: removed 1 transitions, 1 unreachable states"), std::string::npos)
      << r.output;
  EXPECT_NE(r.output.find("transition system: 9 states, 11 transitions"), std::string::npos);
  EXPECT_NE(r.output.find("warnings"), std::string::npos);
  EXPECT_EQ(count_lines(slurp(p("lt.txt"))), 1000u);
}

TEST_F(CliTest, GenerateIsByteIdenticalForSeed) {
  ASSERT_EQ(generate("a.txt").code, 0);
  ASSERT_EQ(generate("b.txt", " --threads 3").code, 0);
  ASSERT_EQ(generate("c.txt", " --sampler.seed 2").code, 0);
  EXPECT_EQ(slurp(p("a.txt")), slurp(p("b.txt")));
  EXPECT_NE(slurp(p("a.txt")), slurp(p("c.txt")));
}

TEST_F(CliTest, EpsilonAboveAllWeightsIsDegenerate) {
  const auto r = generate("lt.txt", " --ts.epsilon 1000");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("degenerate model"), std::string::npos);
}

TEST_F(CliTest, MissingInputsAreDataErrors) {
  const auto r = run("train --paths.training_log " + p("missing.txt") + " --paths.model " + p("m.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("missing.txt"), std::string::npos);
}

TEST_F(CliTest, TrainLogsEveryEpochPerModel) {
  ASSERT_EQ(generate("lt.txt").code, 0);
  const auto r = run("train --paths.training_log " + p("lt.txt") + " --paths.model " + p("m.json") +
                     " --train.epochs 4 --train.d 8 --segment.ensemble 3 --threads 2");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(count_matches(r.output, "epoch [0-9]+/4 loss"), 12u);
  for (int seed = 1; seed <= 3; ++seed) {
    EXPECT_EQ(count_matches(r.output, "\\(seed " + std::to_string(seed) + "\\) epoch"), 4u);
  }
  for (const char* f : {"m.0.json", "m.1.json", "m.2.json"}) EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  EXPECT_NE(slurp(p("m.0.json")), slurp(p("m.1.json")));
}

TEST_F(CliTest, ZeroEpochsStillWritesModel) {
  ASSERT_EQ(generate("lt.txt").code, 0);
  const auto r = run("train --paths.training_log " + p("lt.txt") + " --paths.model " + p("m.json") +
                     " --train.epochs 0 --train.d 4");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(count_matches(r.output, "epoch"), 0u);
  const auto doc = nlohmann::json::parse(slurp(p("m.json")));
  EXPECT_EQ(doc["dim"], 4);
  bool nonzero = false;
  for (double w : doc["input"]) nonzero |= w != 0.0;
  EXPECT_TRUE(nonzero);
}

TEST_F(CliTest, SegmentPartitionsAndRefusesOwnOutput) {
  ASSERT_EQ(generate("lt.txt").code, 0);
  ASSERT_EQ(run("train --paths.training_log " + p("lt.txt") + " --paths.model " + p("m.json") + " --train.d 8").code, 0);
  const auto r = run("segment --paths.log " + kData + "/running_example.csv --paths.model " + p("m.json") +
                     " --paths.output " + p("seg.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("cases: "), std::string::npos);
  EXPECT_NE(r.output.find("median length"), std::string::npos);

  const auto out = slurp(p("seg.csv"));
  const auto in = slurp(kData + "/running_example.csv");
  EXPECT_EQ(count_lines(out), count_lines(in));
  EXPECT_EQ(out.substr(0, out.find('\n')), "timestamp,screen,user,case_id");
  EXPECT_EQ(count_matches(out, ",u1#1\n"), count_matches(out, ",u1,u1#1\n"));

  const auto again = run("segment --paths.log " + p("seg.csv") + " --paths.model " + p("m.json") + " --paths.output " +
                         p("seg2.csv"));
  EXPECT_EQ(again.code, 2);
  EXPECT_NE(again.output.find("already segmented"), std::string::npos);
}

TEST_F(CliTest, SegmentNamesUnknownActivities) {
  ASSERT_EQ(generate("lt.txt").code, 0);
  ASSERT_EQ(run("train --paths.training_log " + p("lt.txt") + " --paths.model " + p("m.json") + " --train.d 8").code, 0);
  std::ofstream(p("log.csv")) << "timestamp,screen,user\n2021-01-25 00:00:00,M,u\n2021-01-25 00:00:01,Help,u\n"
                                 "2021-01-25 00:00:02,B,u\n2021-01-25 00:00:03,,u\n";
  const auto lenient = run("segment --paths.log " + p("log.csv") + " --paths.model " + p("m.json") +
                           " --paths.output " + p("seg.csv"));
  ASSERT_EQ(lenient.code, 2) << lenient.output;  // empty activity on line 5
  EXPECT_NE(lenient.output.find("line 5"), std::string::npos);

  std::ofstream(p("log.csv")) << "timestamp,screen,user\n2021-01-25 00:00:00,M,u\n2021-01-25 00:00:01,Help,u\n"
                                 "2021-01-25 00:00:02,B,u\n2021-01-25 00:00:03,C,\n";
  const auto ok = run("segment --paths.log " + p("log.csv") + " --paths.model " + p("m.json") + " --paths.output " +
                      p("seg.csv"));
  ASSERT_EQ(ok.code, 0) << ok.output;
  EXPECT_NE(ok.output.find("unknown activities: Help"), std::string::npos) << ok.output;
  EXPECT_NE(ok.output.find("rows without user id dropped: 1"), std::string::npos) << ok.output;

  const auto strict = run("segment --paths.log " + p("log.csv") + " --paths.model " + p("m.json") +
                          " --paths.output " + p("seg.csv") + " --segment.strict_vocabulary true");
  EXPECT_EQ(strict.code, 2);
  EXPECT_NE(strict.output.find("Help"), std::string::npos);

  const auto schema = run("segment --paths.log " + p("log.csv") + " --paths.model " + p("m.json") +
                          " --paths.output " + p("seg.csv") + " --schema.activity page");
  EXPECT_EQ(schema.code, 2);
  EXPECT_NE(schema.output.find("page"), std::string::npos);
}

TEST_F(CliTest, EvalOnIdenticalLogsIsPerfect) {
  const auto r = run("eval --paths.predicted " + kData + "/dfg_fixture.csv --paths.truth " + kData +
                     "/dfg_fixture.csv --paths.metrics " + p("m.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto doc = nlohmann::json::parse(slurp(p("m.json")));
  EXPECT_EQ(doc.size(), 6u);
  for (const char* key : {"precision", "recall", "f1", "n_true", "n_predicted", "tolerance"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["f1"], 1.0);
  EXPECT_EQ(doc["n_true"], 1);
}

TEST_F(CliTest, DfgMatchesGoldenFile) {
  const auto r = run("dfg --paths.output " + kData + "/dfg_fixture.csv --paths.dot " + p("out.dot"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(slurp(p("out.dot")), slurp(kData + "/dfg_fixture.dot"));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  std::ofstream(p("config.json")) << R"({"paths": {"log": ")" << kData << R"(/running_example.csv", "link_graph": ")"
                                  << kData << R"(/running_example_graph.txt", "training_log": ")" << p("lt.txt")
                                  << R"("}, "sampler": {"n": 300}, "ts": {"window": 2}})";
  ASSERT_EQ(run("generate --config " + p("config.json")).code, 0);
  EXPECT_EQ(count_lines(slurp(p("lt.txt"))), 300u);
  ASSERT_EQ(run("generate --config " + p("config.json") + " --sampler.n 40").code, 0);
  EXPECT_EQ(count_lines(slurp(p("lt.txt"))), 40u);

  std::ofstream(p("bad.json")) << R"({"sampler": {"nn": 3}})";
  const auto unknown = run("generate --config " + p("bad.json"));
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.output.find("sampler.nn"), std::string::npos);
  std::ofstream(p("typed.json")) << R"({"sampler": {"n": "many"}})";
  EXPECT_EQ(run("generate --config " + p("typed.json")).code, 1);
}

TEST_F(CliTest, SynthThenEvaluateEndToEnd) {
  std::ofstream(p("graph.txt")) << "S -> X\nX -> Y\nY -> X\nY -> E\nX -> E\n";
  const auto s = run("synth --paths.link_graph " + p("graph.txt") + " --paths.log " + p("log.csv") + " --paths.truth " +
                     p("truth.csv") + " --synth.starts S --synth.ends E --synth.min_length 3 --synth.max_length 8" +
                     " --synth.users 6");
  ASSERT_EQ(s.code, 0) << s.output;
  EXPECT_EQ(count_lines(slurp(p("log.csv"))), count_lines(slurp(p("truth.csv"))));
  const auto g = run("generate --paths.log " + p("log.csv") + " --paths.link_graph " + p("graph.txt") +
                     " --paths.training_log " + p("lt.txt") + " --sampler.n 2000 --ts.window 1");
  ASSERT_EQ(g.code, 0) << g.output;
  ASSERT_EQ(run("train --paths.training_log " + p("lt.txt") + " --paths.model " + p("m.json") + " --train.d 8").code, 0);
  ASSERT_EQ(run("segment --paths.log " + p("log.csv") + " --paths.model " + p("m.json") + " --paths.output " +
                p("seg.csv"))
                .code,
            0);
  const auto e = run("eval --paths.output " + p("seg.csv") + " --paths.truth " + p("truth.csv"));
  ASSERT_EQ(e.code, 0) << e.output;
  const auto json_line = e.output.substr(0, e.output.find('\n'));
  EXPECT_GT(nlohmann::json::parse(json_line)["f1"].get<double>(), 0.9) << e.output;
}

}  // namespace
