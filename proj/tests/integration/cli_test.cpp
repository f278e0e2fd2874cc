#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the tool with stderr discarded and returns (exit code, stdout).
Result run(const std::string& args) {
  const std::string cmd = fmt::format("\"{}\" {} 2>/dev/null", GAITLRP_CLI, args);
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / fmt::format("gaitlrp_cli_test_{}", ::getpid());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const Result r = run(fmt::format("synth --per-class 4 --trials 2 --T 40 --seed 3 --out {}", p("small.csv")));
    ASSERT_EQ(r.code, 0);
    std::ofstream(dir_ / "quick.json") << R"({"train": {"epochs": 3, "learning_rate": 0.05, "use_bias": false}})";
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string p(const std::string& name) { return (dir_ / name).string(); }

  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, SynthWritesRequestedCohort) {
  const Result r = run(fmt::format("synth --per-class 30 --trials 5 --T 100 --noise 0.05 --seed 7 --out {}", p("d.csv")));
  ASSERT_EQ(r.code, 0);
  const auto kv = key_values(r.out);
  EXPECT_EQ(kv.at("subjects"), "90");
  EXPECT_EQ(kv.at("trials"), "450");
  // Six curve rows per trial plus the header.
  EXPECT_EQ(line_count(p("d.csv")), 1u + 450u * 6u);

  ASSERT_EQ(run(fmt::format("synth --per-class 30 --trials 5 --T 100 --noise 0.05 --seed 7 --out {}", p("d2.csv"))).code, 0);
  EXPECT_EQ(slurp(p("d.csv")), slurp(p("d2.csv")));
}

TEST_F(Cli, SynthRejectsBadFlags) {
  EXPECT_EQ(run(fmt::format("synth --per-class 0 --out {}", p("x.csv"))).code, 2);
  EXPECT_EQ(run(fmt::format("synth --noise -1 --out {}", p("x.csv"))).code, 2);
  EXPECT_EQ(run("synth").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, CrossvalPrintsMetricsAndWritesReport) {
  const Result r = run(fmt::format("crossval --data {} --k 2 --config {} --out {}", p("small.csv"), p("quick.json"),
                                   p("report")));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("accuracy_mean="), std::string::npos);
  EXPECT_NE(r.out.find("zero_rule="), std::string::npos);
  EXPECT_NE(r.out.find("confusion_matrix="), std::string::npos);
  EXPECT_EQ(r.out, slurp(fs::path(p("report")) / "metrics.txt"));
  EXPECT_TRUE(fs::exists(fs::path(p("report")) / "relevance.csv"));
  EXPECT_TRUE(fs::exists(fs::path(p("report")) / "total_relevance.svg"));

  // Plot regenerates the same SVGs from the relevance file.
  ASSERT_EQ(run(fmt::format("plot --relevance {}/relevance.csv --out {}", p("report"), p("plots"))).code, 0);
  int svgs = 0;
  for (const auto& f : fs::directory_iterator(p("plots"))) {
    ++svgs;
    EXPECT_EQ(slurp(f.path()), slurp(fs::path(p("report")) / f.path().filename())) << f.path();
  }
  EXPECT_EQ(svgs, 19);
}

TEST_F(Cli, CrossvalFromSynthConfigAndThreads) {
  std::ofstream(dir_ / "synth.json")
      << R"({"synth": {"per_class": 3, "trials": 2, "seed": 5}, "T": 24, "k": 3, "train": {"epochs": 2}})";
  const Result one = run(fmt::format("crossval --config {} --out {}", p("synth.json"), p("s1")));
  ASSERT_EQ(one.code, 0);
  const std::string cmd = fmt::format("crossval --config {} --out {}", p("synth.json"), p("s2"));
  ASSERT_EQ(run(cmd).code, 0);
  setenv("GAITLRP_THREADS", "3", 1);
  const Result threaded = run(fmt::format("crossval --config {} --out {}", p("synth.json"), p("s3")));
  unsetenv("GAITLRP_THREADS");
  ASSERT_EQ(threaded.code, 0);
  for (const auto& f : fs::directory_iterator(p("s1"))) {
    EXPECT_EQ(slurp(f.path()), slurp(fs::path(p("s2")) / f.path().filename()));
    EXPECT_EQ(slurp(f.path()), slurp(fs::path(p("s3")) / f.path().filename()));
  }
}

TEST_F(Cli, FlatInputSwitch) {
  std::ofstream(dir_ / "flat.json") << R"({"flat_input": true, "train": {"epochs": 1}})";
  const Result r = run(fmt::format("crossval --data {} --k 2 --config {} --out {}", p("small.csv"), p("flat.json"), p("flat")));
  ASSERT_EQ(r.code, 0);
  // Flat inputs are still reported per side and component.
  EXPECT_EQ(line_count(fs::path(p("flat")) / "relevance.csv"), 1u + 4u * 6u * 100u);
  std::ofstream(dir_ / "clash.json") << R"({"flat_input": true, "input_layout": "channels"})";
  EXPECT_EQ(run(fmt::format("crossval --data {} --k 2 --config {} --out {}", p("small.csv"), p("clash.json"), p("r"))).code, 2);
}

TEST_F(Cli, CrossvalExitCodes) {
  EXPECT_EQ(run(fmt::format("crossval --data {} --k 1 --out {}", p("small.csv"), p("r"))).code, 2);
  EXPECT_EQ(run(fmt::format("crossval --data {} --out {}", p("missing.csv"), p("r"))).code, 2);
  std::ofstream(dir_ / "bad.csv") << "subject_id,age\n";
  EXPECT_EQ(run(fmt::format("crossval --data {} --k 2 --out {}", p("bad.csv"), p("r"))).code, 2);
  std::ofstream(dir_ / "unknown.json") << R"({"trian": {}})";
  EXPECT_EQ(run(fmt::format("crossval --data {} --config {} --out {}", p("small.csv"), p("unknown.json"), p("r"))).code, 2);
  std::ofstream(dir_ / "notjson.json") << "{";
  EXPECT_EQ(run(fmt::format("crossval --data {} --config {} --out {}", p("small.csv"), p("notjson.json"), p("r"))).code, 2);
  std::ofstream(dir_ / "lr.json") << R"({"train": {"learning_rate": -1}})";
  EXPECT_EQ(run(fmt::format("crossval --data {} --config {} --out {}", p("small.csv"), p("lr.json"), p("r"))).code, 2);
  // 4 subjects per class cannot fill 5 folds.
  EXPECT_EQ(run(fmt::format("crossval --data {} --k 5 --out {}", p("small.csv"), p("r"))).code, 2);
  std::ofstream(dir_ / "diverge.json") << R"({"train": {"learning_rate": 1e308, "epochs": 20}})";
  EXPECT_EQ(run(fmt::format("crossval --data {} --k 2 --config {} --out {}", p("small.csv"), p("diverge.json"), p("r"))).code, 3);
  EXPECT_EQ(run("crossval --out x").code, 2);
}

TEST_F(Cli, TrainThenExplainConserves) {
  ASSERT_EQ(run(fmt::format("train --data {} --config {} --T 40 --out {}", p("small.csv"), p("quick.json"), p("m.json"))).code, 0);
  for (int trial : {0, 7, 23}) {
    const Result r = run(fmt::format("explain --data {} --model {} --trial {} --epsilon 0 --out {}", p("small.csv"),
                                     p("m.json"), trial, p("e.csv")));
    ASSERT_EQ(r.code, 0);
    const auto kv = key_values(r.out);
    EXPECT_LT(std::stod(kv.at("conservation_error")), 1e-9) << r.out;
    EXPECT_EQ(line_count(p("e.csv")), 6u * 40u + 1u);
  }
  const Result other = run(fmt::format("explain --data {} --model {} --trial 0 --class 2 --out {}", p("small.csv"),
                                       p("m.json"), p("e.csv")));
  ASSERT_EQ(other.code, 0);
  EXPECT_EQ(key_values(other.out).at("explained_class"), "older");

  EXPECT_EQ(run(fmt::format("explain --data {} --model {} --trial 0 --class 5 --out {}", p("small.csv"), p("m.json"),
                            p("e.csv"))).code, 2);
  EXPECT_EQ(run(fmt::format("explain --data {} --model {} --trial 24 --out {}", p("small.csv"), p("m.json"),
                            p("e.csv"))).code, 2);
  std::ofstream(dir_ / "broken.json") << R"({"format": "something-else"})";
  EXPECT_EQ(run(fmt::format("explain --data {} --model {} --trial 0 --out {}", p("small.csv"), p("broken.json"),
                            p("e.csv"))).code, 2);
}

TEST_F(Cli, TrainIsDeterministic) {
  ASSERT_EQ(run(fmt::format("train --data {} --config {} --seed 4 --out {}", p("small.csv"), p("quick.json"), p("a.json"))).code, 0);
  ASSERT_EQ(run(fmt::format("train --data {} --config {} --seed 4 --out {}", p("small.csv"), p("quick.json"), p("b.json"))).code, 0);
  EXPECT_EQ(slurp(p("a.json")), slurp(p("b.json")));
}

}  // namespace
