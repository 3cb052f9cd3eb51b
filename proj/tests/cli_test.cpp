// Runs the seqm executable end to end.
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("seqm_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string data(const std::string& name) { return std::string(SEQM_DATA_DIR) + "/" + name; }

  Outcome run(const std::string& args) const {
    std::string cmd = std::string(SEQM_BINARY) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
    int status = std::system(cmd.c_str());
    return Outcome{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(path("stdout")), slurp(path("stderr"))};
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, TrainWritesAModel) {
  auto r = run("train --corpus " + data("toy.tsv") + " --out " + path("m.smv1"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("m.smv1")));
  EXPECT_NE(r.out.find("trained on"), std::string::npos);
}

TEST_F(Cli, MalformedCorpusLineIsReported) {
  std::string text;
  for (int i = 1; i < 17; ++i) text += "w" + std::to_string(i) + "\tNN\n";
  text += "broken line without a tab\n";
  write("bad.tsv", text);
  auto r = run("train --corpus " + path("bad.tsv") + " --out " + path("m.smv1"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":17:"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("m.smv1")));
}

TEST_F(Cli, ConflictingConfigIsRejectedBeforeTraining) {
  write("c.conf", "mode = sm\nmode = ova\n");
  auto r = run("train --corpus " + data("toy.tsv") + " --config " + path("c.conf") + " --out " + path("m.smv1"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("conflicts"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("m.smv1")));
}

TEST_F(Cli, TaggingTheTrainingFileReproducesSingleTagWords) {
  ASSERT_EQ(run("train --corpus " + data("toy.tsv") + " --out " + path("m.smv1")).code, 0);
  auto r = run("tag --model " + path("m.smv1") + " --input " + data("toy.tsv") + " --output " + path("out.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream gold(slurp(data("toy.tsv"))), got(slurp(path("out.tsv")));
  std::string g, o;
  std::size_t compared = 0;
  while (std::getline(gold, g)) {
    if (!g.empty() && g[0] == '#') continue;
    ASSERT_TRUE(std::getline(got, o));
    EXPECT_EQ(g, o);  // every word of the toy corpus has a single tag
    ++compared;
  }
  EXPECT_GT(compared, 50U);
}

TEST_F(Cli, EmptyInputGivesEmptyOutput) {
  ASSERT_EQ(run("train --corpus " + data("toy.tsv") + " --out " + path("m.smv1")).code, 0);
  write("empty.txt", "");
  auto r = run("tag --model " + path("m.smv1") + " --input " + path("empty.txt") + " --output " + path("o.tsv"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("o.tsv")));
  EXPECT_EQ(fs::file_size(path("o.tsv")), 0U);
}

TEST_F(Cli, TraceShowsShrinkingSets) {
  ASSERT_EQ(run("train --corpus " + data("toy.tsv") + " --out " + path("m.smv1")).code, 0);
  write("in.txt", "Jumping\n");
  auto r = run("tag --trace --model " + path("m.smv1") + " --input " + path("in.txt") + " --output " + path("o.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::string out = slurp(path("o.tsv"));
  auto line = out.substr(out.find("# "));
  auto count = [&](const std::string& key) {
    auto b = line.find(key + "={"), e = line.find('}', b);
    std::string body = line.substr(b, e - b);
    return static_cast<std::size_t>(std::count(body.begin(), body.end(), ',')) + 1;
  };
  EXPECT_NE(line.find("route=sequential"), std::string::npos) << line;
  EXPECT_GE(count("f1"), count("f2"));
  EXPECT_GE(count("f2"), count("f3"));
  EXPECT_LT(count("f2"), 16U);
}

TEST_F(Cli, VerifyPasses) {
  auto r = run("verify");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("result=fail"), std::string::npos);
}

TEST_F(Cli, ConvertDepthOneTree) {
  auto r = run("convert-dt --tree " + data("tree_depth1.txt") + " --out " + path("t.smv1"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("equivalence: exact"), std::string::npos);
  EXPECT_EQ(slurp(path("t.smv1")).rfind("SMV1\n", 0), 0U);
}

TEST_F(Cli, BenchPrintsRatios) {
  auto r = run("bench --runs 1 --corpus " + data("toy.tsv"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("node-update ratio"), std::string::npos);
  EXPECT_NE(r.out.find("speedup"), std::string::npos);
}

TEST_F(Cli, EvalOnASplit) {
  ASSERT_EQ(run("gen-corpus --kind english --sentences 300 --out " + path("c.tsv")).code, 0);
  auto r = run("eval --records --corpus " + path("c.tsv"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy.known="), std::string::npos) << r.out;
}

TEST_F(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("train --corpus x").code, 1);
  EXPECT_EQ(run("tag --model a --input b --output c --mode maybe").code, 1);
  EXPECT_EQ(run("eval --model m").code, 1);
}

TEST_F(Cli, MissingFilesAreDataErrors) {
  EXPECT_EQ(run("train --corpus " + path("nope.tsv") + " --out " + path("m")).code, 2);
}
