#include <gtest/gtest.h>

#include <sstream>

#include "seqmodel/config.hpp"

using namespace seqm;

namespace {

RunConfig parse(const std::string& s) {
  std::istringstream in(s);
  return parse_config(in, "run.conf");
}

std::string error_of(const std::string& s) {
  try {
    parse(s);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, ParsesKeysCommentsAndBlanks) {
  auto c = parse("# desk settings\n\nmode = ova\neps.f2 = 0.01\ncombine=replace\nsplit.seed = 4\nwinnow.promotion = 2\n");
  EXPECT_EQ(c.tagger.mode, TrainingMode::one_vs_all);
  EXPECT_EQ(c.tagger.eps("f2"), 0.01);
  EXPECT_EQ(c.tagger.combine, CombineMode::replace);
  EXPECT_EQ(c.split_seed, 4U);
  EXPECT_EQ(c.tagger.winnow.promotion, 2.0);
}

TEST(Config, ConflictingKeysAreRejected) {
  auto e = error_of("mode = sm\nclassifier = f3\nmode = ova\n");
  EXPECT_NE(e.find("run.conf:3"), std::string::npos) << e;
  EXPECT_NE(e.find("conflicts with line 1"), std::string::npos) << e;
}

TEST(Config, RepeatedKeysAreRejected) {
  EXPECT_NE(error_of("folds = 4\nfolds = 4\n").find("repeats line 1"), std::string::npos);
}

TEST(Config, BadValuesNameTheLine) {
  EXPECT_NE(error_of("mode = sm\nmode_x = 1\n").find("run.conf:2"), std::string::npos);
  EXPECT_NE(error_of("eps.f1 = lots\n").find("run.conf:1"), std::string::npos);
  EXPECT_NE(error_of("just words\n").find("run.conf:1"), std::string::npos);
  EXPECT_FALSE(error_of("eps.f1 = 1.5\n").empty());
  EXPECT_FALSE(error_of("stage_order = f1,f2\n").empty());
}

TEST(Config, ShippedConfigsParse) {
  for (const char* f : {"tagger.conf", "oanc.conf"})
    EXPECT_NO_THROW(load_config(std::string(SEQM_DATA_DIR) + "/" + f)) << f;
}
