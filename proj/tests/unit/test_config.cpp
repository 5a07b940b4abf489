#include "cardguess/config.hpp"
#include "cardguess/errors.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace cardguess;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
  const RunConfig def;
  const auto cfg = config_load(write_temp("cg_empty.conf", ""));
  EXPECT_EQ(cfg.enumeration_cap, def.enumeration_cap);
  EXPECT_EQ(cfg.max_states, def.max_states);
  EXPECT_EQ(cfg.arith, Arith::Exact);
  EXPECT_EQ(cfg.threads, 0);
  EXPECT_FALSE(cfg.seed.has_value());
  EXPECT_EQ(cfg.trials, 1000000u);
  EXPECT_EQ(cfg.format, "csv");
  EXPECT_FALSE(cfg.big);
  EXPECT_FALSE(cfg.strict);
}

TEST(Config, KeyValueFile) {
  const auto cfg = config_parse(
      "# budget\n"
      "arith = float\n"
      "max_states=1000   # small\n"
      "\n"
      "seed = 7\n"
      "big = true\n"
      "cache_dir = /tmp/x\n");
  EXPECT_EQ(cfg.arith, Arith::Float);
  EXPECT_EQ(cfg.max_states, 1000u);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_TRUE(cfg.big);
  EXPECT_EQ(cfg.cache_dir, "/tmp/x");
  EXPECT_EQ(cfg.solver_options().max_states, 1000u);
  EXPECT_EQ(cfg.solver_options().arith, Arith::Float);
}

TEST(Config, JsonFile) {
  const auto cfg = config_parse(R"({"arith": "float", "threads": 3, "strict": true, "trials": 500})");
  EXPECT_EQ(cfg.arith, Arith::Float);
  EXPECT_EQ(cfg.threads, 3);
  EXPECT_TRUE(cfg.strict);
  EXPECT_EQ(cfg.trials, 500u);
}

TEST(Config, UnknownKeyNamesKeyAndLine) {
  try {
    config_parse("arith = float\n\nbogus_key = 3\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("bogus_key"), std::string::npos);
  }
  try {
    config_parse("{\n  \"threads\": 2,\n  \"nope\": 1\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
  }
}

TEST(Config, BadValues) {
  EXPECT_THROW(config_parse("threads = many\n"), ParseError);
  EXPECT_THROW(config_parse("arith = complex\n"), ParseError);
  EXPECT_THROW(config_parse("format = xml\n"), ParseError);
  EXPECT_THROW(config_parse("big = maybe\n"), ParseError);
  EXPECT_THROW(config_parse("just words\n"), ParseError);
  EXPECT_THROW(config_parse("{\"threads\": [1]}"), ParseError);
  EXPECT_THROW(config_parse("{\"threads\": "), ParseError);
  EXPECT_THROW(config_load("/nonexistent/cardguess.conf"), ParseError);
}

TEST(Config, LayersOverBase) {
  RunConfig base;
  base.threads = 5;
  base.trials = 10;
  const auto cfg = config_parse("trials = 20\n", base);
  EXPECT_EQ(cfg.threads, 5);
  EXPECT_EQ(cfg.trials, 20u);
}

TEST(Config, EnvironmentCacheDir) {
  RunConfig cfg = config_parse("cache_dir = /from/file\n");
  setenv("CARDGUESS_CACHE_DIR", "/from/env", 1);
  apply_environment(cfg);
  unsetenv("CARDGUESS_CACHE_DIR");
  EXPECT_EQ(cfg.cache_dir, "/from/env");
  RunConfig untouched = config_parse("cache_dir = /from/file\n");
  apply_environment(untouched);
  EXPECT_EQ(untouched.cache_dir, "/from/file");
}

TEST(Config, EveryKeyAccepted) {
  EXPECT_EQ(config_keys().size(), 11u);
  const std::map<std::string, std::string> sample{
      {"enumeration_cap", "1e6"}, {"max_states", "5"}, {"max_millis", "2.5"}, {"arith", "rational"},
      {"threads", "2"},          {"seed", "9"},       {"trials", "100"},     {"cache_dir", "/tmp"},
      {"format", "json"},        {"big", "1"},        {"strict", "false"}};
  for (const auto& key : config_keys()) {
    RunConfig cfg;
    EXPECT_NO_THROW(config_set(cfg, key, sample.at(key))) << key;
  }
}
