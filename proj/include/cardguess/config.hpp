#pragma once

#include "cardguess/deck.hpp"
#include "cardguess/report.hpp"
#include "cardguess/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cardguess {

// Knobs shared by every subcommand. Sources, weakest first: defaults,
// config file, CARDGUESS_CACHE_DIR, command-line flags.
struct RunConfig {
  double enumeration_cap = kDefaultEnumerationCap;
  std::uint64_t max_states = 200'000'000;
  double max_millis = 0;
  Arith arith = Arith::Exact;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 1'000'000;
  std::string cache_dir;
  std::string format = "csv";  // csv | json
  bool big = false;
  bool strict = false;

  SolverOptions solver_options() const;
};

// Keys accepted by the config file, in documentation order.
const std::vector<std::string>& config_keys();

// Throws ParseError naming the key for unknown keys or bad values.
void config_set(RunConfig& cfg, std::string_view key, std::string_view value, int line = 0);

// "key = value" lines ('#' starts a comment) or one JSON object.
RunConfig config_parse(std::string_view text, RunConfig base = {});
// Throws ParseError when the file cannot be read.
RunConfig config_load(const std::string& path, RunConfig base = {});

// Applies CARDGUESS_CACHE_DIR when set.
void apply_environment(RunConfig& cfg);

}  // namespace cardguess
