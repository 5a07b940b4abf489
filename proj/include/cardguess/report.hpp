#pragma once

#include "cardguess/deck.hpp"
#include "cardguess/numeric.hpp"
#include "cardguess/strategy.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cardguess {

inline constexpr int kSchemaVersion = 1;

enum class Arith { Exact, Float };
enum class Method { Enumeration, BeliefDP, Expectimax, ClosedForm, MonteCarlo };

std::string to_string(Arith a);
std::string to_string(Method m);
Arith parse_arith(std::string_view text);

struct EvalReport {
  DeckSpec deck;
  std::string strategy;
  FeedbackModel model = FeedbackModel::YesNo;

  std::optional<Rational> exact;  // set by exact methods in Exact mode
  double value = 0;
  Arith arith = Arith::Exact;
  Method method = Method::ClosedForm;

  std::uint64_t nodes = 0;   // memo states or enumerated words
  std::uint64_t trials = 0;  // Monte Carlo only
  double std_error = 0;
  std::optional<std::uint64_t> seed;
  double runtime_ms = 0;
  std::string note;

  // Value rounded half-even to `digits` places.
  std::string decimal(int digits) const;
};

nlohmann::json to_json(const EvalReport& r, int digits = 6);
std::string csv_header();
std::string to_csv_row(const EvalReport& r, int digits = 6);

}  // namespace cardguess
