#include "cardguess/tables.hpp"

#include "cardguess/kernels.hpp"
#include "cardguess/montecarlo.hpp"
#include "cardguess/solver.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace cardguess {

namespace {

constexpr std::uint64_t kDefaultTableSeed = 1;

TableCell cell_of(EvalReport r, int digits) {
  TableCell c;
  c.text = r.decimal(digits);
  c.report = std::move(r);
  return c;
}

TableCell skipped(const std::string& why) { return TableCell{std::nullopt, why}; }

Table table1(const RunConfig& cfg) {
  Table t;
  t.which = 1;
  t.title = "m=5 n=5, optimal value by feedback model, 2 decimals";
  t.digits = 2;
  t.columns = {"deck", "none", "yesno", "complete"};
  const DeckSpec deck(5, 5);
  TableRow row{"m=5 n=5", {}};
  row.cells.push_back(cell_of(no_feedback_value(deck), t.digits));
  if (cfg.big) {
    row.cells.push_back(cell_of(optimal_value(deck, Objective::Max, cfg.solver_options()), t.digits));
  } else {
    row.cells.push_back(skipped("needs --big"));
  }
  row.cells.push_back(cell_of(complete_feedback_optimal(deck), t.digits));
  t.rows.push_back(std::move(row));
  return t;
}

Table table2(const RunConfig& cfg) {
  Table t;
  t.which = 2;
  t.title = "m=2 Yes/No feedback: optimal, greedy, linear(0.51), 4 decimals";
  t.digits = 4;
  t.columns = {"n", "optimal", "greedy", "linear"};
  const std::vector<StrategySpec> specs{StrategySpec::optimal(Objective::Max), StrategySpec::greedy(),
                                        StrategySpec::linear(Rational(51, 100))};
  for (int n = 2; n <= 5; ++n) {
    TableRow row{std::to_string(n), {}};
    for (const auto& s : specs) {
      row.cells.push_back(cell_of(evaluate(DeckSpec(2, n), s, FeedbackModel::YesNo, cfg.solver_options()), t.digits));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table table3(const RunConfig& cfg) {
  Table t;
  t.which = 3;
  t.title = "m=2 Yes/No feedback: optimal, 4 decimals";
  t.digits = 4;
  t.columns = {"n", "optimal"};
  for (int n = 6; n <= 10; ++n) {
    TableRow row{std::to_string(n), {}};
    row.cells.push_back(cell_of(optimal_value(DeckSpec(2, n), Objective::Max, cfg.solver_options()), t.digits));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<StrategySpec> table4_specs(const Rational& gamma) {
  return {StrategySpec::safe(), StrategySpec::shifting(), StrategySpec::gamma_shifting(gamma),
          StrategySpec::halfway_plus(), StrategySpec::halfway_minus()};
}

TableRow table4_exact(DeckSpec deck, const Rational& gamma, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto specs = table4_specs(gamma);
  std::vector<Player> players;
  for (const auto& s : specs) players.emplace_back(s, deck);
  const EnumerationResult res =
      enumerate_scores(deck, players, FeedbackModel::YesNo, cfg.enumeration_cap, cfg.threads);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  TableRow row{"m=" + std::to_string(deck.m) + " n=" + std::to_string(deck.n) + " (exact)", {}};
  row.cells.push_back(TableCell{std::nullopt, format_decimal(gamma, 2)});
  for (std::size_t i = 0; i < specs.size(); ++i) {
    EvalReport r;
    r.deck = deck;
    r.strategy = specs[i].to_string();
    r.method = Method::Enumeration;
    r.exact = res.tallies[i].mean();
    r.value = to_double(*r.exact);
    r.nodes = res.words;
    r.runtime_ms = ms;
    row.cells.push_back(cell_of(std::move(r), 3));
  }
  return row;
}

TableRow table4_simulated(DeckSpec deck, const Rational& gamma, const RunConfig& cfg) {
  const auto specs = table4_specs(gamma);
  const std::uint64_t seed = cfg.seed.value_or(kDefaultTableSeed);
  const auto reports = sweep(deck, specs, FeedbackModel::YesNo, cfg.trials, seed, cfg.threads);
  TableRow row{"m=" + std::to_string(deck.m) + " n=" + std::to_string(deck.n) +
                   " (t=" + std::to_string(cfg.trials) + ")",
               {}};
  row.cells.push_back(TableCell{std::nullopt, format_decimal(gamma, 2)});
  for (const auto& r : reports) row.cells.push_back(cell_of(r, 3));
  return row;
}

Table table4(const RunConfig& cfg) {
  Table t;
  t.which = 4;
  t.title = "named strategies, Yes/No feedback, 3 decimals";
  t.digits = 3;
  t.columns = {"deck", "gamma", "safe", "shift", "gshift", "half+", "half-"};
  t.rows.push_back(table4_exact(DeckSpec(2, 6), Rational(3, 10), cfg));
  if (cfg.big) {
    t.rows.push_back(table4_exact(DeckSpec(3, 5), Rational(1, 4), cfg));
  } else {
    TableRow row{"m=3 n=5 (exact)", {TableCell{std::nullopt, "0.25"}}};
    for (int i = 0; i < 5; ++i) row.cells.push_back(skipped("needs --big"));
    t.rows.push_back(std::move(row));
  }
  t.rows.push_back(table4_simulated(DeckSpec(4, 10), Rational(1, 5), cfg));
  t.rows.push_back(table4_simulated(DeckSpec(5, 20), Rational(3, 20), cfg));
  return t;
}

}  // namespace

Table build_table(int which, const RunConfig& cfg) {
  switch (which) {
    case 1: return table1(cfg);
    case 2: return table2(cfg);
    case 3: return table3(cfg);
    case 4: return table4(cfg);
    default: throw std::invalid_argument("--which must be 1, 2, 3 or 4");
  }
}

std::string render_table(const Table& t) {
  std::ostringstream out;
  out << "# table " << t.which << ": " << t.title << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    out << row.label;
    for (const auto& c : row.cells) out << "," << c.text;
    out << "\n";
  }
  return out.str();
}

nlohmann::json table_json(const Table& t) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["table"] = t.which;
  j["title"] = t.title;
  j["digits"] = t.digits;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r;
    r["label"] = row.label;
    r["cells"] = nlohmann::json::array();
    for (const auto& c : row.cells) {
      nlohmann::json cell;
      cell["text"] = c.text;
      if (c.report) cell["report"] = to_json(*c.report, t.digits + 2);
      r["cells"].push_back(cell);
    }
    j["rows"].push_back(r);
  }
  return j;
}

}  // namespace cardguess
