#pragma once

#include "cardguess/config.hpp"
#include "cardguess/report.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cardguess {

struct TableCell {
  std::optional<EvalReport> report;  // empty when skipped
  std::string text;                  // rounded value or the reason for skipping
};

struct TableRow {
  std::string label;
  std::vector<TableCell> cells;
};

struct Table {
  int which = 0;
  std::string title;
  int digits = 4;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
};

// Reproduces one of the four published tables:
//   1  m=n=5 under No / Yes-No / Complete feedback (Yes-No cell needs cfg.big)
//   2  m=2, n=2..5: optimal, greedy, linear(0.51)
//   3  m=2, n=6..10: optimal
//   4  named strategies; exact rows by enumeration ((3,5) needs cfg.big),
//      simulated rows with cfg.trials and cfg.seed (default 1)
// Values are rounded half-even to the published precision.
Table build_table(int which, const RunConfig& cfg);

// CSV with a leading '#' title line; the golden-file format.
std::string render_table(const Table& t);
nlohmann::json table_json(const Table& t);

}  // namespace cardguess
