#include "cardguess/report.hpp"

#include <sstream>
#include <stdexcept>

namespace cardguess {

std::string to_string(Arith a) { return a == Arith::Exact ? "rational" : "float"; }

std::string to_string(Method m) {
  switch (m) {
    case Method::Enumeration: return "enumeration";
    case Method::BeliefDP: return "belief-dp";
    case Method::Expectimax: return "expectimax";
    case Method::ClosedForm: return "closed-form";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

Arith parse_arith(std::string_view text) {
  if (text == "rational" || text == "exact") return Arith::Exact;
  if (text == "float") return Arith::Float;
  throw std::invalid_argument("arith must be 'rational' or 'float', got '" + std::string(text) + "'");
}

std::string EvalReport::decimal(int digits) const {
  return exact ? format_decimal(*exact, digits) : format_decimal(value, digits);
}

nlohmann::json to_json(const EvalReport& r, int digits) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = {{"m", r.deck.m},
                 {"n", r.deck.n},
                 {"strategy", r.strategy},
                 {"model", to_string(r.model)},
                 {"arith", to_string(r.arith)}};
  nlohmann::json value;
  value["fraction"] = r.exact ? nlohmann::json(format_fraction(*r.exact)) : nlohmann::json(nullptr);
  value["decimal"] = r.decimal(digits);
  value["double"] = r.value;
  j["value"] = value;
  j["method"] = to_string(r.method);
  j["nodes"] = r.nodes;
  j["trials"] = r.trials;
  j["stderr"] = r.std_error;
  j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  j["runtime_ms"] = r.runtime_ms;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string csv_header() {
  return "m,n,strategy,model,method,arith,fraction,decimal,trials,stderr,seed,runtime_ms";
}

std::string to_csv_row(const EvalReport& r, int digits) {
  std::ostringstream out;
  out << r.deck.m << ',' << r.deck.n << ',' << r.strategy << ',' << to_string(r.model) << ','
      << to_string(r.method) << ',' << to_string(r.arith) << ','
      << (r.exact ? format_fraction(*r.exact) : "") << ',' << r.decimal(digits) << ','
      << r.trials << ',' << r.std_error << ',' << (r.seed ? std::to_string(*r.seed) : "") << ','
      << r.runtime_ms;
  return out.str();
}

}  // namespace cardguess
