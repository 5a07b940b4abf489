#include "cardguess/config.hpp"

#include "cardguess/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cardguess {

namespace {

std::string trim(std::string_view s) {
  auto b = s.begin();
  auto e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

template <class T>
T parse_number(std::string_view key, std::string_view v, int line) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ParseError("bad value '" + std::string(v) + "' for key '" + std::string(key) + "'", line);
  }
  return out;
}

double parse_real(std::string_view key, std::string_view v, int line) {
  // from_chars for double is missing from libstdc++ 11.
  std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError("bad value '" + s + "' for key '" + std::string(key) + "'", line);
  }
  return d;
}

bool parse_bool(std::string_view key, std::string_view v, int line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError("bad boolean '" + std::string(v) + "' for key '" + std::string(key) + "'", line);
}

int line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

RunConfig parse_json(std::string_view text, RunConfig cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), line_of(text, e.byte));
  }
  if (!j.is_object()) throw ParseError("config JSON must be an object", 1);
  for (const auto& [key, value] : j.items()) {
    const auto at = text.find("\"" + key + "\"");
    const int line = at == std::string_view::npos ? 0 : line_of(text, at);
    std::string v;
    if (value.is_string()) {
      v = value.get<std::string>();
    } else if (value.is_boolean() || value.is_number()) {
      v = value.dump();
    } else {
      throw ParseError("key '" + key + "' needs a scalar value", line);
    }
    config_set(cfg, key, v, line);
  }
  return cfg;
}

}  // namespace

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.arith = arith;
  o.max_states = max_states;
  o.max_millis = max_millis;
  o.enumeration_cap = enumeration_cap;
  o.threads = threads;
  return o;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"enumeration_cap", "max_states", "max_millis",
                                             "arith",           "threads",    "seed",
                                             "trials",          "cache_dir",  "format",
                                             "big",             "strict"};
  return keys;
}

void config_set(RunConfig& cfg, std::string_view key, std::string_view value, int line) {
  if (key == "enumeration_cap") {
    cfg.enumeration_cap = parse_real(key, value, line);
  } else if (key == "max_states") {
    cfg.max_states = parse_number<std::uint64_t>(key, value, line);
  } else if (key == "max_millis") {
    cfg.max_millis = parse_real(key, value, line);
  } else if (key == "arith") {
    try {
      cfg.arith = parse_arith(value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line);
    }
  } else if (key == "threads") {
    cfg.threads = parse_number<int>(key, value, line);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value, line);
  } else if (key == "trials") {
    cfg.trials = parse_number<std::uint64_t>(key, value, line);
  } else if (key == "cache_dir") {
    cfg.cache_dir = std::string(value);
  } else if (key == "format") {
    if (value != "csv" && value != "json") {
      throw ParseError("format must be csv or json, got '" + std::string(value) + "'", line);
    }
    cfg.format = std::string(value);
  } else if (key == "big") {
    cfg.big = parse_bool(key, value, line);
  } else if (key == "strict") {
    cfg.strict = parse_bool(key, value, line);
  } else {
    throw ParseError("unknown config key '" + std::string(key) + "'", line);
  }
}

RunConfig config_parse(std::string_view text, RunConfig base) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text, std::move(base));

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line);
    config_set(base, key, value, line);
  }
  return base;
}

RunConfig config_load(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return config_parse(text.str(), std::move(base));
}

void apply_environment(RunConfig& cfg) {
  if (const char* dir = std::getenv("CARDGUESS_CACHE_DIR"); dir != nullptr && *dir != '\0') {
    cfg.cache_dir = dir;
  }
}

}  // namespace cardguess
