#include "cardguess/cli.hpp"

#include "cardguess/belief.hpp"
#include "cardguess/boundslab.hpp"
#include "cardguess/config.hpp"
#include "cardguess/cutoff.hpp"
#include "cardguess/errors.hpp"
#include "cardguess/montecarlo.hpp"
#include "cardguess/solver.hpp"
#include "cardguess/tables.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cardguess {

namespace {

struct GlobalFlags {
  std::string config;
  int threads = 0;
  std::string arith;
  double cap = 0;
  std::uint64_t max_states = 0;
  double max_millis = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string format;
  std::string out;
  bool strict = false;
  bool big = false;

  CLI::Option* o_threads = nullptr;
  CLI::Option* o_arith = nullptr;
  CLI::Option* o_cap = nullptr;
  CLI::Option* o_states = nullptr;
  CLI::Option* o_millis = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_trials = nullptr;
  CLI::Option* o_format = nullptr;
  CLI::Option* o_strict = nullptr;
  CLI::Option* o_big = nullptr;

  void add_to(CLI::App& app) {
    app.add_option("--config", config, "key=value or JSON config file");
    o_threads = app.add_option("--threads", threads, "worker threads (0 = OpenMP default)");
    o_arith = app.add_option("--arith", arith, "rational | float");
    o_cap = app.add_option("--cap", cap, "enumeration cap in words");
    o_states = app.add_option("--max-states", max_states, "solver memo budget");
    o_millis = app.add_option("--max-millis", max_millis, "solver wall-clock budget");
    o_seed = app.add_option("--seed", seed, "random seed");
    o_trials = app.add_option("--trials", trials, "Monte Carlo trials");
    o_format = app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out, "write results to this file instead of stdout");
    o_strict = app.add_flag("--strict", strict, "randomized commands require --seed");
    o_big = app.add_flag("--big", big, "enable the expensive table cells");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config.empty()) cfg = config_load(config, cfg);
    apply_environment(cfg);
    if (o_threads->count()) cfg.threads = threads;
    if (o_arith->count()) cfg.arith = parse_arith(arith);
    if (o_cap->count()) cfg.enumeration_cap = cap;
    if (o_states->count()) cfg.max_states = max_states;
    if (o_millis->count()) cfg.max_millis = max_millis;
    if (o_seed->count()) cfg.seed = seed;
    if (o_trials->count()) cfg.trials = trials;
    if (o_format->count()) cfg.format = format;
    if (o_strict->count()) cfg.strict = strict;
    if (o_big->count()) cfg.big = big;
    return cfg;
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t require_seed(const RunConfig& cfg, std::uint64_t fallback = 1) {
  if (cfg.seed) return *cfg.seed;
  if (cfg.strict) throw UsageError("--strict: randomized commands need an explicit --seed");
  return fallback;
}

void emit_reports(std::ostream& out, const std::vector<EvalReport>& reports, const RunConfig& cfg,
                  int digits) {
  if (cfg.format == "json") {
    if (reports.size() == 1) {
      out << to_json(reports.front(), digits).dump(2) << "\n";
    } else {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : reports) arr.push_back(to_json(r, digits));
      out << arr.dump(2) << "\n";
    }
    return;
  }
  out << csv_header() << "\n";
  for (const auto& r : reports) out << to_csv_row(r, digits) << "\n";
}

std::vector<Rational> parse_values(const std::string& list) {
  std::vector<Rational> v;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) v.push_back(parse_rational(item));
  }
  if (v.empty()) throw UsageError("--values is empty");
  return v;
}

std::vector<Rational> range_values(const std::string& from, const std::string& to, const std::string& step) {
  const Rational a = parse_rational(from);
  const Rational b = parse_rational(to);
  const Rational s = parse_rational(step);
  if (s <= 0 || b < a) throw UsageError("need --from <= --to and --step > 0");
  std::vector<Rational> v;
  for (Rational x = a; x <= b; x += s) v.push_back(x);
  return v;
}

// "1y,1n,2y": guess then y / n.
BeliefState replay_history(DeckSpec deck, const std::string& history) {
  BeliefState s = BeliefState::initial(deck);
  std::stringstream ss(history);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const char fb = tok.back();
    if (fb != 'y' && fb != 'n') throw UsageError("history token '" + tok + "' must end in y or n");
    const int guess = std::stoi(tok.substr(0, tok.size() - 1));
    if (guess < 1 || guess > deck.n) throw UsageError("guess out of range in '" + tok + "'");
    s.apply(guess, fb == 'y');
  }
  return s;
}

std::string bool_mark(bool b) { return b ? "PASS" : "FAIL"; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cardguess: expected scores of card-guessing strategies under feedback"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  g.add_to(app);

  int m = 0;
  int n = 0;
  int k = 0;
  int digits = 6;
  int which = 0;
  std::string strategy;
  std::string model_text = "yesno";
  std::string objective = "max";
  std::string family;
  std::string values;
  std::string from;
  std::string to;
  std::string step;
  std::string state_text;
  std::string history;
  std::string gamma_text;
  std::string emit_poly;
  int resolution = 256;
  int refine = 2;
  int finite_n = 0;
  bool optimize = false;

  auto* exact = app.add_subcommand("exact", "exact expected score of one strategy");
  exact->add_option("--m", m, "copies per type")->required();
  exact->add_option("--n", n, "number of types")->required();
  exact->add_option("--strategy", strategy, "e.g. opt:max, greedy, linear:0.51, gshift:0.3")->required();
  exact->add_option("--model", model_text, "none | yesno | complete");
  exact->add_option("--digits", digits, "decimal places");

  auto* optimal = app.add_subcommand("optimal", "optimal or misere value with Yes/No feedback");
  optimal->add_option("--m", m)->required();
  optimal->add_option("--n", n)->required();
  optimal->add_option("--objective", objective)->check(CLI::IsMember({"max", "min"}));
  optimal->add_option("--digits", digits);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of one strategy");
  simulate_cmd->add_option("--m", m)->required();
  simulate_cmd->add_option("--n", n)->required();
  simulate_cmd->add_option("--strategy", strategy)->required();
  simulate_cmd->add_option("--model", model_text);
  simulate_cmd->add_option("--digits", digits);

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo over a strategy family");
  sweep_cmd->add_option("--m", m)->required();
  sweep_cmd->add_option("--n", n)->required();
  sweep_cmd->add_option("--family", family, "gshift | linear | kgshift:K | fixed")->required();
  sweep_cmd->add_option("--values", values, "comma-separated parameters");
  sweep_cmd->add_option("--from", from);
  sweep_cmd->add_option("--to", to);
  sweep_cmd->add_option("--step", step);
  sweep_cmd->add_option("--model", model_text);
  sweep_cmd->add_option("--digits", digits);

  auto* posterior = app.add_subcommand("posterior", "next-card posterior of a Yes/No history");
  posterior->add_option("--m", m)->required();
  posterior->add_option("--n", n)->required();
  posterior->add_option("--state", state_text, "c=2,2,1;g=0,1,0");
  posterior->add_option("--history", history, "guess+feedback tokens, e.g. 1y,1n,2n");

  auto* cutoff = app.add_subcommand("cutoff-bound", "limit lower bound of the (k,gamma)-shifting strategy");
  cutoff->add_option("--m", m)->required();
  cutoff->add_option("--k", k)->required();
  cutoff->add_option("--gamma", gamma_text, "cutoff in [0,1]");
  cutoff->add_flag("--optimize", optimize, "grid-search gamma");
  cutoff->add_option("--resolution", resolution);
  cutoff->add_option("--refine", refine);
  cutoff->add_option("--emit-poly", emit_poly, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  cutoff->add_option("--finite-n", finite_n, "also simulate the strategy at this n");

  auto* audit = app.add_subcommand("audit", "run every inequality verifier");

  auto* tables = app.add_subcommand("tables", "reproduce a published table");
  tables->add_option("--which", which, "1, 2, 3 or 4")->required()->check(CLI::Range(1, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream buf;
  try {
    const RunConfig cfg = g.resolve();
    const SolverOptions opts = cfg.solver_options();

    if (*exact) {
      const auto spec = StrategySpec::parse(strategy);
      emit_reports(buf, {evaluate(DeckSpec(m, n), spec, parse_feedback_model(model_text), opts)}, cfg, digits);
    } else if (*optimal) {
      const DeckSpec deck(m, n);
      OptimalSolver solver(deck, objective == "max" ? Objective::Max : Objective::Min, opts);
      std::string memo;
      bool loaded = false;
      if (!cfg.cache_dir.empty()) {
        std::filesystem::create_directories(cfg.cache_dir);
        memo = (std::filesystem::path(cfg.cache_dir) /
                ("opt-" + objective + "-m" + std::to_string(m) + "-n" + std::to_string(n) + "-" +
                 to_string(cfg.arith) + ".memo"))
                   .string();
        loaded = solver.load_memo(memo);
      }
      EvalReport r = solver.solve();
      if (!memo.empty()) {
        solver.save_memo(memo);
        r.note = loaded ? "memo reused from " + memo : "memo written to " + memo;
      }
      emit_reports(buf, {r}, cfg, digits);
    } else if (*simulate_cmd) {
      const std::uint64_t seed = require_seed(cfg);
      emit_reports(buf,
                   {simulate(DeckSpec(m, n), StrategySpec::parse(strategy), parse_feedback_model(model_text),
                             cfg.trials, seed, cfg.threads)},
                   cfg, digits);
    } else if (*sweep_cmd) {
      const std::uint64_t seed = require_seed(cfg);
      const auto grid_values = !values.empty() ? parse_values(values)
                                               : range_values(from.empty() ? "0" : from, to.empty() ? "1" : to,
                                                              step.empty() ? "0.05" : step);
      const auto grid = family_grid(family, grid_values);
      emit_reports(buf, sweep(DeckSpec(m, n), grid, parse_feedback_model(model_text), cfg.trials, seed, cfg.threads),
                   cfg, digits);
    } else if (*posterior) {
      const DeckSpec deck(m, n);
      if (!state_text.empty() && !history.empty()) throw UsageError("give --state or --history, not both");
      const BeliefState s = !state_text.empty() ? BeliefState::parse(state_text) : replay_history(deck, history);
      if (s.types() != n) throw UsageError("state has " + std::to_string(s.types()) + " types, expected n");
      const auto post = posterior_next(s);
      const BigInt count = count_consistent(s);
      if (cfg.format == "json") {
        nlohmann::json j;
        j["schema_version"] = kSchemaVersion;
        j["state"] = s.to_string();
        j["consistent"] = count.str();
        j["posterior"] = nlohmann::json::array();
        for (std::size_t i = 0; i < post.size(); ++i) {
          j["posterior"].push_back({{"symbol", i + 1},
                                    {"fraction", format_fraction(post[i])},
                                    {"decimal", format_decimal(post[i], digits)}});
        }
        buf << j.dump(2) << "\n";
      } else {
        buf << "# state " << s.to_string() << ", consistent completions " << count.str() << "\n";
        buf << "symbol,c,g,fraction,decimal\n";
        for (std::size_t i = 0; i < post.size(); ++i) {
          const int sym = static_cast<int>(i) + 1;
          buf << sym << "," << s.unconfirmed(sym) << "," << s.misses(sym) << "," << format_fraction(post[i]) << ","
              << format_decimal(post[i], digits) << "\n";
        }
      }
    } else if (*cutoff) {
      if (gamma_text.empty() && !optimize) throw UsageError("cutoff-bound needs --gamma or --optimize");
      const ScoreTable table = build_score_table(m, k, false, cfg.enumeration_cap, cfg.threads);
      const BoundPolynomials polys = build_polynomials(table);
      nlohmann::json j;
      j["schema_version"] = kSchemaVersion;
      j["params"] = {{"m", m}, {"k", k}};
      if (!gamma_text.empty()) {
        const Rational gamma = parse_rational(gamma_text);
        const Rational b = bound_integral(polys, gamma);
        j["gamma"] = format_fraction(gamma);
        j["bound"] = {{"fraction", format_fraction(b)}, {"decimal", format_decimal(b, 6)}};
        if (finite_n > 0) {
          const FiniteNCheck fc = finite_n_check(m, k, gamma, finite_n, cfg.trials, require_seed(cfg), cfg.threads);
          j["finite_n"] = to_json(fc.simulated, 6);
        }
      }
      if (optimize) {
        const GammaOptimum o = optimize_gamma(polys, resolution, refine);
        j["optimum"] = {{"gamma", format_fraction(o.gamma)},
                        {"gamma_decimal", format_decimal(o.gamma, 6)},
                        {"fraction", format_fraction(o.value)},
                        {"decimal", format_decimal(o.value, 6)},
                        {"evaluations", o.evaluations}};
      }
      if (cfg.format == "json" || emit_poly == "json") {
        if (!emit_poly.empty()) {
          nlohmann::json f = nlohmann::json::array();
          nlohmann::json gj = nlohmann::json::array();
          for (int i = 0; i <= std::max(polys.f.degree(), polys.g.degree()); ++i) {
            f.push_back(format_fraction(polys.f.coeff(i)));
            gj.push_back(format_fraction(polys.g.coeff(i)));
          }
          j["poly"] = {{"variable", "u = t/(mn)"}, {"f", f}, {"g", gj}};
        }
        buf << j.dump(2) << "\n";
      } else {
        buf << "m,k,gamma,bound_fraction,bound_decimal\n";
        if (j.contains("bound")) {
          buf << m << "," << k << "," << j["gamma"].get<std::string>() << ","
              << j["bound"]["fraction"].get<std::string>() << "," << j["bound"]["decimal"].get<std::string>() << "\n";
        }
        if (j.contains("optimum")) {
          buf << m << "," << k << "," << j["optimum"]["gamma"].get<std::string>() << ","
              << j["optimum"]["fraction"].get<std::string>() << "," << j["optimum"]["decimal"].get<std::string>()
              << "\n";
        }
        if (j.contains("finite_n")) {
          buf << "# finite n=" << finite_n << ": mean " << j["finite_n"]["value"]["decimal"].get<std::string>()
              << " stderr " << j["finite_n"]["stderr"].get<double>() << "\n";
        }
        if (emit_poly == "csv") {
          buf << "degree,f,g\n";
          for (int i = 0; i <= std::max(polys.f.degree(), polys.g.degree()); ++i) {
            buf << i << "," << format_fraction(polys.f.coeff(i)) << "," << format_fraction(polys.g.coeff(i)) << "\n";
          }
        }
      }
    } else if (*audit) {
      AuditOptions ao;
      ao.seed = require_seed(cfg);
      ao.threads = cfg.threads;
      if (g.o_trials->count()) ao.trials = cfg.trials;
      const auto results = theorem_inequality_audit(ao);
      if (cfg.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : results) {
          nlohmann::json j{{"name", r.name},       {"ranges", r.ranges}, {"margin", r.margin},
                           {"witness", r.witness}, {"pass", r.pass},     {"empirical", r.empirical},
                           {"detail", r.detail}};
          if (r.exact_margin) j["margin_fraction"] = format_fraction(*r.exact_margin);
          arr.push_back(j);
        }
        buf << nlohmann::json{{"schema_version", kSchemaVersion}, {"checks", arr}}.dump(2) << "\n";
      } else {
        buf << "status,name,ranges,margin,witness,kind,detail\n";
        for (const auto& r : results) {
          buf << bool_mark(r.pass) << "," << r.name << ",\"" << r.ranges << "\"," << r.margin << ",\"" << r.witness
              << "\"," << (r.empirical ? "empirical" : "exact") << ",\"" << r.detail << "\"\n";
        }
      }
    } else if (*tables) {
      if (which == 4) require_seed(cfg);
      const Table t = build_table(which, cfg);
      if (cfg.format == "json") {
        buf << table_json(t).dump(2) << "\n";
      } else {
        buf << render_table(t);
      }
    }

    if (!g.out.empty()) {
      std::ofstream f(g.out);
      if (!f) throw UsageError("cannot write " + g.out);
      f << buf.str();
    } else {
      out << buf.str();
    }
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << " (states " << e.states_visited() << ", " << e.elapsed_ms()
        << " ms)\n";
    return kExitBudget;
  } catch (const CapExceeded& e) {
    err << "enumeration cap exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cardguess
