#include "cardguess/montecarlo.hpp"

#include "cardguess/errors.hpp"
#include "cardguess/solver.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>

namespace cardguess {

namespace {

constexpr std::uint64_t kTieSalt = 0x7469652D62726B73ULL;

void run_trial(DeckSpec deck, std::span<const Player> players, FeedbackModel model,
               std::uint64_t seed, std::uint64_t trial, std::vector<Symbol>& word,
               std::vector<ScoreSums>& sums) {
  RngStream shuffle(seed, trial);
  sample_into(deck, shuffle, word);
  for (std::size_t i = 0; i < players.size(); ++i) {
    RngStream ties(seed ^ kTieSalt, trial);
    sums[i].add(play_score(players[i], word, model, &ties));
  }
}

bool needs_serial(std::span<const Player> players) {
  // The solver's policy handle reads a memo that is not thread-safe.
  for (const auto& p : players) {
    if (p.spec().needs_policy()) return true;
  }
  return false;
}

}  // namespace

void ScoreSums::add(int score) {
  const auto s = static_cast<std::uint64_t>(score);
  ++trials;
  sum += s;
  sum_sq += s * s;
}

void ScoreSums::merge(const ScoreSums& o) {
  trials += o.trials;
  sum += o.sum;
  sum_sq += o.sum_sq;
}

double ScoreSums::mean() const {
  return trials == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(trials);
}

double ScoreSums::std_error() const {
  if (trials < 2) return 0.0;
  // (T * sum_sq - sum^2) / (T (T - 1)) evaluated in 128-bit integers.
  const auto t = static_cast<u128>(trials);
  const u128 num = t * sum_sq - static_cast<u128>(sum) * sum;
  const double var = static_cast<double>(num) / (static_cast<double>(trials) * static_cast<double>(trials - 1));
  return std::sqrt(var / static_cast<double>(trials));
}

std::vector<ScoreSums> simulate_sums(DeckSpec deck, std::span<const Player> players,
                                     FeedbackModel model, std::uint64_t trials,
                                     std::uint64_t seed, int threads) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  for (const auto& p : players) check_model(p.spec(), model);
  if (needs_serial(players)) return simulate_sums_serial(deck, players, model, trials, seed);

  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<ScoreSums> total(players.size());
  std::exception_ptr error;
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel num_threads(nthreads)
  {
    std::vector<ScoreSums> local(players.size());
    std::vector<Symbol> word;
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < count; ++t) {
      try {
        run_trial(deck, players, model, seed, static_cast<std::uint64_t>(t), word, local);
      } catch (...) {
#pragma omp critical(cardguess_mc_error)
        if (!error) error = std::current_exception();
      }
    }
#pragma omp critical(cardguess_mc_merge)
    for (std::size_t i = 0; i < players.size(); ++i) total[i].merge(local[i]);
  }
  if (error) std::rethrow_exception(error);
  return total;
}

std::vector<ScoreSums> simulate_sums_serial(DeckSpec deck, std::span<const Player> players,
                                            FeedbackModel model, std::uint64_t trials,
                                            std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  for (const auto& p : players) check_model(p.spec(), model);
  std::vector<ScoreSums> total(players.size());
  std::vector<Symbol> word;
  for (std::uint64_t t = 0; t < trials; ++t) run_trial(deck, players, model, seed, t, word, total);
  return total;
}

namespace {

EvalReport mc_report(DeckSpec deck, const StrategySpec& spec, FeedbackModel model,
                     const ScoreSums& s, std::uint64_t seed, double ms) {
  EvalReport r;
  r.deck = deck;
  r.strategy = spec.to_string();
  r.model = model;
  r.method = Method::MonteCarlo;
  r.arith = Arith::Float;
  r.value = s.mean();
  r.std_error = s.std_error();
  r.trials = s.trials;
  r.seed = seed;
  r.runtime_ms = ms;
  return r;
}

}  // namespace

EvalReport simulate(DeckSpec deck, const StrategySpec& spec, FeedbackModel model,
                    std::uint64_t trials, std::uint64_t seed, int threads, Oracles oracles) {
  const auto t0 = std::chrono::steady_clock::now();
  spec.validate(deck);
  check_model(spec, model);
  const OracleSet set(deck, std::span(&spec, 1), SolverOptions{}, oracles);
  const std::vector<Player> players{Player(spec, deck, set.get(spec))};
  const auto sums = simulate_sums(deck, players, model, trials, seed, threads);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return mc_report(deck, spec, model, sums.front(), seed, ms);
}

std::vector<EvalReport> sweep(DeckSpec deck, std::span<const StrategySpec> grid,
                              FeedbackModel model, std::uint64_t trials, std::uint64_t seed,
                              int threads) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  const auto t0 = std::chrono::steady_clock::now();
  const OracleSet set(deck, grid, SolverOptions{});
  std::vector<Player> players;
  for (const auto& spec : grid) {
    spec.validate(deck);
    players.emplace_back(spec, deck, set.get(spec));
  }
  const auto sums = simulate_sums(deck, players, model, trials, seed, threads);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::vector<EvalReport> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(mc_report(deck, grid[i], model, sums[i], seed, ms));
    out.back().note = "common random numbers across grid points";
  }
  return out;
}

std::vector<StrategySpec> family_grid(std::string_view family, std::span<const Rational> values) {
  std::vector<StrategySpec> out;
  for (const auto& v : values) {
    if (family == "gshift") {
      out.push_back(StrategySpec::gamma_shifting(v));
    } else if (family == "linear") {
      out.push_back(StrategySpec::linear(v));
    } else if (family.rfind("kgshift:", 0) == 0) {
      out.push_back(StrategySpec::k_gamma_shifting(std::stoi(std::string(family.substr(8))), v));
    } else if (family == "fixed") {
      if (boost::multiprecision::denominator(v) != 1) {
        throw std::invalid_argument("fixed symbol must be an integer");
      }
      out.push_back(StrategySpec::fixed(boost::multiprecision::numerator(v).convert_to<int>()));
    } else {
      throw std::invalid_argument("unknown sweep family '" + std::string(family) + "'");
    }
  }
  return out;
}

}  // namespace cardguess
