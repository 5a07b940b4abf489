// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [criterion numbers...]   (default: all)
#include "cardguess/belief.hpp"
#include "cardguess/boundslab.hpp"
#include "cardguess/cutoff.hpp"
#include "cardguess/errors.hpp"
#include "cardguess/kernels.hpp"
#include "cardguess/montecarlo.hpp"
#include "cardguess/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace cardguess;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

void compare_decimal(Outcome& o, const std::string& label, const Rational& value, const std::string& expected,
                     int digits) {
  const auto got = format_decimal(value, digits);
  o.check(got == expected, label + ": " + got + " (expected " + expected + ")");
}

// --- 1 ---------------------------------------------------------------------

Outcome table2() {
  Outcome o;
  const std::vector<std::vector<std::string>> expected{
      {"2.8333", "3.0111", "3.0452", "3.0467"},
      {"2.8333", "3.0111", "3.0333", "3.0222"},
      {"2.8333", "3.0111", "3.0433", "3.0441"}};
  for (int n = 2; n <= 5; ++n) {
    const DeckSpec d(2, n);
    const auto i = static_cast<std::size_t>(n - 2);
    compare_decimal(o, "optimal n=" + std::to_string(n), *optimal_value(d, Objective::Max).exact, expected[0][i], 4);
    compare_decimal(o, "greedy n=" + std::to_string(n), *greedy_value(d).exact, expected[1][i], 4);
    compare_decimal(o, "linear(.51) n=" + std::to_string(n), *linear_value(d, Rational(51, 100)).exact,
                    expected[2][i], 4);
  }
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome table3() {
  Outcome o;
  const std::vector<std::string> expected{"3.0376", "3.0323", "3.0260", "3.0219", "3.0186"};
  for (int n = 6; n <= 10; ++n) {
    const auto r = optimal_value(DeckSpec(2, n), Objective::Max);
    compare_decimal(o, "optimal n=" + std::to_string(n) + " = " + format_fraction(*r.exact), *r.exact,
                    expected[static_cast<std::size_t>(n - 6)], 4);
  }
  return o;
}

// --- 3 ---------------------------------------------------------------------

std::vector<StrategySpec> table4_specs(const Rational& gamma) {
  return {StrategySpec::safe(), StrategySpec::shifting(), StrategySpec::gamma_shifting(gamma),
          StrategySpec::halfway_plus(), StrategySpec::halfway_minus()};
}

const char* kTable4Names[] = {"safe", "shift", "gshift", "half+", "half-"};

Outcome table4_exact() {
  Outcome o;
  struct Row {
    DeckSpec deck;
    Rational gamma;
    std::vector<std::string> expected;
  };
  const std::vector<Row> rows{{DeckSpec(2, 6), Rational(3, 10), {"2.737", "2.751", "2.941", "2.212", "1.682"}},
                              {DeckSpec(3, 5), Rational(1, 4), {"3.772", "3.753", "4.006", "3.431", "2.569"}}};
  for (const auto& row : rows) {
    const auto specs = table4_specs(row.gamma);
    std::vector<Player> players;
    for (const auto& s : specs) players.emplace_back(s, row.deck);
    const auto res = enumerate_scores(row.deck, players, FeedbackModel::YesNo);
    o.note("(" + std::to_string(row.deck.m) + "," + std::to_string(row.deck.n) + "): " + std::to_string(res.words) +
           " words");
    for (std::size_t i = 0; i < specs.size(); ++i) {
      compare_decimal(o,
                      "(" + std::to_string(row.deck.m) + "," + std::to_string(row.deck.n) + ") " + kTable4Names[i],
                      res.tallies[i].mean(), row.expected[i], 3);
    }
  }
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome table4_simulated() {
  Outcome o;
  struct Row {
    DeckSpec deck;
    Rational gamma;
    std::vector<double> expected;
  };
  const std::vector<Row> rows{{DeckSpec(4, 10), Rational(1, 5), {4.806, 4.831, 5.100, 4.370, 3.585}},
                              {DeckSpec(5, 20), Rational(3, 20), {5.835, 5.856, 6.136, 5.482, 4.516}}};
  const std::uint64_t trials = 1'000'000;
  const std::uint64_t seed = 1;
  o.note("trials " + std::to_string(trials) + ", seed " + std::to_string(seed));
  for (const auto& row : rows) {
    const auto reports = sweep(row.deck, table4_specs(row.gamma), FeedbackModel::YesNo, trials, seed);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const double z = (reports[i].value - row.expected[i]) / reports[i].std_error;
      o.check(std::abs(z) <= 4,
              "(" + std::to_string(row.deck.m) + "," + std::to_string(row.deck.n) + ") " + kTable4Names[i] + ": " +
                  fixed(reports[i].value, 4) + " +- " + fixed(reports[i].std_error, 4) + " vs " +
                  fixed(row.expected[i], 3) + " (z=" + fixed(z, 2) + ")");
    }
  }
  return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome cutoff_constants() {
  Outcome o;
  const auto p22 = build_polynomials(build_score_table(2, 2));
  const auto v22 = bound_integral(p22, 0);
  o.check(v22 == Rational(8, 3), "(m=2,k=2,gamma=0) = " + format_fraction(v22) + " (expected 8/3)");

  const auto p26 = build_polynomials(build_score_table(2, 6));
  const auto v26 = bound_integral(p26, Rational(35, 100));
  o.check(v26 >= Rational(29144, 10000), "(m=2,k=6,gamma=.35) = " + format_decimal(v26, 8) + " (need >= 2.9144)");
  const auto best = optimize_gamma(p26);
  o.note("information only: grid optimum gamma=" + format_decimal(best.gamma, 6) + " gives " +
         format_decimal(best.value, 8));

  const auto p35 = build_polynomials(build_score_table(3, 5));
  const auto v35 = bound_integral(p35, Rational(1, 4));
  o.check(v35 >= Rational(397, 100), "(m=3,k=5,gamma=.25) = " + format_decimal(v35, 8) + " (need >= 3.97)");
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome closed_forms() {
  Outcome o;
  const double e1 = std::exp(1.0) - 1;
  const double me1 = 1 - std::exp(-1.0);
  const auto opt = optimal_value(DeckSpec(1, 6), Objective::Max);
  const auto mis = optimal_value(DeckSpec(1, 6), Objective::Min);
  o.check(std::abs(opt.value - e1) < 1.0 / 720,
          "m=1 n=6 optimal " + format_decimal(*opt.exact, 6) + ", |v-(e-1)| = " + fixed(std::abs(opt.value - e1), 6));
  o.check(std::abs(mis.value - me1) < 1.0 / 720, "m=1 n=6 misere " + format_decimal(*mis.exact, 6) +
                                                     ", |v-(1-1/e)| = " + fixed(std::abs(mis.value - me1), 6));
  for (int m = 1; m <= 6; ++m) {
    const auto ex = *exhaustive_value(DeckSpec(m, 2), StrategySpec::safe(), FeedbackModel::YesNo).exact;
    const auto f = safe_two_type_formula(m);
    o.check(ex == f, "safe on S_{" + std::to_string(m) + ",2}: " + format_fraction(ex) + " vs formula " +
                         format_fraction(f));
  }
  const auto lin = linear_value(DeckSpec(5, 5), Rational(35, 100));
  compare_decimal(o, "linear(.35) m=n=5 = " + format_fraction(*lin.exact), *lin.exact, "6.6149", 4);
  return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome inequality_audits() {
  Outcome o;
  for (int m = 2; m <= 4; ++m) {
    for (int n : {8 * m, 8 * m + 1}) {
      const auto r = check_k1_lower_bound(m, n);
      o.check(r.pass, "K1 lower bound (" + std::to_string(m) + "," + std::to_string(n) + ") margin " +
                          fixed(r.margin, 6) + " at " + r.witness);
    }
  }
  const auto b = binom_tail_check(10000);
  o.check(b.pass && b.exact_margin && *b.exact_margin == 0 && b.witness.find("m=6 ") == 0,
          "binomial tail >= 7/64 for m <= 10^4, minimum " + b.witness);
  for (int n : {3, 4}) {
    const auto r = check_k2_identity(2, n);
    o.check(r.pass, "K2 conditional mean formula vs enumeration (2," + std::to_string(n) + ")");
  }
  const std::uint64_t trials = 1'000'000;
  for (auto [m, n] : {std::pair{2, 16}, {4, 32}}) {
    const DeckSpec d(m, n);
    const double gap = std::sqrt(static_cast<double>(m)) / 40;
    const auto plus = simulate(d, StrategySpec::star_halfway_plus(), FeedbackModel::YesNo, trials, 1);
    const auto minus = simulate(d, StrategySpec::star_halfway_minus(), FeedbackModel::YesNo, trials, 1);
    o.check(plus.value >= m + gap - 4 * plus.std_error,
            "half*+ (" + std::to_string(m) + "," + std::to_string(n) + ") " + fixed(plus.value, 4) +
                " >= " + fixed(m + gap, 4) + " - 4*" + fixed(plus.std_error, 4));
    o.check(minus.value <= m - gap + 4 * minus.std_error,
            "half*- (" + std::to_string(m) + "," + std::to_string(n) + ") " + fixed(minus.value, 4) +
                " <= " + fixed(m - gap, 4) + " + 4*" + fixed(minus.std_error, 4));
  }
  return o;
}

// --- 8 ---------------------------------------------------------------------

std::vector<DeckSpec> small_decks() {
  std::vector<DeckSpec> out;
  for (int m = 1; m <= 10; ++m) {
    for (int n = 2; m * n <= 10; ++n) out.emplace_back(m, n);
  }
  return out;
}

// Counts each reachable belief state against the words consistent with a
// history that reaches it. One expansion per relabeling class.
struct ReachWalk {
  DeckSpec deck;
  std::vector<std::vector<Symbol>> words;
  std::set<std::string> seen;
  std::uint64_t mismatches = 0;
  std::uint64_t visited = 0;

  void visit(const BeliefState& s, int t, const std::vector<std::uint32_t>& alive) {
    if (count_consistent(s) != BigInt(alive.size())) ++mismatches;
    ++visited;
    if (!seen.insert(canonicalize(s).encode()).second || s.future() == 0) return;
    for (int j = 1; j <= deck.n; ++j) {
      std::vector<std::uint32_t> yes, no;
      for (auto i : alive) (words[i][static_cast<std::size_t>(t)] == j ? yes : no).push_back(i);
      if (!yes.empty()) visit(s.updated(j, true), t + 1, yes);
      if (!no.empty()) visit(s.updated(j, false), t + 1, no);
    }
  }
};

std::vector<StrategySpec> named(DeckSpec d) {
  std::vector<StrategySpec> out;
  for (const char* s : {"safe", "shift", "gshift:0.1", "gshift:0.3", "gshift:0.5", "half+", "half-", "half*+",
                        "half*-", "avoid", "linear:0.51", "linear:0.35", "greedy", "opt:max", "opt:min"}) {
    out.push_back(StrategySpec::parse(s));
  }
  for (int k = 1; k <= d.n; ++k) {
    out.push_back(StrategySpec::k_gamma_shifting(k, Rational(35, 100)));
    out.push_back(StrategySpec::fixed(k));
  }
  return out;
}

EnumerationResult enumerate_named(DeckSpec d, const std::vector<StrategySpec>& specs) {
  const OracleSet oracles(d, specs);
  std::vector<Player> players;
  for (const auto& s : specs) players.emplace_back(s, d, oracles.get(s));
  return enumerate_scores(d, players, FeedbackModel::YesNo, kDefaultEnumerationCap, 1);
}

Outcome property_suite() {
  Outcome o;

  // Posterior normalization and relabeling symmetry.
  {
    RngStream rng(2024, 0);
    const std::vector<DeckSpec> decks{DeckSpec(2, 5), DeckSpec(3, 4), DeckSpec(4, 4), DeckSpec(5, 5), DeckSpec(2, 10)};
    int checked = 0, bad = 0;
    while (checked < 1000) {
      const DeckSpec d = decks[rng.below(decks.size())];
      const auto p = sample(d, rng);
      auto s = BeliefState::initial(d);
      const auto depth = rng.below(static_cast<std::uint64_t>(d.length()));
      for (std::uint64_t t = 0; t < depth; ++t) {
        const int j = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d.n)));
        s.apply(j, p.word()[t] == j);
      }
      if (s.future() == 0) continue;
      const auto post = posterior_next(s);
      const Rational sum = std::accumulate(post.begin(), post.end(), Rational(0));
      std::vector<int> c(s.unconfirmed().begin(), s.unconfirmed().end());
      std::vector<int> g(s.misses().begin(), s.misses().end());
      std::reverse(c.begin(), c.end());
      std::reverse(g.begin(), g.end());
      auto rev = posterior_next(BeliefState(c, g));
      std::reverse(rev.begin(), rev.end());
      bad += sum != 1 || rev != post;
      ++checked;
    }
    o.check(bad == 0, "posterior sums to 1 and follows relabeling on " + std::to_string(checked) +
                          " random reachable states (" + std::to_string(bad) + " bad)");
  }

  // count_consistent against enumeration on every reachable state.
  {
    std::uint64_t states = 0, classes = 0, mismatches = 0;
    for (const DeckSpec d : small_decks()) {
      ReachWalk w{d, {}, {}, 0};
      for (const auto& p : enumerate(d)) w.words.emplace_back(p.word().begin(), p.word().end());
      std::vector<std::uint32_t> all(w.words.size());
      std::iota(all.begin(), all.end(), 0u);
      w.visit(BeliefState::initial(d), 0, all);
      states += w.visited;
      classes += w.seen.size();
      mismatches += w.mismatches;
    }
    o.check(mismatches == 0, "count_consistent equals enumeration on " + std::to_string(states) + " visited states (" +
                                 std::to_string(classes) + " relabeling classes, all reachable) with m*n <= 10");
  }

  // Sandwich at m = 2, n <= 5.
  {
    int bad = 0, total = 0;
    for (int n = 2; n <= 5; ++n) {
      const DeckSpec d(2, n);
      const Rational lo = *optimal_value(d, Objective::Min).exact;
      const Rational hi = *optimal_value(d, Objective::Max).exact;
      const auto specs = named(d);
      const auto res = enumerate_named(d, specs);
      for (const auto& t : res.tallies) {
        const auto v = t.mean();
        bad += v < lo || v > hi;
        ++total;
      }
    }
    o.check(bad == 0, "optimal(min) <= value <= optimal(max) for " + std::to_string(total) +
                          " (strategy, n) pairs at m=2");
  }

  // Zero-score maximality of the avoiding strategy.
  {
    int bad = 0, decks = 0;
    for (const DeckSpec d : small_decks()) {
      const auto specs = named(d);
      const auto res = enumerate_named(d, specs);
      std::size_t avoid = 0;
      while (specs[avoid].kind != StrategyKind::Avoiding) ++avoid;
      for (const auto& t : res.tallies) bad += t.score_hist[0] > res.tallies[avoid].score_hist[0];
      ++decks;
    }
    o.check(bad == 0, "P[score=0] of avoid is maximal over named strategies on " + std::to_string(decks) +
                          " decks with m*n <= 10");
  }

  // Monte Carlo determinism under thread-count variation.
  {
    const DeckSpec d(4, 10);
    std::vector<Player> players;
    for (const auto& s : table4_specs(Rational(1, 5))) players.emplace_back(s, d);
    const auto ref = simulate_sums_serial(d, players, FeedbackModel::YesNo, 50000, 7);
    bool same = true;
    for (int t : {1, 2, 4, 8}) same = same && simulate_sums(d, players, FeedbackModel::YesNo, 50000, 7, t) == ref;
    o.check(same, "Monte Carlo sums identical for 1, 2, 4, 8 threads and the serial reference");
  }
  return o;
}

// --- 9 ---------------------------------------------------------------------

Outcome table1_yesno() {
  Outcome o;
  try {
    const auto r = optimal_value(DeckSpec(5, 5), Objective::Max);
    o.note("states " + std::to_string(r.nodes) + ", value " + format_fraction(*r.exact));
    compare_decimal(o, "m=n=5 Yes/No optimal", *r.exact, "6.65", 2);
  } catch (const BudgetExceeded& e) {
    o.check(false, std::string("BudgetExceeded: ") + e.what());
  }
  return o;
}

struct Criterion {
  int id;
  std::string title;
  bool gating;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Table 2 reproduction (exact)", true, table2},
      {2, "Table 3 reproduction (exact)", true, table3},
      {3, "Table 4 exact rows", true, table4_exact},
      {4, "Table 4 simulated rows within 4 sigma", true, table4_simulated},
      {5, "cutoff bound constants", true, cutoff_constants},
      {6, "closed forms", true, closed_forms},
      {7, "inequality audits", true, inequality_audits},
      {8, "property suite", true, property_suite},
      {9, "m=n=5 Yes/No optimal (stretch, not gating)", false, table1_yesno},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << c.id << ": " << (out.pass ? "PASS" : "FAIL") << "  " << c.title << "  ("
              << fixed(secs, 1) << " s)\n";
    for (const auto& d : out.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    if (!out.pass && c.gating) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
