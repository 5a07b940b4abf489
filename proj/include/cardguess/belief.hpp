#pragma once

#include "cardguess/deck.hpp"
#include "cardguess/numeric.hpp"

#include <array>
#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cardguess {

// Sufficient statistic of a Yes/No history. For each label i: c_i copies
// of i not yet confirmed, g_i guesses of i answered "No". Future slots
// f = sum(c) - sum(g).
class BeliefState {
 public:
  BeliefState(std::vector<int> unconfirmed, std::vector<int> misses);

  static BeliefState initial(DeckSpec spec);
  // "c=2,2,1;g=0,1,0"
  static BeliefState parse(std::string_view text);

  int types() const { return static_cast<int>(c_.size()); }
  int unconfirmed(int symbol) const { return c_[static_cast<std::size_t>(symbol - 1)]; }
  int misses(int symbol) const { return g_[static_cast<std::size_t>(symbol - 1)]; }
  std::span<const int> unconfirmed() const { return c_; }
  std::span<const int> misses() const { return g_; }
  int remaining_copies() const { return sum_c_; }
  int future() const { return sum_c_ - sum_g_; }

  // Throws EmptyFuture when f == 0, InconsistentFeedback on "yes" with c_j == 0.
  void apply(int guess, bool yes);
  BeliefState updated(int guess, bool yes) const;

  std::string to_string() const;
  bool operator==(const BeliefState&) const = default;

 private:
  std::vector<int> c_;
  std::vector<int> g_;
  int sum_c_ = 0;
  int sum_g_ = 0;
};

// (c, g) of one type packed as c << 8 | g.
using PackedPair = std::uint16_t;
constexpr PackedPair pack_pair(int c, int g) { return static_cast<PackedPair>((c << 8) | g); }
constexpr int pair_c(PackedPair p) { return p >> 8; }
constexpr int pair_g(PackedPair p) { return p & 0xFF; }

// Relabeling-invariant key: sorted (c, g) pairs of the types that still
// have unconfirmed copies, plus the number of future slots. Types with
// c = 0 only contribute free positions, which the counts already encode.
struct CanonicalKey {
  std::vector<PackedPair> pairs;
  int future = 0;

  std::string encode() const;
  bool operator==(const CanonicalKey&) const = default;
};

CanonicalKey canonicalize(const BeliefState& s);

// Number of deck completions consistent with the history, i.e. placements
// of the remaining multiset with no symbol j inside j's "No" class. Only
// the c > 0 pairs matter.
BigInt count_completions(std::span<const PackedPair> pairs);
// Fast path; nullopt if the intermediate sums could leave 127 bits.
std::optional<u128> count_completions_u128(std::span<const PackedPair> pairs);

BigInt count_consistent(const BeliefState& s);

// Exact posterior of the next card. Throws EmptyFuture when f == 0.
std::vector<Rational> posterior_next(const BeliefState& s);
std::vector<double> posterior_next_float(const BeliefState& s);

// Thread-safe bounded LRU memo of completion counts, keyed by the sorted
// c > 0 pairs. Sharded so concurrent readers rarely contend.
class CountCache {
 public:
  explicit CountCache(std::size_t capacity = std::size_t{1} << 20);

  // Throws std::overflow_error past the 128-bit range.
  u128 count(std::span<const PackedPair> sorted_pairs);

  std::size_t size() const;
  std::uint64_t hits() const;
  std::uint64_t misses() const;

 private:
  static constexpr std::size_t kShards = 16;
  struct Shard {
    mutable std::mutex mu;
    std::list<std::pair<std::string, u128>> lru;
    std::unordered_map<std::string, std::list<std::pair<std::string, u128>>::iterator> index;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
  };
  std::size_t per_shard_;
  std::array<Shard, kShards> shards_;
};

// Next-card weights w_j = #completions with next card j; the posterior is
// w_j / sum(w). Used by the greedy strategy.
class PosteriorOracle {
 public:
  explicit PosteriorOracle(std::size_t cache_capacity = std::size_t{1} << 20)
      : cache_(cache_capacity) {}

  // Throws BudgetExceeded when counts leave the 128-bit range.
  std::vector<u128> next_card_weights(std::span<const int> unconfirmed,
                                      std::span<const int> misses);
  std::vector<u128> next_card_weights(const BeliefState& s) {
    return next_card_weights(s.unconfirmed(), s.misses());
  }

  CountCache& cache() { return cache_; }

 private:
  CountCache cache_;
};

}  // namespace cardguess
