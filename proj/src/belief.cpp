#include "cardguess/belief.hpp"

#include "cardguess/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace cardguess {

namespace {

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string token(text.substr(start, end - start));
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size()) {
      throw std::invalid_argument("bad integer '" + token + "' in belief state");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

std::vector<PackedPair> live_pairs(std::span<const int> c, std::span<const int> g) {
  std::vector<PackedPair> pairs;
  pairs.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > 0) pairs.push_back(pack_pair(c[i], g[i]));
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

// Q_i(x) = sum_v C(g, v) * c!/(c-v)! x^v: ways to put v copies of i into
// v chosen cells of its own "No" class.
template <class Int>
std::vector<Int> violation_poly(int c, int g) {
  const int d = std::min(c, g);
  std::vector<Int> q(static_cast<std::size_t>(d) + 1);
  Int binom = 1;  // C(g, v)
  Int falling = 1;  // c (c-1) ... (c-v+1)
  for (int v = 0; v <= d; ++v) {
    q[static_cast<std::size_t>(v)] = binom * falling;
    binom = binom * static_cast<Int>(g - v) / static_cast<Int>(v + 1);
    falling = falling * static_cast<Int>(c - v);
  }
  return q;
}

}  // namespace

BeliefState::BeliefState(std::vector<int> unconfirmed, std::vector<int> misses)
    : c_(std::move(unconfirmed)), g_(std::move(misses)) {
  if (c_.size() != g_.size() || c_.empty()) {
    throw std::invalid_argument("belief state needs equally many c and g entries");
  }
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] < 0 || g_[i] < 0) throw std::invalid_argument("belief counts must be >= 0");
    if (c_[i] > 255 || g_[i] > 255) throw std::invalid_argument("belief counts must be <= 255");
  }
  sum_c_ = std::accumulate(c_.begin(), c_.end(), 0);
  sum_g_ = std::accumulate(g_.begin(), g_.end(), 0);
  if (sum_g_ > sum_c_) throw std::invalid_argument("belief state has sum(g) > sum(c)");
}

BeliefState BeliefState::initial(DeckSpec spec) {
  return BeliefState(std::vector<int>(static_cast<std::size_t>(spec.n), spec.m),
                     std::vector<int>(static_cast<std::size_t>(spec.n), 0));
}

BeliefState BeliefState::parse(std::string_view text) {
  std::vector<int> c;
  std::vector<int> g;
  bool have_c = false;
  bool have_g = false;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    auto part = text.substr(start, end - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    if (part.starts_with("c=")) {
      c = parse_int_list(part.substr(2));
      have_c = true;
    } else if (part.starts_with("g=")) {
      g = parse_int_list(part.substr(2));
      have_g = true;
    } else if (!part.empty()) {
      throw std::invalid_argument("belief state parts must be 'c=...' and 'g=...'");
    }
    start = end + 1;
  }
  if (!have_c) throw std::invalid_argument("belief state is missing 'c='");
  if (!have_g) g.assign(c.size(), 0);
  return BeliefState(std::move(c), std::move(g));
}

void BeliefState::apply(int guess, bool yes) {
  if (guess < 1 || guess > types()) throw std::invalid_argument("guess outside 1..n");
  if (future() <= 0) throw EmptyFuture("no future slots left");
  auto& c = c_[static_cast<std::size_t>(guess - 1)];
  if (yes) {
    if (c == 0) throw InconsistentFeedback("'yes' for a type with no unconfirmed copies");
    --c;
    --sum_c_;
  } else {
    ++g_[static_cast<std::size_t>(guess - 1)];
    ++sum_g_;
  }
}

BeliefState BeliefState::updated(int guess, bool yes) const {
  BeliefState next = *this;
  next.apply(guess, yes);
  return next;
}

std::string BeliefState::to_string() const {
  std::string out = "c=";
  for (std::size_t i = 0; i < c_.size(); ++i) out += (i ? "," : "") + std::to_string(c_[i]);
  out += ";g=";
  for (std::size_t i = 0; i < g_.size(); ++i) out += (i ? "," : "") + std::to_string(g_[i]);
  return out;
}

std::string CanonicalKey::encode() const {
  std::string out;
  out.reserve(1 + 2 * pairs.size());
  out.push_back(static_cast<char>(future));
  for (PackedPair p : pairs) {
    out.push_back(static_cast<char>(pair_c(p)));
    out.push_back(static_cast<char>(pair_g(p)));
  }
  return out;
}

CanonicalKey canonicalize(const BeliefState& s) {
  return CanonicalKey{live_pairs(s.unconfirmed(), s.misses()), s.future()};
}

namespace {

// Inclusion-exclusion over the forbidden (class j, symbol j) cells:
//   count = sum_s (-1)^s (N - s)! [x^s] prod_i Q_i(x) / prod_i c_i!.
template <class Int>
Int count_with(std::span<const PackedPair> pairs) {
  int total = 0;
  Int denom = 1;
  std::vector<Int> poly{1};
  for (PackedPair p : pairs) {
    const int c = pair_c(p);
    const int g = pair_g(p);
    total += c;
    for (int i = 2; i <= c; ++i) denom *= i;
    if (std::min(c, g) == 0) continue;
    const auto q = violation_poly<Int>(c, g);
    std::vector<Int> next(poly.size() + q.size() - 1, Int(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) next[i + j] += poly[i] * q[j];
    }
    poly = std::move(next);
  }
  // (N - s)! for s = 0..N, built from the top down.
  std::vector<Int> fact(static_cast<std::size_t>(total) + 1, Int(1));
  for (int i = 1; i <= total; ++i) {
    fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
  }
  Int pos = 0;
  Int neg = 0;
  for (std::size_t s = 0; s < poly.size() && static_cast<int>(s) <= total; ++s) {
    const Int term = fact[static_cast<std::size_t>(total) - s] * poly[s];
    if (s % 2 == 0) {
      pos += term;
    } else {
      neg += term;
    }
  }
  if (pos < neg) throw std::logic_error("negative completion count");
  return (pos - neg) / denom;
}

// log2 of an upper bound on every intermediate of count_with.
double magnitude_bound(std::span<const PackedPair> pairs) {
  int total = 0;
  double bits = 0.0;
  for (PackedPair p : pairs) {
    const int c = pair_c(p);
    const int g = pair_g(p);
    total += c;
    // Q_i(1) <= (1 + c)^g.
    bits += std::min(c, g) > 0 ? g * std::log2(1.0 + c) : 0.0;
  }
  return bits + std::lgamma(total + 1.0) / std::log(2.0) + 1.0;
}

}  // namespace

std::optional<u128> count_completions_u128(std::span<const PackedPair> pairs) {
  const double bits = magnitude_bound(pairs);
  if (bits <= 127.0) return count_with<u128>(pairs);
  if (bits <= 254.0) {
    const auto v = count_with<boost::multiprecision::int256_t>(pairs);
    if (v != 0 && boost::multiprecision::msb(v) >= 128) return std::nullopt;
    return to_u128(BigInt(v));
  }
  const BigInt v = count_with<BigInt>(pairs);
  if (v > 0 && boost::multiprecision::msb(v) >= 128) return std::nullopt;
  return to_u128(v);
}

BigInt count_completions(std::span<const PackedPair> pairs) {
  if (magnitude_bound(pairs) <= 127.0) return to_bigint(count_with<u128>(pairs));
  return count_with<BigInt>(pairs);
}

BigInt count_consistent(const BeliefState& s) {
  const auto pairs = live_pairs(s.unconfirmed(), s.misses());
  return count_completions(pairs);
}

namespace {

std::vector<BigInt> next_card_counts(const BeliefState& s) {
  if (s.future() <= 0) throw EmptyFuture("posterior needs at least one future slot");
  std::vector<BigInt> w(static_cast<std::size_t>(s.types()), 0);
  std::vector<int> c(s.unconfirmed().begin(), s.unconfirmed().end());
  for (int j = 1; j <= s.types(); ++j) {
    auto& cj = c[static_cast<std::size_t>(j - 1)];
    if (cj == 0) continue;
    --cj;
    w[static_cast<std::size_t>(j - 1)] = count_completions(live_pairs(c, s.misses()));
    ++cj;
  }
  return w;
}

}  // namespace

std::vector<Rational> posterior_next(const BeliefState& s) {
  const auto w = next_card_counts(s);
  const BigInt total = std::accumulate(w.begin(), w.end(), BigInt(0));
  if (total == 0) throw InconsistentFeedback("belief state admits no completion");
  std::vector<Rational> p;
  p.reserve(w.size());
  for (const auto& wi : w) p.emplace_back(wi, total);
  return p;
}

std::vector<double> posterior_next_float(const BeliefState& s) {
  const auto exact = posterior_next(s);
  std::vector<double> p;
  p.reserve(exact.size());
  for (const auto& r : exact) p.push_back(to_double(r));
  return p;
}

CountCache::CountCache(std::size_t capacity)
    : per_shard_(std::max<std::size_t>(1, capacity / kShards)) {}

u128 CountCache::count(std::span<const PackedPair> sorted_pairs) {
  std::string key;
  key.reserve(2 * sorted_pairs.size());
  for (PackedPair p : sorted_pairs) {
    key.push_back(static_cast<char>(pair_c(p)));
    key.push_back(static_cast<char>(pair_g(p)));
  }
  Shard& shard = shards_[std::hash<std::string>{}(key) % kShards];
  {
    std::lock_guard lock(shard.mu);
    if (auto it = shard.index.find(key); it != shard.index.end()) {
      shard.lru.splice(shard.lru.begin(), shard.lru, it->second);
      ++shard.hits;
      return it->second->second;
    }
    ++shard.misses;
  }
  const auto value = count_completions_u128(sorted_pairs);
  if (!value) throw std::overflow_error("completion count exceeds the 128-bit fast path");
  std::lock_guard lock(shard.mu);
  if (shard.index.find(key) == shard.index.end()) {
    shard.lru.emplace_front(key, *value);
    shard.index.emplace(std::move(key), shard.lru.begin());
    if (shard.lru.size() > per_shard_) {
      shard.index.erase(shard.lru.back().first);
      shard.lru.pop_back();
    }
  }
  return *value;
}

std::size_t CountCache::size() const {
  std::size_t total = 0;
  for (const auto& s : shards_) {
    std::lock_guard lock(s.mu);
    total += s.lru.size();
  }
  return total;
}

std::uint64_t CountCache::hits() const {
  std::uint64_t total = 0;
  for (const auto& s : shards_) {
    std::lock_guard lock(s.mu);
    total += s.hits;
  }
  return total;
}

std::uint64_t CountCache::misses() const {
  std::uint64_t total = 0;
  for (const auto& s : shards_) {
    std::lock_guard lock(s.mu);
    total += s.misses;
  }
  return total;
}

std::vector<u128> PosteriorOracle::next_card_weights(std::span<const int> unconfirmed,
                                                     std::span<const int> misses) {
  std::vector<int> c(unconfirmed.begin(), unconfirmed.end());
  std::vector<u128> w(c.size(), 0);
  try {
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == 0) continue;
      --c[j];
      w[j] = cache_.count(live_pairs(c, misses));
      ++c[j];
    }
  } catch (const std::overflow_error& e) {
    throw BudgetExceeded(std::string("posterior oracle: ") + e.what(), cache_.size(), 0.0);
  }
  return w;
}

}  // namespace cardguess
