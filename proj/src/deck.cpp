#include "cardguess/deck.hpp"

#include "cardguess/errors.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace cardguess {

DeckSpec::DeckSpec(int copies, int types) : m(copies), n(types) {
  if (m < 1 || n < 1) throw std::invalid_argument("deck needs m >= 1 and n >= 1");
  if (n > 255) throw std::invalid_argument("at most 255 card types are supported");
}

void check_multiset(DeckSpec spec, std::span<const Symbol> word) {
  if (static_cast<int>(word.size()) != spec.length()) {
    throw std::invalid_argument("word length " + std::to_string(word.size()) +
                                " != m*n = " + std::to_string(spec.length()));
  }
  std::vector<int> seen(static_cast<std::size_t>(spec.n) + 1, 0);
  for (Symbol s : word) {
    if (s < 1 || s > spec.n) {
      throw std::invalid_argument("symbol " + std::to_string(s) + " outside 1.." +
                                  std::to_string(spec.n));
    }
    ++seen[s];
  }
  for (int i = 1; i <= spec.n; ++i) {
    if (seen[static_cast<std::size_t>(i)] != spec.m) {
      throw std::invalid_argument("symbol " + std::to_string(i) + " occurs " +
                                  std::to_string(seen[static_cast<std::size_t>(i)]) +
                                  " times, expected " + std::to_string(spec.m));
    }
  }
}

Permutation::Permutation(DeckSpec spec, std::vector<Symbol> word)
    : spec_(spec), word_(std::move(word)) {
  check_multiset(spec_, word_);
}

Permutation Permutation::parse(DeckSpec spec, std::string_view text) {
  std::vector<Symbol> word;
  if (text.find(',') == std::string_view::npos && spec.n <= 9) {
    for (char ch : text) {
      if (ch < '0' || ch > '9') throw std::invalid_argument("bad permutation digit");
      word.push_back(static_cast<Symbol>(ch - '0'));
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = std::min(text.find(',', start), text.size());
      const auto token = text.substr(start, end - start);
      int value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0 || value > 255) {
        throw std::invalid_argument("bad permutation entry '" + std::string(token) + "'");
      }
      word.push_back(static_cast<Symbol>(value));
      start = end + 1;
    }
  }
  return Permutation(spec, std::move(word));
}

Permutation Permutation::canonical(DeckSpec spec) {
  std::vector<Symbol> word;
  word.reserve(static_cast<std::size_t>(spec.length()));
  for (int i = 1; i <= spec.n; ++i) word.insert(word.end(), static_cast<std::size_t>(spec.m), static_cast<Symbol>(i));
  return Permutation(spec, std::move(word), Unchecked{});
}

std::string Permutation::to_string() const {
  std::string out;
  if (spec_.n <= 9) {
    for (Symbol s : word_) out.push_back(static_cast<char>('0' + s));
    return out;
  }
  for (std::size_t i = 0; i < word_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(word_[i]);
  }
  return out;
}

BigInt deck_count(DeckSpec spec) {
  BigInt denom = 1;
  const BigInt mf = factorial(spec.m);
  for (int i = 0; i < spec.n; ++i) denom *= mf;
  return factorial(spec.length()) / denom;
}

PermutationEnumerator::PermutationEnumerator(DeckSpec spec, double cap) : spec_(spec) {
  const BigInt count = deck_count(spec);
  if (count > BigInt(static_cast<std::uint64_t>(cap))) {
    throw CapExceeded("|S_{" + std::to_string(spec.m) + "," + std::to_string(spec.n) +
                          "}| = " + count.str() + " exceeds the enumeration cap",
                      count.convert_to<double>(), cap);
  }
  word_.reserve(static_cast<std::size_t>(spec.length()));
  for (int i = 1; i <= spec.n; ++i) word_.insert(word_.end(), static_cast<std::size_t>(spec.m), static_cast<Symbol>(i));
}

bool PermutationEnumerator::next(std::vector<Symbol>& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
  } else if (!std::next_permutation(word_.begin(), word_.end())) {
    done_ = true;
    return false;
  }
  out = word_;
  return true;
}

bool PermutationEnumerator::next(Permutation& out) {
  std::vector<Symbol> word;
  if (!next(word)) return false;
  out = Permutation(spec_, std::move(word), Permutation::Unchecked{});
  return true;
}

std::vector<Permutation> enumerate(DeckSpec spec, double cap) {
  PermutationEnumerator it(spec, cap);
  std::vector<Permutation> all;
  Permutation p = Permutation::canonical(spec);
  while (it.next(p)) all.push_back(p);
  return all;
}

void sample_into(DeckSpec spec, RngStream& rng, std::vector<Symbol>& word) {
  word.clear();
  for (int i = 1; i <= spec.n; ++i) word.insert(word.end(), static_cast<std::size_t>(spec.m), static_cast<Symbol>(i));
  for (std::size_t i = word.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(word[i - 1], word[j]);
  }
}

Permutation sample(DeckSpec spec, RngStream& rng) {
  std::vector<Symbol> word;
  sample_into(spec, rng, word);
  return Permutation(spec, std::move(word), Permutation::Unchecked{});
}

Permutation project_le_k(const Permutation& p, int k) {
  if (k < 1 || k > p.spec().n) throw std::invalid_argument("project_le_k needs 1 <= k <= n");
  std::vector<Symbol> word;
  word.reserve(static_cast<std::size_t>(p.spec().m * k));
  for (Symbol s : p.word()) {
    if (s <= k) word.push_back(s);
  }
  return Permutation(DeckSpec(p.spec().m, k), std::move(word), Permutation::Unchecked{});
}

int first_index_of_one(const Permutation& p) {
  const auto w = p.word();
  const auto it = std::find(w.begin(), w.end(), Symbol{1});
  return static_cast<int>(it - w.begin()) + 1;
}

}  // namespace cardguess
