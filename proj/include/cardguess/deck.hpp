#pragma once

#include "cardguess/numeric.hpp"
#include "cardguess/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cardguess {

inline constexpr double kDefaultEnumerationCap = 2e8;

// A deck of m copies of each of n card types (labels 1..n).
struct DeckSpec {
  int m = 1;
  int n = 1;

  DeckSpec() = default;
  DeckSpec(int copies, int types);

  int length() const { return m * n; }
  bool operator==(const DeckSpec&) const = default;
};

using Symbol = std::uint8_t;

// A deck order: word of length m*n over {1..n}, each symbol exactly m times.
class Permutation {
 public:
  // Validates the multiset condition; throws std::invalid_argument.
  Permutation(DeckSpec spec, std::vector<Symbol> word);

  // Accepts "1212" (n <= 9) or "1,2,1,2".
  static Permutation parse(DeckSpec spec, std::string_view text);
  // Sorted word 1..1 2..2 ... n..n.
  static Permutation canonical(DeckSpec spec);

  const DeckSpec& spec() const { return spec_; }
  std::span<const Symbol> word() const { return word_; }
  std::size_t size() const { return word_.size(); }
  // 1-based position.
  Symbol at(int position) const { return word_[static_cast<std::size_t>(position - 1)]; }

  std::string to_string() const;

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation& other) const { return word_ <=> other.word_; }

 private:
  struct Unchecked {};
  Permutation(DeckSpec spec, std::vector<Symbol> word, Unchecked)
      : spec_(spec), word_(std::move(word)) {}
  friend class PermutationEnumerator;
  friend Permutation sample(DeckSpec spec, RngStream& rng);
  friend Permutation project_le_k(const Permutation& p, int k);

  DeckSpec spec_;
  std::vector<Symbol> word_;
};

// |S_{m,n}| = (mn)! / (m!)^n.
BigInt deck_count(DeckSpec spec);

// Lexicographic stream over S_{m,n}; single consumer.
class PermutationEnumerator {
 public:
  // Throws CapExceeded when deck_count(spec) > cap.
  explicit PermutationEnumerator(DeckSpec spec, double cap = kDefaultEnumerationCap);

  // Fills `out` with the next word; false once exhausted.
  bool next(std::vector<Symbol>& out);
  bool next(Permutation& out);

 private:
  DeckSpec spec_;
  std::vector<Symbol> word_;
  bool started_ = false;
  bool done_ = false;
};

// Collects the whole enumeration; meant for small decks.
std::vector<Permutation> enumerate(DeckSpec spec, double cap = kDefaultEnumerationCap);

// Uniform element of S_{m,n}: Fisher-Yates shuffle of the sorted word.
Permutation sample(DeckSpec spec, RngStream& rng);
// Same shuffle into a caller-owned buffer (hot loops).
void sample_into(DeckSpec spec, RngStream& rng, std::vector<Symbol>& word);

// Subsequence keeping symbols <= k; a member of S_{m,k}.
Permutation project_le_k(const Permutation& p, int k);

// 1-based index of the leftmost "1".
int first_index_of_one(const Permutation& p);

// Throws std::invalid_argument unless every symbol of 1..n occurs m times.
void check_multiset(DeckSpec spec, std::span<const Symbol> word);

}  // namespace cardguess
