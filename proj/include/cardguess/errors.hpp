#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cardguess {

// Enumeration would visit more words than the configured cap allows.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, double requested, double cap)
      : std::runtime_error(what), requested_(requested), cap_(cap) {}
  double requested() const { return requested_; }
  double cap() const { return cap_; }

 private:
  double requested_;
  double cap_;
};

// A memo-table or wall-clock budget was exhausted. Carries the partial
// statistics gathered before giving up; never a value.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t states_visited,
                 double elapsed_ms)
      : std::runtime_error(what),
        states_visited_(states_visited),
        elapsed_ms_(elapsed_ms) {}
  std::uint64_t states_visited() const { return states_visited_; }
  double elapsed_ms() const { return elapsed_ms_; }

 private:
  std::uint64_t states_visited_;
  double elapsed_ms_;
};

class MissingOracle : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IncompatibleModel : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class EmptyFuture : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InconsistentFeedback : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace cardguess
