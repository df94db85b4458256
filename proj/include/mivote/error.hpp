#pragma once

#include <stdexcept>
#include <string>

namespace mivote {

// Invalid index, size, or radius supplied to a domain operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation is defined only for a restricted class of inputs (e.g. binary issues).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A scheduled step could not be executed; carries the round it failed at.
class SchedulerError : public std::runtime_error {
 public:
  SchedulerError(long round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
  long round() const noexcept { return round_; }

 private:
  long round_;
};

// Malformed input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mivote
