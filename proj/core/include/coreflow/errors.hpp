#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace coreflow {

// Malformed input text (fraction literals, graph files, instance JSON).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An instance violated its own invariants. Carries the violation list the
// validators produced, one message per offending field.
struct ValidationError : std::runtime_error {
  explicit ValidationError(std::vector<std::string> violations_)
      : std::runtime_error(join(violations_)), violations(std::move(violations_)) {}

  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& vs) {
    std::string out = "instance invalid";
    for (const auto& v : vs) {
      out += "; ";
      out += v;
    }
    return out;
  }
};

// An operation refused to run because an explicit size guard was exceeded.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver self-check failed. Never expected on any input; indicates a bug.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace coreflow
