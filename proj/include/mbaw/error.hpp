#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mbaw {

/// Coarse failure classes. The CLI prints the category name verbatim as the
/// first token of its single-line error report, so the names are stable.
enum class ErrorCategory {
  domain,        // argument outside the mathematical domain (f <= 0, fr >= fa, ...)
  range,         // query outside a sampled/achievable range
  ambiguity,     // more than one valid answer and no hint to pick one
  parse,         // malformed input text
  extraction,    // a figure of merit could not be located in the data
  bracketing,    // extremum sits on the grid edge
  grid,          // frequency grid too coarse or malformed
  precondition,  // input data does not meet an operation's precondition
  feasibility,   // design target beyond what the platform can reach
  degeneracy,    // parameters collapse to a degenerate model
  rank,          // least-squares system is rank deficient
  io,            // file system failure
  usage,         // bad command line
};

constexpr std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::range: return "range";
    case ErrorCategory::ambiguity: return "ambiguity";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::extraction: return "extraction";
    case ErrorCategory::bracketing: return "bracketing";
    case ErrorCategory::grid: return "grid";
    case ErrorCategory::precondition: return "precondition";
    case ErrorCategory::feasibility: return "feasibility";
    case ErrorCategory::degeneracy: return "degeneracy";
    case ErrorCategory::rank: return "rank";
    case ErrorCategory::io: return "io";
    case ErrorCategory::usage: return "usage";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace mbaw
