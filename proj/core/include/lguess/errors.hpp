#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lguess {

/// Error in s-expression / file-format input. `offset` is the byte offset of
/// the offending token in the input text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid configuration value (e.g. alpha <= 1, rounds == 0).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A preference oracle failed hard: no usable answer after its retries, or a
/// scripted oracle ran out of script.
class OracleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Proof production could not turn an e-graph equivalence into a replayable
/// rule chain (e.g. it would need the reverse of a one-directional rule that
/// has no inverse in the rule set).
class ExplainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lguess
