#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lguess/rules.hpp"
#include "lguess/term.hpp"

namespace lguess {

/// Path of child indices from the root; empty addresses the root itself.
using Position = std::vector<std::uint32_t>;

std::string position_to_string(const Position& pos);
Position position_from_string(std::string_view text);

/// Applies rule r at `pos` in t. Throws std::out_of_range when the position
/// does not address a node and ConfigError when the subterm does not match
/// r.lhs; the two failures are distinguishable by type.
TermPtr apply_rule_at(const TermPtr& t, const Rule& r, const Position& pos);

struct CertStep {
  std::string rule_name;
  Position position;
  TermPtr result;  // the full term after this step
};

/// An ordered, positionally explicit rewrite chain. Steps store full result
/// terms, so verification is independent of whoever produced the chain and
/// failures are localizable.
struct Certificate {
  TermPtr initial;
  std::vector<CertStep> steps;

  const TermPtr& final_term() const {
    return steps.empty() ? initial : steps.back().result;
  }
};

struct ChainVerdict {
  bool ok = true;
  std::size_t failing_step = 0;  // meaningful when !ok
  std::string reason;
};

/// Replays every step of c against `rules`; ok iff each step's rule matches
/// at its position and rewrites the previous term to exactly the recorded
/// result. Pure; failures are verdicts, not errors.
ChainVerdict verify_chain(const Certificate& c, const RuleSet& rules);

/// Text format: header `initial: <sexpr>`, then one line per step
/// `<rule-name> @ <dot-separated path> -> <sexpr>` (empty path for the root).
std::string certificate_to_string(const Certificate& c);
Certificate certificate_from_string(std::string_view text, const Signature& sig);
Certificate certificate_from_file(const std::string& path, const Signature& sig);

}  // namespace lguess
