#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lguess/term.hpp"

namespace lguess {

/// What the task is about, for rendering oracle prompts.
struct GoalContext {
  std::string task_description;  // e.g. "simplifying the s-expression ... "
  TermPtr initial_term;
};

enum class Choice : std::uint8_t { Current, Candidate };

std::string to_string(Choice c);

struct Preference {
  Choice choice;
  std::string raw_response;
  unsigned attempts = 1;
};

/// Pairwise preference oracle. compare() is total: it returns a definite
/// Preference or throws OracleError after exhausting its own retries.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Preference compare(const GoalContext& ctx, const TermPtr& current,
                             const TermPtr& candidate) = 0;
};

/// Replays a fixed list of choices in order; running past the end throws
/// OracleError.
std::unique_ptr<Oracle> scripted_oracle(std::vector<Choice> script);

/// Deterministic offline oracles:
///  - "smaller-size": prefer the term with fewer nodes, ties -> current.
///  - "factor-progress": prefer the lexicographically smaller score
///    (number of +-nodes having a *-descendant, term size), ties -> current.
/// Unknown kinds throw ConfigError.
std::unique_ptr<Oracle> heuristic_oracle(const std::string& kind);

/// The comparison prompt, byte-stable for fixed inputs:
///
///   I am <task_description>
///   Please compare the following two intermediate results, and decide which
///   makes more progress toward simplification.
///   (a) <current>
///   (b) <candidate>
///   Conclude your output with **the answer is (a)/(b)**.
std::string render_compare_prompt(const GoalContext& ctx, const TermPtr& current,
                                  const TermPtr& candidate);

/// Finds the LAST occurrence of "the answer is (a)"/"(b)" (case-insensitive,
/// tolerating '*' emphasis and missing parentheses) and maps (a) -> Current,
/// (b) -> Candidate.
std::optional<Choice> parse_answer_marker(const std::string& response);

struct ChatMessage {
  std::string role;  // "user" or "assistant"
  std::string content;
};

/// Minimal chat-completion client interface; see chat_client.hpp for the
/// HTTP-backed implementation.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

/// Preference oracle backed by a chat model. On an unparsable response it
/// retries with an appended clarification up to `retries` times, then throws
/// OracleError.
class ChatOracle : public Oracle {
 public:
  explicit ChatOracle(std::shared_ptr<ChatClient> client, unsigned retries = 2);
  Preference compare(const GoalContext& ctx, const TermPtr& current,
                     const TermPtr& candidate) override;

 private:
  std::shared_ptr<ChatClient> client_;
  unsigned retries_;
};

}  // namespace lguess
