#include "lguess/oracle.hpp"

#include <algorithm>
#include <cctype>

#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"
#include "lguess/tasks.hpp"

namespace lguess {

std::string to_string(Choice c) {
  return c == Choice::Current ? "current" : "candidate";
}

namespace {

class ScriptedOracle final : public Oracle {
 public:
  explicit ScriptedOracle(std::vector<Choice> script) : script_(std::move(script)) {}

  Preference compare(const GoalContext&, const TermPtr&, const TermPtr&) override {
    if (next_ >= script_.size())
      throw OracleError("scripted oracle: script exhausted after " +
                        std::to_string(script_.size()) + " queries");
    Choice c = script_[next_++];
    return Preference{c, "scripted: " + to_string(c), 1};
  }

 private:
  std::vector<Choice> script_;
  std::size_t next_ = 0;
};

class SmallerSizeOracle final : public Oracle {
 public:
  Preference compare(const GoalContext&, const TermPtr& current,
                     const TermPtr& candidate) override {
    Choice c = candidate->size() < current->size() ? Choice::Candidate : Choice::Current;
    return Preference{c, "heuristic smaller-size", 1};
  }
};

class FactorProgressOracle final : public Oracle {
 public:
  Preference compare(const GoalContext&, const TermPtr& current,
                     const TermPtr& candidate) override {
    auto score = [](const Term& t) {
      return std::make_pair(unfactored_sum_count(t), t.size());
    };
    Choice c = score(*candidate) < score(*current) ? Choice::Candidate : Choice::Current;
    return Preference{c, "heuristic factor-progress", 1};
  }
};

}  // namespace

std::unique_ptr<Oracle> scripted_oracle(std::vector<Choice> script) {
  return std::make_unique<ScriptedOracle>(std::move(script));
}

std::unique_ptr<Oracle> heuristic_oracle(const std::string& kind) {
  if (kind == "smaller-size") return std::make_unique<SmallerSizeOracle>();
  if (kind == "factor-progress") return std::make_unique<FactorProgressOracle>();
  throw ConfigError("unknown heuristic oracle: " + kind);
}

std::string render_compare_prompt(const GoalContext& ctx, const TermPtr& current,
                                  const TermPtr& candidate) {
  if (ctx.task_description.empty())
    throw ConfigError("goal context: task description must be non-empty");
  std::string out;
  out += "I am " + ctx.task_description + "\n";
  out +=
      "Please compare the following two intermediate results, and decide "
      "which makes more progress toward simplification.\n";
  out += "(a) " + print_sexpr(current) + "\n";
  out += "(b) " + print_sexpr(candidate) + "\n";
  out += "Conclude your output with **the answer is (a)/(b)**.";
  return out;
}

std::optional<Choice> parse_answer_marker(const std::string& response) {
  std::string low(response);
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  constexpr std::string_view kMarker = "the answer is";
  std::size_t at = low.rfind(kMarker);
  std::optional<Choice> result;
  while (at != std::string::npos) {
    std::size_t i = at + kMarker.size();
    while (i < low.size() &&
           (low[i] == ' ' || low[i] == '*' || low[i] == '(' || low[i] == ':'))
      ++i;
    if (i < low.size() && (low[i] == 'a' || low[i] == 'b')) {
      result = low[i] == 'a' ? Choice::Current : Choice::Candidate;
      break;
    }
    if (at == 0) break;
    at = low.rfind(kMarker, at - 1);
  }
  return result;
}

ChatOracle::ChatOracle(std::shared_ptr<ChatClient> client, unsigned retries)
    : client_(std::move(client)), retries_(retries) {}

Preference ChatOracle::compare(const GoalContext& ctx, const TermPtr& current,
                               const TermPtr& candidate) {
  std::vector<ChatMessage> messages;
  messages.push_back({"user", render_compare_prompt(ctx, current, candidate)});
  std::string last_response;
  for (unsigned attempt = 1; attempt <= retries_ + 1; ++attempt) {
    last_response = client_->complete(messages);
    if (auto choice = parse_answer_marker(last_response))
      return Preference{*choice, last_response, attempt};
    messages.push_back({"assistant", last_response});
    messages.push_back(
        {"user",
         "Your previous answer had no conclusion. Conclude your output with "
         "**the answer is (a)** or **the answer is (b)**."});
  }
  throw OracleError("chat oracle: no parsable answer after " +
                    std::to_string(retries_ + 1) + " attempts; last response: " +
                    last_response.substr(0, 200));
}

}  // namespace lguess
