#include "lguess/certificate.hpp"

#include <fstream>
#include <sstream>

#include "lguess/errors.hpp"
#include "lguess/sexpr.hpp"

namespace lguess {

std::string position_to_string(const Position& pos) {
  std::string out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(pos[i]);
  }
  return out;
}

Position position_from_string(std::string_view text) {
  Position pos;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && text[j] != '.') ++j;
    std::string part(text.substr(i, j - i));
    if (part.empty()) throw ParseError("empty path component", i);
    for (char c : part)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("path component is not a number: " + part, i);
    pos.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    i = j + 1;
  }
  return pos;
}

TermPtr apply_rule_at(const TermPtr& t, const Rule& r, const Position& pos) {
  TermPtr sub = subterm_at(t, pos);
  if (!sub)
    throw std::out_of_range("apply_rule_at: position " + position_to_string(pos) +
                            " does not address a node");
  auto subst = match_pattern(*r.lhs, sub, r.var_count());
  if (!subst)
    throw ConfigError("apply_rule_at: rule " + r.name + " does not match at " +
                      position_to_string(pos));
  TermPtr replaced = substitute(*r.rhs, t->sig(), *subst);
  return replace_at(t, pos, replaced);
}

ChainVerdict verify_chain(const Certificate& c, const RuleSet& rules) {
  TermPtr cur = c.initial;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const CertStep& step = c.steps[i];
    const Rule* r = rules.find(step.rule_name);
    if (!r)
      return {false, i, "unknown rule '" + step.rule_name + "'"};
    TermPtr sub = subterm_at(cur, step.position);
    if (!sub)
      return {false, i,
              "position " + position_to_string(step.position) + " is invalid"};
    auto subst = match_pattern(*r->lhs, sub, r->var_count());
    if (!subst)
      return {false, i,
              "rule " + step.rule_name + " does not match at " +
                  position_to_string(step.position)};
    TermPtr next = replace_at(cur, step.position, substitute(*r->rhs, cur->sig(), *subst));
    if (!next->equals(*step.result))
      return {false, i,
              "result mismatch: replay gives " + print_sexpr(next) +
                  ", certificate claims " + print_sexpr(*step.result)};
    cur = next;
  }
  return {};
}

std::string certificate_to_string(const Certificate& c) {
  std::ostringstream out;
  out << "initial: " << print_sexpr(*c.initial) << '\n';
  for (const CertStep& s : c.steps)
    out << s.rule_name << " @ " << position_to_string(s.position) << " -> "
        << print_sexpr(*s.result) << '\n';
  return out.str();
}

Certificate certificate_from_string(std::string_view text, const Signature& sig) {
  std::istringstream in{std::string(text)};
  std::string line;
  Certificate cert;
  bool have_initial = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto is_blank = [&] {
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
      return true;
    };
    if (is_blank()) continue;
    if (!have_initial) {
      constexpr std::string_view kHeader = "initial:";
      std::size_t at = line.find(kHeader);
      if (at == std::string::npos)
        throw ParseError("certificate must start with 'initial: <sexpr>'", 0);
      cert.initial = parse_sexpr(line.substr(at + kHeader.size()), sig);
      have_initial = true;
      continue;
    }
    std::size_t at = line.find(" @ ");
    std::size_t arrow = line.find(" -> ");
    if (at == std::string::npos || arrow == std::string::npos || arrow < at)
      throw ParseError("bad certificate step (want '<rule> @ <path> -> <sexpr>'): " + line,
                       0);
    CertStep step;
    step.rule_name = line.substr(0, at);
    std::string path = line.substr(at + 3, arrow - (at + 3));
    while (!path.empty() && std::isspace(static_cast<unsigned char>(path.back())))
      path.pop_back();
    while (!path.empty() && std::isspace(static_cast<unsigned char>(path.front())))
      path.erase(path.begin());
    step.position = path.empty() ? Position{} : position_from_string(path);
    step.result = parse_sexpr(line.substr(arrow + 4), sig);
    cert.steps.push_back(std::move(step));
  }
  if (!have_initial) throw ParseError("empty certificate", 0);
  return cert;
}

Certificate certificate_from_file(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open certificate file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return certificate_from_string(buf.str(), sig);
}

}  // namespace lguess
