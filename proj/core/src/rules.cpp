#include "lguess/rules.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "lguess/errors.hpp"

namespace lguess {

RuleSet::RuleSet(std::string name, Signature sig)
    : name_(std::move(name)), sig_(std::move(sig)) {}

void RuleSet::check_rule(const Rule& r) const {
  for (const Rule& existing : rules_)
    if (existing.name == r.name)
      throw ConfigError("duplicate rule name: " + r.name);
  auto lhs_vars = r.lhs->vars();
  for (PatternVar v : r.rhs->vars()) {
    bool found = false;
    for (PatternVar u : lhs_vars) found |= (u == v);
    if (!found)
      throw ConfigError("rule " + r.name + ": rhs variable '" + r.var_names[v] +
                        "' does not occur on the lhs");
  }
}

void RuleSet::add(const std::string& rule_name, std::string_view lhs,
                  std::string_view rhs) {
  Rule r;
  r.name = rule_name;
  r.lhs = parse_pattern(lhs, sig_, r.var_names);
  r.rhs = parse_pattern(rhs, sig_, r.var_names);
  check_rule(r);
  rules_.push_back(std::move(r));
  inverses_.clear();
}

void RuleSet::add_bidirectional(const std::string& base, std::string_view lhs,
                                std::string_view rhs) {
  add(base + "-fwd", lhs, rhs);
  add(base + "-rev", rhs, lhs);
}

const Rule* RuleSet::find(std::string_view rule_name) const {
  for (const Rule& r : rules_)
    if (r.name == rule_name) return &r;
  return nullptr;
}

std::size_t RuleSet::index_of(std::string_view rule_name) const {
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].name == rule_name) return i;
  throw ConfigError("unknown rule: " + std::string(rule_name));
}

namespace {

// Canonical key for a pattern pair under variable renaming: variables are
// numbered by first occurrence in (lhs, rhs) preorder.
void key_rec(const Pattern& p, std::map<PatternVar, unsigned>& renum,
             std::string& out) {
  if (p.is_var()) {
    auto [it, inserted] = renum.emplace(p.var_id(), renum.size());
    out += 'v';
    out += std::to_string(it->second);
    out += ' ';
    return;
  }
  out += '(';
  out += std::to_string(p.op_symbol());
  out += ' ';
  for (const PatternPtr& c : p.children()) key_rec(*c, renum, out);
  out += ')';
}

std::string pair_key(const Pattern& lhs, const Pattern& rhs) {
  std::map<PatternVar, unsigned> renum;
  std::string out;
  key_rec(lhs, renum, out);
  out += "=>";
  key_rec(rhs, renum, out);
  return out;
}

}  // namespace

void RuleSet::compute_inverses() const {
  inverses_.assign(rules_.size(), std::nullopt);
  std::vector<std::string> fwd_keys, rev_keys;
  fwd_keys.reserve(rules_.size());
  rev_keys.reserve(rules_.size());
  for (const Rule& r : rules_) {
    fwd_keys.push_back(pair_key(*r.lhs, *r.rhs));
    rev_keys.push_back(pair_key(*r.rhs, *r.lhs));
  }
  for (std::size_t i = 0; i < rules_.size(); ++i)
    for (std::size_t j = 0; j < rules_.size(); ++j)
      if (rev_keys[i] == fwd_keys[j]) {
        inverses_[i] = j;
        break;
      }
}

std::optional<std::size_t> RuleSet::inverse_of(std::size_t i) const {
  if (inverses_.size() != rules_.size()) compute_inverses();
  return inverses_[i];
}

RuleSet ring_char2_rules() {
  RuleSet rs("ring-char2", ring_char2_signature());
  rs.add_bidirectional("Sqr", "(sqr a)", "(* a a)");
  rs.add_bidirectional("Add-C", "(+ a b)", "(+ b a)");
  rs.add_bidirectional("Times-C", "(* a b)", "(* b a)");
  rs.add_bidirectional("Add-A", "(+ a (+ b c))", "(+ (+ a b) c)");
  rs.add("Distr", "(* (+ a b) c)", "(+ (* a c) (* b c))");
  rs.add("Char-2", "(+ a a)", "0");
  rs.add("Add-0", "(+ a 0)", "a");
  return rs;
}

RuleSet poly_ac_rules(const Signature& sig) {
  RuleSet rs("poly-ac", sig);
  rs.add_bidirectional("Add-C", "(+ a b)", "(+ b a)");
  rs.add_bidirectional("Add-A", "(+ a (+ b c))", "(+ (+ a b) c)");
  rs.add_bidirectional("Times-C", "(* a b)", "(* b a)");
  rs.add_bidirectional("Times-A", "(* a (* b c))", "(* (* a b) c)");
  rs.add("Distr", "(* (+ a b) c)", "(+ (* a c) (* b c))");
  rs.add("Factor", "(+ (* a c) (* b c))", "(* (+ a b) c)");
  return rs;
}

RuleSet poly_ac_rules() { return poly_ac_rules(poly_signature(5)); }

std::optional<RuleSet> builtin_ruleset(std::string_view name) {
  if (name == "ring-char2") return ring_char2_rules();
  if (name == "poly-ac") return poly_ac_rules();
  return std::nullopt;
}

std::vector<std::string> builtin_ruleset_names() {
  return {"ring-char2", "poly-ac"};
}

RuleSet RuleSet::from_string(std::string_view text, const std::string& set_name,
                             const Signature* sig) {
  // Split off the [rules] section; everything before it is signature input.
  std::string str(text);
  std::size_t rules_pos = str.find("[rules]");
  Signature s;
  std::string body;
  if (rules_pos == std::string::npos) {
    if (!sig) throw ConfigError("rule file has no [rules] section and no signature given");
    s = *sig;
    body = str;
  } else {
    std::string head = str.substr(0, rules_pos);
    body = str.substr(rules_pos + 7);
    if (sig)
      s = *sig;
    else
      s = Signature::from_string(head);
  }
  RuleSet rs(set_name, std::move(s));
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto is_blank = [](const std::string& l) {
      for (char c : l)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
      return true;
    };
    if (is_blank(line)) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ConfigError("rule line missing ':': " + line);
    std::string rule_name = line.substr(0, colon);
    while (!rule_name.empty() && std::isspace(static_cast<unsigned char>(rule_name.back())))
      rule_name.pop_back();
    std::string rest = line.substr(colon + 1);
    bool bidir = true;
    std::size_t arrow = rest.find("<=>");
    std::size_t arrow_len = 3;
    if (arrow == std::string::npos) {
      bidir = false;
      arrow = rest.find("=>");
      arrow_len = 2;
    }
    if (arrow == std::string::npos)
      throw ConfigError("rule line missing '=>' or '<=>': " + line);
    std::string lhs = rest.substr(0, arrow);
    std::string rhs = rest.substr(arrow + arrow_len);
    if (bidir)
      rs.add_bidirectional(rule_name, lhs, rhs);
    else
      rs.add(rule_name, lhs, rhs);
  }
  return rs;
}

RuleSet RuleSet::from_file(const std::string& path, const Signature* sig) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string set_name = path;
  if (auto slash = set_name.find_last_of('/'); slash != std::string::npos)
    set_name = set_name.substr(slash + 1);
  return from_string(buf.str(), set_name, sig);
}

std::string RuleSet::to_string() const {
  std::ostringstream out;
  out << sig_.to_string() << "[rules]\n";
  for (const Rule& r : rules_)
    out << r.name << ": " << print_pattern(*r.lhs, sig_, r.var_names) << " => "
        << print_pattern(*r.rhs, sig_, r.var_names) << '\n';
  return out.str();
}

}  // namespace lguess
