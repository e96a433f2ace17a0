#include "lguess/signature.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lguess/errors.hpp"

namespace lguess {

namespace {

bool valid_symbol_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == '(' || c == ')' || c == '#' ||
        static_cast<unsigned char>(c) <= ' ')
      return false;
  }
  return true;
}

}  // namespace

Symbol Signature::add(std::string name, unsigned arity, Kind kind) {
  if (!valid_symbol_name(name))
    throw ConfigError("invalid symbol name: '" + name + "'");
  if (by_name_.count(name))
    throw ConfigError("duplicate symbol name: '" + name + "'");
  Symbol s = static_cast<Symbol>(entries_.size());
  by_name_.emplace(name, s);
  entries_.push_back(Entry{std::move(name), arity, kind});
  return s;
}

Symbol Signature::add_operator(std::string name, unsigned arity) {
  return add(std::move(name), arity, Kind::Operator);
}

Symbol Signature::add_variable(std::string name) {
  return add(std::move(name), 0, Kind::Variable);
}

Symbol Signature::add_constant(std::string name) {
  return add(std::move(name), 0, Kind::Constant);
}

std::optional<Symbol> Signature::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t Signature::context_count() const {
  std::size_t n = 1;
  for (const Entry& e : entries_) n += e.arity;
  return n;
}

bool Signature::operator==(const Signature& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& a = entries_[i];
    const Entry& b = other.entries_[i];
    if (a.name != b.name || a.arity != b.arity || a.kind != b.kind) return false;
  }
  return true;
}

Signature Signature::from_string(std::string_view text) {
  Signature sig;
  enum class Section { None, Ops, Vars, Consts };
  Section section = Section::None;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "[ops]") { section = Section::Ops; continue; }
    if (tok == "[vars]") { section = Section::Vars; continue; }
    if (tok == "[consts]") { section = Section::Consts; continue; }
    switch (section) {
      case Section::Ops: {
        unsigned arity = 0;
        if (!(ls >> arity))
          throw ParseError("operator line must be 'name arity'", line_offset);
        sig.add_operator(tok, arity);
        break;
      }
      case Section::Vars:
        sig.add_variable(tok);
        break;
      case Section::Consts:
        sig.add_constant(tok);
        break;
      case Section::None:
        throw ParseError("symbol before any [ops]/[vars]/[consts] section",
                         line_offset);
    }
    std::string extra;
    if (ls >> extra)
      throw ParseError("trailing tokens on signature line", line_offset);
  }
  return sig;
}

Signature Signature::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open signature file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

std::string Signature::to_string() const {
  std::ostringstream out;
  out << "[ops]\n";
  for (const Entry& e : entries_)
    if (e.kind == Kind::Operator) out << e.name << ' ' << e.arity << '\n';
  out << "[vars]\n";
  for (const Entry& e : entries_)
    if (e.kind == Kind::Variable) out << e.name << '\n';
  out << "[consts]\n";
  for (const Entry& e : entries_)
    if (e.kind == Kind::Constant) out << e.name << '\n';
  return out.str();
}

Signature ring_char2_signature() {
  Signature sig;
  sig.add_operator("sqr", 1);
  sig.add_operator("*", 2);
  sig.add_operator("+", 2);
  sig.add_variable("x");
  sig.add_variable("y");
  sig.add_constant("0");
  return sig;
}

Signature poly_signature(unsigned n_v) {
  static const char* kVars[] = {"x", "y", "z", "w", "v"};
  if (n_v == 0 || n_v > 5)
    throw ConfigError("poly_signature supports 1..5 variables");
  Signature sig;
  sig.add_operator("+", 2);
  sig.add_operator("*", 2);
  for (unsigned i = 0; i < n_v; ++i) sig.add_variable(kVars[i]);
  return sig;
}

}  // namespace lguess
