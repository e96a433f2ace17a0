#pragma once

#include <string>
#include <string_view>

#include "lguess/term.hpp"

namespace lguess {

/// Parses a parenthesized s-expression over `sig`. Whitespace-insensitive.
/// Throws ParseError (with byte offset) on unknown symbols, arity mismatches
/// and unbalanced parentheses.
TermPtr parse_sexpr(std::string_view text, const Signature& sig);

/// Canonical single-space form; parse_sexpr(print_sexpr(t)) == t.
std::string print_sexpr(const Term& t);
inline std::string print_sexpr(const TermPtr& t) { return print_sexpr(*t); }

}  // namespace lguess
