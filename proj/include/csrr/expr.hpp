#ifndef CSRR_EXPR_HPP
#define CSRR_EXPR_HPP

#include <string>
#include <string_view>

#include "csrr/ratfun.hpp"

namespace csrr {

// Rational-function expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+')* power
//   power  := atom ('^' integer)?        negative exponents on variables only
//   atom   := identifier | integer | '(' expr ')'
// Identifiers are [A-Za-z_][A-Za-z0-9_]* and must be declared in the
// universe.  A Unicode minus sign is accepted and treated as '-'.
RatFun parse_ratfun(std::string_view text, const VarUniversePtr& universe);

} // namespace csrr

#endif
