#pragma once

#include <string>
#include <string_view>

#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"

namespace manipos {

/// Parses a whole `.mml` file. Node ids are assigned in pre-order.
/// Throws ParseError for anything outside the supported subset, comments included.
Program parseProgram(std::string_view text);

/// Parses a standalone expression (used for code typed into the canvas).
/// Node ids are left unassigned; callers mint them into their program.
Expr parseExpr(std::string_view text, const CtorTable& ctors);

/// Parses a standalone pattern, e.g. a renamed parameter.
Pattern parsePattern(std::string_view text, const CtorTable& ctors);

/// Parses a type such as `'a list -> int`.
TypeExpr parseTypeExpr(std::string_view text);

/// Precedence of an infix operator, higher binds tighter; -1 when `op` is not infix.
int infixLevel(std::string_view op);
bool infixRightAssoc(int level);

/// Whether `s` is a valid lowercase identifier that is not a keyword.
bool isValidIdent(std::string_view s);

}  // namespace manipos
