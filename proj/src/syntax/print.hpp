#pragma once

#include <string>

#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"

namespace manipos {

/// Canonical file text: 2-space indentation, one top item per paragraph,
/// match arms one per line. Ends with a newline unless the program is empty.
std::string printProgram(const Program& p);

/// Single-line rendering. `ctors` only affects how one-argument constructors
/// applied to a tuple are written; without it the unambiguous `C ((a, b))` is used.
std::string printExpr(const Expr& e, const CtorTable* ctors = nullptr);
std::string printPattern(const Pattern& p, const CtorTable* ctors = nullptr);
std::string printLiteral(const Literal& l);
std::string printTypeExpr(const TypeExpr& t);
std::string printTypeDecl(const TypeDecl& d);
std::string printAttrs(const Attrs& a, bool binding);

/// `let [rec] pat params` for a binding, as shown on a tangible value.
std::string printBindingHead(bool rec, const Pattern& lhs, const Expr& rhs);

/// Short content hash of an expression, 16 lowercase hex digits.
/// Attributes are ignored so that a marked hole hashes like its bare fill.
std::string notHash(const Expr& e);

Expr stripAttrs(Expr e);

/// Replaces the `[@@pos]` of the binding `binding` (a top item or a `let ... in`).
/// Throws UnknownNode when the id names anything else.
void setPos(Program& p, NodeId binding, int x, int y);

}  // namespace manipos
