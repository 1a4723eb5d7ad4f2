#pragma once

#include <set>
#include <string>

#include "syntax/ast.hpp"

namespace manipos {

/// Variables referenced by `e` and not bound inside it. A `let` sees its own
/// name only when marked rec.
std::set<std::string> freeVars(const Expr& e);

/// Like freeVars, but a named binding always sees its own name.
std::set<std::string> freeVarsAsRec(const Expr& e);

/// Names bound at top level, in file order.
std::set<std::string> topLevelNames(const Program& p);

}  // namespace manipos
