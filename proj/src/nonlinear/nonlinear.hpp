#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"

namespace manipos {

struct DuplicateName : std::runtime_error {
    std::string name;
    explicit DuplicateName(const std::string& n);
};

struct NotAnAdt : std::runtime_error {
    explicit NotAnAdt(const std::string& type);
};

/// Moves bindings of each indentation scope so every name is bound before use,
/// and marks self-referencing bindings rec. Mutually dependent bindings stay put.
Program reorder(Program p);

/// Binds every remaining free variable in the tightest scope containing its uses:
/// `let v x1 .. xn = (??)` when applied to n arguments, `let v = (??)` otherwise.
Program insertMissingBindings(Program p);

/// Reuses, floats and completes the case splits of function bodies.
Program normalizeCaseSplits(Program p);

/// reorder, normalizeCaseSplits, reorder, insertMissingBindings.
Program normalizeProgram(Program p);

/// Wraps the return of the function bound at `function` in a match on `scrutinee`
/// with one hole-bodied branch per constructor of `typeName`.
Program destruct(Program p, NodeId function, const std::string& scrutinee, const std::string& typeName);

struct PathStep {
    std::string ctor;
    std::size_t arg = 0;
};

/// Nested match selecting the subvalue at `path` of `scrutinee`; the bare
/// variable for an empty path.
Expr extractionExpr(const std::vector<PathStep>& path, const std::string& scrutinee, const CtorTable& ctors,
                    const std::set<std::string>& taken);

// Naming.

/// `stem` when free, otherwise stem2, stem3, ...
std::string freshName(const std::string& stem, const std::set<std::string>& taken);

/// A constructor pattern with generated argument names: hd/tail for lists,
/// `<type initial><n>` otherwise. New names are added to `taken`.
Pattern branchPattern(const CtorInfo& ctor, std::set<std::string>& taken);

/// Name suggested by an expression: `int_list` for `[0; 0]`, `length_int` for
/// `length int_list`, the variable itself for a variable.
std::string suggestName(const Expr& e, const CtorTable& ctors);

/// Every name bound anywhere in the program, including the top level.
std::set<std::string> allBoundNames(const Program& p);
std::set<std::string> boundNamesIn(const Expr& e);

/// Replaces free occurrences of `from` in `e` by `to`.
void renameVar(Expr& e, const std::string& from, const std::string& to);

}  // namespace manipos
