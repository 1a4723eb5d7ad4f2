#pragma once

#include <map>
#include <string>
#include <vector>

#include "syntax/ast.hpp"

namespace manipos {

struct CtorInfo {
    std::string name;
    std::string typeName;
    std::vector<std::string> params;  // type parameters of the owning type
    std::vector<TypeExpr> args;
    std::size_t index = 0;            // position within the owning declaration
    bool builtin = false;
};

/// Constructors known to a program: the built-in unit, bool, list and option
/// types followed by the program's own declarations.
class CtorTable {
public:
    CtorTable();
    explicit CtorTable(const std::vector<TypeDecl>& userTypes);

    void add(const TypeDecl& decl, bool builtin = false);

    const CtorInfo* find(const std::string& ctor) const;
    const TypeDecl* type(const std::string& typeName) const;
    /// All constructors of the type owning `ctor`, in declaration order.
    std::vector<const CtorInfo*> siblings(const std::string& ctor) const;
    /// -1 when the constructor is unknown.
    int arity(const std::string& ctor) const;
    std::vector<const CtorInfo*> userCtors() const;
    const std::vector<TypeDecl>& decls() const { return decls_; }

    static const std::vector<TypeDecl>& builtinTypes();

private:
    std::vector<TypeDecl> decls_;
    std::map<std::string, CtorInfo> ctors_;
};

}  // namespace manipos
