#include "syntax/ctors.hpp"

namespace manipos {

namespace {

TypeExpr tvar(std::string n) {
    TypeExpr t;
    t.kind = TypeExpr::Kind::Var;
    t.name = std::move(n);
    return t;
}

TypeExpr tcon(std::string n, std::vector<TypeExpr> args = {}) {
    TypeExpr t;
    t.kind = TypeExpr::Kind::Con;
    t.name = std::move(n);
    t.args = std::move(args);
    return t;
}

}  // namespace

const std::vector<TypeDecl>& CtorTable::builtinTypes() {
    static const std::vector<TypeDecl> types = [] {
        std::vector<TypeDecl> out;
        out.push_back(TypeDecl{"unit", {}, {CtorDecl{"()", {}}}});
        out.push_back(TypeDecl{"bool", {}, {CtorDecl{"false", {}}, CtorDecl{"true", {}}}});
        out.push_back(TypeDecl{"list", {"a"},
                               {CtorDecl{"[]", {}},
                                CtorDecl{"::", {tvar("a"), tcon("list", {tvar("a")})}}}});
        out.push_back(TypeDecl{"option", {"a"}, {CtorDecl{"None", {}}, CtorDecl{"Some", {tvar("a")}}}});
        return out;
    }();
    return types;
}

CtorTable::CtorTable() {
    for (const auto& d : builtinTypes()) add(d, true);
}

CtorTable::CtorTable(const std::vector<TypeDecl>& userTypes) : CtorTable() {
    for (const auto& d : userTypes) add(d);
}

void CtorTable::add(const TypeDecl& decl, bool builtin) {
    decls_.push_back(decl);
    for (std::size_t i = 0; i < decl.ctors.size(); ++i) {
        CtorInfo info;
        info.name = decl.ctors[i].name;
        info.typeName = decl.name;
        info.params = decl.params;
        info.args = decl.ctors[i].args;
        info.index = i;
        info.builtin = builtin;
        ctors_[info.name] = std::move(info);
    }
}

const CtorInfo* CtorTable::find(const std::string& ctor) const {
    auto it = ctors_.find(ctor);
    return it == ctors_.end() ? nullptr : &it->second;
}

const TypeDecl* CtorTable::type(const std::string& typeName) const {
    // Later declarations shadow earlier ones.
    for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
        if (it->name == typeName) return &*it;
    return nullptr;
}

std::vector<const CtorInfo*> CtorTable::siblings(const std::string& ctor) const {
    std::vector<const CtorInfo*> out;
    const CtorInfo* info = find(ctor);
    if (!info) return out;
    const TypeDecl* decl = type(info->typeName);
    if (!decl) return out;
    for (const auto& c : decl->ctors)
        if (const CtorInfo* ci = find(c.name)) out.push_back(ci);
    return out;
}

int CtorTable::arity(const std::string& ctor) const {
    const CtorInfo* info = find(ctor);
    return info ? static_cast<int>(info->args.size()) : -1;
}

std::vector<const CtorInfo*> CtorTable::userCtors() const {
    std::vector<const CtorInfo*> out;
    for (const auto& d : decls_) {
        for (const auto& c : d.ctors) {
            const CtorInfo* ci = find(c.name);
            if (ci && !ci->builtin && ci->typeName == d.name) out.push_back(ci);
        }
    }
    return out;
}

}  // namespace manipos
