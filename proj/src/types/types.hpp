#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "syntax/ast.hpp"

namespace manipos {

struct TyNode {
    enum class Kind : std::uint8_t { Var, Con, Arrow, Tuple };
    Kind kind = Kind::Var;
    int level = 0;             // Var only
    std::uint32_t id = 0;      // Var only, for printing
    TyNode* link = nullptr;    // Var only, set once unified
    std::string name;          // Con
    std::vector<TyNode*> args; // Con params, Arrow [from, to], Tuple components
};

using Ty = TyNode*;

/// A type with its quantified variables.
struct Scheme {
    Ty body = nullptr;
    std::vector<Ty> vars;
};

/// Arena of types plus a union-find unifier whose bindings can be rolled back.
class TypeStore {
public:
    TypeStore() = default;
    TypeStore(const TypeStore&) = delete;
    TypeStore& operator=(const TypeStore&) = delete;

    Ty fresh(int level);
    Ty con(const std::string& name, std::vector<Ty> args = {});
    Ty arrow(Ty from, Ty to);
    Ty tuple(std::vector<Ty> parts);
    Ty intTy() { return con("int"); }
    Ty floatTy() { return con("float"); }
    Ty stringTy() { return con("string"); }
    Ty charTy() { return con("char"); }
    Ty boolTy() { return con("bool"); }
    Ty unitTy() { return con("unit"); }
    Ty listOf(Ty t) { return con("list", {t}); }

    static Ty repr(Ty t);

    /// On failure the partial bindings stay recorded; roll back with undo(mark()).
    bool unify(Ty a, Ty b);
    std::size_t mark() const { return trail_.size(); }
    void undo(std::size_t mark);
    std::size_t nodeCount() const { return nodes_.size(); }
    /// Frees the nodes allocated after `count`. Only valid once every
    /// unification that could reference them has been undone.
    void shrink(std::size_t count);

    Scheme generalize(Ty t, int level) const;
    static Scheme mono(Ty t) { return Scheme{t, {}}; }
    Ty instantiate(const Scheme& s, int level);

    /// Builds a type from a surface type; unknown variables are added to `params` fresh.
    Ty fromSurface(const TypeExpr& t, std::map<std::string, Ty>& params, int level);
    TypeExpr toSurface(Ty t) const;
    std::string show(Ty t) const;

    static bool occurs(Ty var, Ty t);
    static bool isGround(Ty t);

private:
    struct Trail {
        TyNode* node;
        TyNode* link;
        int level;
    };
    std::deque<TyNode> nodes_;
    std::vector<Trail> trail_;
    std::uint32_t nextVar_ = 0;

    bool unifyVar(Ty var, Ty t);
    void adjustLevels(Ty t, int level);
};

}  // namespace manipos
