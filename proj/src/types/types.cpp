#include "types/types.hpp"

#include <functional>
#include <set>
#include <unordered_map>

#include "syntax/print.hpp"

namespace manipos {

Ty TypeStore::fresh(int level) {
    TyNode& n = nodes_.emplace_back();
    n.kind = TyNode::Kind::Var;
    n.level = level;
    n.id = nextVar_++;
    return &n;
}

Ty TypeStore::con(const std::string& name, std::vector<Ty> args) {
    TyNode& n = nodes_.emplace_back();
    n.kind = TyNode::Kind::Con;
    n.name = name;
    n.args = std::move(args);
    return &n;
}

Ty TypeStore::arrow(Ty from, Ty to) {
    TyNode& n = nodes_.emplace_back();
    n.kind = TyNode::Kind::Arrow;
    n.args = {from, to};
    return &n;
}

Ty TypeStore::tuple(std::vector<Ty> parts) {
    TyNode& n = nodes_.emplace_back();
    n.kind = TyNode::Kind::Tuple;
    n.args = std::move(parts);
    return &n;
}

Ty TypeStore::repr(Ty t) {
    while (t->kind == TyNode::Kind::Var && t->link) t = t->link;
    return t;
}

bool TypeStore::occurs(Ty var, Ty t) {
    t = repr(t);
    if (t == var) return true;
    for (Ty a : t->args)
        if (occurs(var, a)) return true;
    return false;
}

bool TypeStore::isGround(Ty t) {
    t = repr(t);
    if (t->kind == TyNode::Kind::Var) return false;
    for (Ty a : t->args)
        if (!isGround(a)) return false;
    return true;
}

void TypeStore::adjustLevels(Ty t, int level) {
    t = repr(t);
    if (t->kind == TyNode::Kind::Var) {
        if (t->level > level) {
            trail_.push_back({t, t->link, t->level});
            t->level = level;
        }
        return;
    }
    for (Ty a : t->args) adjustLevels(a, level);
}

bool TypeStore::unifyVar(Ty var, Ty t) {
    if (occurs(var, t)) return false;
    adjustLevels(t, var->level);
    trail_.push_back({var, var->link, var->level});
    var->link = t;
    return true;
}

bool TypeStore::unify(Ty a, Ty b) {
    a = repr(a);
    b = repr(b);
    if (a == b) return true;
    if (a->kind == TyNode::Kind::Var) return unifyVar(a, b);
    if (b->kind == TyNode::Kind::Var) return unifyVar(b, a);
    if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
    if (a->kind == TyNode::Kind::Con && a->name != b->name) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!unify(a->args[i], b->args[i])) return false;
    return true;
}

void TypeStore::shrink(std::size_t count) {
    while (nodes_.size() > count) nodes_.pop_back();
}

void TypeStore::undo(std::size_t mark) {
    while (trail_.size() > mark) {
        Trail t = trail_.back();
        trail_.pop_back();
        t.node->link = t.link;
        t.node->level = t.level;
    }
}

Scheme TypeStore::generalize(Ty t, int level) const {
    Scheme s{t, {}};
    std::set<Ty> seen;
    std::function<void(Ty)> go = [&](Ty x) {
        x = repr(x);
        if (x->kind == TyNode::Kind::Var) {
            if (x->level > level && seen.insert(x).second) s.vars.push_back(x);
            return;
        }
        for (Ty a : x->args) go(a);
    };
    go(t);
    return s;
}

Ty TypeStore::instantiate(const Scheme& s, int level) {
    if (s.vars.empty()) return s.body;
    std::unordered_map<Ty, Ty> sub;
    for (Ty v : s.vars) sub[v] = fresh(level);
    std::function<Ty(Ty)> copy = [&](Ty x) -> Ty {
        x = repr(x);
        if (x->kind == TyNode::Kind::Var) {
            auto it = sub.find(x);
            return it == sub.end() ? x : it->second;
        }
        if (x->args.empty()) return x;
        std::vector<Ty> args;
        bool changed = false;
        for (Ty a : x->args) {
            Ty c = copy(a);
            changed = changed || c != repr(a);
            args.push_back(c);
        }
        if (!changed) return x;
        TyNode& n = nodes_.emplace_back();
        n.kind = x->kind;
        n.name = x->name;
        n.args = std::move(args);
        return &n;
    };
    return copy(s.body);
}

Ty TypeStore::fromSurface(const TypeExpr& t, std::map<std::string, Ty>& params, int level) {
    switch (t.kind) {
        case TypeExpr::Kind::Var: {
            auto it = params.find(t.name);
            if (it != params.end()) return it->second;
            Ty v = fresh(level);
            params[t.name] = v;
            return v;
        }
        case TypeExpr::Kind::Con: {
            std::vector<Ty> args;
            for (const auto& a : t.args) args.push_back(fromSurface(a, params, level));
            return con(t.name, std::move(args));
        }
        case TypeExpr::Kind::Arrow:
            return arrow(fromSurface(t.args[0], params, level), fromSurface(t.args[1], params, level));
        case TypeExpr::Kind::Tuple: {
            std::vector<Ty> args;
            for (const auto& a : t.args) args.push_back(fromSurface(a, params, level));
            return tuple(std::move(args));
        }
    }
    return fresh(level);
}

TypeExpr TypeStore::toSurface(Ty t) const {
    std::unordered_map<Ty, std::string> names;
    std::function<TypeExpr(Ty)> go = [&](Ty x) {
        x = repr(x);
        TypeExpr out;
        switch (x->kind) {
            case TyNode::Kind::Var: {
                auto it = names.find(x);
                if (it == names.end()) {
                    std::size_t k = names.size();
                    std::string n(1, static_cast<char>('a' + k % 26));
                    if (k >= 26) n += std::to_string(k / 26);
                    it = names.emplace(x, n).first;
                }
                out.kind = TypeExpr::Kind::Var;
                out.name = it->second;
                return out;
            }
            case TyNode::Kind::Con: out.kind = TypeExpr::Kind::Con; out.name = x->name; break;
            case TyNode::Kind::Arrow: out.kind = TypeExpr::Kind::Arrow; break;
            case TyNode::Kind::Tuple: out.kind = TypeExpr::Kind::Tuple; break;
        }
        for (Ty a : x->args) out.args.push_back(go(a));
        return out;
    };
    return go(t);
}

std::string TypeStore::show(Ty t) const { return printTypeExpr(toSurface(t)); }

}  // namespace manipos
