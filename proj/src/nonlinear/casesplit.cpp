#include "nonlinear/nonlinear.hpp"

#include <algorithm>
#include <map>

#include "syntax/scope.hpp"

namespace manipos {

namespace {

bool isVarMatch(const Expr& e) {
    return e.kind == ExprKind::Match && e.kids[0].kind == ExprKind::Var && e.kids[0].attrs.empty() && !e.pats.empty();
}

bool isChainLet(const Expr& e) { return e.kind == ExprKind::Let && e.attrs.empty(); }

void splitChain(Expr e, std::vector<Expr>& lets, Expr& tail) {
    while (isChainLet(e)) {
        Expr next = std::move(e.kids[1]);
        e.kids.resize(1);
        lets.push_back(std::move(e));
        e = std::move(next);
    }
    tail = std::move(e);
}

Expr joinChain(std::vector<Expr> lets, Expr tail) {
    for (std::size_t k = lets.size(); k-- > 0;) {
        lets[k].kids.push_back(std::move(tail));
        tail = std::move(lets[k]);
    }
    return tail;
}

bool definesAny(const Expr& let, const std::set<std::string>& names) {
    for (auto& n : let.pats[0].boundNames())
        if (names.count(n)) return true;
    return false;
}

// Step 1: bindings above a case split are copied into each of its branches.
void pushDown(Expr& body) {
    std::vector<Expr> lets;
    Expr tail;
    splitChain(std::move(body), lets, tail);
    if (isVarMatch(tail)) {
        std::set<std::string> needed{tail.kids[0].name};
        std::vector<bool> keep(lets.size(), false);
        for (std::size_t k = lets.size(); k-- > 0;) {
            if (!definesAny(lets[k], needed)) continue;
            keep[k] = true;
            for (auto& n : freeVars(lets[k].kids[0])) needed.insert(n);
        }
        std::vector<Expr> kept, pushed;
        for (std::size_t k = 0; k < lets.size(); ++k) (keep[k] ? kept : pushed).push_back(std::move(lets[k]));
        for (std::size_t i = 1; i < tail.kids.size(); ++i) {
            if (!pushed.empty()) tail.kids[i] = joinChain(pushed, std::move(tail.kids[i]));
            pushDown(tail.kids[i]);
        }
        lets = std::move(kept);
    }
    body = joinChain(std::move(lets), std::move(tail));
}

bool canRename(const Pattern& inner, const Pattern& outer) {
    switch (inner.kind) {
        case PatKind::Wild: return true;
        case PatKind::Var: return outer.kind == PatKind::Var || outer.kind == PatKind::Wild;
        case PatKind::Tuple:
        case PatKind::Ctor:
            if (outer.kind != inner.kind || outer.name != inner.name || outer.args.size() != inner.args.size()) return false;
            for (std::size_t i = 0; i < inner.args.size(); ++i)
                if (!canRename(inner.args[i], outer.args[i])) return false;
            return true;
    }
    return false;
}

void applyRename(const Pattern& inner, Pattern& outer, Expr& body) {
    switch (inner.kind) {
        case PatKind::Wild: return;
        case PatKind::Var:
            if (outer.kind == PatKind::Wild) {
                outer.kind = PatKind::Var;
                outer.name = inner.name;
            } else if (outer.name != inner.name) {
                renameVar(body, inner.name, outer.name);
            }
            return;
        default:
            for (std::size_t i = 0; i < inner.args.size(); ++i) applyRename(inner.args[i], outer.args[i], body);
    }
}

using SplitCtx = std::map<std::string, Pattern*>;

SplitCtx without(const SplitCtx& ctx, const Pattern& p) {
    SplitCtx out = ctx;
    for (auto& n : p.boundNames()) out.erase(n);
    return out;
}

// Step 2: a match on a variable already split by an enclosing branch is reduced to
// that branch's case, or emptied when the enclosing branch excludes every case.
void simplify(Expr& e, const SplitCtx& ctx) {
    switch (e.kind) {
        case ExprKind::Match: {
            simplify(e.kids[0], ctx);
            bool onVar = e.kids[0].kind == ExprKind::Var;
            if (onVar && !e.pats.empty()) {
                auto it = ctx.find(e.kids[0].name);
                if (it != ctx.end()) {
                    Pattern& outer = *it->second;
                    for (std::size_t i = 0; i < e.pats.size(); ++i) {
                        const Pattern& p = e.pats[i];
                        bool hit = p.kind == PatKind::Wild || p.kind == PatKind::Var ||
                                   (p.kind == PatKind::Ctor && p.name == outer.name);
                        if (!hit) continue;
                        if (p.kind == PatKind::Var) {
                            Expr body = std::move(e.kids[i + 1]);
                            renameVar(body, p.name, e.kids[0].name);
                            e = std::move(body);
                            simplify(e, ctx);
                            return;
                        }
                        if (p.kind == PatKind::Wild || canRename(p, outer)) {
                            Pattern inner = p;
                            Expr body = std::move(e.kids[i + 1]);
                            applyRename(inner, outer, body);
                            e = std::move(body);
                            simplify(e, ctx);
                            return;
                        }
                        break;
                    }
                    bool anyHit = false;
                    for (const auto& p : e.pats)
                        anyHit = anyHit || p.kind != PatKind::Ctor || p.name == outer.name;
                    if (!anyHit) {
                        e.pats.clear();
                        e.kids.resize(1);
                        return;
                    }
                }
            }
            for (std::size_t i = 0; i < e.pats.size(); ++i) {
                SplitCtx inner = without(ctx, e.pats[i]);
                if (onVar && e.pats[i].kind == PatKind::Ctor) inner[e.kids[0].name] = &e.pats[i];
                simplify(e.kids[i + 1], inner);
            }
            return;
        }
        case ExprKind::Fun:
            simplify(e.kids[0], without(ctx, e.pats[0]));
            return;
        case ExprKind::Let: {
            SplitCtx inner = without(ctx, e.pats[0]);
            simplify(e.kids[0], e.rec ? inner : ctx);
            simplify(e.kids[1], inner);
            return;
        }
        default:
            for (auto& k : e.kids) simplify(k, ctx);
    }
}

bool hasEmptyMatch(const Expr& e) {
    if (e.kind == ExprKind::Match && e.pats.empty()) return true;
    for (const auto& k : e.kids)
        if (hasEmptyMatch(k)) return true;
    return false;
}

// Step 3: bindings holding an emptied match go, with the bindings depending on them.
void removeMarked(Expr& e) {
    if (isChainLet(e)) {
        std::vector<Expr> lets, kept;
        Expr tail;
        splitChain(std::move(e), lets, tail);
        std::set<std::string> removed;
        for (auto& let : lets) {
            std::set<std::string> fv = freeVars(let.kids[0]);
            bool dependent = false;
            for (auto& n : fv) dependent = dependent || removed.count(n);
            if (dependent || hasEmptyMatch(let.kids[0])) {
                for (auto& n : let.pats[0].boundNames()) removed.insert(n);
                continue;
            }
            removeMarked(let.kids[0]);
            kept.push_back(std::move(let));
        }
        removeMarked(tail);
        e = joinChain(std::move(kept), std::move(tail));
        return;
    }
    if (e.kind == ExprKind::Match && e.pats.empty()) {
        NodeId id = e.id;
        e = Expr::hole();
        e.id = id;
        return;
    }
    for (auto& k : e.kids) removeMarked(k);
}

// Step 4: matches in strict positions float up past their context.
void floatUp(Expr& e);

void floatAt(Expr& e, std::size_t k) {
    Expr m = std::move(e.kids[k]);
    for (std::size_t i = 1; i < m.kids.size(); ++i) {
        Expr ctx = e;
        ctx.kids[k] = std::move(m.kids[i]);
        floatUp(ctx);
        m.kids[i] = std::move(ctx);
    }
    e = std::move(m);
}

void floatUp(Expr& e) {
    for (auto& k : e.kids) floatUp(k);
    switch (e.kind) {
        case ExprKind::App:
        case ExprKind::Tuple:
        case ExprKind::Ctor:
            for (std::size_t k = 0; k < e.kids.size(); ++k)
                if (isVarMatch(e.kids[k])) {
                    floatAt(e, k);
                    return;
                }
            return;
        case ExprKind::If:
        case ExprKind::Match:
            if (isVarMatch(e.kids[0])) floatAt(e, 0);
            return;
        case ExprKind::Let:
            if (!e.rec && isVarMatch(e.kids[0])) {
                bool captured = false;
                for (auto& n : e.pats[0].boundNames()) captured = captured || n == e.kids[0].kids[0].name;
                if (!captured) floatAt(e, 0);
            }
            return;
        default:
            return;
    }
}

bool sameBinding(const Expr& a, const Expr& b) {
    return a.rec == b.rec && a.bindAttrs == b.bindAttrs && sameShape(a.pats[0], b.pats[0]) &&
           sameShape(a.kids[0], b.kids[0]);
}

// Step 5: bindings present in every branch and independent of branch variables
// move back above the split.
void hoist(Expr& e) {
    if (isChainLet(e)) {
        hoist(e.kids[1]);
        return;
    }
    if (!isVarMatch(e)) return;
    for (std::size_t i = 1; i < e.kids.size(); ++i) hoist(e.kids[i]);
    std::size_t arms = e.pats.size();
    std::vector<std::vector<Expr>> lets(arms);
    std::vector<Expr> tails(arms);
    for (std::size_t i = 0; i < arms; ++i) splitChain(std::move(e.kids[i + 1]), lets[i], tails[i]);

    // match[c][i]: index of the copy of lets[0][c] in arm i, or -1.
    std::vector<std::vector<long>> match(lets[0].size(), std::vector<long>(arms, -1));
    std::vector<bool> cand(lets[0].size(), true);
    for (std::size_t c = 0; c < lets[0].size(); ++c) {
        match[c][0] = static_cast<long>(c);
        for (std::size_t i = 1; i < arms && cand[c]; ++i) {
            for (std::size_t j = 0; j < lets[i].size(); ++j)
                if (sameBinding(lets[0][c], lets[i][j])) {
                    match[c][i] = static_cast<long>(j);
                    break;
                }
            if (match[c][i] < 0) cand[c] = false;
        }
    }
    std::vector<std::set<std::string>> intro(arms);
    for (std::size_t i = 0; i < arms; ++i) {
        for (auto& n : e.pats[i].boundNames()) intro[i].insert(n);
        std::vector<bool> hoistable(lets[i].size(), false);
        for (std::size_t c = 0; c < cand.size(); ++c)
            if (cand[c]) hoistable[static_cast<std::size_t>(match[c][i])] = true;
        for (std::size_t j = 0; j < lets[i].size(); ++j)
            if (!hoistable[j])
                for (auto& n : lets[i][j].pats[0].boundNames()) intro[i].insert(n);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t c = 0; c < cand.size(); ++c) {
            if (!cand[c]) continue;
            std::set<std::string> fv = freeVars(lets[0][c].kids[0]);
            if (lets[0][c].rec)
                for (auto& n : lets[0][c].pats[0].boundNames()) fv.erase(n);
            bool dep = false;
            for (std::size_t i = 0; i < arms && !dep; ++i)
                for (auto& n : fv) dep = dep || intro[i].count(n);
            if (!dep) continue;
            cand[c] = false;
            changed = true;
            for (std::size_t i = 0; i < arms; ++i)
                for (auto& n : lets[0][c].pats[0].boundNames()) intro[i].insert(n);
        }
    }
    std::vector<Expr> hoisted;
    std::vector<std::vector<bool>> drop(arms);
    for (std::size_t i = 0; i < arms; ++i) drop[i].assign(lets[i].size(), false);
    for (std::size_t c = 0; c < cand.size(); ++c) {
        if (!cand[c]) continue;
        hoisted.push_back(lets[0][c]);
        for (std::size_t i = 0; i < arms; ++i) drop[i][static_cast<std::size_t>(match[c][i])] = true;
    }
    for (std::size_t i = 0; i < arms; ++i) {
        std::vector<Expr> rest;
        for (std::size_t j = 0; j < lets[i].size(); ++j)
            if (!drop[i][j]) rest.push_back(std::move(lets[i][j]));
        e.kids[i + 1] = joinChain(std::move(rest), std::move(tails[i]));
    }
    if (!hoisted.empty()) e = joinChain(std::move(hoisted), std::move(e));
}

// Step 6: constructor matches get their missing branches with hole bodies.
void complete(Expr& e, const CtorTable& ctors, const std::set<std::string>& taken) {
    for (auto& k : e.kids) complete(k, ctors, taken);
    if (e.kind != ExprKind::Match || e.pats.empty()) return;
    std::string type;
    for (const auto& p : e.pats) {
        if (p.kind != PatKind::Ctor) return;
        const CtorInfo* info = ctors.find(p.name);
        if (!info || (!type.empty() && info->typeName != type)) return;
        type = info->typeName;
    }
    std::vector<const CtorInfo*> sibs = ctors.siblings(e.pats[0].name);
    std::vector<std::pair<Pattern, Expr>> arms;
    bool added = false;
    for (const CtorInfo* c : sibs) {
        bool present = false;
        for (const auto& p : e.pats) present = present || p.name == c->name;
        if (present) continue;
        std::set<std::string> names = taken;
        arms.emplace_back(branchPattern(*c, names), Expr::hole());
        added = true;
    }
    if (!added) return;
    for (std::size_t i = 0; i < e.pats.size(); ++i) arms.emplace_back(std::move(e.pats[i]), std::move(e.kids[i + 1]));
    std::stable_sort(arms.begin(), arms.end(), [&](const auto& a, const auto& b) {
        return ctors.find(a.first.name)->index < ctors.find(b.first.name)->index;
    });
    e.pats.clear();
    e.kids.resize(1);
    for (auto& [p, body] : arms) {
        e.pats.push_back(std::move(p));
        e.kids.push_back(std::move(body));
    }
}

// Step 7: `let a = b in body` becomes body with a renamed to b.
void dropRenamings(Expr& e) {
    while (isChainLet(e) && !e.rec && e.pats[0].kind == PatKind::Var && e.kids[0].kind == ExprKind::Var &&
           e.kids[0].attrs.empty() && e.pats[0].name != e.kids[0].name) {
        std::string from = e.pats[0].name, to = e.kids[0].name;
        Expr body = std::move(e.kids[1]);
        renameVar(body, from, to);
        e = std::move(body);
    }
    for (auto& k : e.kids) dropRenamings(k);
}

void normalizeBody(Expr& body, const CtorTable& ctors, const std::set<std::string>& taken) {
    for (int round = 0; round < 8; ++round) {
        Expr before = body;
        pushDown(body);
        simplify(body, {});
        removeMarked(body);
        floatUp(body);
        hoist(body);
        complete(body, ctors, taken);
        dropRenamings(body);
        if (sameShape(before, body)) break;
    }
}

Expr* functionBody(Expr& fun) {
    Expr* b = &fun;
    while (b->kind == ExprKind::Fun) b = &b->kids[0];
    return b;
}

}  // namespace

Program normalizeCaseSplits(Program p) {
    CtorTable ctors(p.types);
    std::set<std::string> taken = allBoundNames(p);
    for (auto& item : p.items) {
        if (item.kind != ItemKind::Binding) continue;
        normalizeBody(*functionBody(item.expr), ctors, taken);
    }
    dedupeIds(p);
    return p;
}

Program destruct(Program p, NodeId function, const std::string& scrutinee, const std::string& typeName) {
    CtorTable ctors(p.types);
    const TypeDecl* decl = ctors.type(typeName);
    if (!decl || decl->ctors.empty()) throw NotAnAdt(typeName);
    Expr* fun = nullptr;
    if (TopItem* item = findItem(p, function)) {
        if (item->kind == ItemKind::Binding && item->expr.kind == ExprKind::Fun) fun = &item->expr;
    } else if (Expr* e = findExpr(p, function)) {
        if (e->kind == ExprKind::Fun) fun = e;
        else if (e->kind == ExprKind::Let && e->kids[0].kind == ExprKind::Fun) fun = &e->kids[0];
    }
    if (!fun) throw UnknownNode(function);

    Expr* cur = functionBody(*fun);
    for (;;) {
        while (cur->kind == ExprKind::Let) cur = &cur->kids[1];
        if (cur->kind != ExprKind::Match) break;
        if (cur->kids[0].kind == ExprKind::Var && cur->kids[0].name == scrutinee) return p;
        Expr* next = nullptr;
        for (std::size_t i = 0; i < cur->pats.size() && !next; ++i) {
            auto names = cur->pats[i].boundNames();
            bool binds = std::find(names.begin(), names.end(), scrutinee) != names.end() ||
                         boundNamesIn(cur->kids[i + 1]).count(scrutinee);
            if (binds) next = &cur->kids[i + 1];
        }
        if (!next) break;
        cur = next;
    }

    std::set<std::string> taken = allBoundNames(p);
    Expr old = std::move(*cur);
    std::vector<std::pair<Pattern, Expr>> arms;
    for (const auto& c : decl->ctors) {
        const CtorInfo* info = ctors.find(c.name);
        std::set<std::string> names = taken;
        arms.emplace_back(branchPattern(*info, names), old.kind == ExprKind::Hole ? Expr::hole() : old);
    }
    *cur = Expr::match(Expr::var(scrutinee), std::move(arms));
    dedupeIds(p);
    return normalizeCaseSplits(std::move(p));
}

Expr extractionExpr(const std::vector<PathStep>& path, const std::string& scrutinee, const CtorTable& ctors,
                    const std::set<std::string>& taken) {
    std::set<std::string> names = taken;
    Expr cur = Expr::var(scrutinee);
    for (const auto& step : path) {
        const CtorInfo* info = ctors.find(step.ctor);
        if (!info || step.arg >= info->args.size())
            throw std::invalid_argument("no argument " + std::to_string(step.arg) + " of constructor " + step.ctor);
        Pattern pat = branchPattern(*info, names);
        std::string pick = pat.args[step.arg].name;
        std::vector<std::pair<Pattern, Expr>> arms;
        arms.emplace_back(std::move(pat), Expr::var(pick));
        cur = Expr::match(std::move(cur), std::move(arms));
    }
    return cur;
}

}  // namespace manipos
