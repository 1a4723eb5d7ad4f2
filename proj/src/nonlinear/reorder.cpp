#include "nonlinear/nonlinear.hpp"

#include <algorithm>
#include <functional>

#include "syntax/scope.hpp"
#include "types/pervasives.hpp"

namespace manipos {

namespace {

struct Entry {
    std::vector<std::string> defines;
    std::set<std::string> needs;  // free in the right-hand side, own names included
    bool canRec = false;
    bool rec = false;
};

bool intersects(const std::vector<std::string>& names, const std::set<std::string>& s) {
    for (const auto& n : names)
        if (s.count(n)) return true;
    return false;
}

void checkUnique(const std::vector<Entry>& es) {
    std::set<std::string> seen;
    for (const auto& e : es)
        for (const auto& n : e.defines)
            if (!seen.insert(n).second) throw DuplicateName(n);
}

// Returns the new order of the entries and updates their rec flags.
std::vector<std::size_t> orderScope(std::vector<Entry>& es) {
    checkUnique(es);
    std::vector<std::size_t> order(es.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    auto dependsOn = [&](std::size_t from, std::size_t target, std::size_t lo) {
        std::vector<bool> seen(es.size(), false);
        std::vector<std::size_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t pos = lo; pos < order.size(); ++pos) {
                std::size_t b = order[pos];
                if (seen[b] || b == a) continue;
                if (!intersects(es[b].defines, es[a].needs)) continue;
                if (b == target) return true;
                seen[b] = true;
                stack.push_back(b);
            }
        }
        return false;
    };

    std::size_t i = 0;
    while (i < order.size()) {
        Entry& cur = es[order[i]];
        std::set<std::string> need = cur.needs;
        if (cur.canRec && intersects(cur.defines, need)) cur.rec = true;
        for (const auto& n : cur.defines) need.erase(n);
        std::size_t found = 0;
        for (std::size_t j = i + 1; j < order.size() && !found; ++j)
            if (intersects(es[order[j]].defines, need) && !dependsOn(order[j], order[i], i)) found = j;
        if (!found) {
            ++i;
            continue;
        }
        std::size_t moved = order[found];
        order.erase(order.begin() + static_cast<std::ptrdiff_t>(found));
        order.insert(order.begin() + static_cast<std::ptrdiff_t>(i), moved);
    }
    return order;
}

void rearrange(Expr& e);

void rearrangeChain(Expr& head) {
    std::vector<Expr> lets;
    Expr body;
    {
        Expr cur = std::move(head);
        while (cur.kind == ExprKind::Let && cur.attrs.empty()) {
            Expr next = std::move(cur.kids[1]);
            cur.kids.resize(1);
            lets.push_back(std::move(cur));
            cur = std::move(next);
        }
        body = std::move(cur);
    }
    std::vector<Entry> es(lets.size());
    for (std::size_t i = 0; i < lets.size(); ++i) {
        rearrange(lets[i].kids[0]);
        es[i].defines = lets[i].pats[0].boundNames();
        es[i].needs = freeVars(lets[i].kids[0]);
        es[i].canRec = lets[i].pats[0].kind == PatKind::Var;
        es[i].rec = lets[i].rec;
    }
    rearrange(body);
    std::vector<std::size_t> order = orderScope(es);
    Expr out = std::move(body);
    for (std::size_t k = order.size(); k-- > 0;) {
        Expr let = std::move(lets[order[k]]);
        let.rec = es[order[k]].rec;
        let.kids.push_back(std::move(out));
        out = std::move(let);
    }
    head = std::move(out);
}

void rearrange(Expr& e) {
    if (e.kind == ExprKind::Let && e.attrs.empty()) {
        rearrangeChain(e);
        return;
    }
    for (auto& k : e.kids) rearrange(k);
}

bool isPervasive(const std::string& n) { return findPervasive(n) != nullptr; }

}  // namespace

Program reorder(Program p) {
    std::vector<Entry> es(p.items.size());
    for (std::size_t i = 0; i < p.items.size(); ++i) {
        TopItem& item = p.items[i];
        rearrange(item.expr);
        es[i].needs = freeVars(item.expr);
        if (item.kind == ItemKind::Assert) {
            rearrange(item.expected);
            for (auto& n : freeVars(item.expected)) es[i].needs.insert(n);
            continue;
        }
        es[i].defines = item.pat.boundNames();
        es[i].canRec = item.pat.kind == PatKind::Var;
        es[i].rec = item.rec;
    }
    std::vector<std::size_t> order = orderScope(es);
    std::vector<TopItem> items;
    items.reserve(order.size());
    for (std::size_t k : order) {
        items.push_back(std::move(p.items[k]));
        items.back().rec = es[k].rec;
    }
    p.items = std::move(items);
    return p;
}

namespace {

Expr skeleton(int arity) {
    Expr body = Expr::hole();
    for (int k = arity; k >= 1; --k) body = Expr::fun(Pattern::var("x" + std::to_string(k)), std::move(body));
    return body;
}

int maxArity(const Expr& e, const std::string& v) {
    int best = 0;
    forEachExpr(e, [&](const Expr& x) {
        if (x.kind == ExprKind::App && x.kids[0].kind == ExprKind::Var && x.kids[0].name == v)
            best = std::max(best, static_cast<int>(x.kids.size()) - 1);
    });
    return best;
}

class Inserter {
public:
    Inserter(const std::string& v, int arity) : v_(v), arity_(arity) {}

    // Places the binding inside a nested scope of `e`; false when `e` offers none.
    bool into(Expr& e) {
        switch (e.kind) {
            case ExprKind::Fun: {
                Expr* body = &e.kids[0];
                while (body->kind == ExprKind::Fun) body = &body->kids[0];
                if (!into(*body)) wrap(*body);
                return true;
            }
            case ExprKind::Let: {
                if (!e.attrs.empty()) return false;
                std::vector<Expr*> comps;
                Expr* cur = &e;
                while (cur->kind == ExprKind::Let && cur->attrs.empty()) {
                    comps.push_back(&cur->kids[0]);
                    cur = &cur->kids[1];
                }
                comps.push_back(cur);
                Expr* only = single(comps);
                if (!only || !into(*only)) wrap(e);
                return true;
            }
            case ExprKind::Match: {
                if (uses(e.kids[0])) return false;
                std::vector<Expr*> arms;
                for (std::size_t i = 1; i < e.kids.size(); ++i) arms.push_back(&e.kids[i]);
                Expr* only = single(arms);
                if (!only) return false;
                if (!into(*only)) wrap(*only);
                return true;
            }
            case ExprKind::If: {
                if (uses(e.kids[0])) return false;
                Expr* only = single({&e.kids[1], &e.kids[2]});
                if (!only) return false;
                if (!into(*only)) wrap(*only);
                return true;
            }
            default:
                return false;
        }
    }

    void wrap(Expr& e) {
        for (const Expr* cur = &e; cur->kind == ExprKind::Let && cur->attrs.empty(); cur = &cur->kids[1])
            for (auto& n : cur->pats[0].boundNames())
                if (n == v_) return;
        Expr inner = std::move(e);
        e = Expr::let(false, Pattern::var(v_), skeleton(arity_), std::move(inner));
    }

    bool uses(const Expr& e) const { return freeVars(e).count(v_) > 0; }

private:
    std::string v_;
    int arity_;

    Expr* single(const std::vector<Expr*>& comps) const {
        Expr* only = nullptr;
        for (Expr* c : comps) {
            if (!uses(*c)) continue;
            if (only) return nullptr;
            only = c;
        }
        return only;
    }
};

}  // namespace

Program insertMissingBindings(Program p) {
    std::set<std::string> top = topLevelNames(p);
    std::map<std::string, std::vector<std::size_t>> usesOf;
    std::set<std::string> above;
    for (std::size_t i = 0; i < p.items.size(); ++i) {
        const TopItem& item = p.items[i];
        std::set<std::string> fv = freeVars(item.expr);
        if (item.kind == ItemKind::Assert) {
            for (auto& n : freeVars(item.expected)) fv.insert(n);
        } else if (item.rec && item.pat.kind == PatKind::Var) {
            fv.erase(item.pat.name);
        }
        for (const auto& n : fv) {
            if (above.count(n) || isPervasive(n) || top.count(n)) continue;
            usesOf[n].push_back(i);
        }
        if (item.kind == ItemKind::Binding)
            for (auto& n : item.pat.boundNames()) above.insert(n);
    }
    std::vector<TopItem> atTop;
    for (auto it = usesOf.rbegin(); it != usesOf.rend(); ++it) {
        const std::string& v = it->first;
        int arity = 0;
        for (std::size_t i : it->second) {
            arity = std::max(arity, maxArity(p.items[i].expr, v));
            if (p.items[i].kind == ItemKind::Assert) arity = std::max(arity, maxArity(p.items[i].expected, v));
        }
        Inserter ins(v, arity);
        const std::vector<std::size_t>& users = it->second;
        if (users.size() == 1 && p.items[users[0]].kind == ItemKind::Binding && ins.into(p.items[users[0]].expr))
            continue;
        TopItem item;
        item.pat = Pattern::var(v);
        item.expr = skeleton(arity);
        atTop.insert(atTop.begin(), std::move(item));
    }
    p.items.insert(p.items.begin(), std::make_move_iterator(atTop.begin()), std::make_move_iterator(atTop.end()));
    dedupeIds(p);
    return p;
}

Program normalizeProgram(Program p) {
    for (int round = 0; round < 4; ++round) {
        Program before = p;
        p = reorder(std::move(p));
        p = normalizeCaseSplits(std::move(p));
        p = reorder(std::move(p));
        p = insertMissingBindings(std::move(p));
        if (sameShape(before, p)) break;
    }
    dedupeIds(p);
    return p;
}

}  // namespace manipos
