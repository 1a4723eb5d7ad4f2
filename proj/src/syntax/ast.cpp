#include "syntax/ast.hpp"

#include <algorithm>
#include <string_view>
#include <unordered_set>

namespace manipos {

bool Literal::operator==(const Literal& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Int: return i == o.i;
        case Kind::Float: return f == o.f || (f != f && o.f != o.f);
        case Kind::String: return s == o.s;
        case Kind::Char: return c == o.c;
    }
    return false;
}

std::vector<std::string> Pattern::boundNames() const {
    std::vector<std::string> out;
    std::function<void(const Pattern&)> go = [&](const Pattern& p) {
        if (p.kind == PatKind::Var) out.push_back(p.name);
        for (const auto& a : p.args) go(a);
    };
    go(*this);
    return out;
}

Expr Expr::app(Expr fn, std::vector<Expr> args) {
    Expr e;
    e.kind = ExprKind::App;
    e.kids.reserve(args.size() + 1);
    e.kids.push_back(std::move(fn));
    for (auto& a : args) e.kids.push_back(std::move(a));
    return e;
}

Expr Expr::fun(Pattern param, Expr body) {
    Expr e;
    e.kind = ExprKind::Fun;
    e.pats.push_back(std::move(param));
    e.kids.push_back(std::move(body));
    return e;
}

Expr Expr::let(bool rec, Pattern lhs, Expr rhs, Expr body) {
    Expr e;
    e.kind = ExprKind::Let;
    e.rec = rec;
    e.pats.push_back(std::move(lhs));
    e.kids.push_back(std::move(rhs));
    e.kids.push_back(std::move(body));
    return e;
}

Expr Expr::ifThenElse(Expr c, Expr t, Expr f) {
    Expr e;
    e.kind = ExprKind::If;
    e.kids = {std::move(c), std::move(t), std::move(f)};
    return e;
}

Expr Expr::match(Expr scrutinee, std::vector<std::pair<Pattern, Expr>> arms) {
    Expr e;
    e.kind = ExprKind::Match;
    e.kids.push_back(std::move(scrutinee));
    for (auto& [p, b] : arms) {
        e.pats.push_back(std::move(p));
        e.kids.push_back(std::move(b));
    }
    return e;
}

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}

UnknownNode::UnknownNode(NodeId n) : std::runtime_error("unknown node " + std::to_string(n.value)), id(n) {}

bool sameShape(const Pattern& a, const Pattern& b) {
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!sameShape(a.args[i], b.args[i])) return false;
    return true;
}

bool sameShape(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || !(a.attrs == b.attrs) || a.kids.size() != b.kids.size() ||
        a.pats.size() != b.pats.size())
        return false;
    switch (a.kind) {
        case ExprKind::Const:
            if (!(a.lit == b.lit)) return false;
            break;
        case ExprKind::Var:
        case ExprKind::Ctor:
            if (a.name != b.name) return false;
            break;
        case ExprKind::Let:
            if (a.rec != b.rec || !(a.bindAttrs == b.bindAttrs)) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a.pats.size(); ++i)
        if (!sameShape(a.pats[i], b.pats[i])) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!sameShape(a.kids[i], b.kids[i])) return false;
    return true;
}

bool sameShape(const TopItem& a, const TopItem& b) {
    if (a.kind != b.kind || a.rec != b.rec || !(a.attrs == b.attrs)) return false;
    if (!sameShape(a.pat, b.pat) || !sameShape(a.expr, b.expr)) return false;
    if (a.kind == ItemKind::Assert && !sameShape(a.expected, b.expected)) return false;
    return true;
}

bool sameShape(const Program& a, const Program& b) {
    if (a.types != b.types || a.items.size() != b.items.size()) return false;
    for (std::size_t i = 0; i < a.items.size(); ++i)
        if (!sameShape(a.items[i], b.items[i])) return false;
    return true;
}

namespace {

template <class F>
void walkPattern(Pattern& p, F&& f) {
    f(p);
    for (auto& a : p.args) walkPattern(a, f);
}

// Pre-order over every node (patterns included), in the canonical id order.
template <class FE, class FP>
void walkExpr(Expr& e, FE&& fe, FP&& fp) {
    fe(e);
    switch (e.kind) {
        case ExprKind::Let:
            walkPattern(e.pats[0], fp);
            walkExpr(e.kids[0], fe, fp);
            walkExpr(e.kids[1], fe, fp);
            break;
        case ExprKind::Fun:
            walkPattern(e.pats[0], fp);
            walkExpr(e.kids[0], fe, fp);
            break;
        case ExprKind::Match:
            walkExpr(e.kids[0], fe, fp);
            for (std::size_t i = 0; i < e.pats.size(); ++i) {
                walkPattern(e.pats[i], fp);
                walkExpr(e.kids[i + 1], fe, fp);
            }
            break;
        default:
            for (auto& k : e.kids) walkExpr(k, fe, fp);
    }
}

}  // namespace

void assignIds(Program& p) {
    std::uint32_t next = 1;
    auto fe = [&](Expr& e) { e.id = NodeId{next++}; };
    auto fp = [&](Pattern& pat) { pat.id = NodeId{next++}; };
    for (auto& item : p.items) {
        item.id = NodeId{next++};
        walkPattern(item.pat, fp);
        walkExpr(item.expr, fe, fp);
        if (item.kind == ItemKind::Assert) walkExpr(item.expected, fe, fp);
    }
    p.nextId = next;
}

void mintMissing(Program& p, Expr& e) {
    walkExpr(
        e, [&](Expr& x) { if (!x.id.valid()) x.id = p.mint(); },
        [&](Pattern& x) { if (!x.id.valid()) x.id = p.mint(); });
}

void mintMissing(Program& p, Pattern& pat) {
    walkPattern(pat, [&](Pattern& x) { if (!x.id.valid()) x.id = p.mint(); });
}

void dedupeIds(Program& p) {
    std::uint32_t top = 0;
    std::unordered_set<std::uint32_t> seen;
    auto scan = [&](NodeId id) { top = std::max(top, id.value); };
    auto fe0 = [&](Expr& e) { scan(e.id); };
    auto fp0 = [&](Pattern& x) { scan(x.id); };
    for (auto& item : p.items) {
        scan(item.id);
        walkPattern(item.pat, fp0);
        walkExpr(item.expr, fe0, fp0);
        if (item.kind == ItemKind::Assert) walkExpr(item.expected, fe0, fp0);
    }
    p.nextId = std::max(p.nextId, top + 1);
    auto fix = [&](NodeId& id) {
        if (!id.valid() || !seen.insert(id.value).second) {
            id = p.mint();
            seen.insert(id.value);
        }
    };
    auto fe = [&](Expr& e) { fix(e.id); };
    auto fp = [&](Pattern& x) { fix(x.id); };
    for (auto& item : p.items) {
        fix(item.id);
        walkPattern(item.pat, fp);
        walkExpr(item.expr, fe, fp);
        if (item.kind == ItemKind::Assert) walkExpr(item.expected, fe, fp);
    }
}

void remint(Program& p, Expr& e) {
    walkExpr(e, [&](Expr& x) { x.id = p.mint(); }, [&](Pattern& x) { x.id = p.mint(); });
}

namespace {

Expr* findIn(Expr& e, NodeId id) {
    if (e.id == id) return &e;
    for (auto& k : e.kids)
        if (Expr* r = findIn(k, id)) return r;
    return nullptr;
}

Pattern* findPat(Pattern& p, NodeId id) {
    if (p.id == id) return &p;
    for (auto& a : p.args)
        if (Pattern* r = findPat(a, id)) return r;
    return nullptr;
}

Pattern* findPatIn(Expr& e, NodeId id) {
    for (auto& p : e.pats)
        if (Pattern* r = findPat(p, id)) return r;
    for (auto& k : e.kids)
        if (Pattern* r = findPatIn(k, id)) return r;
    return nullptr;
}

}  // namespace

Expr* findExpr(Program& p, NodeId id) {
    if (!id.valid()) return nullptr;
    for (auto& item : p.items) {
        if (Expr* r = findIn(item.expr, id)) return r;
        if (item.kind == ItemKind::Assert)
            if (Expr* r = findIn(item.expected, id)) return r;
    }
    return nullptr;
}

const Expr* findExpr(const Program& p, NodeId id) { return findExpr(const_cast<Program&>(p), id); }

Pattern* findPattern(Program& p, NodeId id) {
    if (!id.valid()) return nullptr;
    for (auto& item : p.items) {
        if (Pattern* r = findPat(item.pat, id)) return r;
        if (Pattern* r = findPatIn(item.expr, id)) return r;
        if (item.kind == ItemKind::Assert)
            if (Pattern* r = findPatIn(item.expected, id)) return r;
    }
    return nullptr;
}

const Pattern* findPattern(const Program& p, NodeId id) { return findPattern(const_cast<Program&>(p), id); }

TopItem* findItem(Program& p, NodeId id) {
    for (auto& item : p.items)
        if (item.id == id) return &item;
    return nullptr;
}

const TopItem* findItem(const Program& p, NodeId id) { return findItem(const_cast<Program&>(p), id); }

void forEachExpr(const Expr& e, const std::function<void(const Expr&)>& f) {
    f(e);
    for (const auto& k : e.kids) forEachExpr(k, f);
}

void forEachExpr(const Program& p, const std::function<void(const Expr&)>& f) {
    for (const auto& item : p.items) {
        forEachExpr(item.expr, f);
        if (item.kind == ItemKind::Assert) forEachExpr(item.expected, f);
    }
}

void forEachPattern(const Expr& e, const std::function<void(const Pattern&)>& f) {
    std::function<void(const Pattern&)> go = [&](const Pattern& p) {
        f(p);
        for (const auto& a : p.args) go(a);
    };
    for (const auto& p : e.pats) go(p);
    for (const auto& k : e.kids) forEachPattern(k, f);
}

bool isOperatorName(const std::string& name) {
    if (name.empty()) return false;
    static constexpr std::string_view opChars = "!$%&*+-./:<=>?@^|~";
    return std::all_of(name.begin(), name.end(), [](char c) { return opChars.find(c) != std::string_view::npos; }) ||
           name == "mod";
}

bool isInfixOperator(const std::string& name) {
    return isOperatorName(name) && name != "~-" && name != "~-." && name != "!";
}

}  // namespace manipos
