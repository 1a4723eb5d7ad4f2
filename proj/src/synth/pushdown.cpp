#include <set>

#include "synth/synth.hpp"

#include "syntax/print.hpp"

namespace manipos {

std::vector<AssertExample> collectExamples(const Program& p, const RunResult& r) {
    std::vector<AssertExample> out;
    auto first = [&](const Expr& e) -> ValuePtr {
        std::vector<ValuePtr> vs = valuesAt(r, e.id);
        return vs.empty() ? nullptr : vs.front();
    };
    for (const auto& item : p.items) {
        if (item.kind != ItemKind::Assert) continue;
        AssertExample ex;
        ex.item = item.id;
        ex.expected = first(item.expected);
        if (!ex.expected || ex.expected->incomplete()) continue;
        const Expr& lhs = item.expr;
        if (lhs.kind == ExprKind::App && lhs.kids[0].kind == ExprKind::Var) {
            ex.callee = lhs.kids[0].name;
            bool ok = true;
            for (std::size_t i = 1; i < lhs.kids.size() && ok; ++i) {
                ValuePtr v = first(lhs.kids[i]);
                ok = v && !v->incomplete();
                if (ok) ex.args.push_back(v);
            }
            if (!ok) {
                ex.callee.clear();
                ex.args.clear();
            }
        } else if (lhs.kind == ExprKind::Var) {
            ex.callee = lhs.name;
        }
        out.push_back(std::move(ex));
    }
    return out;
}

namespace {

enum class Fit { Yes, No, Unknown };

Fit fits(const Pattern& p, const Value& v) {
    switch (p.kind) {
        case PatKind::Var:
        case PatKind::Wild: return Fit::Yes;
        case PatKind::Tuple:
        case PatKind::Ctor: {
            if (v.isHoleOrBomb()) return Fit::Unknown;
            bool shape = p.kind == PatKind::Tuple ? v.kind == VKind::Tuple : (v.kind == VKind::Ctor && v.s == p.name);
            if (!shape || v.items.size() != p.args.size()) return Fit::No;
            for (std::size_t i = 0; i < p.args.size(); ++i) {
                Fit f = fits(p.args[i], *v.items[i]);
                if (f != Fit::Yes) return f;
            }
            return Fit::Yes;
        }
    }
    return Fit::Unknown;
}

EnvPtr bindAll(const Pattern& p, const ValuePtr& v, EnvPtr env) {
    if (p.kind == PatKind::Var) return bind(std::move(env), p.name, v);
    for (std::size_t i = 0; i < p.args.size() && i < v->items.size(); ++i) env = bindAll(p.args[i], v->items[i], std::move(env));
    return env;
}

void descend(const Expr& e, EnvPtr env, std::vector<ValuePtr> args, std::size_t next, const AssertExample& ex,
             std::vector<HoleConstraint>& out) {
    switch (e.kind) {
        case ExprKind::Hole: {
            HoleConstraint c;
            c.hole = e.id;
            c.assertion = ex.item;
            c.env = std::move(env);
            c.args.assign(args.begin() + static_cast<std::ptrdiff_t>(next), args.end());
            c.expected = ex.expected;
            out.push_back(std::move(c));
            return;
        }
        case ExprKind::Fun:
            if (next >= args.size()) return;
            if (fits(e.pats[0], *args[next]) != Fit::Yes) return;
            env = bindAll(e.pats[0], args[next], std::move(env));
            descend(e.kids[0], std::move(env), std::move(args), next + 1, ex, out);
            return;
        case ExprKind::Let:
            descend(e.kids[1], std::move(env), std::move(args), next, ex, out);
            return;
        case ExprKind::Match: {
            const Expr& s = e.kids[0];
            if (s.kind != ExprKind::Var) return;
            ValuePtr v = lookup(env.get(), s.name);
            if (!v) return;
            for (std::size_t i = 0; i < e.pats.size(); ++i) {
                Fit f = fits(e.pats[i], *v);
                if (f == Fit::Unknown) return;
                if (f == Fit::No) continue;
                EnvPtr armEnv = bindAll(e.pats[i], v, env);
                descend(e.kids[i + 1], std::move(armEnv), std::move(args), next, ex, out);
                return;
            }
            return;
        }
        default:
            return;
    }
}

}  // namespace

std::vector<HoleConstraint> pushDownExamples(const Program& p, const std::vector<AssertExample>& examples) {
    std::vector<HoleConstraint> out;
    for (const auto& ex : examples) {
        if (ex.callee.empty()) continue;
        const TopItem* target = nullptr;
        for (const auto& item : p.items)
            if (item.kind == ItemKind::Binding && item.pat.kind == PatKind::Var && item.pat.name == ex.callee) target = &item;
        if (!target) continue;
        descend(target->expr, nullptr, ex.args, 0, ex, out);
    }
    return out;
}

std::vector<HoleConstraint> pushDownExamples(const Program& p) {
    RunOptions opts;
    RunResult r = run(std::make_shared<const Program>(p), opts);
    return pushDownExamples(p, collectExamples(p, r));
}

std::vector<SpeculativeType> speculateTypes(const Program& p, const std::vector<AssertExample>& examples) {
    std::map<std::pair<std::string, std::size_t>, std::vector<Expr>> rows;
    std::vector<std::pair<std::string, std::size_t>> order;
    for (const auto& ex : examples) {
        if (ex.callee.empty()) continue;
        std::vector<Expr> parts;
        bool ok = true;
        for (const auto& v : ex.args) {
            Expr e;
            ok = ok && valueToExpr(*v, e);
            parts.push_back(std::move(e));
        }
        Expr res;
        ok = ok && valueToExpr(*ex.expected, res);
        if (!ok) continue;
        parts.push_back(std::move(res));
        auto key = std::make_pair(ex.callee, ex.args.size());
        if (!rows.count(key)) order.push_back(key);
        rows[key].push_back(Expr::tuple(std::move(parts)));
    }
    CtorTable ctors(p.types);
    std::vector<SpeculativeType> out;
    std::set<std::string> done;
    for (const auto& key : order) {
        if (done.count(key.first)) continue;
        Expr list = Expr::ctor("[]");
        std::vector<Expr>& rs = rows[key];
        for (auto it = rs.rbegin(); it != rs.rend(); ++it) list = Expr::ctor("::", {std::move(*it), std::move(list)});
        Program q;
        q.types = p.types;
        TopItem item;
        item.pat = Pattern::var("examples");
        item.expr = std::move(list);
        q.items.push_back(std::move(item));
        assignIds(q);
        Typing t = inferProgram(q, ctors);
        if (!t.errors.empty()) continue;
        Ty row = TypeStore::repr(t.exprTypes.at(q.items[0].expr.kids[0].id));
        if (row->kind != TyNode::Kind::Tuple) continue;
        TypeExpr ty = t.store->toSurface(row->args.back());
        for (std::size_t i = row->args.size() - 1; i-- > 0;) {
            TypeExpr arrow;
            arrow.kind = TypeExpr::Kind::Arrow;
            arrow.args = {t.store->toSurface(row->args[i]), std::move(ty)};
            ty = std::move(arrow);
        }
        out.push_back(SpeculativeType{key.first, std::move(ty)});
        done.insert(key.first);
    }
    return out;
}

std::vector<SpeculativeType> speculateTypes(const Program& p) {
    RunResult r = run(std::make_shared<const Program>(p));
    return speculateTypes(p, collectExamples(p, r));
}

}  // namespace manipos
