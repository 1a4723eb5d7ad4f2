#pragma once

// Random program generators shared by the unit and acceptance suites.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"

namespace manipos::testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))]; }

    std::string ident() {
        static const std::vector<std::string> names = {"x", "y", "z", "acc", "list", "tail", "hd", "n", "f", "g",
                                                        "length", "xs", "t1", "value'", "_tmp", "a_b"};
        return pick(names);
    }

    Literal literal() {
        switch (below(4)) {
            case 0: return Literal::ofInt(below(7) - 2);
            case 1: {
                static const std::vector<double> fs = {0.0, 1.5, -2.25, 10.0, 1e20, 0.1, -0.5};
                return Literal::ofFloat(pick(fs));
            }
            case 2: {
                static const std::vector<std::string> ss = {"", "a", "hello world", "q\"uote", "back\\slash", "nl\n",
                                                            "tab\t", "(*", "[@x]"};
                return Literal::ofString(pick(ss));
            }
            default: {
                static const std::vector<char> cs = {'a', ' ', '\n', '\'', '\\', '0', '"', '\x01'};
                return Literal::ofChar(pick(cs));
            }
        }
    }

    Attrs exprAttrs() {
        Attrs a;
        if (chance(0.9)) return a;
        if (chance(0.5)) a.notHashes.push_back("0123456789abcdef");
        if (chance(0.3)) a.notHashes.push_back("fedcba9876543210");
        if (chance(0.4)) a.pending = true;
        if (chance(0.3)) a.other.push_back("custom \"payload]\"");
        return a;
    }

    Attrs bindAttrs() {
        Attrs a;
        if (chance(0.5)) a.pos = std::make_pair(below(400) - 20, below(300));
        if (chance(0.1)) a.other.push_back("inline");
        return a;
    }

    Pattern simplePattern(int depth) {
        int r = below(10);
        if (r < 6 || depth <= 0) return Pattern::var(ident());
        if (r < 7) return Pattern::wild();
        if (r < 8) return Pattern::unit();
        std::vector<Pattern> parts;
        int n = 2 + below(2);
        for (int i = 0; i < n; ++i) parts.push_back(simplePattern(depth - 1));
        return Pattern::tuple(std::move(parts));
    }

    Pattern ctorPattern(const CtorInfo& c) {
        std::vector<Pattern> args;
        for (std::size_t i = 0; i < c.args.size(); ++i)
            args.push_back(chance(0.85) ? Pattern::var(ident()) : Pattern::wild());
        if (c.args.size() == 1 && chance(0.15))
            args[0] = Pattern::tuple({Pattern::var(ident()), Pattern::var(ident())});
        return Pattern::ctor(c.name, std::move(args));
    }

    Expr expr(const CtorTable& ctors, int depth) {
        Expr e = exprBare(ctors, depth);
        e.attrs = exprAttrs();
        return e;
    }

    Expr exprBare(const CtorTable& ctors, int depth) {
        int r = depth <= 0 ? below(4) : below(14);
        switch (r) {
            case 0: return Expr::hole();
            case 1: return Expr::constant(literal());
            case 2: return Expr::var(ident());
            case 3: return ctorExpr(ctors, depth);
            case 4: {
                static const std::vector<std::string> ops = {"+", "-", "*", "/", "=", "<", "<>", "&&", "||",
                                                            "^", "@", "mod", "**", "+.", "<="};
                return Expr::app(Expr::var(pick(ops)), {expr(ctors, depth - 1), expr(ctors, depth - 1)});
            }
            case 5: {
                std::vector<Expr> args;
                int n = 1 + below(3);
                for (int i = 0; i < n; ++i) args.push_back(expr(ctors, depth - 1));
                Expr head = chance(0.8) ? Expr::var(ident()) : expr(ctors, depth - 1);
                if (chance(0.1)) head = Expr::var("+");
                return Expr::app(std::move(head), std::move(args));
            }
            case 6: return Expr::fun(simplePattern(1), expr(ctors, depth - 1));
            case 7: {
                Expr e = Expr::let(chance(0.2), simplePattern(1), expr(ctors, depth - 1), expr(ctors, depth - 1));
                e.bindAttrs = bindAttrs();
                return e;
            }
            case 8: {
                std::vector<Expr> parts;
                int n = 2 + below(2);
                for (int i = 0; i < n; ++i) parts.push_back(expr(ctors, depth - 1));
                return Expr::tuple(std::move(parts));
            }
            case 9: return Expr::ifThenElse(expr(ctors, depth - 1), expr(ctors, depth - 1), expr(ctors, depth - 1));
            case 10:
            case 11: {
                const auto& decls = ctors.decls();
                const TypeDecl& d = decls[static_cast<std::size_t>(below(static_cast<int>(decls.size())))];
                std::vector<std::pair<Pattern, Expr>> arms;
                for (const auto& c : d.ctors)
                    if (chance(0.8) || arms.empty()) arms.emplace_back(ctorPattern(*ctors.find(c.name)), expr(ctors, depth - 1));
                return Expr::match(expr(ctors, depth - 1), std::move(arms));
            }
            case 12: return Expr::app(Expr::var(chance(0.5) ? "~-" : "~-."), {expr(ctors, depth - 1)});
            default: {
                // list literal
                Expr l = Expr::ctor("[]");
                int n = below(4);
                for (int i = 0; i < n; ++i) l = Expr::ctor("::", {expr(ctors, depth - 1), std::move(l)});
                return l;
            }
        }
    }

    Expr ctorExpr(const CtorTable& ctors, int depth) {
        const auto& decls = ctors.decls();
        const TypeDecl& d = decls[static_cast<std::size_t>(below(static_cast<int>(decls.size())))];
        const CtorDecl& c = pick(d.ctors);
        std::vector<Expr> args;
        for (std::size_t i = 0; i < c.args.size(); ++i) args.push_back(expr(ctors, depth - 1));
        if (c.args.size() == 1 && chance(0.2))
            args[0] = Expr::tuple({expr(ctors, depth - 1), expr(ctors, depth - 1)});
        return Expr::ctor(c.name, std::move(args));
    }

    TypeExpr typeExpr(const std::vector<std::string>& params, const std::string& self, int depth) {
        TypeExpr t;
        int r = depth <= 0 ? below(3) : below(6);
        if (r == 0 && !params.empty()) {
            t.kind = TypeExpr::Kind::Var;
            t.name = pick(params);
            return t;
        }
        if (r <= 1) {
            t.name = chance(0.5) ? "int" : "string";
            return t;
        }
        if (r == 2) {
            t.name = self;
            for (const auto& p : params) {
                TypeExpr v;
                v.kind = TypeExpr::Kind::Var;
                v.name = p;
                t.args.push_back(v);
            }
            return t;
        }
        if (r == 3) {
            t.name = "list";
            t.args.push_back(typeExpr(params, self, depth - 1));
            return t;
        }
        if (r == 4) {
            t.kind = TypeExpr::Kind::Tuple;
            t.args = {typeExpr(params, self, depth - 1), typeExpr(params, self, depth - 1)};
            return t;
        }
        t.kind = TypeExpr::Kind::Arrow;
        t.args = {typeExpr(params, self, depth - 1), typeExpr(params, self, depth - 1)};
        return t;
    }

    Program program(int items) {
        Program p;
        int ntypes = below(3);
        static const std::vector<std::string> tnames = {"tree", "nat", "shape"};
        static const std::vector<std::vector<std::string>> cnames = {
            {"Leaf", "Node"}, {"Z", "S"}, {"Circle", "Rect", "Tri"}};
        for (int i = 0; i < ntypes; ++i) {
            TypeDecl d;
            d.name = tnames[static_cast<std::size_t>(i)];
            if (chance(0.5)) d.params.push_back("a");
            if (chance(0.2)) d.params.push_back("b");
            for (const auto& cn : cnames[static_cast<std::size_t>(i)]) {
                CtorDecl c;
                c.name = cn;
                int nargs = below(4);
                for (int k = 0; k < nargs; ++k) c.args.push_back(typeExpr(d.params, d.name, 2));
                d.ctors.push_back(std::move(c));
            }
            p.types.push_back(std::move(d));
        }
        CtorTable ctors(p.types);
        for (int i = 0; i < items; ++i) {
            TopItem item;
            if (chance(0.2)) {
                item.kind = ItemKind::Assert;
                item.pat = Pattern::unit();
                item.expr = expr(ctors, 3);
                item.expected = expr(ctors, 2);
            } else {
                item.rec = chance(0.3);
                item.pat = chance(0.85) ? Pattern::var(ident()) : simplePattern(2);
                item.expr = expr(ctors, 4);
            }
            item.attrs = bindAttrs();
            p.items.push_back(std::move(item));
        }
        assignIds(p);
        return p;
    }

    /// Programs whose let-bound names are unique within each indentation scope,
    /// written in arbitrary order and referencing names that may be bound later.
    Program scopedProgram(int items) {
        Program p;
        std::vector<std::string> names = scopeNames(items);
        for (int i = 0; i < items; ++i) {
            TopItem item;
            if (chance(0.15)) {
                item.kind = ItemKind::Assert;
                item.pat = Pattern::unit();
                avail_ = pool();
                item.expr = scopedExpr(3);
                item.expected = Expr::constant(Literal::ofInt(below(3)));
            } else {
                item.pat = Pattern::var(names[static_cast<std::size_t>(i)]);
                avail_ = pool();
                std::shuffle(avail_.begin(), avail_.end(), rng_);
                item.expr = chance(0.5) ? Expr::fun(Pattern::var(binder()), scopedExpr(3)) : scopedExpr(3);
                if (chance(0.3)) item.attrs.pos = std::make_pair(below(300), below(300));
            }
            p.items.push_back(std::move(item));
        }
        assignIds(p);
        return p;
    }

    Expr scopedExpr(int depth) {
        int k = depth <= 0 ? below(2) : below(8);
        switch (k) {
            case 0: return Expr::var(pick(pool()));
            case 1: return chance(0.7) ? Expr::constant(Literal::ofInt(below(4))) : Expr::hole();
            case 2: {
                std::vector<Expr> args;
                int n = 1 + below(2);
                for (int i = 0; i < n; ++i) args.push_back(scopedExpr(depth - 1));
                return Expr::app(Expr::var(pick(pool())), std::move(args));
            }
            case 3: return Expr::tuple({scopedExpr(depth - 1), scopedExpr(depth - 1)});
            case 4:
            case 5: {
                int n = 1 + below(3);
                std::vector<std::string> names;
                for (int i = 0; i < n; ++i) names.push_back(binder());
                Expr body = scopedExpr(depth - 1);
                for (int i = n - 1; i >= 0; --i)
                    body = Expr::let(false, Pattern::var(names[static_cast<std::size_t>(i)]), scopedExpr(depth - 1),
                                     std::move(body));
                return body;
            }
            case 6: {
                std::string param = binder();
                return Expr::fun(Pattern::var(param), scopedExpr(depth - 1));
            }
            default: {
                std::vector<std::pair<Pattern, Expr>> arms;
                arms.emplace_back(Pattern::ctor("[]", {}), scopedExpr(depth - 1));
                arms.emplace_back(Pattern::ctor("::", {Pattern::var("hd"), Pattern::var("tl")}), scopedExpr(depth - 1));
                return Expr::match(Expr::var(pick(pool())), std::move(arms));
            }
        }
    }

private:
    std::mt19937_64 rng_;
    std::vector<std::string> avail_;
    int extra_ = 0;

    // A binder name not yet used in the current top-level definition.
    std::string binder() {
        if (avail_.empty()) return "v" + std::to_string(++extra_);
        std::string n = avail_.back();
        avail_.pop_back();
        return n;
    }

    static const std::vector<std::string>& pool() {
        static const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f", "g", "h"};
        return names;
    }

    std::vector<std::string> scopeNames(int n) {
        std::vector<std::string> names = pool();
        std::shuffle(names.begin(), names.end(), rng_);
        names.resize(static_cast<std::size_t>(std::min<int>(n, static_cast<int>(names.size()))));
        while (static_cast<int>(names.size()) < n) names.push_back("v" + std::to_string(names.size()));
        return names;
    }
};

}  // namespace manipos::testgen
