#include <algorithm>

#include "synth/synth.hpp"
#include "syntax/parse.hpp"
#include "syntax/print.hpp"
#include "types/pervasives.hpp"

namespace manipos {

namespace {

struct NameOption {
    std::string name;
    double price;  // without the expression-kind production
    Scheme scheme;
    bool nonConstant;
};

struct CtorOption {
    std::string name;
    double price;
    std::size_t arity;
};

using Yield = std::function<bool(const Expr&, double, bool)>;

class Guesser {
public:
    Guesser(TypeStore& st, const GuessScope& scope, const CtorTable& ctors, const PcfgModel& pcfg)
        : st_(st), level_(scope.level), ctors_(ctors), pcfg_(pcfg) {
        std::size_t rank = 0;
        for (const auto& l : scope.locals)
            names_.push_back(NameOption{l.name, pcfg.localName * pcfg.recencyAt(++rank), l.scheme, l.nonConstant});
        for (const auto& sig : pervasiveSigs()) {
            bool shadowed = false;
            for (const auto& l : scope.locals) shadowed = shadowed || l.name == sig.name;
            if (shadowed) continue;
            std::map<std::string, Ty> params;
            Ty t = st.fromSurface(parseTypeExpr(sig.type), params, level_ + 1);
            names_.push_back(NameOption{sig.name, pcfg.pervasiveName * pcfg.pervasiveNamePrice(sig.name),
                                        st.generalize(t, level_), false});
        }
        std::stable_sort(names_.begin(), names_.end(),
                         [](const NameOption& a, const NameOption& b) { return a.price > b.price; });

        std::size_t users = ctors.userCtors().size();
        for (const auto& decl : ctors.decls())
            for (const auto& c : decl.ctors) {
                const CtorInfo* info = ctors.find(c.name);
                double price;
                if (info->builtin) {
                    auto it = pcfg.pervasiveCtors.find(c.name);
                    if (it == pcfg.pervasiveCtors.end()) continue;
                    price = pcfg.pervasiveCtor * it->second;
                } else {
                    price = pcfg.userCtor / static_cast<double>(users);
                }
                ctorOpts_.push_back(CtorOption{c.name, price, c.args.size()});
            }
        std::stable_sort(ctorOpts_.begin(), ctorOpts_.end(),
                         [](const CtorOption& a, const CtorOption& b) { return a.price > b.price; });

        for (const char* k : {"int", "string", "char", "float"}) {
            auto it = pcfg.constType.find(k);
            if (it == pcfg.constType.end()) continue;
            for (const auto& [lit, p] : pcfg.literals)
                if (std::string(k) == kindName(lit.kind)) lits_.emplace_back(lit, it->second * p);
        }
        std::stable_sort(lits_.begin(), lits_.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

        kinds_ = {{"var", pcfg.kind("var")}, {"app", pcfg.kind("app")}, {"ctor", pcfg.kind("ctor")},
                  {"const", pcfg.kind("const")}, {"if", pcfg.kind("if")}};
        std::stable_sort(kinds_.begin(), kinds_.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    }

    bool cut = false;

    bool gen(Ty goal, double budget, bool mustNonConst, const Yield& k) {
        for (const auto& [kind, p] : kinds_) {
            if (p < budget) {
                cut = true;
                continue;
            }
            bool go = true;
            if (kind == "var") go = vars(goal, budget, p, mustNonConst, k);
            else if (kind == "app") go = apps(goal, budget, p, k);
            else if (kind == "ctor") go = ctorTerms(goal, budget, p, mustNonConst, k);
            else if (kind == "const") go = mustNonConst || consts(goal, budget, p, k);
            else if (kind == "if") go = ifs(goal, budget, p, mustNonConst, k);
            if (!go) return false;
        }
        return true;
    }

private:
    TypeStore& st_;
    int level_;
    const CtorTable& ctors_;
    const PcfgModel& pcfg_;
    std::vector<NameOption> names_;
    std::vector<CtorOption> ctorOpts_;
    std::vector<std::pair<Literal, double>> lits_;
    std::vector<std::pair<std::string, double>> kinds_;

    static const char* kindName(Literal::Kind k) {
        switch (k) {
            case Literal::Kind::Int: return "int";
            case Literal::Kind::String: return "string";
            case Literal::Kind::Char: return "char";
            case Literal::Kind::Float: return "float";
        }
        return "";
    }

    Ty litType(const Literal& l) {
        switch (l.kind) {
            case Literal::Kind::Int: return st_.intTy();
            case Literal::Kind::String: return st_.stringTy();
            case Literal::Kind::Char: return st_.charTy();
            case Literal::Kind::Float: return st_.floatTy();
        }
        return st_.intTy();
    }

    // Runs `body` with `a` unified to `b`, then rolls the unification back.
    template <class F>
    bool unifying(Ty a, Ty b, F&& body) {
        std::size_t m = st_.mark();
        bool go = true;
        if (st_.unify(a, b)) go = body();
        st_.undo(m);
        return go;
    }

    bool vars(Ty goal, double budget, double pKind, bool must, const Yield& k) {
        for (const auto& n : names_) {
            double p = pKind * n.price;
            if (p < budget) {
                cut = true;
                break;
            }
            if (must && !n.nonConstant) continue;
            std::size_t nodes = st_.nodeCount();
            Ty t = st_.instantiate(n.scheme, level_);
            bool go = unifying(goal, t, [&] { return k(Expr::var(n.name), p, !n.nonConstant); });
            st_.shrink(nodes);
            if (!go) return false;
        }
        return true;
    }

    // Generates arguments `i..` of `tys`, then calls `done`.
    bool args(const std::vector<Ty>& tys, std::size_t i, double budget, double pSoFar, bool anyNonConst,
              std::vector<Expr>& acc, bool needNonConstArg,
              const std::function<bool(std::vector<Expr>&, double, bool)>& done) {
        if (i == tys.size()) return done(acc, pSoFar, anyNonConst);
        bool must = needNonConstArg && !anyNonConst && i + 1 == tys.size();
        return gen(tys[i], budget / pSoFar, must, [&](const Expr& a, double pa, bool c) {
            acc.push_back(a);
            bool go = args(tys, i + 1, budget, pSoFar * pa, anyNonConst || !c, acc, needNonConstArg, done);
            acc.pop_back();
            return go;
        });
    }

    bool apps(Ty goal, double budget, double pKind, const Yield& k) {
        for (const auto& n : names_) {
            double p0 = pKind * n.price;
            if (p0 < budget) {
                cut = true;
                break;
            }
            std::size_t nodes = st_.nodeCount();
            Ty t = TypeStore::repr(st_.instantiate(n.scheme, level_));
            std::vector<Ty> params;
            std::vector<Ty> results;
            while (t->kind == TyNode::Kind::Arrow && params.size() < 4) {
                params.push_back(t->args[0]);
                t = TypeStore::repr(t->args[1]);
                results.push_back(t);
            }
            for (std::size_t a = 1; a <= params.size(); ++a) {
                std::vector<Ty> tys(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(a));
                bool go = unifying(goal, results[a - 1], [&] {
                    std::vector<Expr> acc;
                    return args(tys, 0, budget, p0, false, acc, true, [&](std::vector<Expr>& as, double p, bool nonConst) {
                        if (!nonConst) return true;
                        return k(Expr::app(Expr::var(n.name), as), p, false);
                    });
                });
                if (!go) {
                    st_.shrink(nodes);
                    return false;
                }
            }
            st_.shrink(nodes);
        }
        return true;
    }

    bool ctorTerms(Ty goal, double budget, double pKind, bool must, const Yield& k) {
        for (const auto& c : ctorOpts_) {
            double p0 = pKind * c.price;
            if (p0 < budget) {
                cut = true;
                break;
            }
            if (must && c.arity == 0) continue;
            std::size_t nodes = st_.nodeCount();
            std::vector<Ty> tys;
            Ty result;
            instantiateCtor(st_, ctors_, c.name, level_, tys, result);
            bool go = unifying(goal, result, [&] {
                std::vector<Expr> acc;
                return args(tys, 0, budget, p0, false, acc, must, [&](std::vector<Expr>& as, double p, bool nonConst) {
                    return k(Expr::ctor(c.name, as), p, !nonConst);
                });
            });
            st_.shrink(nodes);
            if (!go) return false;
        }
        return true;
    }

    bool consts(Ty goal, double budget, double pKind, const Yield& k) {
        for (const auto& [lit, price] : lits_) {
            double p = pKind * price;
            if (p < budget) {
                cut = true;
                break;
            }
            std::size_t nodes = st_.nodeCount();
            bool go = unifying(goal, litType(lit), [&] { return k(Expr::constant(lit), p, true); });
            st_.shrink(nodes);
            if (!go) return false;
        }
        return true;
    }

    bool ifs(Ty goal, double budget, double pKind, bool must, const Yield& k) {
        std::size_t nodes = st_.nodeCount();
        std::vector<Ty> tys{st_.boolTy(), goal, goal};
        std::vector<Expr> acc;
        bool go = args(tys, 0, budget, pKind, false, acc, must, [&](std::vector<Expr>& as, double p, bool nonConst) {
            return k(Expr::ifThenElse(as[0], as[1], as[2]), p, !nonConst);
        });
        st_.shrink(nodes);
        return go;
    }
};

}  // namespace

bool guess(TypeStore& store, Ty goal, const GuessScope& scope, const CtorTable& ctors, const PcfgModel& pcfg,
           double bound, const ConstRules& rules, const std::function<bool(const Expr&, double, bool)>& yield) {
    std::size_t nodes = store.nodeCount();
    Guesser g(store, scope, ctors, pcfg);
    g.gen(goal, bound, !rules.allowConstant, [&](const Expr& e, double p, bool constant) {
        if (constant && rules.onlyConstant && printExpr(e) != *rules.onlyConstant) return true;
        return yield(e, p, constant);
    });
    store.shrink(nodes);
    return g.cut;
}

}  // namespace manipos
