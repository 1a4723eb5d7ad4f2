#include "types/infer.hpp"

#include "syntax/parse.hpp"
#include "syntax/print.hpp"
#include "types/pervasives.hpp"

namespace manipos {

bool instantiateCtor(TypeStore& store, const CtorTable& ctors, const std::string& ctor, int level,
                     std::vector<Ty>& args, Ty& result) {
    const CtorInfo* info = ctors.find(ctor);
    if (!info) return false;
    std::map<std::string, Ty> params;
    std::vector<Ty> targs;
    for (const auto& p : info->params) {
        Ty v = store.fresh(level);
        params[p] = v;
        targs.push_back(v);
    }
    args.clear();
    for (const auto& a : info->args) args.push_back(store.fromSurface(a, params, level));
    result = store.con(info->typeName, std::move(targs));
    return true;
}

namespace {

class Inferer {
public:
    Inferer(Typing& out, const CtorTable& ctors, const InferOptions& opts)
        : out_(out), st_(*out.store), ctors_(ctors), opts_(opts) {
        for (const auto& sig : pervasiveSigs()) {
            std::map<std::string, Ty> params;
            Ty t = st_.fromSurface(parseTypeExpr(sig.type), params, 1);
            out_.pervasives[sig.name] = st_.generalize(t, 0);
        }
    }

    void program(const Program& p) {
        for (std::size_t i = 0; i < p.items.size(); ++i) {
            topIndex_ = i;
            const TopItem& item = p.items[i];
            if (item.kind == ItemKind::Assert) {
                Ty l = expr(item.expr, 0);
                Ty r = expr(item.expected, 0);
                unify(l, r, item.expected.id, "assertion sides have different types");
                continue;
            }
            std::vector<LocalName> bound = binding(item.pat, item.expr, 0, true);
            for (auto& b : bound) {
                out_.topBindings.push_back(TopBinding{b.name, b.scheme, i, b.binder});
                env_.push_back(std::move(b));
            }
        }
    }

private:
    Typing& out_;
    TypeStore& st_;
    const CtorTable& ctors_;
    const InferOptions& opts_;
    std::vector<LocalName> env_;
    int funDepth_ = 0;
    std::size_t topIndex_ = 0;

    void error(NodeId n, std::string msg) { out_.errors.push_back(TypeErrorInfo{n, std::move(msg)}); }

    void unify(Ty a, Ty b, NodeId at, const char* what) {
        std::size_t m = st_.mark();
        if (!st_.unify(a, b)) {
            st_.undo(m);
            error(at, std::string(what) + ": " + st_.show(a) + " vs " + st_.show(b));
        }
    }

    const LocalName* lookup(const std::string& name) const {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->name == name) return &*it;
        return nullptr;
    }

    void bindNames(const Pattern& p, std::vector<LocalName>& out, int level, bool generalize) {
        if (p.kind == PatKind::Var) {
            Ty t = out_.patTypes.at(p.id);
            LocalName n;
            n.name = p.name;
            n.scheme = generalize ? st_.generalize(t, level) : TypeStore::mono(t);
            n.binder = p.id;
            n.nonConstant = funDepth_ > 0;
            out.push_back(std::move(n));
        }
        for (const auto& a : p.args) bindNames(a, out, level, generalize);
    }

    Ty pattern(const Pattern& p, int level) {
        Ty t = nullptr;
        switch (p.kind) {
            case PatKind::Var:
            case PatKind::Wild:
                t = st_.fresh(level);
                break;
            case PatKind::Tuple: {
                std::vector<Ty> parts;
                for (const auto& a : p.args) parts.push_back(pattern(a, level));
                t = st_.tuple(std::move(parts));
                break;
            }
            case PatKind::Ctor: {
                std::vector<Ty> args;
                if (!instantiateCtor(st_, ctors_, p.name, level, args, t)) {
                    error(p.id, "unknown constructor " + p.name);
                    t = st_.fresh(level);
                    for (const auto& a : p.args) pattern(a, level);
                    break;
                }
                if (args.size() != p.args.size()) {
                    error(p.id, "constructor " + p.name + " expects " + std::to_string(args.size()) + " arguments");
                    for (const auto& a : p.args) pattern(a, level);
                    break;
                }
                for (std::size_t i = 0; i < args.size(); ++i) unify(args[i], pattern(p.args[i], level), p.args[i].id, "pattern");
                break;
            }
        }
        out_.patTypes[p.id] = t;
        return t;
    }

    // Types `lhs = rhs` at `level` and returns the names it binds, generalized.
    std::vector<LocalName> binding(const Pattern& lhs, const Expr& rhs, int level, bool top) {
        Ty pt = pattern(lhs, level + 1);
        std::size_t envSize = env_.size();
        if (lhs.kind == PatKind::Var) {
            LocalName self;
            self.name = lhs.name;
            self.scheme = TypeStore::mono(pt);
            self.binder = lhs.id;
            self.nonConstant = funDepth_ > 0;
            env_.push_back(std::move(self));
        }
        Ty rt = expr(rhs, level + 1);
        env_.resize(envSize);
        if (top && lhs.kind == PatKind::Var) {
            auto it = opts_.speculative.find(lhs.name);
            if (it != opts_.speculative.end()) {
                std::map<std::string, Ty> params;
                Ty spec = st_.fromSurface(it->second, params, level + 1);
                std::size_t m = st_.mark();
                if (!st_.unify(rt, spec)) st_.undo(m);
            }
        }
        unify(pt, rt, rhs.id, "binding");
        std::vector<LocalName> names;
        bindNames(lhs, names, level, true);
        return names;
    }

    Ty expr(const Expr& e, int level) {
        Ty t = exprInner(e, level);
        out_.exprTypes[e.id] = t;
        return t;
    }

    Ty exprInner(const Expr& e, int level) {
        switch (e.kind) {
            case ExprKind::Hole: {
                Ty t = st_.fresh(level);
                HoleContext hc;
                hc.hole = e.id;
                hc.goal = t;
                hc.level = level;
                hc.topIndex = topIndex_;
                std::vector<std::string> seen;
                for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
                    bool shadowed = false;
                    for (const auto& s : seen) shadowed = shadowed || s == it->name;
                    if (shadowed) continue;
                    seen.push_back(it->name);
                    hc.locals.push_back(*it);
                }
                out_.holes[e.id] = std::move(hc);
                return t;
            }
            case ExprKind::Const:
                switch (e.lit.kind) {
                    case Literal::Kind::Int: return st_.intTy();
                    case Literal::Kind::Float: return st_.floatTy();
                    case Literal::Kind::String: return st_.stringTy();
                    case Literal::Kind::Char: return st_.charTy();
                }
                return st_.fresh(level);
            case ExprKind::Var: {
                if (const LocalName* n = lookup(e.name)) return st_.instantiate(n->scheme, level);
                auto it = out_.pervasives.find(e.name);
                if (it != out_.pervasives.end()) return st_.instantiate(it->second, level);
                error(e.id, "unbound variable " + e.name);
                return st_.fresh(level);
            }
            case ExprKind::Ctor: {
                std::vector<Ty> args;
                Ty result;
                if (!instantiateCtor(st_, ctors_, e.name, level, args, result)) {
                    error(e.id, "unknown constructor " + e.name);
                    for (const auto& k : e.kids) expr(k, level);
                    return st_.fresh(level);
                }
                if (args.size() != e.kids.size()) {
                    error(e.id, "constructor " + e.name + " expects " + std::to_string(args.size()) + " arguments");
                    for (const auto& k : e.kids) expr(k, level);
                    return result;
                }
                for (std::size_t i = 0; i < args.size(); ++i) unify(args[i], expr(e.kids[i], level), e.kids[i].id, "constructor argument");
                return result;
            }
            case ExprKind::Fun: {
                Ty pt = pattern(e.pats[0], level);
                std::vector<LocalName> names;
                ++funDepth_;
                bindNames(e.pats[0], names, level, false);
                std::size_t envSize = env_.size();
                for (auto& n : names) env_.push_back(std::move(n));
                Ty bt = expr(e.kids[0], level);
                env_.resize(envSize);
                --funDepth_;
                return st_.arrow(pt, bt);
            }
            case ExprKind::App: {
                Ty ft = expr(e.kids[0], level);
                for (std::size_t i = 1; i < e.kids.size(); ++i) {
                    Ty at = expr(e.kids[i], level);
                    Ty res = st_.fresh(level);
                    Ty f = TypeStore::repr(ft);
                    if (f->kind == TyNode::Kind::Arrow) {
                        unify(f->args[0], at, e.kids[i].id, "argument");
                        ft = f->args[1];
                    } else {
                        unify(ft, st_.arrow(at, res), e.kids[i].id, "application");
                        ft = res;
                    }
                }
                return ft;
            }
            case ExprKind::Let: {
                std::vector<LocalName> names = binding(e.pats[0], e.kids[0], level, false);
                std::size_t envSize = env_.size();
                for (auto& n : names) env_.push_back(std::move(n));
                Ty bt = expr(e.kids[1], level);
                env_.resize(envSize);
                return bt;
            }
            case ExprKind::Tuple: {
                std::vector<Ty> parts;
                for (const auto& k : e.kids) parts.push_back(expr(k, level));
                return st_.tuple(std::move(parts));
            }
            case ExprKind::If: {
                unify(expr(e.kids[0], level), st_.boolTy(), e.kids[0].id, "condition");
                Ty t = expr(e.kids[1], level);
                unify(t, expr(e.kids[2], level), e.kids[2].id, "branches");
                return t;
            }
            case ExprKind::Match: {
                Ty st = expr(e.kids[0], level);
                Ty result = st_.fresh(level);
                for (std::size_t i = 0; i < e.pats.size(); ++i) {
                    unify(st, pattern(e.pats[i], level), e.pats[i].id, "match pattern");
                    std::vector<LocalName> names;
                    bindNames(e.pats[i], names, level, false);
                    std::size_t envSize = env_.size();
                    for (auto& n : names) env_.push_back(std::move(n));
                    unify(result, expr(e.kids[i + 1], level), e.kids[i + 1].id, "match branch");
                    env_.resize(envSize);
                }
                return result;
            }
        }
        return st_.fresh(level);
    }
};

}  // namespace

Typing inferProgram(const Program& p, const CtorTable& ctors, const InferOptions& opts) {
    Typing out;
    Inferer inf(out, ctors, opts);
    inf.program(p);
    return out;
}

}  // namespace manipos
