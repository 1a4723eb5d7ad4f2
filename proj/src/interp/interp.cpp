#include "interp/interp.hpp"

#include <cmath>
#include <limits>

#include "syntax/scope.hpp"
#include "types/pervasives.hpp"

namespace manipos {

namespace {

struct FuelExhausted {};

enum class MatchResult { Match, NoMatch, Stuck };

std::size_t patternSize(const Pattern& p) {
    std::size_t n = 1;
    for (const auto& a : p.args) n += patternSize(a);
    return n;
}

int chainArity(const Expr& fun) {
    int n = 1;
    const Expr* cur = &fun.kids[0];
    while (cur->kind == ExprKind::Fun && cur->attrs.empty()) {
        ++n;
        cur = &cur->kids[0];
    }
    return n;
}

class Machine {
public:
    Machine(const Program& p, const RunOptions& opts, RunResult& out)
        : prog_(p), ctors_(p.types), opts_(opts), out_(out) {}

    void runAll() {
        std::vector<bool> needed(prog_.items.size(), true);
        if (opts_.assertsOnly) computeNeeded(needed);
        EnvPtr env;
        for (std::size_t i = 0; i < prog_.items.size(); ++i) {
            if (!needed[i]) continue;
            topIndex_ = static_cast<std::uint32_t>(i);
            const TopItem& item = prog_.items[i];
            frame_ = 0;
            fuel_ = opts_.fuel.perTopBinding;
            if (item.kind == ItemKind::Assert) {
                if (!assertion(item, env) && opts_.stopAtFailure) break;
                continue;
            }
            env = topBinding(item, env);
        }
        out_.topEnv = env;
    }

private:
    const Program& prog_;
    CtorTable ctors_;
    const RunOptions& opts_;
    RunResult& out_;
    int fuel_ = 0;
    int floor_ = 0;
    std::uint32_t frame_ = 0;
    std::uint32_t frameCounter_ = 0;
    std::uint32_t topIndex_ = 0;
    std::uint64_t serial_ = 0;

    void computeNeeded(std::vector<bool>& needed) {
        std::set<std::string> names;
        for (const auto& item : prog_.items) {
            if (item.kind != ItemKind::Assert) continue;
            for (auto& n : freeVars(item.expr)) names.insert(n);
            for (auto& n : freeVars(item.expected)) names.insert(n);
        }
        for (std::size_t k = prog_.items.size(); k-- > 0;) {
            const TopItem& item = prog_.items[k];
            if (item.kind == ItemKind::Assert) continue;
            bool use = false;
            for (auto& n : item.pat.boundNames()) use = use || names.count(n);
            needed[k] = use;
            if (use)
                for (auto& n : freeVars(item.expr)) names.insert(n);
        }
    }

    void tick() {
        if (fuel_ <= floor_) throw FuelExhausted{};
        --fuel_;
        ++out_.stepsUsed;
    }

    ValuePtr mk(VKind k) {
        auto v = std::make_shared<Value>();
        v->kind = k;
        v->serial = ++serial_;
        return v;
    }

    ValuePtr bomb() { return mk(VKind::Bomb); }

    ValuePtr boolean(bool b) {
        ValuePtr v = mk(VKind::Ctor);
        v->s = b ? "true" : "false";
        return v;
    }

    void record(NodeId node, const ValuePtr& v, const EnvPtr& env, EntryKind kind) {
        if (!opts_.trace || !node.valid()) return;
        out_.byNode[node].push_back(out_.trace.size());
        out_.trace.push_back(TraceEntry{node, frame_, v, env, kind, topIndex_});
        v->visits.push_back(Visit{frame_, node});
    }

    bool assertion(const TopItem& item, const EnvPtr& env) {
        ValuePtr actual;
        ValuePtr expected;
        floor_ = std::min(opts_.fuel.reservePerInnerBinding, opts_.fuel.perTopBinding - 1);
        try {
            actual = eval(item.expr, env);
        } catch (const FuelExhausted&) {
            actual = bomb();
        }
        floor_ = 0;
        try {
            expected = eval(item.expected, env);
        } catch (const FuelExhausted&) {
            expected = bomb();
        }
        Verdict v = valuesEqual(*actual, *expected);
        out_.asserts.push_back(AssertRecord{item.id, item.expr.id, item.expected.id, actual, expected, v});
        return v != Verdict::Fail;
    }

    EnvPtr topBinding(const TopItem& item, const EnvPtr& env) {
        floor_ = static_cast<int>(std::min<std::size_t>(patternSize(item.pat), opts_.fuel.perTopBinding - 1));
        std::shared_ptr<EnvNode> knot;
        EnvPtr rhsEnv = env;
        if (item.rec && item.pat.kind == PatKind::Var) {
            knot = std::make_shared<EnvNode>();
            knot->name = item.pat.name;
            knot->next = env;
            rhsEnv = knot;
        }
        ValuePtr v;
        try {
            v = eval(item.expr, rhsEnv);
        } catch (const FuelExhausted&) {
            v = bomb();
        }
        floor_ = 0;
        nameClosure(item.pat, v);
        if (knot) {
            knot->value = v;
            tick();
            record(item.pat.id, v, knot, EntryKind::PatternBind);
            return knot;
        }
        try {
            return bindPattern(item.pat, v, env);
        } catch (const FuelExhausted&) {
            return bindAllBomb(item.pat, env);
        }
    }

    EnvPtr bindAllBomb(const Pattern& p, EnvPtr env) {
        for (auto& n : p.boundNames()) env = bind(std::move(env), n, bomb());
        return env;
    }

    static void nameClosure(const Pattern& p, const ValuePtr& v) {
        if (p.kind == PatKind::Var && (v->kind == VKind::Closure || v->kind == VKind::Prim) && v->s.empty()) v->s = p.name;
    }

    EnvPtr bindPattern(const Pattern& p, const ValuePtr& v, EnvPtr env) {
        tick();
        switch (p.kind) {
            case PatKind::Var:
                env = bind(std::move(env), p.name, v);
                break;
            case PatKind::Wild:
                break;
            case PatKind::Tuple:
            case PatKind::Ctor: {
                bool fits = p.kind == PatKind::Tuple ? v->kind == VKind::Tuple : (v->kind == VKind::Ctor && v->s == p.name);
                fits = fits && v->items.size() == p.args.size();
                for (std::size_t i = 0; i < p.args.size(); ++i)
                    env = bindPattern(p.args[i], fits ? v->items[i] : bomb(), std::move(env));
                break;
            }
        }
        record(p.id, v, env, EntryKind::PatternBind);
        return env;
    }

    static MatchResult matches(const Pattern& p, const Value& v) {
        switch (p.kind) {
            case PatKind::Var:
            case PatKind::Wild:
                return MatchResult::Match;
            case PatKind::Tuple:
            case PatKind::Ctor: {
                if (v.isHoleOrBomb()) return MatchResult::Stuck;
                if (p.kind == PatKind::Ctor && (v.kind != VKind::Ctor || v.s != p.name)) return MatchResult::NoMatch;
                if (p.kind == PatKind::Tuple && v.kind != VKind::Tuple) return MatchResult::NoMatch;
                if (v.items.size() != p.args.size()) return MatchResult::NoMatch;
                for (std::size_t i = 0; i < p.args.size(); ++i) {
                    MatchResult r = matches(p.args[i], *v.items[i]);
                    if (r != MatchResult::Match) return r;
                }
                return MatchResult::Match;
            }
        }
        return MatchResult::NoMatch;
    }

    ValuePtr eval(const Expr& e, const EnvPtr& env) {
        tick();
        ValuePtr v = evalInner(e, env);
        record(e.id, v, env, EntryKind::EvalResult);
        return v;
    }

    ValuePtr evalInner(const Expr& e, const EnvPtr& env) {
        switch (e.kind) {
            case ExprKind::Hole: {
                if (opts_.fills) {
                    auto it = opts_.fills->find(e.id);
                    if (it != opts_.fills->end()) {
                        out_.filledHolesVisited.insert(e.id);
                        return eval(*it->second, env);
                    }
                }
                ValuePtr v = mk(VKind::Hole);
                v->intro = e.id;
                v->env = env;
                return v;
            }
            case ExprKind::Const: {
                ValuePtr v;
                switch (e.lit.kind) {
                    case Literal::Kind::Int: v = mk(VKind::Int); v->i = e.lit.i; break;
                    case Literal::Kind::Float: v = mk(VKind::Float); v->f = e.lit.f; break;
                    case Literal::Kind::String: v = mk(VKind::String); v->s = e.lit.s; break;
                    case Literal::Kind::Char: v = mk(VKind::Char); v->c = e.lit.c; break;
                }
                return v;
            }
            case ExprKind::Var: {
                for (const EnvNode* n = env.get(); n; n = n->next.get())
                    if (n->name == e.name) return n->value ? n->value : bomb();
                if (const PervasiveSig* sig = findPervasive(e.name)) {
                    ValuePtr v = mk(VKind::Prim);
                    v->prim = sig;
                    v->arity = sig->arity;
                    v->s = e.name;
                    return v;
                }
                return bomb();
            }
            case ExprKind::Ctor:
            case ExprKind::Tuple: {
                ValuePtr v = mk(e.kind == ExprKind::Ctor ? VKind::Ctor : VKind::Tuple);
                v->s = e.name;
                v->items.reserve(e.kids.size());
                for (const auto& k : e.kids) v->items.push_back(eval(k, env));
                if (e.kind == ExprKind::Ctor) {
                    int ar = ctors_.arity(e.name);
                    if (ar < 0 || static_cast<std::size_t>(ar) != v->items.size()) return bomb();
                }
                return v;
            }
            case ExprKind::Fun: {
                ValuePtr v = mk(VKind::Closure);
                v->fun = &e;
                v->arity = chainArity(e);
                v->env = env;
                v->intro = e.id;
                return v;
            }
            case ExprKind::App: return evalApp(e, env);
            case ExprKind::Let: return evalLet(e, env);
            case ExprKind::If: {
                ValuePtr c = eval(e.kids[0], env);
                if (c->kind == VKind::Ctor && c->items.empty()) {
                    if (c->s == "true") return eval(e.kids[1], env);
                    if (c->s == "false") return eval(e.kids[2], env);
                }
                return bomb();
            }
            case ExprKind::Match: {
                ValuePtr s = eval(e.kids[0], env);
                if (s->isHoleOrBomb()) return bomb();
                for (std::size_t i = 0; i < e.pats.size(); ++i) {
                    MatchResult r = matches(e.pats[i], *s);
                    if (r == MatchResult::Stuck) return bomb();
                    if (r == MatchResult::NoMatch) continue;
                    EnvPtr armEnv = bindPattern(e.pats[i], s, env);
                    return eval(e.kids[i + 1], armEnv);
                }
                return bomb();
            }
        }
        return bomb();
    }

    ValuePtr evalLet(const Expr& e, const EnvPtr& env) {
        const Pattern& pat = e.pats[0];
        std::shared_ptr<EnvNode> knot;
        EnvPtr rhsEnv = env;
        if (e.rec && pat.kind == PatKind::Var) {
            knot = std::make_shared<EnvNode>();
            knot->name = pat.name;
            knot->next = env;
            rhsEnv = knot;
        }
        int saved = floor_;
        int reserved = floor_ + opts_.fuel.reservePerInnerBinding;
        ValuePtr v;
        if (fuel_ <= reserved) {
            v = bomb();
        } else {
            floor_ = reserved;
            try {
                v = eval(e.kids[0], rhsEnv);
            } catch (const FuelExhausted&) {
                v = bomb();
            }
            floor_ = saved;
        }
        nameClosure(pat, v);
        EnvPtr bodyEnv;
        if (knot) {
            knot->value = v;
            tick();
            record(pat.id, v, knot, EntryKind::PatternBind);
            bodyEnv = knot;
        } else {
            bodyEnv = bindPattern(pat, v, env);
        }
        return eval(e.kids[1], bodyEnv);
    }

    bool isShortCircuit(const Expr& e, const EnvPtr& env) const {
        if (e.kids.size() != 3) return false;
        const Expr& h = e.kids[0];
        if (h.kind != ExprKind::Var || (h.name != "&&" && h.name != "||")) return false;
        for (const EnvNode* n = env.get(); n; n = n->next.get())
            if (n->name == h.name) return false;
        return true;
    }

    ValuePtr evalApp(const Expr& e, const EnvPtr& env) {
        if (isShortCircuit(e, env)) {
            bool isAnd = e.kids[0].name == "&&";
            ValuePtr a = eval(e.kids[1], env);
            if (a->kind != VKind::Ctor || !a->items.empty() || (a->s != "true" && a->s != "false")) return bomb();
            bool av = a->s == "true";
            if (isAnd && !av) return boolean(false);
            if (!isAnd && av) return boolean(true);
            ValuePtr b = eval(e.kids[2], env);
            if (b->kind != VKind::Ctor || !b->items.empty() || (b->s != "true" && b->s != "false")) return bomb();
            return boolean(b->s == "true");
        }
        ValuePtr f = eval(e.kids[0], env);
        std::vector<ValuePtr> args;
        args.reserve(e.kids.size() - 1);
        for (std::size_t i = 1; i < e.kids.size(); ++i) args.push_back(eval(e.kids[i], env));
        return apply(std::move(f), std::move(args));
    }

    ValuePtr apply(ValuePtr f, std::vector<ValuePtr> args) {
        while (!args.empty()) {
            if (f->kind == VKind::Hole) {
                ValuePtr b = bomb();
                b->cause = f;
                b->items = std::move(args);
                return b;
            }
            if (f->kind != VKind::Closure && f->kind != VKind::Prim) return bomb();
            std::vector<ValuePtr> all = f->items;
            all.insert(all.end(), args.begin(), args.end());
            if (static_cast<int>(all.size()) < f->arity) {
                ValuePtr p = mk(f->kind);
                p->fun = f->fun;
                p->arity = f->arity;
                p->prim = f->prim;
                p->env = f->env;
                p->intro = f->intro;
                p->s = f->s;
                p->items = std::move(all);
                return p;
            }
            std::vector<ValuePtr> callArgs(all.begin(), all.begin() + f->arity);
            args.assign(all.begin() + f->arity, all.end());
            f = f->kind == VKind::Closure ? call(*f, callArgs) : applyPrim(*f->prim, callArgs);
        }
        return f;
    }

    ValuePtr call(const Value& closure, const std::vector<ValuePtr>& args) {
        std::uint32_t parent = frame_;
        std::uint32_t me = ++frameCounter_;
        std::size_t rec = out_.calls.size();
        if (opts_.trace) out_.calls.push_back(CallRecord{me, parent, closure.intro, args, nullptr});
        struct Restore {
            std::uint32_t& frame;
            std::uint32_t value;
            ~Restore() { frame = value; }
        } restore{frame_, parent};
        frame_ = me;
        EnvPtr env = closure.env;
        const Expr* cur = closure.fun;
        for (const auto& a : args) {
            env = bindPattern(cur->pats[0], a, std::move(env));
            cur = &cur->kids[0];
        }
        ValuePtr r = eval(*cur, env);
        if (opts_.trace) out_.calls[rec].result = r;
        return r;
    }

    bool asBool(const Value& v, bool& out) {
        if (v.kind != VKind::Ctor || !v.items.empty()) return false;
        if (v.s == "true") out = true;
        else if (v.s == "false") out = false;
        else return false;
        return true;
    }

    ValuePtr intV(std::int64_t x) {
        ValuePtr v = mk(VKind::Int);
        v->i = x;
        return v;
    }

    ValuePtr floatV(double x) {
        ValuePtr v = mk(VKind::Float);
        v->f = x;
        return v;
    }

    ValuePtr applyPrim(const PervasiveSig& sig, const std::vector<ValuePtr>& a) {
        for (const auto& x : a)
            if (x->isHoleOrBomb()) return bomb();
        const std::string& n = sig.name;
        auto wrap = [](std::uint64_t x) { return static_cast<std::int64_t>(x); };
        auto u = [](std::int64_t x) { return static_cast<std::uint64_t>(x); };
        if (sig.type == "int -> int -> int") {
            if (a[0]->kind != VKind::Int || a[1]->kind != VKind::Int) return bomb();
            std::int64_t x = a[0]->i, y = a[1]->i;
            if (n == "+") return intV(wrap(u(x) + u(y)));
            if (n == "-") return intV(wrap(u(x) - u(y)));
            if (n == "*") return intV(wrap(u(x) * u(y)));
            if (y == 0) return bomb();
            if (x == std::numeric_limits<std::int64_t>::min() && y == -1) return n == "/" ? intV(x) : intV(0);
            if (n == "/") return intV(x / y);
            return intV(x % y);
        }
        if (sig.type == "float -> float -> float") {
            if (a[0]->kind != VKind::Float || a[1]->kind != VKind::Float) return bomb();
            double x = a[0]->f, y = a[1]->f;
            if (n == "+.") return floatV(x + y);
            if (n == "-.") return floatV(x - y);
            if (n == "*.") return floatV(x * y);
            if (n == "/.") return floatV(x / y);
            return floatV(std::pow(x, y));
        }
        if (n == "~-") return a[0]->kind == VKind::Int ? intV(wrap(0 - u(a[0]->i))) : bomb();
        if (n == "~-.") return a[0]->kind == VKind::Float ? floatV(-a[0]->f) : bomb();
        if (n == "=" || n == "==" || n == "<>" || n == "!=") {
            Verdict v = valuesEqual(*a[0], *a[1]);
            if (v == Verdict::Indeterminate) return bomb();
            bool eq = v == Verdict::Pass;
            return boolean((n == "=" || n == "==") ? eq : !eq);
        }
        if (n == "<" || n == ">" || n == "<=" || n == ">=" || n == "max" || n == "min") {
            bool ok = true;
            int c = compareValues(*a[0], *a[1], &ctors_, ok);
            if (!ok) return bomb();
            if (n == "<") return boolean(c < 0);
            if (n == ">") return boolean(c > 0);
            if (n == "<=") return boolean(c <= 0);
            if (n == ">=") return boolean(c >= 0);
            if (n == "max") return c >= 0 ? a[0] : a[1];
            return c <= 0 ? a[0] : a[1];
        }
        if (n == "&&" || n == "||") {
            bool x, y;
            if (!asBool(*a[0], x) || !asBool(*a[1], y)) return bomb();
            return boolean(n == "&&" ? (x && y) : (x || y));
        }
        if (n == "not") {
            bool x;
            if (!asBool(*a[0], x)) return bomb();
            return boolean(!x);
        }
        if (n == "^") {
            if (a[0]->kind != VKind::String || a[1]->kind != VKind::String) return bomb();
            for (std::size_t k = 0; k < (a[0]->s.size() + a[1]->s.size()) / 16; ++k) tick();
            ValuePtr v = mk(VKind::String);
            v->s = a[0]->s + a[1]->s;
            return v;
        }
        if (n == "@") {
            std::vector<ValuePtr> elems;
            const Value* cur = a[0].get();
            while (cur->kind == VKind::Ctor && cur->s == "::" && cur->items.size() == 2) {
                tick();
                elems.push_back(cur->items[0]);
                cur = cur->items[1].get();
            }
            if (cur->kind != VKind::Ctor || cur->s != "[]") return bomb();
            ValuePtr out = a[1];
            for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
                ValuePtr c = mk(VKind::Ctor);
                c->s = "::";
                c->items = {*it, out};
                out = c;
            }
            return out;
        }
        if (n == "abs" || n == "succ" || n == "pred") {
            if (a[0]->kind != VKind::Int) return bomb();
            std::int64_t x = a[0]->i;
            if (n == "abs") return intV(x < 0 ? wrap(0 - u(x)) : x);
            return intV(wrap(n == "succ" ? u(x) + 1 : u(x) - 1));
        }
        if (n == "fst" || n == "snd") {
            if (a[0]->kind != VKind::Tuple || a[0]->items.size() != 2) return bomb();
            return a[0]->items[n == "fst" ? 0 : 1];
        }
        if (n == "string_of_int") {
            if (a[0]->kind != VKind::Int) return bomb();
            ValuePtr v = mk(VKind::String);
            v->s = std::to_string(a[0]->i);
            return v;
        }
        if (n == "float_of_int") return a[0]->kind == VKind::Int ? floatV(static_cast<double>(a[0]->i)) : bomb();
        if (n == "int_of_float") {
            if (a[0]->kind != VKind::Float || !std::isfinite(a[0]->f) || std::fabs(a[0]->f) >= 9.2e18) return bomb();
            return intV(static_cast<std::int64_t>(a[0]->f));
        }
        return bomb();
    }
};

}  // namespace

bool RunResult::allAssertsPass() const {
    for (const auto& a : asserts)
        if (a.passed != Verdict::Pass) return false;
    return true;
}

RunResult run(std::shared_ptr<const Program> program, const RunOptions& opts) {
    RunResult out;
    out.program = program;
    Machine m(*program, opts, out);
    m.runAll();
    return out;
}

const Expr* functionOfBinding(const Program& p, NodeId binding) {
    if (const TopItem* item = findItem(p, binding)) {
        if (item->kind == ItemKind::Binding && item->expr.kind == ExprKind::Fun) return &item->expr;
        return nullptr;
    }
    const Expr* e = findExpr(p, binding);
    if (!e) return nullptr;
    if (e->kind == ExprKind::Fun) return e;
    if (e->kind == ExprKind::Let && e->kids[0].kind == ExprKind::Fun) return &e->kids[0];
    return nullptr;
}

std::vector<FrameRow> framesFor(const RunResult& r, NodeId function) {
    const Expr* fun = functionOfBinding(*r.program, function);
    if (!fun) throw UnknownNode(function);
    std::vector<FrameRow> rows;
    for (const auto& c : r.calls) {
        if (c.fun != fun->id) continue;
        ValuePtr res = c.result;
        if (!res) {
            res = std::make_shared<Value>();
            res->kind = VKind::Bomb;
        }
        rows.push_back(FrameRow{c.frame, c.args, res});
    }
    return rows;
}

std::vector<ValuePtr> valuesAt(const RunResult& r, NodeId node, std::optional<std::uint32_t> frame) {
    std::vector<ValuePtr> out;
    auto it = r.byNode.find(node);
    if (it == r.byNode.end()) return out;
    for (std::size_t idx : it->second) {
        const TraceEntry& t = r.trace[idx];
        if (frame && t.frame != *frame) continue;
        out.push_back(t.value);
    }
    return out;
}

std::string exportTrace(const RunResult& r) {
    std::string out;
    for (const auto& t : r.trace) {
        out += std::to_string(t.frame) + "\t" + std::to_string(t.node.value) + "\t" +
               (t.kind == EntryKind::EvalResult ? "eval" : "bind") + "\t" + printValue(*t.value) + "\n";
    }
    return out;
}

}  // namespace manipos
