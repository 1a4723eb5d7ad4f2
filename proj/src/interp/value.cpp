#include "interp/value.hpp"

#include <cmath>

#include "syntax/print.hpp"

namespace manipos {

EnvPtr bind(EnvPtr env, std::string name, ValuePtr v) {
    auto n = std::make_shared<EnvNode>();
    n->name = std::move(name);
    n->value = std::move(v);
    n->next = std::move(env);
    return n;
}

ValuePtr lookup(const EnvNode* env, const std::string& name) {
    for (const EnvNode* e = env; e; e = e->next.get())
        if (e->name == name) return e->value;
    return nullptr;
}

bool Value::incomplete() const {
    if (isHoleOrBomb()) return true;
    if (kind == VKind::Ctor || kind == VKind::Tuple)
        for (const auto& it : items)
            if (it->incomplete()) return true;
    return false;
}

Verdict valuesEqual(const Value& a, const Value& b) {
    if (a.isHoleOrBomb() || b.isHoleOrBomb()) return Verdict::Indeterminate;
    if (a.kind != b.kind) return Verdict::Indeterminate;
    switch (a.kind) {
        case VKind::Int: return a.i == b.i ? Verdict::Pass : Verdict::Fail;
        case VKind::Float: return a.f == b.f ? Verdict::Pass : Verdict::Fail;
        case VKind::String: return a.s == b.s ? Verdict::Pass : Verdict::Fail;
        case VKind::Char: return a.c == b.c ? Verdict::Pass : Verdict::Fail;
        case VKind::Ctor:
            if (a.s != b.s || a.items.size() != b.items.size()) return Verdict::Fail;
            [[fallthrough]];
        case VKind::Tuple: {
            if (a.items.size() != b.items.size()) return Verdict::Fail;
            Verdict out = Verdict::Pass;
            for (std::size_t i = 0; i < a.items.size(); ++i) {
                Verdict v = valuesEqual(*a.items[i], *b.items[i]);
                if (v == Verdict::Fail) return Verdict::Fail;
                if (v == Verdict::Indeterminate) out = Verdict::Indeterminate;
            }
            return out;
        }
        default:
            return Verdict::Indeterminate;
    }
}

int compareValues(const Value& a, const Value& b, const CtorTable* ctors, bool& ok) {
    if (!ok) return 0;
    if (a.isHoleOrBomb() || b.isHoleOrBomb() || a.kind != b.kind) {
        ok = false;
        return 0;
    }
    auto cmp = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
    switch (a.kind) {
        case VKind::Int: return cmp(a.i, b.i);
        case VKind::Float: return cmp(a.f, b.f);
        case VKind::String: return cmp(a.s, b.s);
        case VKind::Char: return cmp(static_cast<unsigned char>(a.c), static_cast<unsigned char>(b.c));
        case VKind::Ctor:
            if (a.s != b.s) {
                const CtorInfo* ca = ctors ? ctors->find(a.s) : nullptr;
                const CtorInfo* cb = ctors ? ctors->find(b.s) : nullptr;
                if (ca && cb) return cmp(ca->index, cb->index);
                return cmp(a.s, b.s);
            }
            [[fallthrough]];
        case VKind::Tuple:
            for (std::size_t i = 0; i < a.items.size() && i < b.items.size(); ++i) {
                int c = compareValues(*a.items[i], *b.items[i], ctors, ok);
                if (!ok || c != 0) return c;
            }
            return cmp(a.items.size(), b.items.size());
        default:
            ok = false;
            return 0;
    }
}

namespace {

void printInto(const Value& v, std::string& out, bool atom) {
    switch (v.kind) {
        case VKind::Int:
            if (v.i < 0 && atom) out += "(" + std::to_string(v.i) + ")";
            else out += std::to_string(v.i);
            return;
        case VKind::Float: {
            std::string s = printLiteral(Literal::ofFloat(v.f));
            if (!atom && s.front() == '(') s = s.substr(1, s.size() - 2);
            out += s;
            return;
        }
        case VKind::String: out += printLiteral(Literal::ofString(v.s)); return;
        case VKind::Char: out += printLiteral(Literal::ofChar(v.c)); return;
        case VKind::Hole: out += "?"; return;
        case VKind::Bomb: out += "<bomb>"; return;
        case VKind::Closure:
        case VKind::Prim:
            out += v.s.empty() ? "<fun>" : v.s;
            return;
        case VKind::Tuple: {
            out += "(";
            for (std::size_t i = 0; i < v.items.size(); ++i) {
                if (i) out += ", ";
                printInto(*v.items[i], out, false);
            }
            out += ")";
            return;
        }
        case VKind::Ctor: {
            if (v.items.empty()) {
                out += v.s;
                return;
            }
            if (v.s == "::" && v.items.size() == 2) {
                // List literal when the spine ends in [].
                const Value* cur = &v;
                while (cur->kind == VKind::Ctor && cur->s == "::" && cur->items.size() == 2) cur = cur->items[1].get();
                if (cur->kind == VKind::Ctor && cur->s == "[]") {
                    out += "[";
                    bool first = true;
                    for (cur = &v; cur->s == "::"; cur = cur->items[1].get()) {
                        if (!first) out += "; ";
                        first = false;
                        printInto(*cur->items[0], out, false);
                    }
                    out += "]";
                    return;
                }
                if (atom) out += "(";
                printInto(*v.items[0], out, true);
                out += " :: ";
                printInto(*v.items[1], out, false);
                if (atom) out += ")";
                return;
            }
            if (atom) out += "(";
            out += v.s + " ";
            if (v.items.size() == 1) {
                printInto(*v.items[0], out, true);
            } else {
                out += "(";
                for (std::size_t i = 0; i < v.items.size(); ++i) {
                    if (i) out += ", ";
                    printInto(*v.items[i], out, false);
                }
                out += ")";
            }
            if (atom) out += ")";
            return;
        }
    }
}

}  // namespace

std::string printValue(const Value& v) {
    std::string out;
    printInto(v, out, false);
    return out;
}

bool valueToExpr(const Value& v, Expr& out) {
    switch (v.kind) {
        case VKind::Int: out = Expr::constant(Literal::ofInt(v.i)); return true;
        case VKind::Float: out = Expr::constant(Literal::ofFloat(v.f)); return true;
        case VKind::String: out = Expr::constant(Literal::ofString(v.s)); return true;
        case VKind::Char: out = Expr::constant(Literal::ofChar(v.c)); return true;
        case VKind::Hole: out = Expr::hole(); return true;
        case VKind::Ctor:
        case VKind::Tuple: {
            std::vector<Expr> kids;
            for (const auto& it : v.items) {
                Expr k;
                if (!valueToExpr(*it, k)) return false;
                kids.push_back(std::move(k));
            }
            out = v.kind == VKind::Ctor ? Expr::ctor(v.s, std::move(kids)) : Expr::tuple(std::move(kids));
            return true;
        }
        default:
            return false;
    }
}

}  // namespace manipos
