#include <charconv>
#include <cmath>
#include <cstdio>

#include "syntax/parse.hpp"
#include "syntax/print.hpp"

namespace manipos {

namespace {

constexpr int kTuple = 0;
constexpr int kBinary = 10;
constexpr int kUnary = 20;
constexpr int kApp = 30;
constexpr int kAtom = 40;

struct Ctx {
    int min = 0;
    bool prefixOk = true;
};

constexpr Ctx kTail{0, true};
constexpr Ctx kElem{kBinary, false};
constexpr Ctx kArg{kAtom, false};

bool isPrefixForm(const Expr& e) {
    if (!e.attrs.empty()) return false;
    return e.kind == ExprKind::Let || e.kind == ExprKind::Fun || e.kind == ExprKind::Match || e.kind == ExprKind::If;
}

bool isUnaryOp(const std::string& n) { return n == "~-" || n == "~-." || n == "!"; }

bool isInfixApp(const Expr& e) {
    return e.kind == ExprKind::App && e.kids.size() == 3 && e.kids[0].kind == ExprKind::Var &&
           e.kids[0].attrs.empty() && infixLevel(e.kids[0].name) >= 0 && e.kids[0].name != "::";
}

bool isUnaryApp(const Expr& e) {
    return e.kind == ExprKind::App && e.kids.size() == 2 && e.kids[0].kind == ExprKind::Var &&
           e.kids[0].attrs.empty() && isUnaryOp(e.kids[0].name);
}

// A cons chain ending in [] whose inner cells carry no attributes.
bool isListLiteral(const Expr& e) {
    const Expr* cur = &e;
    bool first = true;
    while (cur->kind == ExprKind::Ctor && cur->name == "::" && cur->kids.size() == 2) {
        if (!first && !cur->attrs.empty()) return false;
        first = false;
        cur = &cur->kids[1];
    }
    return !first && cur->kind == ExprKind::Ctor && cur->name == "[]" && cur->kids.empty() && cur->attrs.empty();
}

int level(const Expr& e) {
    if (!e.attrs.empty()) return kAtom;
    switch (e.kind) {
        case ExprKind::Hole:
        case ExprKind::Var:
        case ExprKind::Const:
            return kAtom;
        case ExprKind::Ctor:
            if (e.kids.empty() || isListLiteral(e)) return kAtom;
            if (e.name == "::" && e.kids.size() == 2) return kBinary + 4;
            return kApp;
        case ExprKind::App:
            if (isInfixApp(e)) return kBinary + infixLevel(e.kids[0].name);
            if (isUnaryApp(e)) return kAtom;
            return kApp;
        case ExprKind::Tuple:
            return kTuple;
        default:
            return 0;
    }
}

// Whether the printed form of `e` ends in an unparenthesized match, which would
// swallow the arms that follow it.
bool endsWithMatch(const Expr& e) {
    if (!e.attrs.empty()) return false;
    switch (e.kind) {
        case ExprKind::Match: return true;
        case ExprKind::Let: return endsWithMatch(e.kids[1]);
        case ExprKind::Fun: return endsWithMatch(e.kids[0]);
        case ExprKind::If: return endsWithMatch(e.kids[2]);
        default: return false;
    }
}

bool isBlock(const Expr& e) { return e.attrs.empty() && (e.kind == ExprKind::Let || e.kind == ExprKind::Match); }

std::string floatText(double f) {
    if (std::isnan(f)) return "nan";
    if (std::isinf(f)) return f > 0 ? "infinity" : "neg_infinity";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, f);
    std::string s(buf, end);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

void escapeChar(std::string& out, char c, char quote) {
    switch (c) {
        case '\n': out += "\\n"; return;
        case '\t': out += "\\t"; return;
        case '\r': out += "\\r"; return;
        case '\b': out += "\\b"; return;
        case '\\': out += "\\\\"; return;
        default: break;
    }
    if (c == quote) {
        out += '\\';
        out += c;
        return;
    }
    auto u = static_cast<unsigned char>(c);
    if (u < 32 || u == 127) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\%03u", static_cast<unsigned>(u));
        out += buf;
        return;
    }
    out += c;
}

class Printer {
public:
    explicit Printer(const CtorTable* ctors) : ctors_(ctors) {}

    std::string expr(const Expr& e, Ctx ctx) {
        bool wrap = isPrefixForm(e) ? !ctx.prefixOk : level(e) < ctx.min;
        std::string s = bare(e);
        return wrap ? "(" + s + ")" : s;
    }

    std::string pattern(const Pattern& p, bool atom) {
        switch (p.kind) {
            case PatKind::Var: return p.name;
            case PatKind::Wild: return "_";
            case PatKind::Tuple: {
                std::string s = "(";
                for (std::size_t i = 0; i < p.args.size(); ++i) {
                    if (i) s += ", ";
                    s += pattern(p.args[i], false);
                }
                return s + ")";
            }
            case PatKind::Ctor: {
                if (p.args.empty()) return p.name;
                std::string s;
                if (p.name == "::" && p.args.size() == 2) {
                    const Pattern& l = p.args[0];
                    bool lwrap = l.kind == PatKind::Ctor && !l.args.empty();
                    s = (lwrap ? "(" + pattern(l, false) + ")" : pattern(l, false)) + " :: " + pattern(p.args[1], false);
                } else if (p.args.size() == 1) {
                    const Pattern& a = p.args[0];
                    if (a.kind == PatKind::Tuple && !knownUnary(p.name)) {
                        s = p.name + " (" + pattern(a, false) + ")";
                    } else {
                        bool awrap = a.kind == PatKind::Ctor && !a.args.empty();
                        s = p.name + " " + (awrap ? "(" + pattern(a, false) + ")" : pattern(a, false));
                    }
                } else {
                    s = p.name + " (";
                    for (std::size_t i = 0; i < p.args.size(); ++i) {
                        if (i) s += ", ";
                        s += pattern(p.args[i], false);
                    }
                    s += ")";
                }
                return atom ? "(" + s + ")" : s;
            }
        }
        return "_";
    }

    // `pat p1 p2` for a binding whose right-hand side is a chain of functions.
    std::pair<std::string, const Expr*> bindingHead(const Pattern& lhs, const Expr& rhs) {
        std::string head = pattern(lhs, false);
        const Expr* body = &rhs;
        if (lhs.kind == PatKind::Var) {
            while (body->kind == ExprKind::Fun && body->attrs.empty()) {
                head += " " + pattern(body->pats[0], true);
                body = &body->kids[0];
            }
        }
        return {head, body};
    }

    // Multi-line rendering of a statement; continuation lines are indented by `ind`.
    std::string stmt(const Expr& e, int ind) {
        std::string pad(static_cast<std::size_t>(ind), ' ');
        if (!isBlock(e)) return expr(e, kTail);
        if (e.kind == ExprKind::Let) {
            auto [head, rhs] = bindingHead(e.pats[0], e.kids[0]);
            std::string s = "let " + std::string(e.rec ? "rec " : "") + head + " =";
            std::string battrs = printAttrs(e.bindAttrs, true);
            if (isBlock(*rhs)) {
                s += "\n" + pad + "  " + stmt(*rhs, ind + 2) + "\n" + pad + (battrs.empty() ? "" : battrs + " ") + "in";
            } else {
                s += " " + expr(*rhs, kTail) + (battrs.empty() ? "" : " " + battrs) + " in";
            }
            return s + "\n" + pad + stmt(e.kids[1], ind);
        }
        std::string s = "match " + expr(e.kids[0], Ctx{kTuple, false}) + " with";
        for (std::size_t i = 0; i < e.pats.size(); ++i) {
            const Expr& body = e.kids[i + 1];
            bool last = i + 1 == e.pats.size();
            s += "\n" + pad + "| " + pattern(e.pats[i], false) + " ->";
            if (!last && endsWithMatch(body)) {
                s += " (" + bare(body) + ")";
            } else if (isBlock(body)) {
                s += "\n" + pad + "  " + stmt(body, ind + 2);
            } else {
                s += " " + expr(body, kTail);
            }
        }
        return s;
    }

private:
    const CtorTable* ctors_;

    bool knownUnary(const std::string& ctor) const { return ctors_ && ctors_->arity(ctor) == 1; }

    std::string bare(const Expr& e) {
        if (!e.attrs.empty()) {
            Expr inner = e;
            inner.attrs = Attrs{};
            return "(" + expr(inner, kElem) + " " + printAttrs(e.attrs, false) + ")";
        }
        switch (e.kind) {
            case ExprKind::Hole: return "(??)";
            case ExprKind::Const: return printLiteral(e.lit);
            case ExprKind::Var: return isOperatorName(e.name) ? "( " + e.name + " )" : e.name;
            case ExprKind::Ctor: return ctor(e);
            case ExprKind::Tuple: {
                std::string s;
                for (std::size_t i = 0; i < e.kids.size(); ++i) {
                    if (i) s += ", ";
                    s += expr(e.kids[i], kElem);
                }
                return s;
            }
            case ExprKind::App: {
                if (isInfixApp(e)) {
                    const std::string& op = e.kids[0].name;
                    int lvl = infixLevel(op);
                    bool right = infixRightAssoc(lvl);
                    Ctx l{kBinary + lvl + (right ? 1 : 0), false};
                    Ctx r{kBinary + lvl + (right ? 0 : 1), false};
                    return expr(e.kids[1], l) + " " + op + " " + expr(e.kids[2], r);
                }
                if (isUnaryApp(e)) return "(" + e.kids[0].name + " " + expr(e.kids[1], Ctx{kUnary, false}) + ")";
                const Expr& head = e.kids[0];
                std::string s = head.kind == ExprKind::Ctor && head.attrs.empty() ? "(" + bare(head) + ")" : expr(head, kArg);
                for (std::size_t i = 1; i < e.kids.size(); ++i) s += " " + expr(e.kids[i], kArg);
                return s;
            }
            case ExprKind::Fun: {
                std::string s = "fun";
                const Expr* cur = &e;
                do {
                    s += " " + pattern(cur->pats[0], true);
                    cur = &cur->kids[0];
                } while (cur->kind == ExprKind::Fun && cur->attrs.empty());
                return s + " -> " + expr(*cur, kTail);
            }
            case ExprKind::Let: {
                auto [head, rhs] = bindingHead(e.pats[0], e.kids[0]);
                std::string battrs = printAttrs(e.bindAttrs, true);
                return "let " + std::string(e.rec ? "rec " : "") + head + " = " + expr(*rhs, kTail) +
                       (battrs.empty() ? "" : " " + battrs) + " in " + expr(e.kids[1], kTail);
            }
            case ExprKind::If:
                return "if " + expr(e.kids[0], kElem) + " then " + expr(e.kids[1], kElem) + " else " +
                       expr(e.kids[2], Ctx{kBinary, true});
            case ExprKind::Match: {
                std::string s = "match " + expr(e.kids[0], Ctx{kTuple, false}) + " with";
                for (std::size_t i = 0; i < e.pats.size(); ++i) {
                    const Expr& body = e.kids[i + 1];
                    bool last = i + 1 == e.pats.size();
                    s += " | " + pattern(e.pats[i], false) + " -> ";
                    s += (!last && endsWithMatch(body)) ? "(" + bare(body) + ")" : expr(body, kTail);
                }
                return s;
            }
        }
        return "(??)";
    }

    std::string ctor(const Expr& e) {
        if (e.kids.empty()) return e.name;
        if (isListLiteral(e)) {
            std::string s = "[";
            const Expr* cur = &e;
            bool first = true;
            while (cur->name == "::") {
                if (!first) s += "; ";
                first = false;
                s += expr(cur->kids[0], kElem);
                cur = &cur->kids[1];
            }
            return s + "]";
        }
        if (e.name == "::" && e.kids.size() == 2)
            return expr(e.kids[0], Ctx{kBinary + 5, false}) + " :: " + expr(e.kids[1], Ctx{kBinary + 4, false});
        if (e.kids.size() == 1) {
            const Expr& a = e.kids[0];
            if (a.kind == ExprKind::Tuple && a.attrs.empty() && !knownUnary(e.name))
                return e.name + " ((" + bare(a) + "))";
            return e.name + " " + expr(a, kArg);
        }
        std::string s = e.name + " (";
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            if (i) s += ", ";
            s += expr(e.kids[i], kElem);
        }
        return s + ")";
    }
};

std::string printTypeAt(const TypeExpr& t, int prec) {
    // prec: 0 anywhere, 1 tuple component, 2 constructor argument
    switch (t.kind) {
        case TypeExpr::Kind::Var: return "'" + t.name;
        case TypeExpr::Kind::Con: {
            if (t.args.empty()) return t.name;
            if (t.args.size() == 1) return printTypeAt(t.args[0], 2) + " " + t.name;
            std::string s = "(";
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) s += ", ";
                s += printTypeAt(t.args[i], 0);
            }
            return s + ") " + t.name;
        }
        case TypeExpr::Kind::Arrow: {
            std::string s = printTypeAt(t.args[0], 1) + " -> " + printTypeAt(t.args[1], 0);
            return prec > 0 ? "(" + s + ")" : s;
        }
        case TypeExpr::Kind::Tuple: {
            std::string s;
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) s += " * ";
                s += printTypeAt(t.args[i], 2);
            }
            return prec > 1 ? "(" + s + ")" : s;
        }
    }
    return "?";
}

}  // namespace

std::string printLiteral(const Literal& l) {
    switch (l.kind) {
        case Literal::Kind::Int:
            return l.i < 0 ? "(" + std::to_string(l.i) + ")" : std::to_string(l.i);
        case Literal::Kind::Float: {
            std::string s = floatText(l.f);
            return std::signbit(l.f) && !std::isnan(l.f) ? "(" + s + ")" : s;
        }
        case Literal::Kind::String: {
            std::string s = "\"";
            for (char c : l.s) escapeChar(s, c, '"');
            return s + "\"";
        }
        case Literal::Kind::Char: {
            std::string s = "'";
            escapeChar(s, l.c, '\'');
            return s + "'";
        }
    }
    return "";
}

std::string printAttrs(const Attrs& a, bool binding) {
    std::string open = binding ? "[@@" : "[@";
    std::string s;
    auto add = [&](const std::string& body) {
        if (!s.empty()) s += " ";
        s += open + body + "]";
    };
    if (a.pos) add("pos " + std::to_string(a.pos->first) + ", " + std::to_string(a.pos->second));
    for (const auto& h : a.notHashes) add("not " + h);
    if (a.pending) add("pending");
    for (const auto& o : a.other) add(o);
    return s;
}

std::string printTypeExpr(const TypeExpr& t) { return printTypeAt(t, 0); }

std::string printTypeDecl(const TypeDecl& d) {
    std::string s = "type ";
    if (d.params.size() == 1) {
        s += "'" + d.params[0] + " ";
    } else if (d.params.size() > 1) {
        s += "(";
        for (std::size_t i = 0; i < d.params.size(); ++i) s += (i ? ", '" : "'") + d.params[i];
        s += ") ";
    }
    s += d.name + " =";
    for (std::size_t i = 0; i < d.ctors.size(); ++i) {
        s += i ? " | " : " ";
        s += d.ctors[i].name;
        if (!d.ctors[i].args.empty()) {
            s += " of ";
            for (std::size_t k = 0; k < d.ctors[i].args.size(); ++k) {
                if (k) s += " * ";
                s += printTypeAt(d.ctors[i].args[k], 2);
            }
        }
    }
    return s;
}

std::string printProgram(const Program& p) {
    CtorTable ctors(p.types);
    Printer pr(&ctors);
    std::string out;
    auto para = [&](const std::string& s) {
        if (!out.empty()) out += "\n";
        out += s + "\n";
    };
    for (const auto& d : p.types) para(printTypeDecl(d));
    for (const auto& item : p.items) {
        std::string attrs = printAttrs(item.attrs, true);
        if (item.kind == ItemKind::Assert) {
            std::string s = "let () = assert (" + pr.expr(item.expr, Ctx{kBinary + 3, false}) + " = " +
                            pr.expr(item.expected, Ctx{kBinary + 3, false}) + ")";
            para(attrs.empty() ? s : s + " " + attrs);
            continue;
        }
        auto [head, body] = pr.bindingHead(item.pat, item.expr);
        std::string s = "let " + std::string(item.rec ? "rec " : "") + head + " =";
        if (isBlock(*body)) {
            s += "\n  " + pr.stmt(*body, 2);
            if (!attrs.empty()) s += "\n" + attrs;
        } else {
            s += " " + pr.expr(*body, kTail);
            if (!attrs.empty()) s += " " + attrs;
        }
        para(s);
    }
    return out;
}

std::string printExpr(const Expr& e, const CtorTable* ctors) { return Printer(ctors).expr(e, kTail); }

std::string printPattern(const Pattern& p, const CtorTable* ctors) { return Printer(ctors).pattern(p, false); }

std::string printBindingHead(bool rec, const Pattern& lhs, const Expr& rhs) {
    Printer pr(nullptr);
    return "let " + std::string(rec ? "rec " : "") + pr.bindingHead(lhs, rhs).first;
}

Expr stripAttrs(Expr e) {
    e.attrs = Attrs{};
    e.bindAttrs = Attrs{};
    for (auto& k : e.kids) k = stripAttrs(std::move(k));
    return e;
}

std::string notHash(const Expr& e) {
    std::string text = printExpr(stripAttrs(e));
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void setPos(Program& p, NodeId binding, int x, int y) {
    if (TopItem* item = findItem(p, binding)) {
        item->attrs.pos = std::make_pair(x, y);
        return;
    }
    Expr* e = findExpr(p, binding);
    if (!e || e->kind != ExprKind::Let) throw UnknownNode(binding);
    e->bindAttrs.pos = std::make_pair(x, y);
}

}  // namespace manipos
