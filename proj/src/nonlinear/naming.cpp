#include "nonlinear/nonlinear.hpp"

#include <cctype>

#include "syntax/parse.hpp"

namespace manipos {

DuplicateName::DuplicateName(const std::string& n) : std::runtime_error("duplicate name in one scope: " + n), name(n) {}

NotAnAdt::NotAnAdt(const std::string& type) : std::runtime_error("not a data type with constructors: " + type) {}

std::string freshName(const std::string& stem, const std::set<std::string>& taken) {
    if (!taken.count(stem)) return stem;
    for (int k = 2;; ++k) {
        std::string n = stem + std::to_string(k);
        if (!taken.count(n)) return n;
    }
}

namespace {

char typeInitial(const TypeExpr& t) {
    switch (t.kind) {
        case TypeExpr::Kind::Var:
        case TypeExpr::Kind::Con:
            return t.name.empty() ? 'x' : static_cast<char>(std::tolower(static_cast<unsigned char>(t.name[0])));
        case TypeExpr::Kind::Arrow: return 'f';
        case TypeExpr::Kind::Tuple: return 'p';
    }
    return 'x';
}

}  // namespace

Pattern branchPattern(const CtorInfo& ctor, std::set<std::string>& taken) {
    std::vector<Pattern> args;
    if (ctor.name == "::") {
        std::string hd = "hd", tail = "tail";
        for (int k = 2; taken.count(hd) || taken.count(tail); ++k) {
            hd = "hd" + std::to_string(k);
            tail = "tail" + std::to_string(k);
        }
        taken.insert(hd);
        taken.insert(tail);
        args.push_back(Pattern::var(hd));
        args.push_back(Pattern::var(tail));
    } else {
        for (const auto& a : ctor.args) {
            std::string stem(1, typeInitial(a));
            std::string n;
            for (int k = 1;; ++k) {
                n = stem + std::to_string(k);
                if (!taken.count(n)) break;
            }
            taken.insert(n);
            args.push_back(Pattern::var(n));
        }
    }
    return Pattern::ctor(ctor.name, std::move(args));
}

namespace {

std::string opWord(const std::string& op) {
    static const std::pair<const char*, const char*> words[] = {
        {"+", "sum"}, {"+.", "sum"}, {"-", "diff"}, {"-.", "diff"}, {"*", "product"}, {"*.", "product"},
        {"/", "quotient"}, {"/.", "quotient"}, {"mod", "remainder"}, {"^", "concat"}, {"@", "append"},
        {"&&", "both"}, {"||", "either"}, {"**", "power"},
    };
    for (const auto& [k, v] : words)
        if (op == k) return v;
    return "test";
}

std::string firstSegment(const std::string& s) {
    auto i = s.find('_');
    return i == std::string::npos ? s : s.substr(0, i);
}

std::string stemOf(const Expr& e, const CtorTable& ctors) {
    switch (e.kind) {
        case ExprKind::Hole: return "x";
        case ExprKind::Var: return isOperatorName(e.name) ? opWord(e.name) : e.name;
        case ExprKind::Const:
            switch (e.lit.kind) {
                case Literal::Kind::Int: return "int";
                case Literal::Kind::Float: return "float";
                case Literal::Kind::String: return "string";
                case Literal::Kind::Char: return "char";
            }
            return "x";
        case ExprKind::Ctor: {
            if (e.name == "::" && e.kids.size() == 2) {
                const Expr* cur = &e;
                while (cur->kind == ExprKind::Ctor && cur->name == "::" && cur->kids.size() == 2) {
                    if (cur->kids[0].kind != ExprKind::Hole) return stemOf(cur->kids[0], ctors) + "_list";
                    cur = &cur->kids[1];
                }
                return "list";
            }
            if (e.name == "[]") return "list";
            if (e.name == "true" || e.name == "false") return "bool";
            if (e.name == "()") return "unit";
            if (e.name == "Some" && e.kids.size() == 1) return stemOf(e.kids[0], ctors) + "_option";
            if (e.name == "None") return "option";
            if (const CtorInfo* c = ctors.find(e.name)) return c->typeName;
            return "x";
        }
        case ExprKind::Tuple: {
            std::string out;
            for (std::size_t i = 0; i < e.kids.size() && i < 3; ++i) {
                if (i) out += "_";
                out += firstSegment(stemOf(e.kids[i], ctors));
            }
            return out;
        }
        case ExprKind::App: {
            const Expr& h = e.kids[0];
            std::string head = h.kind == ExprKind::Var ? stemOf(h, ctors) : "result";
            if (h.kind == ExprKind::Var && isOperatorName(h.name)) return head;
            if (e.kids.size() < 2) return head;
            return head + "_" + firstSegment(stemOf(e.kids[1], ctors));
        }
        case ExprKind::Fun: return "f";
        case ExprKind::Let: return stemOf(e.kids[1], ctors);
        case ExprKind::If: return stemOf(e.kids[1], ctors);
        case ExprKind::Match: return e.kids.size() > 1 ? stemOf(e.kids[1], ctors) : "x";
    }
    return "x";
}

}  // namespace

std::string suggestName(const Expr& e, const CtorTable& ctors) {
    std::string s = stemOf(e, ctors);
    std::string out;
    for (char c : s)
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') out += c;
    if (out.empty() || !(std::islower(static_cast<unsigned char>(out[0])) || out[0] == '_')) out = "x" + out;
    if (!isValidIdent(out)) out = "x";
    return out;
}

namespace {

void boundInPattern(const Pattern& p, std::set<std::string>& out) {
    for (auto& n : p.boundNames()) out.insert(n);
}

void boundIn(const Expr& e, std::set<std::string>& out) {
    for (const auto& p : e.pats) boundInPattern(p, out);
    for (const auto& k : e.kids) boundIn(k, out);
}

}  // namespace

std::set<std::string> boundNamesIn(const Expr& e) {
    std::set<std::string> out;
    boundIn(e, out);
    return out;
}

std::set<std::string> allBoundNames(const Program& p) {
    std::set<std::string> out;
    for (const auto& item : p.items) {
        boundInPattern(item.pat, out);
        boundIn(item.expr, out);
        if (item.kind == ItemKind::Assert) boundIn(item.expected, out);
    }
    return out;
}

void renameVar(Expr& e, const std::string& from, const std::string& to) {
    auto binds = [&](const Pattern& p) {
        for (auto& n : p.boundNames())
            if (n == from) return true;
        return false;
    };
    switch (e.kind) {
        case ExprKind::Var:
            if (e.name == from) e.name = to;
            return;
        case ExprKind::Fun:
            if (!binds(e.pats[0])) renameVar(e.kids[0], from, to);
            return;
        case ExprKind::Let: {
            bool self = binds(e.pats[0]);
            if (!(e.rec && self)) renameVar(e.kids[0], from, to);
            if (!self) renameVar(e.kids[1], from, to);
            return;
        }
        case ExprKind::Match:
            renameVar(e.kids[0], from, to);
            for (std::size_t i = 0; i < e.pats.size(); ++i)
                if (!binds(e.pats[i])) renameVar(e.kids[i + 1], from, to);
            return;
        default:
            for (auto& k : e.kids) renameVar(k, from, to);
    }
}

}  // namespace manipos
