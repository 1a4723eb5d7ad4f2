#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>

#include "syntax/parse.hpp"

namespace manipos {

namespace {

enum class Tok {
    Ident,
    UIdent,
    TyVar,
    Int,
    Float,
    String,
    Char,
    Op,
    Kw,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    AttrExpr,  // [@ ... ]
    AttrItem,  // [@@ ... ]
    Eof,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string text;
    std::int64_t i = 0;
    double f = 0;
    char c = 0;
    int line = 1;
    int col = 1;
};

const std::set<std::string, std::less<>>& supportedKeywords() {
    static const std::set<std::string, std::less<>> kws = {"let", "rec",  "in",   "fun",    "match", "with",
                                                           "if",  "then", "else", "assert", "type",  "of"};
    return kws;
}

const std::set<std::string, std::less<>>& reservedKeywords() {
    static const std::set<std::string, std::less<>> kws = {
        "and",      "as",     "begin",     "class",   "constraint", "do",      "done",     "downto",
        "end",      "exception", "external", "for",   "function",   "functor", "include",  "inherit",
        "initializer", "lazy", "method",   "module",  "mutable",    "new",     "nonrec",   "object",
        "open",     "or",     "private",   "sig",     "struct",     "to",      "try",      "val",
        "virtual",  "when",   "while",     "raise",   "land",       "lor",     "lxor",     "lsl",
        "lsr",      "asr"};
    return kws;
}

bool isOpChar(char c) {
    switch (c) {
        case '!': case '$': case '%': case '&': case '*': case '+': case '-': case '.': case '/':
        case ':': case '<': case '=': case '>': case '?': case '@': case '^': case '|': case '~':
            return true;
        default:
            return false;
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipSpace();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= src_.size()) {
                t.kind = Tok::Eof;
                out.push_back(t);
                return out;
            }
            lexOne(t);
            out.push_back(std::move(t));
        }
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

    char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    char get() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skipSpace() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) get();
    }

    char escape() {
        char c = get();
        switch (c) {
            case 'n': return '\n';
            case 't': return '\t';
            case 'r': return '\r';
            case 'b': return '\b';
            case '\\': return '\\';
            case '"': return '"';
            case '\'': return '\'';
            case ' ': return ' ';
            default:
                if (std::isdigit(static_cast<unsigned char>(c)) && std::isdigit(static_cast<unsigned char>(peek())) &&
                    std::isdigit(static_cast<unsigned char>(peek(1)))) {
                    int v = (c - '0') * 100 + (get() - '0') * 10;
                    v += get() - '0';
                    if (v > 255) fail("character escape out of range");
                    return static_cast<char>(v);
                }
                fail(std::string("unknown escape \\") + c);
        }
    }

    void lexOne(Token& t) {
        char c = peek();
        if (c == '(' && peek(1) == '*') fail("comments are not supported");
        if (std::isdigit(static_cast<unsigned char>(c))) return lexNumber(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '\'') get();
            t.text = std::string(src_.substr(start, pos_ - start));
            if (std::isupper(static_cast<unsigned char>(t.text[0]))) {
                t.kind = Tok::UIdent;
            } else if (supportedKeywords().count(t.text)) {
                t.kind = Tok::Kw;
            } else if (t.text == "mod") {
                t.kind = Tok::Op;
            } else if (reservedKeywords().count(t.text)) {
                fail("unsupported keyword '" + t.text + "'");
            } else {
                t.kind = Tok::Ident;
            }
            return;
        }
        if (c == '"') {
            get();
            t.kind = Tok::String;
            for (;;) {
                if (pos_ >= src_.size()) fail("unterminated string literal");
                char ch = get();
                if (ch == '"') break;
                t.text += ch == '\\' ? escape() : ch;
            }
            return;
        }
        if (c == '\'') {
            // Either a char literal or a type variable.
            if (peek(1) == '\\') {
                get();
                get();
                t.kind = Tok::Char;
                t.c = escape();
                if (peek() != '\'') fail("unterminated character literal");
                get();
                return;
            }
            if (peek(1) != '\0' && peek(2) == '\'') {
                get();
                t.kind = Tok::Char;
                t.c = get();
                get();
                return;
            }
            get();
            if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail("malformed type variable");
            std::size_t start = pos_;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') get();
            t.kind = Tok::TyVar;
            t.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        if (c == '[' && peek(1) == '@') {
            get();
            get();
            t.kind = Tok::AttrExpr;
            if (peek() == '@') {
                get();
                t.kind = Tok::AttrItem;
            }
            int depth = 0;
            std::string raw;
            for (;;) {
                if (pos_ >= src_.size()) fail("unterminated attribute");
                char ch = get();
                if (ch == '"') {
                    raw += ch;
                    for (;;) {
                        if (pos_ >= src_.size()) fail("unterminated string in attribute");
                        char s = get();
                        raw += s;
                        if (s == '\\' && pos_ < src_.size()) {
                            raw += get();
                            continue;
                        }
                        if (s == '"') break;
                    }
                    continue;
                }
                if (ch == '(' && peek() == '*') fail("comments are not supported");
                if (ch == '[') ++depth;
                if (ch == ']') {
                    if (depth == 0) break;
                    --depth;
                }
                raw += ch;
            }
            std::size_t b = raw.find_first_not_of(" \t\r\n");
            std::size_t e = raw.find_last_not_of(" \t\r\n");
            t.text = b == std::string::npos ? "" : raw.substr(b, e - b + 1);
            return;
        }
        switch (c) {
            case '(': get(); t.kind = Tok::LParen; return;
            case ')': get(); t.kind = Tok::RParen; return;
            case '[': get(); t.kind = Tok::LBracket; return;
            case ']': get(); t.kind = Tok::RBracket; return;
            case ',': get(); t.kind = Tok::Comma; return;
            case ';':
                get();
                if (peek() == ';') fail("';;' is not supported");
                t.kind = Tok::Semi;
                return;
            default:
                break;
        }
        if (isOpChar(c)) {
            std::size_t start = pos_;
            while (isOpChar(peek())) get();
            t.kind = Tok::Op;
            t.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    void lexNumber(Token& t) {
        std::size_t start = pos_;
        bool isFloat = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) get();
        if (peek() == '.' && !isOpChar(peek(1) == '.' ? '.' : 'x')) {
            // "1." and "1.5" are floats; "1.." never occurs in the subset.
            isFloat = true;
            get();
            while (std::isdigit(static_cast<unsigned char>(peek()))) get();
        }
        if (peek() == 'e' || peek() == 'E') {
            std::size_t save = pos_;
            int sl = line_, sc = col_;
            get();
            if (peek() == '+' || peek() == '-') get();
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                isFloat = true;
                while (std::isdigit(static_cast<unsigned char>(peek()))) get();
            } else {
                pos_ = save;
                line_ = sl;
                col_ = sc;
            }
        }
        if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') fail("malformed number");
        t.text = std::string(src_.substr(start, pos_ - start));
        if (isFloat) {
            t.kind = Tok::Float;
            t.f = std::strtod(t.text.c_str(), nullptr);
        } else {
            t.kind = Tok::Int;
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.i);
            if (ec != std::errc{}) fail("integer literal out of range");
        }
    }
};

int binaryLevel(const Token& t) { return t.kind == Tok::Op ? infixLevel(t.text) : -1; }

}  // namespace

int infixLevel(std::string_view s) {
    if (s.empty()) return -1;
    if (s == "|" || s == "->" || s == "??" || s == "~-" || s == "~-." || s == "!" || s == "?" || s == "~") return -1;
    if (s == "||") return 0;
    if (s == "&&" || s == "&") return 1;
    if (s == "::") return 4;
    if (s == "**") return 7;
    if (s == "mod") return 6;
    char c = s[0];
    if (c == '=' || c == '<' || c == '>' || c == '|' || c == '&' || c == '$' || s == "!=") return 2;
    if (c == '@' || c == '^') return 3;
    if (c == '+' || c == '-') return 5;
    if (c == '*' || c == '/' || c == '%') return 6;
    return -1;
}

bool infixRightAssoc(int level) { return level == 0 || level == 1 || level == 3 || level == 4 || level == 7; }

namespace {

class Parser {
public:
    Parser(std::vector<Token> toks, CtorTable ctors) : toks_(std::move(toks)), ctors_(std::move(ctors)) {}

    Program program() {
        Program p;
        while (!at(Tok::Eof)) {
            if (atKw("type")) {
                if (!p.items.empty()) fail("type declarations must precede let-bindings");
                TypeDecl d = typeDecl();
                ctors_.add(d);
                p.types.push_back(std::move(d));
            } else if (atKw("let")) {
                p.items.push_back(topItem());
            } else {
                fail("expected 'let' or 'type' at top level");
            }
        }
        assignIds(p);
        return p;
    }

    Expr standaloneExpr() {
        Expr e = expr();
        expect(Tok::Eof, "end of input");
        return e;
    }

    TypeExpr standaloneType() {
        TypeExpr t = typeArrow();
        expect(Tok::Eof, "end of input");
        return t;
    }

    Pattern standalonePattern() {
        Pattern p = pattern();
        expect(Tok::Eof, "end of input");
        return p;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    CtorTable ctors_;

    const Token& cur() const { return toks_[pos_]; }
    const Token& ahead(std::size_t k) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool atKw(std::string_view kw) const { return cur().kind == Tok::Kw && cur().text == kw; }
    bool atOp(std::string_view op) const { return cur().kind == Tok::Op && cur().text == op; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(cur().line, cur().col, msg); }

    void expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        next();
    }
    void expectKw(const char* kw) {
        if (!atKw(kw)) fail(std::string("expected '") + kw + "'");
        next();
    }
    void expectOp(const char* op) {
        if (!atOp(op)) fail(std::string("expected '") + op + "'");
        next();
    }

    // ---- types -------------------------------------------------------------

    TypeDecl typeDecl() {
        expectKw("type");
        TypeDecl d;
        if (at(Tok::TyVar)) {
            d.params.push_back(next().text);
        } else if (at(Tok::LParen) && ahead(1).kind == Tok::TyVar) {
            next();
            d.params.push_back(next().text);
            while (at(Tok::Comma)) {
                next();
                if (!at(Tok::TyVar)) fail("expected type variable");
                d.params.push_back(next().text);
            }
            expect(Tok::RParen, "')'");
        }
        if (!at(Tok::Ident)) fail("expected type name");
        d.name = next().text;
        for (const auto& b : CtorTable::builtinTypes())
            if (b.name == d.name) fail("cannot redeclare built-in type '" + d.name + "'");
        expectOp("=");
        if (atOp("|")) next();
        for (;;) {
            if (!at(Tok::UIdent)) fail("expected constructor name (only variant types are supported)");
            CtorDecl c;
            c.name = next().text;
            if (atKw("of")) {
                next();
                c.args.push_back(typeApp());
                while (atOp("*")) {
                    next();
                    c.args.push_back(typeApp());
                }
            }
            d.ctors.push_back(std::move(c));
            if (!atOp("|")) break;
            next();
        }
        return d;
    }

    TypeExpr typeArrow() {
        TypeExpr lhs = typeProduct();
        if (atOp("->")) {
            next();
            TypeExpr t;
            t.kind = TypeExpr::Kind::Arrow;
            t.args = {std::move(lhs), typeArrow()};
            return t;
        }
        return lhs;
    }

    TypeExpr typeProduct() {
        TypeExpr first = typeApp();
        if (!atOp("*")) return first;
        TypeExpr t;
        t.kind = TypeExpr::Kind::Tuple;
        t.args.push_back(std::move(first));
        while (atOp("*")) {
            next();
            t.args.push_back(typeApp());
        }
        return t;
    }

    TypeExpr typeApp() {
        std::vector<TypeExpr> params;
        if (at(Tok::TyVar)) {
            TypeExpr v;
            v.kind = TypeExpr::Kind::Var;
            v.name = next().text;
            params.push_back(std::move(v));
        } else if (at(Tok::Ident)) {
            TypeExpr c;
            c.name = next().text;
            params.push_back(std::move(c));
        } else if (at(Tok::LParen)) {
            next();
            params.push_back(typeArrow());
            while (at(Tok::Comma)) {
                next();
                params.push_back(typeArrow());
            }
            expect(Tok::RParen, "')'");
            if (params.size() > 1 && !at(Tok::Ident)) fail("expected type constructor after parameter list");
        } else {
            fail("expected type");
        }
        while (at(Tok::Ident)) {
            TypeExpr c;
            c.name = next().text;
            c.args = std::move(params);
            params.clear();
            params.push_back(std::move(c));
        }
        return std::move(params[0]);
    }

    // ---- attributes --------------------------------------------------------

    static std::pair<std::string, std::string> splitAttr(const std::string& raw) {
        std::size_t i = 0;
        while (i < raw.size() && (std::isalnum(static_cast<unsigned char>(raw[i])) || raw[i] == '_' || raw[i] == '.'))
            ++i;
        std::string name = raw.substr(0, i);
        std::size_t b = raw.find_first_not_of(" \t\r\n", i);
        return {name, b == std::string::npos ? "" : raw.substr(b)};
    }

    void itemAttr(Attrs& a) {
        const Token t = next();
        auto [name, payload] = splitAttr(t.text);
        if (name == "pos") {
            std::vector<std::int64_t> nums;
            std::string s = payload;
            std::size_t i = 0;
            auto bad = [&] { throw ParseError(t.line, t.col, "malformed [@@pos x, y] attribute"); };
            for (int k = 0; k < 2; ++k) {
                while (i < s.size() && s[i] == ' ') ++i;
                bool neg = false;
                if (i < s.size() && s[i] == '-') {
                    neg = true;
                    ++i;
                }
                std::size_t st = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (st == i) bad();
                std::int64_t v = std::stoll(s.substr(st, i - st));
                nums.push_back(neg ? -v : v);
                while (i < s.size() && s[i] == ' ') ++i;
                if (k == 0) {
                    if (i >= s.size() || s[i] != ',') bad();
                    ++i;
                }
            }
            if (i != s.size()) bad();
            a.pos = std::make_pair(static_cast<int>(nums[0]), static_cast<int>(nums[1]));
            return;
        }
        a.other.push_back(t.text);
    }

    void exprAttr(Attrs& a) {
        const Token t = next();
        auto [name, payload] = splitAttr(t.text);
        if (name == "not") {
            bool ok = payload.size() == 16;
            for (char ch : payload) ok = ok && (std::isdigit(static_cast<unsigned char>(ch)) || (ch >= 'a' && ch <= 'f'));
            if (!ok) throw ParseError(t.line, t.col, "[@not h] expects 16 lowercase hex digits");
            a.notHashes.push_back(payload);
            return;
        }
        if (name == "pending" && payload.empty()) {
            a.pending = true;
            return;
        }
        a.other.push_back(t.text);
    }

    void itemAttrs(Attrs& a) {
        while (at(Tok::AttrItem)) itemAttr(a);
        if (at(Tok::AttrExpr)) fail("expected a binding attribute [@@...]");
    }

    // ---- top level ---------------------------------------------------------

    TopItem topItem() {
        expectKw("let");
        TopItem item;
        if (atKw("rec")) {
            next();
            item.rec = true;
        }
        if (at(Tok::LParen) && ahead(1).kind == Tok::RParen && ahead(2).kind == Tok::Op && ahead(2).text == "=" &&
            ahead(3).kind == Tok::Kw && ahead(3).text == "assert") {
            if (item.rec) fail("assertions cannot be recursive");
            next();
            next();
            next();
            next();
            Expr cond = atom(/*allowPrefix=*/false);
            if (cond.kind != ExprKind::App || cond.kids.size() != 3 || cond.kids[0].kind != ExprKind::Var ||
                cond.kids[0].name != "=" || !cond.attrs.empty() || !cond.kids[0].attrs.empty())
                fail("only equality assertions 'assert (e1 = e2)' are supported");
            item.kind = ItemKind::Assert;
            item.pat = Pattern::unit();
            item.expr = std::move(cond.kids[1]);
            item.expected = std::move(cond.kids[2]);
            itemAttrs(item.attrs);
            return item;
        }
        auto [pat, rhs] = binding();
        item.pat = std::move(pat);
        item.expr = std::move(rhs);
        itemAttrs(item.attrs);
        if (atKw("in")) fail("top-level 'let ... in' expressions are not supported");
        return item;
    }

    // `pat params* = expr`; the params become nested functions.
    std::pair<Pattern, Expr> binding() {
        Pattern lhs = letPattern();
        std::vector<Pattern> params;
        while (!atOp("=")) {
            if (lhs.kind != PatKind::Var) fail("function parameters require a named binding");
            params.push_back(simplePattern());
        }
        next();
        Expr rhs = expr();
        for (auto it = params.rbegin(); it != params.rend(); ++it) rhs = Expr::fun(std::move(*it), std::move(rhs));
        return {std::move(lhs), std::move(rhs)};
    }

    Pattern letPattern() {
        if (at(Tok::Kw) || at(Tok::UIdent)) fail("expected a variable name");
        return simplePattern();
    }

    // Patterns allowed for let-bindings and function parameters.
    Pattern simplePattern() {
        if (at(Tok::Ident)) {
            std::string n = next().text;
            if (n == "_") return Pattern::wild();
            return Pattern::var(std::move(n));
        }
        if (at(Tok::LParen)) {
            next();
            if (at(Tok::RParen)) {
                next();
                return Pattern::unit();
            }
            std::vector<Pattern> parts;
            parts.push_back(simplePattern());
            while (at(Tok::Comma)) {
                next();
                parts.push_back(simplePattern());
            }
            expect(Tok::RParen, "')'");
            if (parts.size() == 1) return std::move(parts[0]);
            return Pattern::tuple(std::move(parts));
        }
        fail("expected a variable, '_', '()' or a tuple of names");
    }

    // ---- patterns in match arms -------------------------------------------

    Pattern pattern() {
        Pattern p = patternCtor();
        if (atOp("::")) {
            next();
            Pattern rest = pattern();
            return Pattern::ctor("::", {std::move(p), std::move(rest)});
        }
        return p;
    }

    Pattern patternCtor() {
        if (at(Tok::UIdent) || (at(Tok::Ident) && (cur().text == "true" || cur().text == "false"))) {
            std::string name = next().text;
            int arity = ctors_.arity(name);
            if (name == "true" || name == "false" || !startsPatternAtom()) {
                if (arity > 0) fail("constructor " + name + " expects arguments");
                return Pattern::ctor(std::move(name), {});
            }
            if (arity == 0) fail("constructor " + name + " takes no arguments");
            bool direct = false;
            Pattern arg = patternAtom(&direct);
            if (direct && arity != 1) return Pattern::ctor(std::move(name), std::move(arg.args));
            return Pattern::ctor(std::move(name), {std::move(arg)});
        }
        return patternAtom(nullptr);
    }

    bool startsPatternAtom() const {
        return at(Tok::Ident) || at(Tok::LParen) || at(Tok::LBracket) || at(Tok::UIdent);
    }

    Pattern patternAtom(bool* directTuple) {
        if (at(Tok::Ident)) {
            std::string n = next().text;
            if (n == "_") return Pattern::wild();
            if (n == "true" || n == "false") return Pattern::ctor(std::move(n), {});
            return Pattern::var(std::move(n));
        }
        if (at(Tok::UIdent)) {
            std::string n = next().text;
            if (ctors_.arity(n) > 0) fail("constructor " + n + " expects arguments");
            return Pattern::ctor(std::move(n), {});
        }
        if (at(Tok::LBracket)) {
            next();
            expect(Tok::RBracket, "']' (list patterns other than [] are not supported)");
            return Pattern::ctor("[]", {});
        }
        if (at(Tok::LParen)) {
            next();
            if (at(Tok::RParen)) {
                next();
                return Pattern::unit();
            }
            std::vector<Pattern> parts;
            parts.push_back(pattern());
            while (at(Tok::Comma)) {
                next();
                parts.push_back(pattern());
            }
            expect(Tok::RParen, "')'");
            if (parts.size() == 1) return std::move(parts[0]);
            if (directTuple) *directTuple = true;
            return Pattern::tuple(std::move(parts));
        }
        fail("expected a pattern");
    }

    // ---- expressions -------------------------------------------------------

    Expr expr(bool* sawComma = nullptr) {
        Expr e = exprNoAttr(sawComma);
        while (at(Tok::AttrExpr)) {
            if (sawComma) *sawComma = false;
            exprAttr(e.attrs);
        }
        return e;
    }

    bool atPrefixForm() const { return atKw("let") || atKw("fun") || atKw("match") || atKw("if"); }

    Expr exprNoAttr(bool* sawComma) {
        if (atPrefixForm()) return prefixForm();
        Expr first = binary(0);
        if (!at(Tok::Comma)) return first;
        std::vector<Expr> parts;
        parts.push_back(std::move(first));
        while (at(Tok::Comma)) {
            next();
            parts.push_back(atPrefixForm() ? prefixForm() : binary(0));
        }
        if (sawComma) *sawComma = true;
        return Expr::tuple(std::move(parts));
    }

    // A full expression that stops before ',' (branches of if, list elements).
    Expr exprNoTuple() {
        Expr e = atPrefixForm() ? prefixForm() : binary(0);
        return e;
    }

    Expr prefixForm() {
        if (atKw("let")) {
            next();
            bool rec = false;
            if (atKw("rec")) {
                next();
                rec = true;
            }
            auto [lhs, rhs] = binding();
            Attrs battrs;
            itemAttrs(battrs);
            expectKw("in");
            Expr body = expr();
            Expr e = Expr::let(rec, std::move(lhs), std::move(rhs), std::move(body));
            e.bindAttrs = std::move(battrs);
            return e;
        }
        if (atKw("fun")) {
            next();
            std::vector<Pattern> params;
            while (!atOp("->")) params.push_back(simplePattern());
            if (params.empty()) fail("expected a parameter");
            next();
            Expr body = expr();
            for (auto it = params.rbegin(); it != params.rend(); ++it) body = Expr::fun(std::move(*it), std::move(body));
            return body;
        }
        if (atKw("match")) {
            next();
            Expr scrut = expr();
            expectKw("with");
            if (atOp("|")) next();
            std::vector<std::pair<Pattern, Expr>> arms;
            for (;;) {
                Pattern p = pattern();
                if (p.kind != PatKind::Ctor) fail("match arms must be constructor patterns");
                expectOp("->");
                Expr body = expr();
                arms.emplace_back(std::move(p), std::move(body));
                if (!atOp("|")) break;
                next();
            }
            return Expr::match(std::move(scrut), std::move(arms));
        }
        if (atKw("if")) {
            next();
            Expr c = expr();
            expectKw("then");
            Expr t = exprNoTuple();
            expectKw("else");
            Expr f = exprNoTuple();
            return Expr::ifThenElse(std::move(c), std::move(t), std::move(f));
        }
        if (atKw("assert")) fail("assertions are only supported at top level");
        fail("expected an expression");
    }

    Expr binary(int minLevel) {
        Expr lhs = unary();
        for (;;) {
            int level = binaryLevel(cur());
            if (level < minLevel || level < 0) return lhs;
            std::string op = next().text;
            Expr rhs = atPrefixForm() ? prefixForm() : binary(infixRightAssoc(level) ? level : level + 1);
            if (op == "::") {
                lhs = Expr::ctor("::", {std::move(lhs), std::move(rhs)});
            } else {
                lhs = Expr::app(Expr::var(op), {std::move(lhs), std::move(rhs)});
            }
        }
    }

    Expr unary() {
        if (atOp("-") || atOp("-.")) {
            std::string op = next().text;
            Expr e = unary();
            if (e.kind == ExprKind::Const && e.attrs.empty()) {
                if (e.lit.kind == Literal::Kind::Int && op == "-") {
                    e.lit.i = -e.lit.i;
                    return e;
                }
                if (e.lit.kind == Literal::Kind::Float) {
                    e.lit.f = -e.lit.f;
                    return e;
                }
            }
            return Expr::app(Expr::var(op == "-" ? "~-" : "~-."), {std::move(e)});
        }
        if (atOp("~-") || atOp("~-.") || atOp("!")) {
            std::string op = next().text;
            return Expr::app(Expr::var(op), {unary()});
        }
        return application();
    }

    bool startsAtom() const {
        switch (cur().kind) {
            case Tok::Ident:
            case Tok::UIdent:
            case Tok::Int:
            case Tok::Float:
            case Tok::String:
            case Tok::Char:
            case Tok::LParen:
            case Tok::LBracket:
                return true;
            default:
                return false;
        }
    }

    bool atCtorName() const {
        return at(Tok::UIdent) || (at(Tok::Ident) && (cur().text == "true" || cur().text == "false"));
    }

    Expr application() {
        if (atCtorName()) return ctorApplication();
        if (atPrefixForm()) return prefixForm();
        Expr head = atom(true);
        std::vector<Expr> args;
        while (startsAtom()) args.push_back(atom(false));
        if (args.empty()) return head;
        return Expr::app(std::move(head), std::move(args));
    }

    Expr ctorApplication() {
        std::string name = next().text;
        int arity = ctors_.arity(name);
        if (name == "true" || name == "false" || !startsAtom()) return Expr::ctor(std::move(name));
        if (arity == 0) fail("constructor " + name + " takes no arguments");
        bool direct = false;
        Expr arg = atom(false, &direct);
        if (startsAtom()) fail("constructor " + name + " applied to too many arguments");
        if (direct && arity != 1) return Expr::ctor(std::move(name), std::move(arg.kids));
        return Expr::ctor(std::move(name), {std::move(arg)});
    }

    Expr atom(bool allowPrefix, bool* directTuple = nullptr) {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Int: {
                std::int64_t v = next().i;
                return Expr::constant(Literal::ofInt(v));
            }
            case Tok::Float: {
                double v = next().f;
                return Expr::constant(Literal::ofFloat(v));
            }
            case Tok::String: return Expr::constant(Literal::ofString(next().text));
            case Tok::Char: return Expr::constant(Literal::ofChar(next().c));
            case Tok::Ident: {
                std::string n = next().text;
                if (n == "true" || n == "false") return Expr::ctor(std::move(n));
                if (n == "_") fail("'_' is not an expression");
                return Expr::var(std::move(n));
            }
            case Tok::UIdent: {
                std::string n = next().text;
                if (ctors_.arity(n) > 0) fail("constructor " + n + " expects arguments here; parenthesize it");
                return Expr::ctor(std::move(n));
            }
            case Tok::LBracket: {
                next();
                std::vector<Expr> elems;
                if (!at(Tok::RBracket)) {
                    elems.push_back(expr());
                    while (at(Tok::Semi)) {
                        next();
                        if (at(Tok::RBracket)) break;
                        elems.push_back(expr());
                    }
                }
                expect(Tok::RBracket, "']'");
                Expr list = Expr::ctor("[]");
                for (auto it = elems.rbegin(); it != elems.rend(); ++it)
                    list = Expr::ctor("::", {std::move(*it), std::move(list)});
                return list;
            }
            case Tok::LParen: {
                next();
                if (at(Tok::RParen)) {
                    next();
                    return Expr::ctor("()");
                }
                if (at(Tok::Op) && ahead(1).kind == Tok::RParen) {
                    std::string op = next().text;
                    next();
                    if (op == "??") return Expr::hole();
                    if (op == "|" || op == "->") fail("'" + op + "' is not an operator");
                    return Expr::var(std::move(op));
                }
                bool comma = false;
                Expr e = expr(&comma);
                expect(Tok::RParen, "')'");
                if (directTuple) *directTuple = comma;
                return e;
            }
            case Tok::Kw:
                if (allowPrefix && atPrefixForm()) return prefixForm();
                fail("unexpected keyword '" + t.text + "'");
            case Tok::Eof: fail("unexpected end of input");
            default: fail("unexpected token");
        }
    }
};

}  // namespace

Program parseProgram(std::string_view text) {
    Parser p(Lexer(text).run(), CtorTable{});
    return p.program();
}

Expr parseExpr(std::string_view text, const CtorTable& ctors) {
    Parser p(Lexer(text).run(), ctors);
    return p.standaloneExpr();
}

Pattern parsePattern(std::string_view text, const CtorTable& ctors) {
    Parser p(Lexer(text).run(), ctors);
    return p.standalonePattern();
}

TypeExpr parseTypeExpr(std::string_view text) {
    Parser p(Lexer(text).run(), CtorTable{});
    return p.standaloneType();
}

bool isValidIdent(std::string_view s) {
    if (s.empty() || !(std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    if (s == "_" || s == "true" || s == "false" || s == "mod") return false;
    return !supportedKeywords().count(s) && !reservedKeywords().count(s);
}

}  // namespace manipos
