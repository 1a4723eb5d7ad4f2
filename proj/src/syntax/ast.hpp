#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace manipos {

/// Stable identifier of a syntax node. Zero means "unassigned".
struct NodeId {
    std::uint32_t value = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint32_t v) : value(v) {}

    constexpr bool valid() const { return value != 0; }
    auto operator<=>(const NodeId&) const = default;
};

struct NodeIdHash {
    std::size_t operator()(NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

/// Attributes attached to bindings (`[@@...]`) or expressions (`[@...]`).
struct Attrs {
    std::optional<std::pair<int, int>> pos;  // [@@pos x, y]
    std::vector<std::string> notHashes;      // [@not h], one per rejected fill
    bool pending = false;                    // [@pending]: synthesized, awaiting review
    std::vector<std::string> other;          // unknown attributes, raw text between the brackets

    bool empty() const { return !pos && notHashes.empty() && !pending && other.empty(); }
    bool operator==(const Attrs&) const = default;
};

struct Literal {
    enum class Kind { Int, Float, String, Char };
    Kind kind = Kind::Int;
    std::int64_t i = 0;
    double f = 0.0;
    std::string s;
    char c = 0;

    static Literal ofInt(std::int64_t v) { Literal l; l.kind = Kind::Int; l.i = v; return l; }
    static Literal ofFloat(double v) { Literal l; l.kind = Kind::Float; l.f = v; return l; }
    static Literal ofString(std::string v) { Literal l; l.kind = Kind::String; l.s = std::move(v); return l; }
    static Literal ofChar(char v) { Literal l; l.kind = Kind::Char; l.c = v; return l; }

    bool operator==(const Literal& o) const;
};

enum class PatKind { Var, Wild, Ctor, Tuple };

struct Pattern {
    PatKind kind = PatKind::Wild;
    NodeId id;
    std::string name;           // Var: variable, Ctor: constructor
    std::vector<Pattern> args;  // Ctor arguments or tuple components

    static Pattern var(std::string n) { Pattern p; p.kind = PatKind::Var; p.name = std::move(n); return p; }
    static Pattern wild() { return Pattern{}; }
    static Pattern unit() { Pattern p; p.kind = PatKind::Ctor; p.name = "()"; return p; }
    static Pattern ctor(std::string n, std::vector<Pattern> a) {
        Pattern p; p.kind = PatKind::Ctor; p.name = std::move(n); p.args = std::move(a); return p;
    }
    static Pattern tuple(std::vector<Pattern> a) { Pattern p; p.kind = PatKind::Tuple; p.args = std::move(a); return p; }

    /// Names bound by the pattern, left to right.
    std::vector<std::string> boundNames() const;
};

enum class ExprKind { Hole, Const, Ctor, Var, Fun, App, Let, Tuple, If, Match };

/// Expression node. Children layout by kind:
///   App   kids = [fn, arg1..argN]
///   Ctor  kids = constructor arguments
///   Tuple kids = components
///   If    kids = [cond, then, else]
///   Let   kids = [rhs, body], pats = [lhs]; `id` doubles as the binding id
///   Fun   kids = [body], pats = [param]
///   Match kids = [scrutinee, body1..bodyN], pats = [pattern1..patternN]
struct Expr {
    ExprKind kind = ExprKind::Hole;
    NodeId id;
    Attrs attrs;      // expression attributes
    Literal lit;      // Const
    std::string name; // Var, Ctor
    bool rec = false; // Let
    Attrs bindAttrs;  // Let: binding attributes
    std::vector<Pattern> pats;
    std::vector<Expr> kids;

    static Expr hole() { return Expr{}; }
    static Expr constant(Literal l) { Expr e; e.kind = ExprKind::Const; e.lit = std::move(l); return e; }
    static Expr var(std::string n) { Expr e; e.kind = ExprKind::Var; e.name = std::move(n); return e; }
    static Expr ctor(std::string n, std::vector<Expr> args = {}) {
        Expr e; e.kind = ExprKind::Ctor; e.name = std::move(n); e.kids = std::move(args); return e;
    }
    static Expr app(Expr fn, std::vector<Expr> args);
    static Expr fun(Pattern param, Expr body);
    static Expr let(bool rec, Pattern lhs, Expr rhs, Expr body);
    static Expr tuple(std::vector<Expr> elems) { Expr e; e.kind = ExprKind::Tuple; e.kids = std::move(elems); return e; }
    static Expr ifThenElse(Expr c, Expr t, Expr f);
    static Expr match(Expr scrutinee, std::vector<std::pair<Pattern, Expr>> arms);

    // Accessors; only meaningful for the matching kind.
    const Expr& fn() const { return kids[0]; }
    std::size_t armCount() const { return pats.size(); }
    const Expr& scrutinee() const { return kids[0]; }
    const Expr& armBody(std::size_t i) const { return kids[i + 1]; }
    Expr& armBody(std::size_t i) { return kids[i + 1]; }
    const Expr& rhs() const { return kids[0]; }
    Expr& rhs() { return kids[0]; }
    const Expr& body() const { return kind == ExprKind::Let ? kids[1] : kids[0]; }
    Expr& body() { return kind == ExprKind::Let ? kids[1] : kids[0]; }
    const Pattern& lhs() const { return pats[0]; }

    bool isHole() const { return kind == ExprKind::Hole; }
};

/// Surface type expression, as written in type declarations.
struct TypeExpr {
    enum class Kind { Var, Con, Arrow, Tuple };
    Kind kind = Kind::Con;
    std::string name;             // Var: without the quote; Con: type constructor
    std::vector<TypeExpr> args;   // Con params, Arrow [from, to], Tuple components

    bool operator==(const TypeExpr&) const = default;
};

struct CtorDecl {
    std::string name;
    std::vector<TypeExpr> args;
    bool operator==(const CtorDecl&) const = default;
};

struct TypeDecl {
    std::string name;
    std::vector<std::string> params;
    std::vector<CtorDecl> ctors;
    bool operator==(const TypeDecl&) const = default;
};

enum class ItemKind { Binding, Assert };

/// A top-level item: `let [rec] pat = expr` or `let () = assert (expr = expected)`.
struct TopItem {
    ItemKind kind = ItemKind::Binding;
    NodeId id;
    bool rec = false;
    Pattern pat;
    Expr expr;      // binding right-hand side, or assertion subject
    Expr expected;  // assertion expected value
    Attrs attrs;
};

struct Program {
    std::vector<TypeDecl> types;
    std::vector<TopItem> items;
    std::uint32_t nextId = 1;

    NodeId mint() { return NodeId{nextId++}; }
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg);
};

struct UnknownNode : std::runtime_error {
    NodeId id;
    explicit UnknownNode(NodeId n);
};

// Structural equality ignoring node ids.
bool sameShape(const Pattern& a, const Pattern& b);
bool sameShape(const Expr& a, const Expr& b);
bool sameShape(const TopItem& a, const TopItem& b);
bool sameShape(const Program& a, const Program& b);

/// Renumbers every node of the program in pre-order starting at 1.
void assignIds(Program& p);
/// Gives every unassigned node in `e` a fresh id from `p`.
void mintMissing(Program& p, Expr& e);
void mintMissing(Program& p, Pattern& pat);
/// Keeps the first occurrence of each id in pre-order; later duplicates and
/// unassigned nodes get fresh ids.
void dedupeIds(Program& p);
/// Gives every node in `e` a fresh id, dropping the old ones.
void remint(Program& p, Expr& e);

// Lookup helpers. The returned pointers are invalidated by any edit of `p`.
Expr* findExpr(Program& p, NodeId id);
const Expr* findExpr(const Program& p, NodeId id);
Pattern* findPattern(Program& p, NodeId id);
const Pattern* findPattern(const Program& p, NodeId id);
TopItem* findItem(Program& p, NodeId id);
const TopItem* findItem(const Program& p, NodeId id);

// Generic pre-order visitation over every expression of the program.
void forEachExpr(const Expr& e, const std::function<void(const Expr&)>& f);
void forEachExpr(const Program& p, const std::function<void(const Expr&)>& f);
void forEachPattern(const Expr& e, const std::function<void(const Pattern&)>& f);

bool isOperatorName(const std::string& name);
bool isInfixOperator(const std::string& name);

}  // namespace manipos
