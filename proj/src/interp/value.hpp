#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"

namespace manipos {

struct PervasiveSig;
struct Value;
struct EnvNode;

using ValuePtr = std::shared_ptr<Value>;
using EnvPtr = std::shared_ptr<EnvNode>;

/// Persistent environment; `value` is only reassigned to tie recursive knots.
struct EnvNode {
    std::string name;
    ValuePtr value;
    EnvPtr next;
};

EnvPtr bind(EnvPtr env, std::string name, ValuePtr v);
/// nullptr when unbound (or bound to a recursive knot not yet tied).
ValuePtr lookup(const EnvNode* env, const std::string& name);

enum class VKind : std::uint8_t { Int, Float, String, Char, Ctor, Tuple, Closure, Prim, Hole, Bomb };

struct Visit {
    std::uint32_t frame;
    NodeId node;
};

struct Value {
    VKind kind = VKind::Bomb;
    std::int64_t i = 0;
    double f = 0.0;
    char c = 0;
    std::string s;                // String payload, constructor name, closure binding name
    std::vector<ValuePtr> items;  // constructor args, tuple parts, partial arguments
    const Expr* fun = nullptr;    // Closure: first node of the function chain
    int arity = 0;                // Closure / Prim: parameters consumed by one call
    const PervasiveSig* prim = nullptr;
    EnvPtr env;                   // Closure / Hole: captured environment
    NodeId intro;                 // Hole: introducing node; Closure: function node
    ValuePtr cause;               // Bomb: the hole that was applied; arguments in `items`
    std::uint64_t serial = 0;     // unique within a run
    std::vector<Visit> visits;

    bool isHoleOrBomb() const { return kind == VKind::Hole || kind == VKind::Bomb; }
    /// Whether the value contains a hole or bomb anywhere inside.
    bool incomplete() const;
};

enum class Verdict { Pass, Fail, Indeterminate };

/// Structural equality; any hole or bomb not settled by a definite mismatch
/// makes the result indeterminate, never a pass.
Verdict valuesEqual(const Value& a, const Value& b);

/// Total order on ground first-order values. `ok` is cleared for holes, bombs and functions.
int compareValues(const Value& a, const Value& b, const CtorTable* ctors, bool& ok);

/// OCaml-like rendering: lists as `[1; 2]`, holes as `?`, bombs as `<bomb>`,
/// closures by the name they were bound to.
std::string printValue(const Value& v);

/// The value as an expression that evaluates to it, when it is first-order.
bool valueToExpr(const Value& v, Expr& out);

}  // namespace manipos
