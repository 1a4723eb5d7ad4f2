#include "doctest.h"

#include "syntax/parse.hpp"
#include "types/infer.hpp"

using namespace manipos;

namespace {

std::string typeOf(const Typing& t, const std::string& name) {
    for (auto it = t.topBindings.rbegin(); it != t.topBindings.rend(); ++it)
        if (it->name == name) return t.store->show(it->scheme.body);
    return "<none>";
}

}  // namespace

TEST_CASE("inference of simple bindings") {
    Program p = parseProgram(
        "let rec length list =\n"
        "  match list with\n"
        "  | [] -> 0\n"
        "  | hd :: tail -> length tail + 1\n"
        "\n"
        "let id x = x\n"
        "let pair = (id 1, id \"a\")\n");
    Typing t = inferProgram(p, CtorTable(p.types));
    CHECK(t.errors.empty());
    CHECK(typeOf(t, "length") == "'a list -> int");
    CHECK(typeOf(t, "pair") == "int * string");
}

TEST_CASE("type errors are recorded, not thrown") {
    Program p = parseProgram("let x = 1 + \"a\"\nlet y = nope");
    Typing t = inferProgram(p, CtorTable(p.types));
    CHECK(t.errors.size() == 2);
}

TEST_CASE("hole contexts list locals most recent first") {
    Program p = parseProgram("let f a b = let c = a + b in (??)");
    Typing t = inferProgram(p, CtorTable(p.types));
    REQUIRE(t.holes.size() == 1);
    const HoleContext& h = t.holes.begin()->second;
    REQUIRE(h.locals.size() >= 3);
    CHECK(h.locals[0].name == "c");
    CHECK(h.locals[1].name == "b");
    CHECK(h.locals[2].name == "a");
    CHECK(h.locals[0].nonConstant);
    CHECK(t.store->show(h.goal) != "");
}

TEST_CASE("speculative types narrow a hole goal") {
    Program p = parseProgram("let length x1 = (??)");
    InferOptions o;
    o.speculative["length"] = parseTypeExpr("int list -> int");
    Typing t = inferProgram(p, CtorTable(p.types), o);
    REQUIRE(t.holes.size() == 1);
    CHECK(t.store->show(t.holes.begin()->second.goal) == "int");
}

TEST_CASE("user type declarations") {
    Program p = parseProgram(
        "type 'a tree =\n"
        "  | Leaf\n"
        "  | Node of 'a tree * 'a * 'a tree\n"
        "\n"
        "let t = Node (Leaf, 1, Leaf)\n");
    Typing t = inferProgram(p, CtorTable(p.types));
    CHECK(t.errors.empty());
    CHECK(typeOf(t, "t") == "int tree");
}

TEST_CASE("unification undo restores state") {
    TypeStore s;
    Ty a = s.fresh(1);
    std::size_t m = s.mark();
    REQUIRE(s.unify(a, s.intTy()));
    CHECK(s.show(a) == "int");
    s.undo(m);
    CHECK(s.show(a) != "int");
    CHECK_FALSE(s.unify(s.listOf(a), a));
}
