#include "doctest.h"

#include "../support/gen.hpp"
#include "../support/oracles.hpp"
#include "interp/interp.hpp"
#include "nonlinear/nonlinear.hpp"
#include "syntax/parse.hpp"
#include "syntax/print.hpp"

using namespace manipos;

namespace {

const TopItem* itemNamed(const Program& p, const std::string& name) {
    for (const auto& it : p.items)
        if (it.kind == ItemKind::Binding && it.pat.kind == PatKind::Var && it.pat.name == name) return &it;
    return nullptr;
}

std::string norm(const std::string& text) { return printProgram(normalizeProgram(parseProgram(text))); }

const char* kFig9 =
    "let a = 1\n"
    "\n"
    "let c =\n"
    "  let x = (a, b, c, d) in\n"
    "  let a = 0 in\n"
    "  x\n"
    "\n"
    "let b = 2\n";

}  // namespace

TEST_CASE("reordering the out-of-order scope example") {
    Program p = normalizeProgram(parseProgram(kFig9));
    CHECK(oracle::unboundNames(p).empty());
    const TopItem* c = itemNamed(p, "c");
    REQUIRE(c);
    CHECK(c->rec);
    bool dIsHole = false;
    forEachExpr(c->expr, [&](const Expr& e) {
        if (e.kind == ExprKind::Let && e.pats[0].name == "d" && e.kids[0].kind == ExprKind::Hole) dIsHole = true;
    });
    CHECK(dIsHole);

    RunResult r = run(std::make_shared<const Program>(p));
    ValuePtr cv = lookup(r.topEnv.get(), "c");
    REQUIRE(cv);
    REQUIRE(cv->kind == VKind::Tuple);
    CHECK(printValue(*cv->items[0]) == "0");
    CHECK(printValue(*cv->items[1]) == "2");
}

TEST_CASE("ordered programs are unchanged") {
    const char* text =
        "let a = 1\n"
        "\n"
        "let rec f x = f (x + a)\n";
    CHECK(printProgram(reorder(parseProgram(text))) == text);
}

TEST_CASE("mutual dependence terminates and keeps the order") {
    Program p = reorder(parseProgram("let a = b + 1\n\nlet b = a + 1\n"));
    REQUIRE(p.items.size() == 2);
    CHECK(p.items[0].pat.name == "a");
    CHECK(p.items[1].pat.name == "b");
    CHECK_FALSE(p.items[0].rec);
    CHECK_FALSE(p.items[1].rec);
}

TEST_CASE("duplicate names in one scope are rejected") {
    CHECK_THROWS_AS(reorder(parseProgram("let a = 1\n\nlet a = 2\n")), DuplicateName);
    CHECK_THROWS_AS(reorder(parseProgram("let f =\n  let x = 1 in\n  let x = 2 in\n  x\n")), DuplicateName);
}

TEST_CASE("positions ride along with moved bindings") {
    Program p = reorder(parseProgram("let a = b [@@pos 1, 2]\n\nlet b = 3 [@@pos 5, 6]\n"));
    CHECK(p.items[0].pat.name == "b");
    REQUIRE(p.items[0].attrs.pos);
    CHECK(p.items[0].attrs.pos->first == 5);
}

TEST_CASE("missing bindings become holes or function skeletons") {
    Program p = insertMissingBindings(parseProgram("let length_int = length int_list\n"));
    std::string text = printProgram(p);
    CHECK(text.find("let length x1 = (??)") != std::string::npos);
    CHECK(text.find("let int_list = (??)") != std::string::npos);
    CHECK(oracle::unboundNames(p).empty());

    Program q = insertMissingBindings(parseProgram("let f x = g x 1\n"));
    CHECK(printProgram(q).find("let g x1 x2 = (??)") != std::string::npos);
    CHECK(oracle::unboundNames(q).empty());

    const char* closed = "let a = 1\n";
    CHECK(printProgram(insertMissingBindings(parseProgram(closed))) == closed);
}

TEST_CASE("reorder is idempotent on random scoped programs") {
    testgen::Gen g(99);
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
        Program p = g.scopedProgram(1 + g.below(6));
        INFO(printProgram(p));
        Program once = reorder(p);
        Program twice = reorder(once);
        CHECK(printProgram(once) == printProgram(twice));
        Program full = normalizeProgram(p);
        CHECK(printProgram(full) == printProgram(normalizeProgram(full)));
        ++compared;
    }
    CHECK(compared == 300);
}

namespace {

const char* kAfterDestruct =
    "let rec length list =\n"
    "  let one = 1 in\n"
    "  let length2 = length (match list with\n"
    "    | hd :: tail -> tail) in\n"
    "  match list with\n"
    "  | [] -> (??)\n"
    "  | hd :: tail -> (??)\n";

}  // namespace

TEST_CASE("dragging the tail moves the recursive call into the cons branch") {
    Program p = normalizeProgram(parseProgram(kAfterDestruct));
    const Expr& fun = p.items[0].expr;
    const Expr* body = &fun.kids[0];
    REQUIRE(body->kind == ExprKind::Let);
    CHECK(body->pats[0].name == "one");
    const Expr& m = body->kids[1];
    REQUIRE(m.kind == ExprKind::Match);
    REQUIRE(m.pats.size() == 2);
    CHECK(m.pats[0].name == "[]");
    CHECK(m.kids[1].kind == ExprKind::Hole);
    const Expr& cons = m.kids[2];
    REQUIRE(cons.kind == ExprKind::Let);
    CHECK(cons.pats[0].name == "length2");
    CHECK(printExpr(cons.kids[0]) == "length tail");
    CHECK(cons.kids[1].kind == ExprKind::Hole);
    CHECK(oracle::unboundNames(p).empty());
}

TEST_CASE("a second extraction of the same tail changes nothing") {
    std::string once = norm(kAfterDestruct);
    Program p = parseProgram(once);
    Expr& body = p.items[0].expr.kids[0];
    Expr extraction = parseExpr("match list with\n  | hd :: tail -> tail", CtorTable{});
    body = Expr::let(false, Pattern::var("tail2"), std::move(extraction), std::move(body));
    dedupeIds(p);
    CHECK(printProgram(normalizeProgram(p)) == once);
    CHECK(norm(once) == once);
}

TEST_CASE("extraction floats out of an argument and completes the split") {
    std::string out = norm(
        "let rec length list =\n"
        "  1 + length (match list with\n"
        "    | hd :: tail -> tail)\n");
    CHECK(out ==
          "let rec length list =\n"
          "  match list with\n"
          "  | [] -> (??)\n"
          "  | hd :: tail -> 1 + length tail\n");
}

TEST_CASE("destruct inserts one hole branch per constructor") {
    Program p = parseProgram("let length list = (??)\n");
    Program d = destruct(p, p.items[0].id, "list", "list");
    CHECK(printProgram(d) ==
          "let length list =\n"
          "  match list with\n"
          "  | [] -> (??)\n"
          "  | hd :: tail -> (??)\n");

    Program t = parseProgram(
        "type shape =\n"
        "  | Circle of int\n"
        "  | Rect of int * int\n"
        "  | Dot\n"
        "\n"
        "let area s = (??)\n");
    Program dt = destruct(t, t.items[0].id, "s", "shape");
    const Expr& m = dt.items[0].expr.kids[0];
    REQUIRE(m.kind == ExprKind::Match);
    CHECK(m.pats.size() == 3);
    for (std::size_t i = 1; i < m.kids.size(); ++i) CHECK(m.kids[i].kind == ExprKind::Hole);
    CHECK(printPattern(m.pats[1]) == "Rect (i1, i2)");

    CHECK_THROWS_AS(destruct(p, p.items[0].id, "list", "int"), NotAnAdt);
}

TEST_CASE("extraction expressions") {
    CtorTable ctors;
    CHECK(printExpr(extractionExpr({{"::", 1}}, "list", ctors, {})) == "match list with | hd :: tail -> tail");
    Expr deep = extractionExpr({{"::", 1}, {"::", 1}}, "list", ctors, {});
    CHECK(printExpr(deep).find("tail2") != std::string::npos);
    CHECK(printExpr(extractionExpr({}, "list", ctors, {})) == "list");
}

TEST_CASE("names") {
    CHECK(freshName("tail", {"tail", "tail2"}) == "tail3");
    CHECK(freshName("x", {}) == "x");
    CtorTable ctors;
    CHECK(suggestName(parseExpr("[0; 0; 0]", ctors), ctors) == "int_list");
    CHECK(suggestName(parseExpr("length int_list", ctors), ctors) == "length_int");
    CHECK(suggestName(parseExpr("1 + 0", ctors), ctors) == "sum");
}
