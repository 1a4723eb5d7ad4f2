#include "doctest.h"

#include <memory>

#include "../support/gen.hpp"
#include "interp/interp.hpp"
#include "syntax/parse.hpp"
#include "syntax/print.hpp"

using namespace manipos;

namespace {

RunResult runText(const std::string& text, RunOptions opts = {}) {
    return run(std::make_shared<const Program>(parseProgram(text)), opts);
}

std::string top(const RunResult& r, const std::string& name) {
    ValuePtr v = lookup(r.topEnv.get(), name);
    return v ? printValue(*v) : "<unbound>";
}

VKind topKind(const RunResult& r, const std::string& name) {
    ValuePtr v = lookup(r.topEnv.get(), name);
    REQUIRE(v);
    return v->kind;
}

const char* kLength =
    "let rec length list =\n"
    "  match list with\n"
    "  | [] -> 0\n"
    "  | hd :: tail -> length tail + 1\n"
    "\n"
    "let n = length [0; 0; 0]\n";

}  // namespace

TEST_CASE("hole binding evaluates to a hole value") {
    RunResult r = runText("let x = (??)");
    CHECK(topKind(r, "x") == VKind::Hole);
    const Expr& hole = r.program->items[0].expr;
    auto vs = valuesAt(r, hole.id);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0]->kind == VKind::Hole);
    CHECK(vs[0]->intro == hole.id);
}

TEST_CASE("eliminating holes gives bombs, introducing them keeps holes") {
    RunResult r = runText(
        "let a = (??) + (??)\n"
        "let b = if (??) then 1 else 2\n"
        "let c = (1, (??))\n"
        "let d = match (??) with\n  | [] -> 0\n  | x :: y -> 1\n"
        "let e = (??) 3\n"
        "let f = Some (??)\n");
    CHECK(topKind(r, "a") == VKind::Bomb);
    CHECK(topKind(r, "b") == VKind::Bomb);
    CHECK(top(r, "c") == "(1, ?)");
    CHECK(topKind(r, "d") == VKind::Bomb);
    CHECK(topKind(r, "e") == VKind::Bomb);
    CHECK(top(r, "f") == "Some ?");
}

TEST_CASE("a bomb from applying a hole remembers the hole and its arguments") {
    RunResult r = runText("let f = (??)\nlet y = f 1 2");
    ValuePtr y = lookup(r.topEnv.get(), "y");
    REQUIRE(y->kind == VKind::Bomb);
    REQUIRE(y->cause);
    CHECK(y->cause->kind == VKind::Hole);
    REQUIRE(y->items.size() == 2);
    CHECK(y->items[1]->i == 2);
}

TEST_CASE("divergence is cut by fuel and later bindings still run") {
    RunResult r = runText("let rec f a = f a\nlet y = f 0\nlet z = 1");
    CHECK(topKind(r, "y") == VKind::Bomb);
    CHECK(top(r, "z") == "1");
    std::vector<std::size_t> perItem(r.program->items.size());
    for (const auto& t : r.trace) ++perItem[t.topIndex];
    for (auto n : perItem) CHECK(n <= 1000);
}

TEST_CASE("length skeleton calling itself on a hole terminates") {
    RunResult r = runText(
        "let rec length list =\n"
        "  match list with\n"
        "  | [] -> 0\n"
        "  | hd :: tail -> length (??) + 1\n"
        "\n"
        "let n = length [0; 0; 0]\n"
        "let after = 7\n");
    CHECK(topKind(r, "n") == VKind::Bomb);
    CHECK(top(r, "after") == "7");
    auto frames = framesFor(r, r.program->items[0].id);
    REQUIRE(frames.size() == 2);
    CHECK(printValue(*frames[1].args[0]) == "?");
}

TEST_CASE("inner let reserves fuel and binds a bomb when it runs out") {
    RunResult r = runText(
        "let rec f a = f a\n"
        "let y =\n"
        "  let stuck = f 0 in\n"
        "  (stuck, 5)\n");
    CHECK(top(r, "y") == "(<bomb>, 5)");
}

TEST_CASE("frames of a completed length") {
    RunResult r = runText(kLength);
    CHECK(top(r, "n") == "3");
    auto frames = framesFor(r, r.program->items[0].id);
    REQUIRE(frames.size() == 4);
    const char* ins[] = {"[0; 0; 0]", "[0; 0]", "[0]", "[]"};
    const char* outs[] = {"3", "2", "1", "0"};
    for (int i = 0; i < 4; ++i) {
        CHECK(printValue(*frames[i].args[0]) == ins[i]);
        CHECK(printValue(*frames[i].result) == outs[i]);
        if (i) CHECK(frames[i].frame > frames[i - 1].frame);
    }
}

TEST_CASE("uncalled function has no frames and non-functions are rejected") {
    RunResult r = runText("let f x = x\nlet y = 2");
    CHECK(framesFor(r, r.program->items[0].id).empty());
    CHECK_THROWS_AS(framesFor(r, r.program->items[1].id), UnknownNode);
}

TEST_CASE("values at pattern and scrutinee nodes") {
    RunResult r = runText(kLength);
    const Expr& fun = r.program->items[0].expr;
    const Expr& m = fun.kids[0];
    REQUIRE(m.kind == ExprKind::Match);
    auto scrut = valuesAt(r, m.kids[0].id);
    REQUIRE(scrut.size() == 4);
    CHECK(printValue(*scrut[0]) == "[0; 0; 0]");
    CHECK(printValue(*scrut[3]) == "[]");

    auto frames = framesFor(r, r.program->items[0].id);
    const Pattern& tail = m.pats[1].args[1];
    auto tv = valuesAt(r, tail.id, frames[0].frame);
    REQUIRE(tv.size() == 1);
    CHECK(printValue(*tv[0]) == "[0; 0]");

    RunResult dead = runText("let x = if true then 1 else 2");
    CHECK(valuesAt(dead, dead.program->items[0].expr.kids[2].id).empty());
}

TEST_CASE("assertions are logged without aborting") {
    RunResult r = runText(
        "let x = 2\n"
        "let () = assert (x = 3)\n"
        "let () = assert ((??) = 3)\n"
        "let () = assert (x = 2)\n"
        "let y = 5\n");
    REQUIRE(r.asserts.size() == 3);
    CHECK(r.asserts[0].passed == Verdict::Fail);
    CHECK(r.asserts[1].passed == Verdict::Indeterminate);
    CHECK(r.asserts[1].actual->kind == VKind::Hole);
    CHECK(r.asserts[2].passed == Verdict::Pass);
    CHECK_FALSE(r.allAssertsPass());
    CHECK(top(r, "y") == "5");
}

TEST_CASE("pervasives") {
    RunResult r = runText(
        "let a = 7 / 2\n"
        "let b = 7 mod 0\n"
        "let c = \"ab\" ^ \"cd\"\n"
        "let d = [1; 2] @ [3]\n"
        "let e = max 3 (~- 4)\n"
        "let f = not (1 < 2) || 2 <= 2\n"
        "let g = (+) 1\n"
        "let h = g 2\n"
        "let i = 1.5 *. 2.0\n"
        "let j = fst (1, \"x\")\n"
        "let k = Some 1 < None\n");
    CHECK(top(r, "a") == "3");
    CHECK(topKind(r, "b") == VKind::Bomb);
    CHECK(top(r, "c") == "\"abcd\"");
    CHECK(top(r, "d") == "[1; 2; 3]");
    CHECK(top(r, "e") == "3");
    CHECK(top(r, "f") == "true");
    CHECK(top(r, "h") == "3");
    CHECK(top(r, "i") == "3.0");
    CHECK(top(r, "j") == "1");
    CHECK(top(r, "k") == "false");
}

TEST_CASE("closures are displayed by binding name") {
    RunResult r = runText("let twice f x = f (f x)\nlet g = twice");
    CHECK(top(r, "g") == "twice");
}

TEST_CASE("unbound variables and missing cases evaluate to bombs") {
    RunResult r = runText("let a = nope\nlet b = match 1 :: [] with\n  | [] -> 0\n");
    CHECK(topKind(r, "a") == VKind::Bomb);
    CHECK(topKind(r, "b") == VKind::Bomb);
}

TEST_CASE("fills replace holes during evaluation") {
    auto p = std::make_shared<const Program>(parseProgram("let x = (??) + 1\nlet y = (??)"));
    Expr fill = parseExpr("41", CtorTable{});
    FillMap fills{{p->items[0].expr.kids[1].id, &fill}};
    RunOptions o;
    o.fills = &fills;
    RunResult r = run(p, o);
    CHECK(top(r, "x") == "42");
    CHECK(r.filledHolesVisited.size() == 1);
}

TEST_CASE("asserts-only mode skips unrelated bindings") {
    RunOptions o;
    o.assertsOnly = true;
    RunResult r = runText("let a = 1\nlet b = 2\nlet c = a + 1\nlet () = assert (c = 2)", o);
    CHECK(r.allAssertsPass());
    CHECK(lookup(r.topEnv.get(), "b") == nullptr);
}

TEST_CASE("trace export lines") {
    RunResult r = runText("let x = 1");
    std::string t = exportTrace(r);
    CHECK(t.find("\teval\t1\n") != std::string::npos);
    CHECK(t.find("\tbind\t1\n") != std::string::npos);
}

TEST_CASE("runs are deterministic and never throw on random programs with holes") {
    testgen::Gen g(17);
    for (int i = 0; i < 200; ++i) {
        Program p = g.program(4);
        std::string text = printProgram(p);
        auto a = runText(text);
        auto b = runText(text);
        CHECK(exportTrace(a) == exportTrace(b));
    }
}
