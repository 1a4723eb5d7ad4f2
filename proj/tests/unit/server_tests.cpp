#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "../support/oracles.hpp"
#include "server/http.hpp"
#include "server/session.hpp"
#include "syntax/parse.hpp"
#include "syntax/print.hpp"

using namespace manipos;
using json = nlohmann::json;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "manipos-XXXXXX").string();
        path = ::mkdtemp(tmpl.data());
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name, std::ios::binary) << text;
        return path / name;
    }
    std::string read(const std::string& name) const {
        std::ifstream f(path / name, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
};

std::string fixture(const std::string& name) {
    std::ifstream f(std::string(MANIPOS_FIXTURES) + "/" + name, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string edit(const std::string& text, const std::string& actionJson) {
    Program p = parseProgram(text);
    EditContext ctx;
    auto shared = std::make_shared<const Program>(p);
    std::optional<RunResult> r;
    ctx.run = [&]() -> const RunResult& {
        if (!r) r = run(shared);
        return *r;
    };
    return applyEdit(p, parseAction(actionJson), ctx);
}

const TopItem& item(const Program& p, const std::string& name) {
    for (const auto& it : p.items)
        if (it.kind == ItemKind::Binding && it.pat.kind == PatKind::Var && it.pat.name == name) return it;
    throw std::runtime_error("no binding " + name);
}

bool hasItem(const Program& p, const std::string& name) {
    for (const auto& it : p.items)
        if (it.kind == ItemKind::Binding && it.pat.kind == PatKind::Var && it.pat.name == name) return true;
    return false;
}

const Expr* findFirst(const Program& p, const std::function<bool(const Expr&)>& pred) {
    const Expr* hit = nullptr;
    forEachExpr(p, [&](const Expr& e) {
        if (!hit && pred(e)) hit = &e;
    });
    return hit;
}

const json* canvasAt(const json& doc, const std::string& path) {
    for (const auto& c : doc["canvases"])
        if (c["path"] == path) return &c;
    return nullptr;
}

const char* kLength =
    "let rec length list =\n"
    "  match list with\n"
    "  | [] -> 0\n"
    "  | hd :: tail ->\n"
    "    let length2 = length tail in\n"
    "    length2 + 1\n"
    "\n"
    "let () = assert (length [0; 0; 0] = 3)\n";

}  // namespace

TEST_CASE("actions round trip through their wire form") {
    const char* forms[] = {
        R"({"kind":"addCode","canvas":"top","text":"length int_list","pos":[3,4]})",
        R"({"kind":"editNode","node":7,"text":"list"})",
        R"({"kind":"deleteNode","node":7,"token":"abc"})",
        R"({"kind":"dragDrop","source":{"value":{"node":4,"frame":2,"path":[{"ctor":"::","arg":1}]}},"target":{"node":9}})",
        R"j({"kind":"dragDrop","source":{"template":"length (??)"},"target":{"canvas":"3"}})j",
        R"({"kind":"setPos","node":2,"x":10,"y":-5})",
        R"({"kind":"destruct","value":{"node":4,"path":[]}})",
        R"({"kind":"focusFrame","function":2,"frame":5})",
        R"({"kind":"addAssertColumn","function":2,"args":["[0; 0]"],"expected":"2"})",
        R"({"kind":"synth"})",
        R"({"kind":"acceptFill","node":8})",
        R"({"kind":"rejectFill","node":8})",
        R"({"kind":"undo"})",
        R"({"kind":"redo"})",
    };
    for (const char* f : forms) {
        INFO(f);
        Action a = parseAction(f);
        CHECK(json::parse(actionToJson(a)) == json::parse(actionToJson(parseAction(actionToJson(a)))));
        CHECK(json::parse(actionToJson(a))["kind"] == json::parse(f)["kind"]);
    }
    CHECK_THROWS_AS(parseAction("not json"), ActionError);
    CHECK_THROWS_AS(parseAction(R"({"kind":"fly"})"), ActionError);
    CHECK_THROWS_AS(parseAction(R"({"kind":"deleteNode"})"), ActionError);
}

TEST_CASE("history restores byte-identical texts") {
    History h(3);
    h.push("a");
    h.push("b");
    CHECK(*h.undo("c") == "b");
    CHECK(*h.redo("b") == "c");
    CHECK(*h.undo("c") == "b");
    CHECK(*h.undo("b") == "a");
    CHECK_FALSE(h.undo("a"));
    h.push("x");
    CHECK_FALSE(h.redo("y"));
    for (int i = 0; i < 10; ++i) h.push(std::to_string(i));
    CHECK(h.undoDepth() == 3);
}

TEST_CASE("adding code names the binding and creates missing functions") {
    Program p = parseProgram(edit("", R"({"kind":"addCode","canvas":"top","text":"length int_list"})"));
    REQUIRE(hasItem(p, "length_int"));
    REQUIRE(hasItem(p, "length"));
    CHECK(printExpr(item(p, "length").expr) == "fun x1 -> (??)");
    CHECK(item(p, "int_list").expr.kind == ExprKind::Hole);
    CHECK(oracle::unboundNames(p).empty());

    Program q = parseProgram(edit("let f x = x\n", R"j({"kind":"addCode","canvas":"top","text":"assert (f 1 = 1)"})j"));
    REQUIRE(q.items.size() == 2);
    CHECK(q.items[1].kind == ItemKind::Assert);
    CHECK_THROWS_AS(edit("", R"({"kind":"addCode","canvas":"top","text":"let let"})"), ActionError);
}

TEST_CASE("deleting an expression leaves a hole") {
    std::string text = "let a = 1 + 2\n";
    Program p = parseProgram(text);
    NodeId plus = p.items[0].expr.id;
    Program q = parseProgram(edit(text, R"({"kind":"deleteNode","node":)" + std::to_string(plus.value) + "}"));
    CHECK(q.items[0].expr.kind == ExprKind::Hole);

    Program r = parseProgram(edit(text, R"({"kind":"deleteNode","node":)" + std::to_string(p.items[0].id.value) + "}"));
    CHECK(r.items.empty());
}

TEST_CASE("unknown and stale nodes") {
    try {
        edit("let a = 1\n", R"({"kind":"deleteNode","node":999})");
        FAIL("expected an error");
    } catch (const ActionError& e) {
        CHECK(e.kind == "UnknownNode");
    }
    Program p = parseProgram("let a = 1\n");
    EditContext ctx;
    ctx.currentToken = "now";
    try {
        applyEdit(p, parseAction(R"({"kind":"deleteNode","node":999,"token":"before"})"), ctx);
        FAIL("expected an error");
    } catch (const ActionError& e) {
        CHECK(e.kind == "StaleNode");
        CHECK(e.status == 409);
    }
}

TEST_CASE("renaming a parameter renames its uses") {
    std::string text = "let length x1 = x1\n";
    Program p = parseProgram(text);
    NodeId param = p.items[0].expr.pats[0].id;
    Program q = parseProgram(edit(text, R"({"kind":"editNode","node":)" + std::to_string(param.value) + R"(,"text":"list"})"));
    CHECK(printExpr(q.items[0].expr) == "fun list -> list");
}

TEST_CASE("the length walkthrough by actions") {
    std::string text = "let length list = (??)\n\nlet () = assert (length [0; 0; 0] = 3)\n";
    Program p = parseProgram(text);
    NodeId listParam = p.items[0].expr.pats[0].id;
    text = edit(text, R"({"kind":"destruct","value":{"node":)" + std::to_string(listParam.value) + "}}");
    CHECK(text.find("| hd :: tail -> (??)") != std::string::npos);

    p = parseProgram(text);
    text = edit(text, R"j({"kind":"dragDrop","source":{"template":"length (??)"},"target":{"canvas":")j" +
                          std::to_string(p.items[0].id.value) + R"("}})");
    p = parseProgram(text);
    const Expr* call = findFirst(p, [](const Expr& e) {
        return e.kind == ExprKind::App && e.kids[0].kind == ExprKind::Var && e.kids[0].name == "length";
    });
    REQUIRE(call);
    NodeId hole = call->kids[1].id;
    listParam = p.items[0].expr.pats[0].id;
    text = edit(text, R"({"kind":"dragDrop","source":{"value":{"node":)" + std::to_string(listParam.value) +
                          R"(,"path":[{"ctor":"::","arg":1}]}},"target":{"node":)" + std::to_string(hole.value) + "}}");
    p = parseProgram(text);
    INFO(text);
    CHECK(p.items[0].rec);
    const Expr& m = *findFirst(p, [](const Expr& e) { return e.kind == ExprKind::Match; });
    REQUIRE(m.pats.size() == 2);
    CHECK(m.kids[1].kind == ExprKind::Hole);
    REQUIRE(m.kids[2].kind == ExprKind::Let);
    CHECK(printExpr(m.kids[2].kids[0]) == "length tail");
    CHECK(oracle::unboundNames(p).empty());
}

TEST_CASE("values without a name are copied as literals") {
    std::string text = "let a = (??)\n\nlet b = [1; 2]\n";
    Program p = parseProgram(text);
    std::string out = edit(text, R"({"kind":"dragDrop","source":{"value":{"node":)" +
                                     std::to_string(p.items[1].expr.id.value) +
                                     R"(,"path":[{"ctor":"::","arg":1}]}},"target":{"node":)" +
                                     std::to_string(p.items[0].expr.id.value) + "}}");
    CHECK(printExpr(parseProgram(out).items[0].expr) == "[2]");
}

TEST_CASE("moving an expression into a hole") {
    std::string text = "let a = (??)\n\nlet b = 1 + 2\n";
    Program p = parseProgram(text);
    std::string out = edit(text, R"({"kind":"dragDrop","source":{"node":)" + std::to_string(p.items[1].expr.id.value) +
                                     R"(},"target":{"node":)" + std::to_string(p.items[0].expr.id.value) + "}}");
    Program q = parseProgram(out);
    CHECK(printExpr(item(q, "a").expr) == "1 + 2");
    CHECK(item(q, "b").expr.kind == ExprKind::Hole);
}

TEST_CASE("assert columns and positions") {
    std::string text = "let length list = (??)\n";
    Program p = parseProgram(text);
    std::string id = std::to_string(p.items[0].id.value);
    std::string out =
        edit(text, R"({"kind":"addAssertColumn","function":)" + id + R"(,"args":["[0; 0]"],"expected":"2"})");
    CHECK(out.find("let () = assert (length [0; 0] = 2)") != std::string::npos);
    out = edit(text, R"({"kind":"setPos","node":)" + id + R"(,"x":40,"y":80})");
    CHECK(out.find("[@@pos 40, 80]") != std::string::npos);
}

TEST_CASE("focused frames gray out unvisited bindings") {
    Program p = parseProgram(kLength);
    NodeId fn = p.items[0].id;
    json doc = renderDocument(kLength, {});
    const json* canvas = canvasAt(doc, std::to_string(fn.value));
    REQUIRE(canvas);
    REQUIRE((*canvas)["tvs"].size() == 1);
    CHECK((*canvas)["tvs"][0]["grayedOut"] == false);
    const json& tv = doc["canvases"][0]["tvs"][0];
    const json& grid = tv["function"]["ioGrid"];
    REQUIRE(grid["columns"].size() == 4);
    CHECK(grid["columns"][0]["args"][0]["text"] == "[0; 0; 0]");
    CHECK(grid["columns"][0]["expected"] == "3");
    CHECK(grid["columns"][0]["assertState"] == "pass");
    CHECK(tv["function"]["scrutineeText"] == "list");

    std::uint32_t emptyFrame = grid["columns"][3]["frame"];
    CHECK(grid["columns"][3]["args"][0]["text"] == "[]");
    json focused = renderDocument(kLength, {{fn, emptyFrame}});
    const json* c2 = canvasAt(focused, std::to_string(fn.value));
    CHECK((*c2)["tvs"][0]["grayedOut"] == true);
    int grayReturns = 0, liveReturns = 0;
    for (const auto& r : (*c2)["returnTVs"]) (r["grayedOut"] ? grayReturns : liveReturns)++;
    CHECK(grayReturns == 1);
    CHECK(liveReturns == 1);
    CHECK(renderDocument(kLength, {{fn, emptyFrame}}) == focused);
}

TEST_CASE("io grids show the first and last three frames") {
    std::string text = std::string(kLength) + "\nlet () = assert (length [0; 0; 0; 0; 0; 0; 0; 0; 0; 0] = 10)\n";
    json doc = renderDocument(text, {});
    const json& grid = doc["canvases"][0]["tvs"][0]["function"]["ioGrid"];
    CHECK(grid["columns"].size() == 6);
    CHECK(doc["canvases"][0]["tvs"][0]["function"]["frames"] == 15);
    CHECK(grid["elided"] == 9);
}

TEST_CASE("assertion views") {
    json doc = renderDocument("let a = 1\n\nlet () = assert (a = 2)\n\nlet () = assert (a = 1)\n", {});
    REQUIRE(doc["asserts"].size() == 2);
    CHECK(doc["asserts"][0]["state"] == "fail");
    CHECK(doc["asserts"][0]["actual"]["text"] == "1");
    CHECK(doc["asserts"][0]["expected"]["text"] == "2");
    CHECK(doc["asserts"][1]["state"] == "pass");
    CHECK(doc["asserts"][1]["actual"].is_null());
}

TEST_CASE("tree values carry a layout hint") {
    json doc = renderDocument(
        "type 'a ltree =\n  | Leaf of 'a\n  | Node of 'a ltree * 'a ltree\n\nlet t = Node (Leaf 1, Leaf 2)\n\nlet l = [1]\n",
        {});
    CHECK(doc["canvases"][0]["tvs"][0]["result"]["tree"] == true);
    CHECK(doc["canvases"][0]["tvs"][1]["result"]["tree"] == false);
    CHECK(doc["canvases"][0]["tvs"][0]["result"]["subvalues"].size() == 4);
}

TEST_CASE("autocomplete") {
    json lists = autocomplete("let length list = (??)\n\nlet () = assert (length [0] = 1)\n", NodeId{}, "[", {});
    bool three = false;
    for (const auto& s : lists) three = three || s["insert"] == "[0; 0; 0]";
    CHECK(three);

    json zeros = autocomplete("let a = 0\n\nlet b = 0\n\nlet c = 0\n", NodeId{}, "1 + ", {});
    std::set<std::string> keys;
    for (const auto& s : zeros)
        if (s["kind"] == "value" && s["display"] == "1 + 0") keys.insert(s["colorKey"].get<std::string>());
    CHECK(keys.size() == 3);

    CHECK(autocomplete("", NodeId{}, "zzz", {}).empty());

    std::string text = "let f list =\n  match list with\n  | [] -> (??)\n  | hd :: tail -> (??)\n\nlet () = assert (f [5; 6] = 1)\n";
    Program p = parseProgram(text);
    const Expr* consHole = &findFirst(p, [](const Expr& e) { return e.kind == ExprKind::Match; })->kids[2];
    json inner = autocomplete(text, consHole->id, "ta", {});
    bool tail = false;
    for (const auto& s : inner) tail = tail || (s["kind"] == "name" && s["insert"] == "tail");
    CHECK(tail);
    json six = autocomplete(text, consHole->id, "6", {});
    bool extract = false;
    for (const auto& s : six) extract = extract || s["kind"] == "value";
    CHECK(extract);
}

TEST_CASE("sessions write atomically and undo to the original bytes") {
    TempDir dir;
    const std::string original = "let a = 1\n\nlet b = a + 1\n";
    dir.write("f.ml", original);
    FileSession s(dir.path / "f.ml", {});
    std::string t0 = s.token();
    Program p = parseProgram(original);
    s.handle(parseAction(R"({"kind":"deleteNode","node":)" + std::to_string(p.items[1].expr.id.value) + "}"));
    CHECK(dir.read("f.ml") != original);
    CHECK(s.token() != t0);
    s.handle(parseAction(R"({"kind":"addCode","canvas":"top","text":"[0; 0]"})"));
    std::string two = dir.read("f.ml");
    s.handle(parseAction(R"({"kind":"undo"})"));
    s.handle(parseAction(R"({"kind":"redo"})"));
    CHECK(dir.read("f.ml") == two);
    s.handle(parseAction(R"({"kind":"undo"})"));
    s.handle(parseAction(R"({"kind":"undo"})"));
    CHECK(dir.read("f.ml") == original);
    CHECK(s.token() == t0);
    for (const auto& e : std::filesystem::directory_iterator(dir.path)) CHECK(e.path().filename() == "f.ml");
}

TEST_CASE("external edits change the token only when bytes change") {
    TempDir dir;
    dir.write("f.ml", "let a = 1\n");
    FileSession s(dir.path / "f.ml", {});
    std::string t0 = s.token();
    dir.write("f.ml", "let a = 1\n");
    CHECK_FALSE(s.refresh());
    CHECK(s.token() == t0);

    dir.write("f.ml", "let a = 2\n");
    CHECK(s.refresh());
    std::string t1 = s.token();
    CHECK(t1 != t0);
    CHECK(s.document()["canvases"][0]["tvs"][0]["result"]["text"] == "2");

    dir.write("f.ml", "let a = \n");
    CHECK(s.refresh());
    CHECK(s.token() != t1);
    json doc = s.document();
    CHECK(doc["error"]["kind"] == "ParseError");
    CHECK(doc["canvases"][0]["tvs"][0]["result"]["text"] == "2");
    CHECK_THROWS_AS(s.handle(parseAction(R"({"kind":"addCode","canvas":"top","text":"1"})")), ActionError);

    std::filesystem::remove(dir.path / "f.ml");
    try {
        s.refresh();
        FAIL("expected FileVanished");
    } catch (const ActionError& e) {
        CHECK(e.kind == "FileVanished");
    }
}

TEST_CASE("focusing a frame is view state") {
    TempDir dir;
    dir.write("f.ml", kLength);
    FileSession s(dir.path / "f.ml", {});
    Program p = parseProgram(kLength);
    std::string t0 = s.token();
    s.handle(parseAction(R"({"kind":"focusFrame","function":)" + std::to_string(p.items[0].id.value) + R"(,"frame":4})"));
    CHECK(s.token() != t0);
    CHECK(dir.read("f.ml") == kLength);
    CHECK(s.history().undoDepth() == 0);
    CHECK(s.document()["focus"][std::to_string(p.items[0].id.value)] == 4);
}

TEST_CASE("synthesis jobs run one at a time and land as edits") {
    TempDir dir;
    dir.write("len.ml", fixture("length_sketch.ml"));
    FileSession s(dir.path / "len.ml", {});
    std::string id = s.startSynth();
    CHECK_THROWS_AS(s.startSynth(), ActionError);
    s.joinSynth();
    json st = s.synthStatus(id);
    CHECK(st["status"] == "done");
    json doc = s.document();
    REQUIRE(doc["pending"].size() == 1);
    CHECK(doc["synth"]["status"] == "done");
    std::uint32_t node = doc["pending"][0]["node"];
    s.handle(parseAction(R"({"kind":"acceptFill","node":)" + std::to_string(node) + "}"));
    CHECK(s.document()["pending"].empty());
    CHECK_THROWS_AS(s.synthStatus("nope"), ActionError);
}

TEST_CASE("http endpoints") {
    TempDir dir;
    dir.write("f.ml", "let a = 1\n");
    Workspace ws(dir.path, {}, std::chrono::milliseconds(50));
    ServerOptions so;
    so.port = 0;
    so.pollTimeout = std::chrono::milliseconds(300);
    HttpServer server(ws, so);
    int port = server.bind();
    REQUIRE(port > 0);
    std::thread th([&] { server.serve(); });

    httplib::Client cli("127.0.0.1", port);
    auto shell = cli.Get("/f.ml");
    REQUIRE(shell);
    CHECK(shell->status == 200);
    CHECK(shell->body.find("<html>") != std::string::npos);
    CHECK(cli.Get("/missing.ml")->status == 404);

    auto doc = cli.Get("/api/f.ml/doc");
    REQUIRE(doc);
    json d = json::parse(doc->body);
    std::string token = d["token"];

    auto quiet = cli.Get("/api/f.ml/poll?token=" + token);
    REQUIRE(quiet);
    CHECK(json::parse(quiet->body)["changed"] == false);

    std::thread writer([&] {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        httplib::Client c2("127.0.0.1", port);
        c2.Post("/api/f.ml/action", R"({"kind":"addCode","canvas":"top","text":"a + 1"})", "application/json");
    });
    so.pollTimeout = std::chrono::seconds(5);
    auto woke = cli.Get("/api/f.ml/poll?token=" + token);
    writer.join();
    REQUIRE(woke);
    CHECK(json::parse(woke->body)["changed"] == true);
    CHECK(dir.read("f.ml").find("a + 1") != std::string::npos);

    auto bad = cli.Post("/api/f.ml/action", R"({"kind":"deleteNode","node":4242})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 404);
    CHECK(json::parse(bad->body)["error"] == "UnknownNode");
    auto garbage = cli.Post("/api/f.ml/action", "{", "application/json");
    CHECK(garbage->status == 400);

    auto ac = cli.Get("/api/f.ml/autocomplete?node=0&prefix=a");
    REQUIRE(ac);
    CHECK(json::parse(ac->body).size() >= 1);

    dir.write("s.ml", fixture("append_sketch.ml"));
    auto job = cli.Post("/api/s.ml/synth", "", "text/plain");
    REQUIRE(job);
    CHECK(job->status == 202);
    std::string jobId = json::parse(job->body)["jobId"];
    ws.open("s.ml").joinSynth();
    auto status = cli.Get("/api/s.ml/synth/" + jobId);
    REQUIRE(status);
    CHECK(json::parse(status->body)["status"] == "done");
    CHECK(cli.Get("/api/s.ml/synth/j99")->status == 404);

    server.stop();
    th.join();
}

TEST_CASE("port override") {
    ::setenv("MANIPOS_PORT", "2345", 1);
    CHECK(portFromEnv(1111) == 2345);
    ::setenv("MANIPOS_PORT", "junk", 1);
    CHECK(portFromEnv(1111) == 1111);
    ::unsetenv("MANIPOS_PORT");
    CHECK(portFromEnv(1111) == 1111);
}
