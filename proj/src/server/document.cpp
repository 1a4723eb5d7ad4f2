#include "server/document.hpp"

#include <algorithm>
#include <set>

#include "nonlinear/nonlinear.hpp"
#include "syntax/parse.hpp"
#include "syntax/print.hpp"
#include "synth/synth.hpp"
#include "types/infer.hpp"
#include "types/pervasives.hpp"

namespace manipos {

using json = nlohmann::json;

namespace {

constexpr std::size_t kMaxSubvalues = 64;
constexpr std::size_t kEdgeFrames = 3;
constexpr int kLiteralDepth = 2;
constexpr std::size_t kLiteralBreadth = 3;

const char* kindName(ExprKind k) {
    switch (k) {
        case ExprKind::Hole: return "hole";
        case ExprKind::Const: return "const";
        case ExprKind::Ctor: return "ctor";
        case ExprKind::Var: return "var";
        case ExprKind::Fun: return "fun";
        case ExprKind::App: return "app";
        case ExprKind::Let: return "let";
        case ExprKind::Tuple: return "tuple";
        case ExprKind::If: return "if";
        case ExprKind::Match: return "match";
    }
    return "";
}

const char* verdictName(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "";
}

json pathJson(const std::vector<PathStep>& path) {
    json out = json::array();
    for (const auto& s : path) out.push_back({{"ctor", s.ctor}, {"arg", s.arg}});
    return out;
}

json patternJson(const Pattern& p, const CtorTable& ctors) {
    return {{"node", p.id.value}, {"text", printPattern(p, &ctors)}};
}

ValuePtr firstValue(const RunResult& r, NodeId node, std::optional<std::uint32_t> frame) {
    std::vector<ValuePtr> vs = valuesAt(r, node, frame);
    return vs.empty() ? nullptr : vs.front();
}

/// Head of the function chain bound at a binding, following `let f = fun ...`.
const Expr* chainBody(const Expr& fun) {
    const Expr* b = &fun;
    while (b->kind == ExprKind::Fun) b = &b->kids[0];
    return b;
}

class Renderer {
public:
    Renderer(const Program& p, const RunResult& r, const FocusMap& focus)
        : p_(p), r_(r), focus_(focus), ctors_(p.types) {
        for (const auto& decl : ctors_.decls()) {
            bool tree = false;
            for (const auto& c : decl.ctors) {
                std::size_t self = 0;
                for (const auto& a : c.args) {
                    if (a.kind == TypeExpr::Kind::Con && a.name == decl.name) ++self;
                    if (a.kind == TypeExpr::Kind::Tuple)
                        for (const auto& x : a.args) self += x.kind == TypeExpr::Kind::Con && x.name == decl.name;
                }
                tree = tree || self >= 2;
            }
            if (tree) treeTypes_.insert(decl.name);
        }
        examples_ = collectExamples(p, r);
    }

    json render() {
        json top{{"path", "top"}, {"parent", nullptr}, {"function", nullptr}, {"tvs", json::array()},
                 {"returnTVs", json::array()}};
        canvases_.push_back(nullptr);
        std::size_t topIndex = canvases_.size() - 1;
        json asserts = json::array();
        for (const auto& item : p_.items) {
            if (item.kind == ItemKind::Assert) {
                asserts.push_back(assertView(item));
                continue;
            }
            json tv{{"node", item.id.value},
                    {"pattern", patternJson(item.pat, ctors_)},
                    {"rec", item.rec},
                    {"expr", exprTree(item.expr)},
                    {"grayedOut", false},
                    {"pos", posJson(item.attrs.pos)}};
            ValuePtr v = firstValue(r_, item.expr.id, std::nullopt);
            NodeId ref = item.pat.kind == PatKind::Var ? item.pat.id : item.expr.id;
            tv["result"] = v ? valueView(v, ref, std::nullopt) : json(nullptr);
            if (item.expr.kind == ExprKind::Fun) tv["function"] = functionView(item.id, item.expr, item.pat, "top");
            top["tvs"].push_back(std::move(tv));
        }
        canvases_[topIndex] = std::move(top);

        json pending = json::array();
        forEachExpr(p_, [&](const Expr& e) {
            if (!e.attrs.pending) return;
            pending.push_back({{"node", e.id.value},
                               {"text", printExpr(stripAttrs(e), &ctors_)},
                               {"accept", {{"kind", "acceptFill"}, {"node", e.id.value}}},
                               {"reject", {{"kind", "rejectFill"}, {"node", e.id.value}}}});
        });

        json types = json::array();
        for (const auto& d : p_.types) types.push_back(printTypeDecl(d));

        return json{{"canvases", canvases_}, {"asserts", asserts}, {"pending", pending}, {"types", types}};
    }

    std::string colorOf(const Value* v) {
        auto it = colors_.find(v);
        if (it != colors_.end()) return it->second;
        std::string key = "c" + std::to_string(colors_.size());
        colors_.emplace(v, key);
        return key;
    }

    json valueView(const ValuePtr& v, NodeId node, std::optional<std::uint32_t> frame) {
        json ref{{"node", node.value}, {"frame", frame ? json(*frame) : json(nullptr)}, {"path", json::array()}};
        json view{{"text", printValue(*v)},
                  {"colorKey", colorOf(v.get())},
                  {"ref", ref},
                  {"hole", v->kind == VKind::Hole},
                  {"bomb", v->kind == VKind::Bomb},
                  {"tree", isTree(*v)}};
        json subs = json::array();
        std::vector<PathStep> path;
        subvalues(*v, path, node, frame, subs);
        view["subvalues"] = std::move(subs);
        return view;
    }

    std::optional<std::uint32_t> focusedFrame(NodeId binding, const std::vector<FrameRow>& frames) const {
        if (frames.empty()) return std::nullopt;
        auto it = focus_.find(binding);
        if (it != focus_.end())
            for (const auto& f : frames)
                if (f.frame == it->second) return f.frame;
        return frames.front().frame;
    }

private:
    const Program& p_;
    const RunResult& r_;
    const FocusMap& focus_;
    CtorTable ctors_;
    std::set<std::string> treeTypes_;
    std::map<const Value*, std::string> colors_;
    std::vector<AssertExample> examples_;
    json canvases_ = json::array();

    static json posJson(const std::optional<std::pair<int, int>>& pos) {
        return pos ? json{pos->first, pos->second} : json(nullptr);
    }

    bool isTree(const Value& v) const {
        if (v.kind != VKind::Ctor) return false;
        const CtorInfo* c = ctors_.find(v.s);
        return c && treeTypes_.count(c->typeName);
    }

    void subvalues(const Value& v, std::vector<PathStep>& path, NodeId node, std::optional<std::uint32_t> frame,
                   json& out) {
        if (v.kind != VKind::Ctor) return;
        for (std::size_t i = 0; i < v.items.size() && out.size() < kMaxSubvalues; ++i) {
            const ValuePtr& sub = v.items[i];
            path.push_back(PathStep{v.s, i});
            out.push_back({{"path", pathJson(path)},
                           {"text", printValue(*sub)},
                           {"colorKey", colorOf(sub.get())},
                           {"ref", {{"node", node.value}, {"frame", frame ? json(*frame) : json(nullptr)},
                                    {"path", pathJson(path)}}}});
            subvalues(*sub, path, node, frame, out);
            path.pop_back();
        }
    }

    json exprTree(const Expr& e) {
        json kids = json::array();
        for (const auto& k : e.kids) kids.push_back(exprTree(k));
        json pats = json::array();
        for (const auto& p : e.pats) pats.push_back(patternJson(p, ctors_));
        return json{{"node", e.id.value},       {"kind", kindName(e.kind)}, {"text", printExpr(e, &ctors_)},
                    {"hole", e.isHole()},       {"pending", e.attrs.pending}, {"kids", std::move(kids)},
                    {"pats", std::move(pats)}};
    }

    json assertView(const TopItem& item) {
        json view{{"node", item.id.value},
                  {"text", "assert (" + printExpr(item.expr, &ctors_) + " = " + printExpr(item.expected, &ctors_) + ")"},
                  {"lhs", exprTree(item.expr)},
                  {"rhs", exprTree(item.expected)},
                  {"state", "indeterminate"},
                  {"actual", nullptr},
                  {"expected", nullptr}};
        for (const auto& a : r_.asserts) {
            if (a.item != item.id) continue;
            view["state"] = verdictName(a.passed);
            if (a.expected) view["expected"] = valueView(a.expected, item.expected.id, std::nullopt);
            if (a.actual && a.passed != Verdict::Pass) view["actual"] = valueView(a.actual, item.expr.id, std::nullopt);
        }
        return view;
    }

    json column(NodeId binding, const std::string& name, const std::vector<NodeId>& params, const FrameRow& row,
                std::size_t index, std::optional<std::uint32_t> focused) {
        json args = json::array();
        for (std::size_t i = 0; i < row.args.size(); ++i)
            args.push_back(valueView(row.args[i], i < params.size() ? params[i] : NodeId{}, row.frame));
        json col{{"frame", row.frame},
                 {"index", index},
                 {"args", std::move(args)},
                 {"result", valueView(row.result, NodeId{}, row.frame)},
                 {"focused", focused && *focused == row.frame},
                 {"focus", {{"kind", "focusFrame"}, {"function", binding.value}, {"frame", row.frame}}},
                 {"expected", nullptr},
                 {"assertState", nullptr}};
        for (const auto& ex : examples_) {
            if (ex.callee != name || ex.args.size() != row.args.size() || ex.args.empty()) continue;
            bool same = true;
            for (std::size_t i = 0; i < ex.args.size() && same; ++i)
                same = valuesEqual(*ex.args[i], *row.args[i]) == Verdict::Pass;
            if (!same) continue;
            col["expected"] = printValue(*ex.expected);
            col["assertState"] = verdictName(valuesEqual(*row.result, *ex.expected));
            break;
        }
        return col;
    }

    json functionView(NodeId binding, const Expr& fun, const Pattern& lhs, const std::string& parent) {
        std::vector<FrameRow> frames = framesFor(r_, binding);
        std::optional<std::uint32_t> frame = focusedFrame(binding, frames);
        std::string name = lhs.kind == PatKind::Var ? lhs.name : "";

        json params = json::array();
        std::vector<NodeId> paramIds;
        for (const Expr* f = &fun; f->kind == ExprKind::Fun; f = &f->kids[0]) {
            paramIds.push_back(f->pats[0].id);
            json param = patternJson(f->pats[0], ctors_);
            ValuePtr v = frame ? firstValue(r_, f->pats[0].id, frame) : nullptr;
            param["value"] = v ? valueView(v, f->pats[0].id, frame) : json(nullptr);
            params.push_back(std::move(param));
        }

        json columns = json::array();
        std::size_t n = frames.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (n > 2 * kEdgeFrames && i >= kEdgeFrames && i < n - kEdgeFrames) continue;
            columns.push_back(column(binding, name, paramIds, frames[i], i, frame));
        }

        std::string path = std::to_string(binding.value);
        json canvas{{"path", path}, {"parent", parent}, {"function", binding.value}, {"tvs", json::array()},
                    {"returnTVs", json::array()}};
        canvases_.push_back(nullptr);
        std::size_t slot = canvases_.size() - 1;
        std::optional<std::string> scrutinee;
        walkBody(*chainBody(fun), frame, path, canvas, scrutinee);
        canvases_[slot] = std::move(canvas);

        return json{{"canvas", path},
                    {"params", std::move(params)},
                    {"frames", n},
                    {"focusedFrame", frame ? json(*frame) : json(nullptr)},
                    {"ioGrid", {{"columns", std::move(columns)},
                                {"elided", n > 2 * kEdgeFrames ? n - 2 * kEdgeFrames : 0},
                                {"addColumn", {{"kind", "addAssertColumn"}, {"function", binding.value}}}}},
                    {"scrutineeText", scrutinee ? json(*scrutinee) : json(nullptr)}};
    }

    void walkBody(const Expr& e, std::optional<std::uint32_t> frame, const std::string& path, json& canvas,
                  std::optional<std::string>& scrutinee) {
        if (e.kind == ExprKind::Let) {
            const Expr& rhs = e.kids[0];
            ValuePtr v = frame ? firstValue(r_, rhs.id, frame) : nullptr;
            json tv{{"node", e.id.value},
                    {"pattern", patternJson(e.pats[0], ctors_)},
                    {"rec", e.rec},
                    {"expr", exprTree(rhs)},
                    {"result", v ? valueView(v, e.pats[0].kind == PatKind::Var ? e.pats[0].id : rhs.id, frame)
                                 : json(nullptr)},
                    {"grayedOut", frame.has_value() && !v},
                    {"pos", posJson(e.bindAttrs.pos)}};
            if (rhs.kind == ExprKind::Fun) tv["function"] = functionView(e.id, rhs, e.pats[0], path);
            canvas["tvs"].push_back(std::move(tv));
            walkBody(e.kids[1], frame, path, canvas, scrutinee);
            return;
        }
        if (e.kind == ExprKind::Match) {
            if (!scrutinee) scrutinee = printExpr(e.kids[0], &ctors_);
            for (std::size_t i = 1; i < e.kids.size(); ++i) walkBody(e.kids[i], frame, path, canvas, scrutinee);
            return;
        }
        ValuePtr v = frame ? firstValue(r_, e.id, frame) : nullptr;
        canvas["returnTVs"].push_back({{"node", e.id.value},
                                       {"expr", exprTree(e)},
                                       {"result", v ? valueView(v, e.id, frame) : json(nullptr)},
                                       {"grayedOut", frame.has_value() && !v}});
    }
};

// Literal generation.

TypeExpr substitute(const TypeExpr& t, const std::map<std::string, TypeExpr>& s) {
    if (t.kind == TypeExpr::Kind::Var) {
        auto it = s.find(t.name);
        return it == s.end() ? t : it->second;
    }
    TypeExpr out = t;
    for (auto& a : out.args) a = substitute(a, s);
    return out;
}

std::string wrapArg(const std::string& s) {
    if (s.find(' ') == std::string::npos || s[0] == '[' || s[0] == '(' || s[0] == '"') return s;
    return "(" + s + ")";
}

std::vector<std::string> literalsFor(const TypeExpr& t, int depth, const CtorTable& ctors) {
    std::vector<std::string> out;
    if (depth < 0) return out;
    switch (t.kind) {
        case TypeExpr::Kind::Var:
        case TypeExpr::Kind::Arrow: return out;
        case TypeExpr::Kind::Tuple: {
            std::string s = "(";
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                auto part = literalsFor(t.args[i], depth - 1, ctors);
                if (part.empty()) return out;
                s += (i ? ", " : "") + part.front();
            }
            out.push_back(s + ")");
            return out;
        }
        case TypeExpr::Kind::Con: break;
    }
    if (t.name == "int") return {"0", "1"};
    if (t.name == "float") return {"0.", "1."};
    if (t.name == "string") return {"\"\""};
    if (t.name == "char") return {"'a'"};
    if (t.name == "list" && t.args.size() == 1) {
        out.push_back("[]");
        auto elems = literalsFor(t.args[0], depth - 1, ctors);
        if (elems.empty()) return out;
        std::string s = "[";
        for (std::size_t k = 1; k <= kLiteralBreadth; ++k) {
            s += (k > 1 ? "; " : "") + elems.front();
            out.push_back(s + "]");
        }
        return out;
    }
    const TypeDecl* decl = ctors.type(t.name);
    if (!decl) return out;
    std::map<std::string, TypeExpr> s;
    for (std::size_t i = 0; i < decl->params.size() && i < t.args.size(); ++i) s[decl->params[i]] = t.args[i];
    for (const auto& c : decl->ctors) {
        if (c.args.empty()) {
            out.push_back(c.name);
            continue;
        }
        std::vector<std::string> parts;
        for (const auto& a : c.args) {
            auto sub = literalsFor(substitute(a, s), depth - 1, ctors);
            if (sub.empty()) break;
            parts.push_back(sub.front());
        }
        if (parts.size() != c.args.size()) continue;
        if (parts.size() == 1) {
            out.push_back(c.name + " " + wrapArg(parts[0]));
        } else {
            std::string x = c.name + " (";
            for (std::size_t i = 0; i < parts.size(); ++i) x += (i ? ", " : "") + parts[i];
            out.push_back(x + ")");
        }
    }
    return out;
}

void typeParts(const TypeExpr& t, std::vector<TypeExpr>& out) {
    if (t.kind == TypeExpr::Kind::Arrow) {
        for (const auto& a : t.args) typeParts(a, out);
        return;
    }
    if (t.kind == TypeExpr::Kind::Var) return;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
}

struct Binder {
    std::string name;
    NodeId pattern;
    bool inFunction;  // bound inside the innermost function enclosing the context
};

void patternBinders(const Pattern& p, bool inFn, std::vector<Binder>& out) {
    if (p.kind == PatKind::Var) out.push_back(Binder{p.name, p.id, inFn});
    for (const auto& a : p.args) patternBinders(a, inFn, out);
}

bool patternHas(const Pattern& p, NodeId id) {
    if (p.id == id) return true;
    for (const auto& a : p.args)
        if (patternHas(a, id)) return true;
    return false;
}

bool pathTo(const Expr& e, NodeId id, std::vector<const Expr*>& path) {
    path.push_back(&e);
    if (e.id == id) return true;
    for (const auto& p : e.pats)
        if (patternHas(p, id)) return true;
    for (const auto& k : e.kids)
        if (pathTo(k, id, path)) return true;
    path.pop_back();
    return false;
}

}  // namespace

json renderDocument(const std::string& text, const FocusMap& focus, const RenderOptions& opts) {
    Program p = parseProgram(text);
    auto prog = std::make_shared<const Program>(std::move(p));
    RunOptions ro;
    ro.fuel = opts.fuel;
    RunResult r = run(prog, ro);
    Renderer rd(*prog, r, focus);
    json doc = rd.render();

    CtorTable ctors(prog->types);
    Typing t = inferProgram(*prog, ctors);
    json errors = json::array();
    for (const auto& e : t.errors) errors.push_back({{"node", e.node.value}, {"message", e.message}});
    doc["typeErrors"] = std::move(errors);

    json names = json::array();
    for (const auto& item : prog->items)
        for (const auto& n : item.pat.boundNames()) names.push_back(n);
    std::vector<TypeExpr> parts;
    for (const auto& b : t.topBindings) typeParts(t.store->toSurface(b.scheme.body), parts);
    json literals = json::array();
    std::set<std::string> seen;
    for (const auto& ty : parts)
        for (const auto& l : literalsFor(ty, kLiteralDepth, ctors))
            if (seen.insert(l).second) literals.push_back(l);
    doc["autocomplete"] = {{"names", std::move(names)}, {"literals", std::move(literals)}};
    doc["version"] = 1;
    doc["text"] = text;
    return doc;
}

json autocomplete(const std::string& text, NodeId context, const std::string& prefix, const FocusMap& focus,
                  const RenderOptions& opts) {
    Program parsed = parseProgram(text);
    auto prog = std::make_shared<const Program>(std::move(parsed));
    const Program& p = *prog;
    RunOptions ro;
    ro.fuel = opts.fuel;
    RunResult r = run(prog, ro);
    Renderer rd(p, r, focus);
    rd.render();
    CtorTable ctors(p.types);
    Typing typing = inferProgram(p, ctors);

    std::size_t cut = prefix.find_last_of(" \t\n(,");
    std::string stem = cut == std::string::npos ? "" : prefix.substr(0, cut + 1);
    std::string fragment = cut == std::string::npos ? prefix : prefix.substr(cut + 1);
    auto matches = [&](const std::string& s) { return s.compare(0, fragment.size(), fragment) == 0; };

    // Binders visible at the context, most recent first.
    std::vector<const Expr*> path;
    const TopItem* owner = nullptr;
    for (const auto& item : p.items) {
        if (item.id == context || patternHas(item.pat, context)) {
            owner = &item;
            break;
        }
        path.clear();
        if (pathTo(item.expr, context, path) || (item.kind == ItemKind::Assert && pathTo(item.expected, context, path))) {
            owner = &item;
            break;
        }
    }
    if (!owner) path.clear();

    NodeId fnBinding;
    std::size_t fnStart = path.size();
    for (std::size_t i = path.size(); i-- > 0;) {
        if (path[i]->kind != ExprKind::Fun) continue;
        std::size_t head = i;
        while (head > 0 && path[head - 1]->kind == ExprKind::Fun) --head;
        fnStart = head;
        if (head > 0 && path[head - 1]->kind == ExprKind::Let) fnBinding = path[head - 1]->id;
        else if (head == 0 && owner) fnBinding = owner->id;
        break;
    }
    std::optional<std::uint32_t> frame;
    if (fnBinding.valid()) frame = rd.focusedFrame(fnBinding, framesFor(r, fnBinding));

    std::vector<Binder> binders;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const Expr& e = *path[i];
        const Expr* child = i + 1 < path.size() ? path[i + 1] : nullptr;
        bool inFn = i >= fnStart;
        std::vector<Binder> here;
        if (e.kind == ExprKind::Fun && child == &e.kids[0]) patternBinders(e.pats[0], inFn, here);
        if (e.kind == ExprKind::Let && (child == &e.kids[1] || (e.rec && child == &e.kids[0])))
            patternBinders(e.pats[0], inFn, here);
        if (e.kind == ExprKind::Match)
            for (std::size_t k = 0; k < e.pats.size(); ++k)
                if (child == &e.kids[k + 1]) patternBinders(e.pats[k], inFn, here);
        binders.insert(binders.begin(), here.begin(), here.end());
    }
    for (const auto& item : p.items)
        if (item.kind == ItemKind::Binding) patternBinders(item.pat, false, binders);

    json out = json::array();
    std::set<std::string> inserted;
    auto add = [&](json s) {
        if (!inserted.insert(s["insert"].get<std::string>() + "\x1f" + s.value("colorKey", "")).second) return;
        out.push_back(std::move(s));
    };

    std::set<std::string> shown;
    for (const auto& b : binders) {
        if (!shown.insert(b.name).second) continue;
        if (matches(b.name)) add({{"display", stem + b.name}, {"insert", stem + b.name}, {"kind", "name"}});
    }
    if (!fragment.empty())
        for (const auto& s : pervasiveSigs())
            if (matches(s.name) && !shown.count(s.name))
                add({{"display", stem + s.name}, {"insert", stem + s.name}, {"kind", "name"}});

    std::set<std::string> taken = allBoundNames(p);
    std::set<std::string> valueSeen;
    for (const auto& b : binders) {
        if (!valueSeen.insert(b.name).second) continue;
        ValuePtr v = firstValue(r, b.pattern, b.inFunction ? frame : std::nullopt);
        if (!v) v = firstValue(r, b.pattern, std::nullopt);
        if (!v) v = lookup(r.topEnv.get(), b.name);
        if (!v) continue;
        std::vector<std::pair<std::vector<PathStep>, ValuePtr>> todo{{{}, v}};
        for (std::size_t k = 0; k < todo.size() && k < kMaxSubvalues; ++k) {
            auto [steps, cur] = todo[k];
            if (cur->kind == VKind::Ctor)
                for (std::size_t i = 0; i < cur->items.size(); ++i) {
                    auto next = steps;
                    next.push_back(PathStep{cur->s, i});
                    todo.emplace_back(std::move(next), cur->items[i]);
                }
            if (cur->kind == VKind::Closure || cur->kind == VKind::Prim || cur->incomplete()) continue;
            std::string shownText = printValue(*cur);
            if (!matches(shownText)) continue;
            std::string extract = printExpr(extractionExpr(steps, b.name, ctors, taken), &ctors);
            if (!steps.empty()) extract = "(" + extract + ")";
            json ref{{"node", b.pattern.value}, {"frame", b.inFunction && frame ? json(*frame) : json(nullptr)},
                     {"path", pathJson(steps)}};
            add({{"display", stem + shownText},
                 {"insert", stem + extract},
                 {"kind", "value"},
                 {"colorKey", rd.colorOf(cur.get())},
                 {"ref", std::move(ref)}});
        }
    }

    std::vector<TypeExpr> parts;
    if (auto h = typing.holes.find(context); h != typing.holes.end() && h->second.goal)
        typeParts(typing.store->toSurface(h->second.goal), parts);
    for (const auto& b : binders) {
        auto it = typing.patTypes.find(b.pattern);
        if (it != typing.patTypes.end()) typeParts(typing.store->toSurface(it->second), parts);
    }
    for (const auto& tb : typing.topBindings) typeParts(typing.store->toSurface(tb.scheme.body), parts);
    for (const auto& s : speculateTypes(p)) typeParts(s.type, parts);
    for (const auto& ty : parts)
        for (const auto& l : literalsFor(ty, kLiteralDepth, ctors))
            if (matches(l)) add({{"display", stem + l}, {"insert", stem + l}, {"kind", "literal"}});
    return out;
}

}  // namespace manipos
