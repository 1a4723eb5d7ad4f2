#include "server/action.hpp"

#include <json.hpp>

#include "syntax/parse.hpp"
#include "syntax/print.hpp"
#include "synth/synth.hpp"
#include "types/infer.hpp"
#include "types/pervasives.hpp"

namespace manipos {

using json = nlohmann::json;

ActionError::ActionError(std::string k, int s, const std::string& message)
    : std::runtime_error(message), kind(std::move(k)), status(s) {}

namespace {

const std::pair<ActionKind, const char*> kKindNames[] = {
    {ActionKind::AddCode, "addCode"},
    {ActionKind::EditNode, "editNode"},
    {ActionKind::DeleteNode, "deleteNode"},
    {ActionKind::DragDrop, "dragDrop"},
    {ActionKind::SetPos, "setPos"},
    {ActionKind::Destruct, "destruct"},
    {ActionKind::FocusFrame, "focusFrame"},
    {ActionKind::AddAssertColumn, "addAssertColumn"},
    {ActionKind::Synth, "synth"},
    {ActionKind::AcceptFill, "acceptFill"},
    {ActionKind::RejectFill, "rejectFill"},
    {ActionKind::Undo, "undo"},
    {ActionKind::Redo, "redo"},
};

ActionError invalid(const std::string& msg) { return ActionError("InvalidAction", 400, msg); }

NodeId nodeField(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned()) throw invalid(std::string("missing node id `") + key + "`");
    return NodeId{j[key].get<std::uint32_t>()};
}

std::string textField(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw invalid(std::string("missing text `") + key + "`");
    return j[key].get<std::string>();
}

int intField(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw invalid(std::string("missing integer `") + key + "`");
    return j[key].get<int>();
}

std::string canvasField(const json& j, const char* key) {
    if (!j.contains(key)) return "top";
    if (j[key].is_number_unsigned()) return std::to_string(j[key].get<std::uint32_t>());
    if (j[key].is_string()) return j[key].get<std::string>();
    throw invalid(std::string("bad canvas `") + key + "`");
}

ValueRef valueRefOf(const json& j) {
    if (!j.is_object()) throw invalid("value reference must be an object");
    ValueRef v;
    v.node = nodeField(j, "node");
    if (j.contains("frame") && !j["frame"].is_null()) {
        if (!j["frame"].is_number_unsigned()) throw invalid("bad frame");
        v.frame = j["frame"].get<std::uint32_t>();
    }
    if (j.contains("path")) {
        if (!j["path"].is_array()) throw invalid("path must be an array");
        for (const auto& s : j["path"]) {
            if (!s.is_object()) throw invalid("path steps are objects");
            PathStep step;
            step.ctor = textField(s, "ctor");
            if (!s.contains("arg") || !s["arg"].is_number_unsigned()) throw invalid("path step without arg");
            step.arg = s["arg"].get<std::size_t>();
            v.path.push_back(std::move(step));
        }
    }
    return v;
}

json valueRefJson(const ValueRef& v) {
    json j{{"node", v.node.value}};
    if (v.frame) j["frame"] = *v.frame;
    json path = json::array();
    for (const auto& s : v.path) path.push_back({{"ctor", s.ctor}, {"arg", s.arg}});
    j["path"] = path;
    return j;
}

}  // namespace

const char* actionKindName(ActionKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "";
}

Action parseAction(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw invalid(std::string("action is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw invalid("action must be an object");
    std::string kind = textField(j, "kind");
    Action a;
    bool known = false;
    for (const auto& [k, name] : kKindNames)
        if (kind == name) {
            a.kind = k;
            known = true;
        }
    if (!known) throw invalid("unknown action kind `" + kind + "`");
    if (j.contains("token") && j["token"].is_string()) a.token = j["token"].get<std::string>();

    switch (a.kind) {
        case ActionKind::AddCode:
            a.canvas = canvasField(j, "canvas");
            a.text = textField(j, "text");
            if (j.contains("pos")) {
                const json& p = j["pos"];
                if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
                    throw invalid("pos must be [x, y]");
                a.pos = std::make_pair(p[0].get<int>(), p[1].get<int>());
            }
            break;
        case ActionKind::EditNode:
            a.node = nodeField(j, "node");
            a.text = textField(j, "text");
            break;
        case ActionKind::DeleteNode:
        case ActionKind::AcceptFill:
        case ActionKind::RejectFill:
            a.node = nodeField(j, "node");
            break;
        case ActionKind::DragDrop: {
            if (!j.contains("source") || !j["source"].is_object()) throw invalid("dragDrop needs a source");
            if (!j.contains("target") || !j["target"].is_object()) throw invalid("dragDrop needs a target");
            const json& s = j["source"];
            if (s.contains("node")) {
                a.source = DragSource::Node;
                a.sourceNode = nodeField(s, "node");
            } else if (s.contains("value")) {
                a.source = DragSource::Value;
                a.value = valueRefOf(s["value"]);
            } else if (s.contains("template")) {
                a.source = DragSource::Template;
                a.templateText = textField(s, "template");
            } else {
                throw invalid("dragDrop source needs node, value or template");
            }
            const json& t = j["target"];
            if (t.contains("node")) {
                a.targetIsNode = true;
                a.targetNode = nodeField(t, "node");
            } else if (t.contains("canvas")) {
                a.targetIsNode = false;
                a.targetCanvas = canvasField(t, "canvas");
            } else {
                throw invalid("dragDrop target needs node or canvas");
            }
            break;
        }
        case ActionKind::SetPos:
            a.node = nodeField(j, "node");
            a.pos = std::make_pair(intField(j, "x"), intField(j, "y"));
            break;
        case ActionKind::Destruct:
            if (!j.contains("value")) throw invalid("destruct needs a value");
            a.value = valueRefOf(j["value"]);
            break;
        case ActionKind::FocusFrame:
            a.node = nodeField(j, "function");
            if (!j.contains("frame") || !j["frame"].is_number_unsigned()) throw invalid("focusFrame needs a frame");
            a.frame = j["frame"].get<std::uint32_t>();
            break;
        case ActionKind::AddAssertColumn:
            a.node = nodeField(j, "function");
            if (!j.contains("args") || !j["args"].is_array()) throw invalid("addAssertColumn needs args");
            for (const auto& x : j["args"]) {
                if (!x.is_string()) throw invalid("arguments are expression texts");
                a.args.push_back(x.get<std::string>());
            }
            a.expected = textField(j, "expected");
            break;
        case ActionKind::Synth:
        case ActionKind::Undo:
        case ActionKind::Redo:
            break;
    }
    return a;
}

std::string actionToJson(const Action& a) {
    json j{{"kind", actionKindName(a.kind)}};
    switch (a.kind) {
        case ActionKind::AddCode:
            j["canvas"] = a.canvas;
            j["text"] = a.text;
            if (a.pos) j["pos"] = {a.pos->first, a.pos->second};
            break;
        case ActionKind::EditNode:
            j["node"] = a.node.value;
            j["text"] = a.text;
            break;
        case ActionKind::DeleteNode:
        case ActionKind::AcceptFill:
        case ActionKind::RejectFill:
            j["node"] = a.node.value;
            break;
        case ActionKind::DragDrop: {
            json s;
            if (a.source == DragSource::Node) s["node"] = a.sourceNode.value;
            else if (a.source == DragSource::Value) s["value"] = valueRefJson(a.value);
            else s["template"] = a.templateText;
            j["source"] = s;
            j["target"] = a.targetIsNode ? json{{"node", a.targetNode.value}} : json{{"canvas", a.targetCanvas}};
            break;
        }
        case ActionKind::SetPos:
            j["node"] = a.node.value;
            j["x"] = a.pos ? a.pos->first : 0;
            j["y"] = a.pos ? a.pos->second : 0;
            break;
        case ActionKind::Destruct:
            j["value"] = valueRefJson(a.value);
            break;
        case ActionKind::FocusFrame:
            j["function"] = a.node.value;
            j["frame"] = a.frame;
            break;
        case ActionKind::AddAssertColumn:
            j["function"] = a.node.value;
            j["args"] = a.args;
            j["expected"] = a.expected;
            break;
        case ActionKind::Synth:
        case ActionKind::Undo:
        case ActionKind::Redo:
            break;
    }
    if (!a.token.empty()) j["token"] = a.token;
    return j.dump();
}

namespace {

struct Loc {
    TopItem* item = nullptr;
    bool isItem = false;
    Expr* expr = nullptr;
    Pattern* pat = nullptr;
    Expr* patOwner = nullptr;  // nullptr for the item's own pattern
    std::size_t patIndex = 0;
    std::vector<Expr*> ancestors;  // outermost first

    bool found() const { return isItem || expr || pat; }
};

bool patternHit(Pattern& p, NodeId id, Pattern*& out) {
    if (p.id == id) {
        out = &p;
        return true;
    }
    for (auto& a : p.args)
        if (patternHit(a, id, out)) return true;
    return false;
}

bool search(Expr& e, NodeId id, Loc& loc) {
    if (e.id == id) {
        loc.expr = &e;
        return true;
    }
    loc.ancestors.push_back(&e);
    for (std::size_t i = 0; i < e.pats.size(); ++i) {
        Pattern* hit = nullptr;
        if (patternHit(e.pats[i], id, hit)) {
            loc.pat = hit;
            loc.patOwner = &e;
            loc.patIndex = i;
            return true;
        }
    }
    for (auto& k : e.kids)
        if (search(k, id, loc)) return true;
    loc.ancestors.pop_back();
    return false;
}

Loc locate(Program& p, NodeId id) {
    for (auto& item : p.items) {
        Loc loc;
        loc.item = &item;
        if (item.id == id) {
            loc.isItem = true;
            return loc;
        }
        Pattern* hit = nullptr;
        if (patternHit(item.pat, id, hit)) {
            loc.pat = hit;
            return loc;
        }
        if (search(item.expr, id, loc)) return loc;
        if (item.kind == ItemKind::Assert && search(item.expected, id, loc)) return loc;
    }
    return Loc{};
}

class Editor {
public:
    Editor(const Program& p, const EditContext& ctx) : p_(p), ctx_(ctx), ctors_(p.types) {}

    std::string apply(const Action& a) {
        switch (a.kind) {
            case ActionKind::AddCode: addCode(a); break;
            case ActionKind::EditNode: editNode(a); break;
            case ActionKind::DeleteNode: deleteNode(a); break;
            case ActionKind::DragDrop: dragDrop(a); break;
            case ActionKind::SetPos:
                try {
                    setPos(p_, a.node, a.pos ? a.pos->first : 0, a.pos ? a.pos->second : 0);
                } catch (const UnknownNode&) {
                    throw notFound(a.node, a);
                }
                break;
            case ActionKind::Destruct: destructValue(a); break;
            case ActionKind::AddAssertColumn: addAssert(a); break;
            case ActionKind::Synth:
                if (!ctx_.synthesize) throw invalid("synthesis is not available here");
                p_ = ctx_.synthesize(p_);
                break;
            case ActionKind::AcceptFill:
            case ActionKind::RejectFill:
                try {
                    p_ = a.kind == ActionKind::AcceptFill ? acceptFill(p_, a.node) : rejectFill(p_, a.node);
                } catch (const UnknownNode&) {
                    throw notFound(a.node, a);
                }
                break;
            case ActionKind::FocusFrame:
            case ActionKind::Undo:
            case ActionKind::Redo:
                throw invalid(std::string(actionKindName(a.kind)) + " does not edit the program");
        }
        dedupeIds(p_);
        try {
            p_ = normalizeProgram(std::move(p_));
        } catch (const DuplicateName& e) {
            throw ActionError("DuplicateName", 400, e.what());
        }
        std::string text = printProgram(p_);
        try {
            parseProgram(text);
        } catch (const ParseError& e) {
            throw ActionError("InternalError", 500, std::string("edit produced unparseable text: ") + e.what());
        }
        return text;
    }

private:
    Program p_;
    const EditContext& ctx_;
    CtorTable ctors_;

    ActionError notFound(NodeId id, const Action& a) const {
        if (!a.token.empty() && a.token != ctx_.currentToken)
            return ActionError("StaleNode", 409, "node " + std::to_string(id.value) + " vanished since render");
        return ActionError("UnknownNode", 404, "no node " + std::to_string(id.value));
    }

    Loc need(NodeId id, const Action& a) {
        Loc l = locate(p_, id);
        if (!l.found()) throw notFound(id, a);
        return l;
    }

    Expr parseCode(const std::string& text) {
        try {
            return parseExpr(text, ctors_);
        } catch (const ParseError& e) {
            throw ActionError("ParseError", 400, e.what());
        }
    }

    std::set<std::string> taken() const {
        std::set<std::string> t = allBoundNames(p_);
        for (const auto& s : pervasiveSigs()) t.insert(s.name);
        return t;
    }

    /// Head of the function chain a canvas names, or nullptr for the top level.
    Expr* canvasFunction(const std::string& canvas, const Action& a) {
        if (canvas.empty() || canvas == "top") return nullptr;
        std::uint32_t raw = 0;
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(canvas, &used);
            if (used != canvas.size() || v == 0 || v > 0xffffffffUL) throw std::invalid_argument("range");
            raw = static_cast<std::uint32_t>(v);
        } catch (const std::exception&) {
            throw invalid("bad canvas `" + canvas + "`");
        }
        Loc l = need(NodeId{raw}, a);
        if (l.isItem && l.item->kind == ItemKind::Binding && l.item->expr.kind == ExprKind::Fun) return &l.item->expr;
        if (l.expr && l.expr->kind == ExprKind::Fun) return l.expr;
        if (l.expr && l.expr->kind == ExprKind::Let && l.expr->kids[0].kind == ExprKind::Fun) return &l.expr->kids[0];
        throw invalid("canvas " + canvas + " is not a function");
    }

    void insertBinding(Expr* fun, Pattern lhs, Expr rhs, std::optional<std::pair<int, int>> pos, bool rec = false) {
        if (!fun) {
            TopItem item;
            item.rec = rec;
            item.pat = std::move(lhs);
            item.expr = std::move(rhs);
            item.attrs.pos = pos;
            p_.items.push_back(std::move(item));
            return;
        }
        Expr* cur = fun;
        while (cur->kind == ExprKind::Fun) cur = &cur->kids[0];
        while (cur->kind == ExprKind::Let) cur = &cur->kids[1];
        Expr let = Expr::let(rec, std::move(lhs), std::move(rhs), std::move(*cur));
        let.bindAttrs.pos = pos;
        *cur = std::move(let);
    }

    void insertNamed(Expr* fun, Expr rhs, std::optional<std::pair<int, int>> pos, const std::string& stem = "") {
        std::string name = freshName(stem.empty() ? suggestName(rhs, ctors_) : stem, taken());
        insertBinding(fun, Pattern::var(name), std::move(rhs), pos);
    }

    void addCode(const Action& a) {
        Expr* fun = canvasFunction(a.canvas, a);
        std::string text = a.text;
        auto trimmed = text.find_first_not_of(" \t\n");
        if (!fun && trimmed != std::string::npos && text.compare(trimmed, 7, "assert ") == 0) {
            Program q;
            try {
                q = parseProgram("let () = " + text.substr(trimmed) + "\n");
            } catch (const ParseError& e) {
                throw ActionError("ParseError", 400, e.what());
            }
            q.items[0].id = NodeId{};
            p_.items.push_back(std::move(q.items[0]));
            return;
        }
        insertNamed(fun, parseCode(text), a.pos);
    }

    void replaceExpr(Expr& target, Expr e) {
        NodeId keep = target.id;
        target = std::move(e);
        target.id = keep;
    }

    void renameScope(Loc& l, const std::vector<std::string>& before, const std::vector<std::string>& after) {
        if (before.size() != after.size()) return;
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (before[i] == after[i]) continue;
            if (!l.patOwner) {
                for (auto& item : p_.items) {
                    renameVar(item.expr, before[i], after[i]);
                    if (item.kind == ItemKind::Assert) renameVar(item.expected, before[i], after[i]);
                }
                continue;
            }
            Expr& owner = *l.patOwner;
            switch (owner.kind) {
                case ExprKind::Fun: renameVar(owner.kids[0], before[i], after[i]); break;
                case ExprKind::Let:
                    renameVar(owner.kids[1], before[i], after[i]);
                    if (owner.rec) renameVar(owner.kids[0], before[i], after[i]);
                    break;
                case ExprKind::Match: renameVar(owner.kids[l.patIndex + 1], before[i], after[i]); break;
                default: break;
            }
        }
    }

    void editNode(const Action& a) {
        Loc l = need(a.node, a);
        if (l.isItem) {
            if (l.item->kind == ItemKind::Assert) throw invalid("edit the sides of an assertion instead");
            replaceExpr(l.item->expr, parseCode(a.text));
            return;
        }
        if (l.expr) {
            if (l.expr->kind == ExprKind::Let) replaceExpr(l.expr->kids[0], parseCode(a.text));
            else replaceExpr(*l.expr, parseCode(a.text));
            return;
        }
        Pattern fresh;
        try {
            fresh = parsePattern(a.text, ctors_);
        } catch (const ParseError& e) {
            throw ActionError("ParseError", 400, e.what());
        }
        Pattern& root = l.patOwner ? l.patOwner->pats[l.patIndex] : l.item->pat;
        std::vector<std::string> before = root.boundNames();
        fresh.id = l.pat->id;
        *l.pat = std::move(fresh);
        std::vector<std::string> after = root.boundNames();
        renameScope(l, before, after);
    }

    void deleteNode(const Action& a) {
        Loc l = need(a.node, a);
        if (l.isItem) {
            for (std::size_t i = 0; i < p_.items.size(); ++i)
                if (&p_.items[i] == l.item) p_.items.erase(p_.items.begin() + static_cast<std::ptrdiff_t>(i));
            return;
        }
        if (!l.expr) throw invalid("patterns cannot be deleted; edit them instead");
        if (l.expr->kind == ExprKind::Let) {
            Expr body = std::move(l.expr->kids[1]);
            *l.expr = std::move(body);
            return;
        }
        Expr hole = Expr::hole();
        hole.id = l.expr->id;
        *l.expr = std::move(hole);
    }

    /// Binding named by `id` removed from its place: (lhs, rhs, pos, rec).
    bool takeBinding(NodeId id, Pattern& lhs, Expr& rhs, std::optional<std::pair<int, int>>& pos, bool& rec) {
        Loc l = locate(p_, id);
        if (l.isItem && l.item->kind == ItemKind::Binding) {
            lhs = l.item->pat;
            rhs = l.item->expr;
            pos = l.item->attrs.pos;
            rec = l.item->rec;
            for (std::size_t i = 0; i < p_.items.size(); ++i)
                if (&p_.items[i] == l.item) p_.items.erase(p_.items.begin() + static_cast<std::ptrdiff_t>(i));
            return true;
        }
        if (l.expr && l.expr->kind == ExprKind::Let) {
            lhs = l.expr->pats[0];
            rhs = l.expr->kids[0];
            pos = l.expr->bindAttrs.pos;
            rec = l.expr->rec;
            Expr body = std::move(l.expr->kids[1]);
            *l.expr = std::move(body);
            return true;
        }
        return false;
    }

    std::string rootName(const ValueRef& v, const Action& a) {
        Loc l = need(v.node, a);
        if (l.pat && l.pat->kind == PatKind::Var) return l.pat->name;
        if (l.expr && l.expr->kind == ExprKind::Var) return l.expr->name;
        if (l.expr && l.expr->kind == ExprKind::Let && l.expr->pats[0].kind == PatKind::Var) return l.expr->pats[0].name;
        if (l.isItem && l.item->kind == ItemKind::Binding && l.item->pat.kind == PatKind::Var) return l.item->pat.name;
        return "";
    }

    Expr extraction(const ValueRef& v, const Action& a, std::string& hint) {
        std::string name = rootName(v, a);
        if (name.empty()) {
            if (!ctx_.run) throw invalid("value has no name to extract from");
            const RunResult& r = ctx_.run();
            NodeId at = v.node;
            if (const TopItem* item = findItem(p_, v.node)) at = item->expr.id;
            std::vector<ValuePtr> vs = valuesAt(r, at, v.frame);
            if (vs.empty()) throw invalid("no value is logged at node " + std::to_string(v.node.value));
            ValuePtr cur = vs.front();
            for (const auto& step : v.path) {
                if (cur->kind != VKind::Ctor || cur->s != step.ctor || step.arg >= cur->items.size())
                    throw invalid("path does not match the value");
                cur = cur->items[step.arg];
            }
            Expr lit;
            if (!valueToExpr(*cur, lit)) throw invalid("value cannot be written as an expression");
            return lit;
        }
        Expr e;
        try {
            e = extractionExpr(v.path, name, ctors_, taken());
        } catch (const std::invalid_argument& err) {
            throw invalid(err.what());
        }
        hint = e.kind == ExprKind::Match ? e.kids[1].name : name;
        return e;
    }

    bool inside(const Expr& outer, NodeId id) {
        bool hit = false;
        forEachExpr(outer, [&](const Expr& e) { hit = hit || e.id == id; });
        return hit;
    }

    void dragDrop(const Action& a) {
        if (a.source == DragSource::Node && !a.targetIsNode) {
            Pattern lhs;
            Expr rhs;
            std::optional<std::pair<int, int>> pos;
            bool rec = false;
            Loc src = need(a.sourceNode, a);
            if (src.isItem || (src.expr && src.expr->kind == ExprKind::Let)) {
                Program backup = p_;
                if (!takeBinding(a.sourceNode, lhs, rhs, pos, rec)) throw invalid("source is not a binding");
                Expr* fun = nullptr;
                try {
                    fun = canvasFunction(a.targetCanvas, a);
                } catch (...) {
                    p_ = std::move(backup);
                    throw;
                }
                if (fun && inside(rhs, fun->id)) {
                    p_ = std::move(backup);
                    throw invalid("a binding cannot move into itself");
                }
                insertBinding(fun, std::move(lhs), std::move(rhs), pos, rec);
                return;
            }
            if (!src.expr) throw invalid("patterns cannot be dragged onto a canvas");
            Expr copy = *src.expr;
            remint(p_, copy);
            insertNamed(canvasFunction(a.targetCanvas, a), std::move(copy), std::nullopt);
            return;
        }

        Expr payload;
        std::string hint;
        switch (a.source) {
            case DragSource::Node: {
                Loc src = need(a.sourceNode, a);
                if (!src.expr) throw invalid("only expressions can be dropped into expressions");
                payload = *src.expr;
                break;
            }
            case DragSource::Value: payload = extraction(a.value, a, hint); break;
            case DragSource::Template: payload = parseCode(a.templateText); break;
        }
        if (!a.targetIsNode) {
            insertNamed(canvasFunction(a.targetCanvas, a), std::move(payload), std::nullopt, hint);
            return;
        }
        Loc dst = need(a.targetNode, a);
        if (!dst.expr) throw invalid("drop target must be an expression");
        if (a.source == DragSource::Node) {
            if (a.sourceNode == a.targetNode) return;
            Loc src = need(a.sourceNode, a);
            if (inside(*src.expr, a.targetNode) || inside(*dst.expr, a.sourceNode))
                throw invalid("source and target overlap");
            remint(p_, payload);
            Expr* target = findExpr(p_, a.targetNode);
            replaceExpr(*target, std::move(payload));
            Expr* source = findExpr(p_, a.sourceNode);
            Expr hole = Expr::hole();
            hole.id = source->id;
            *source = std::move(hole);
            return;
        }
        remint(p_, payload);
        Expr* target = dst.expr->kind == ExprKind::Let ? &dst.expr->kids[0] : dst.expr;
        replaceExpr(*target, std::move(payload));
    }

    void destructValue(const Action& a) {
        if (!a.value.path.empty()) throw invalid("destruct a subvalue by extracting it into a binding first");
        Loc l = need(a.value.node, a);
        std::string name = rootName(a.value, a);
        if (name.empty()) throw invalid("only named values can be destructed");
        Expr* fun = nullptr;
        for (auto it = l.ancestors.rbegin(); it != l.ancestors.rend(); ++it)
            if ((*it)->kind == ExprKind::Fun) {
                fun = *it;
                break;
            }
        if (l.patOwner && l.patOwner->kind == ExprKind::Fun) fun = l.patOwner;
        if (!fun) throw invalid("`" + name + "` is not inside a function");
        for (std::size_t i = l.ancestors.size(); i-- > 1;) {
            if (l.ancestors[i] != fun) continue;
            while (i > 0 && l.ancestors[i - 1]->kind == ExprKind::Fun && &l.ancestors[i - 1]->kids[0] == fun)
                fun = l.ancestors[--i];
            break;
        }

        NodeId typed = l.pat ? l.pat->id : (l.expr ? l.expr->id : NodeId{});
        auto adtOf = [&](const InferOptions& opts) -> std::optional<std::string> {
            Typing t = inferProgram(p_, ctors_, opts);
            const auto& table = l.pat ? t.patTypes : t.exprTypes;
            auto it = table.find(typed);
            if (it == table.end()) return std::nullopt;
            Ty ty = TypeStore::repr(it->second);
            if (ty->kind != TyNode::Kind::Con || !ctors_.type(ty->name)) return std::nullopt;
            return ty->name;
        };
        std::optional<std::string> adt = adtOf({});
        if (!adt) {
            InferOptions opts;
            for (auto& s : speculateTypes(p_)) opts.speculative[s.bindingName] = s.type;
            adt = adtOf(opts);
        }
        if (!adt) throw invalid("`" + name + "` is not of a variant type");
        try {
            p_ = destruct(std::move(p_), fun->id, name, *adt);
        } catch (const NotAnAdt& e) {
            throw invalid(e.what());
        }
    }

    void addAssert(const Action& a) {
        Loc l = need(a.node, a);
        if (!l.isItem || l.item->kind != ItemKind::Binding || l.item->pat.kind != PatKind::Var)
            throw invalid("assertions can only be added to top-level named functions");
        std::vector<Expr> args;
        for (const auto& s : a.args) args.push_back(parseCode(s));
        TopItem item;
        item.kind = ItemKind::Assert;
        item.pat = Pattern::unit();
        Expr callee = Expr::var(l.item->pat.name);
        item.expr = args.empty() ? std::move(callee) : Expr::app(std::move(callee), std::move(args));
        item.expected = parseCode(a.expected);
        p_.items.push_back(std::move(item));
    }
};

}  // namespace

std::string applyEdit(const Program& p, const Action& a, const EditContext& ctx) {
    Editor ed(p, ctx);
    return ed.apply(a);
}

}  // namespace manipos
