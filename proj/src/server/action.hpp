#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "interp/interp.hpp"
#include "nonlinear/nonlinear.hpp"
#include "syntax/ast.hpp"

namespace manipos {

/// A displayed value: the value logged at `node` (in `frame`, when given),
/// narrowed by `path` through constructor arguments.
struct ValueRef {
    NodeId node;
    std::optional<std::uint32_t> frame;
    std::vector<PathStep> path;
};

enum class ActionKind {
    AddCode,
    EditNode,
    DeleteNode,
    DragDrop,
    SetPos,
    Destruct,
    FocusFrame,
    AddAssertColumn,
    Synth,
    AcceptFill,
    RejectFill,
    Undo,
    Redo,
};

enum class DragSource { Node, Value, Template };

struct Action {
    ActionKind kind = ActionKind::Undo;
    std::string canvas;  // "top" or the id of a function binding
    std::string text;
    NodeId node;         // editNode, deleteNode, setPos, focusFrame, addAssertColumn, accept/rejectFill
    std::optional<std::pair<int, int>> pos;

    DragSource source = DragSource::Node;
    NodeId sourceNode;
    ValueRef value;      // dragDrop value source, destruct
    std::string templateText;
    bool targetIsNode = true;
    NodeId targetNode;
    std::string targetCanvas;

    std::uint32_t frame = 0;
    std::vector<std::string> args;
    std::string expected;

    /// Document token the client rendered from; distinguishes stale ids from bad ones.
    std::string token;

    bool mutatesFile() const { return kind != ActionKind::FocusFrame; }
};

/// Client-visible failure of an action, a request or a render.
struct ActionError : std::runtime_error {
    std::string kind;  // ParseError, UnknownNode, StaleNode, InvalidAction, NoResult, Busy, FileVanished, ...
    int status;        // HTTP status
    ActionError(std::string kind, int status, const std::string& message);
};

/// Parses the JSON wire form, e.g. `{"kind":"deleteNode","node":12}`.
/// Throws ActionError(InvalidAction).
Action parseAction(const std::string& json);
std::string actionToJson(const Action& a);
const char* actionKindName(ActionKind k);

struct EditContext {
    /// Run of the program being edited; only evaluated for edits that need values.
    std::function<const RunResult&()> run;
    std::function<Program(const Program&)> synthesize;
    std::string currentToken;
};

/// Applies a file-mutating action other than undo/redo and runs the nonlinear
/// passes. The result is the canonical text of the new program.
std::string applyEdit(const Program& p, const Action& a, const EditContext& ctx);

}  // namespace manipos
