#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "interp/value.hpp"
#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"

namespace manipos {

struct FuelPolicy {
    int perTopBinding = 1000;
    int reservePerInnerBinding = 50;
};

enum class EntryKind { EvalResult, PatternBind };

struct TraceEntry {
    NodeId node;
    std::uint32_t frame = 0;
    ValuePtr value;
    EnvPtr env;
    EntryKind kind = EntryKind::EvalResult;
    std::uint32_t topIndex = 0;
};

struct CallRecord {
    std::uint32_t frame = 0;
    std::uint32_t parentFrame = 0;
    NodeId fun;
    std::vector<ValuePtr> args;
    ValuePtr result;
};

struct AssertRecord {
    NodeId item;
    NodeId lhs;
    NodeId rhs;
    ValuePtr actual;
    ValuePtr expected;
    Verdict passed = Verdict::Indeterminate;
};

/// Replacement expressions evaluated in place of holes, keyed by hole id.
using FillMap = std::unordered_map<NodeId, const Expr*, NodeIdHash>;

struct RunOptions {
    FuelPolicy fuel;
    bool trace = true;              // record trace entries, calls and visits
    const FillMap* fills = nullptr;
    bool assertsOnly = false;       // skip top-level bindings no assertion depends on
    /// Give up on the remaining assertions after the first definite failure.
    bool stopAtFailure = false;
};

struct RunResult {
    std::shared_ptr<const Program> program;
    std::vector<TraceEntry> trace;
    std::vector<CallRecord> calls;
    std::vector<AssertRecord> asserts;
    EnvPtr topEnv;
    std::unordered_set<NodeId, NodeIdHash> filledHolesVisited;
    /// Trace entry indices per node, in log order.
    std::unordered_map<NodeId, std::vector<std::size_t>, NodeIdHash> byNode;
    std::size_t stepsUsed = 0;

    bool allAssertsPass() const;
};

/// Executes every top item in file order. Never throws for program errors:
/// stuck evaluation yields Bomb values and failed assertions are only logged.
RunResult run(std::shared_ptr<const Program> program, const RunOptions& opts = {});

struct FrameRow {
    std::uint32_t frame = 0;
    std::vector<ValuePtr> args;
    ValuePtr result;
};

/// Calls of the function bound at `function` (a binding or its `fun` node), in call order.
/// Throws UnknownNode when the id does not name a function binding.
std::vector<FrameRow> framesFor(const RunResult& r, NodeId function);

/// Values logged at `node`, optionally restricted to one frame.
std::vector<ValuePtr> valuesAt(const RunResult& r, NodeId node, std::optional<std::uint32_t> frame = std::nullopt);

/// Line-delimited `frame<TAB>node<TAB>kind<TAB>value` records.
std::string exportTrace(const RunResult& r);

/// The function node a binding id refers to, or nullptr.
const Expr* functionOfBinding(const Program& p, NodeId binding);

}  // namespace manipos
