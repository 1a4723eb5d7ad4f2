#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"
#include "types/types.hpp"

namespace manipos {

/// A name visible at some point of the program.
struct LocalName {
    std::string name;
    Scheme scheme;
    NodeId binder;           // pattern that introduced the name
    bool lexical = true;     // false: bound later, reachable only after reordering
    bool nonConstant = false; // bound under the outermost enclosing function
};

struct HoleContext {
    NodeId hole;
    Ty goal = nullptr;
    int level = 0;
    std::vector<LocalName> locals;  // most recently introduced first
    std::size_t topIndex = 0;
};

struct TopBinding {
    std::string name;
    Scheme scheme;
    std::size_t index = 0;
    NodeId binder;
};

struct TypeErrorInfo {
    NodeId node;
    std::string message;
};

struct Typing {
    std::unique_ptr<TypeStore> store = std::make_unique<TypeStore>();
    std::unordered_map<NodeId, Ty, NodeIdHash> exprTypes;
    std::unordered_map<NodeId, Ty, NodeIdHash> patTypes;
    std::unordered_map<NodeId, HoleContext, NodeIdHash> holes;
    std::vector<TopBinding> topBindings;
    std::vector<TypeErrorInfo> errors;
    std::map<std::string, Scheme> pervasives;
};

struct InferOptions {
    /// Monotypes assumed for top-level bindings, keyed by name.
    std::map<std::string, TypeExpr> speculative;
};

/// Hindley-Milner inference over the whole program. Never throws: ill-typed
/// fragments are recorded in `errors` and typed with fresh variables. Every
/// named binding sees its own name, as if it were recursive.
Typing inferProgram(const Program& p, const CtorTable& ctors, const InferOptions& opts = {});

/// Type of a constructor application `ctor` instantiated at `level`: the argument
/// types and the result type. Returns false for unknown constructors.
bool instantiateCtor(TypeStore& store, const CtorTable& ctors, const std::string& ctor, int level,
                     std::vector<Ty>& args, Ty& result);

}  // namespace manipos
