#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "interp/interp.hpp"
#include "syntax/ast.hpp"

namespace manipos {

/// Focused call frame per function binding id.
using FocusMap = std::map<NodeId, std::uint32_t>;

struct RenderOptions {
    FuelPolicy fuel;
};

/// The structured view of a program consumed by the canvas client. A pure
/// function of the program text and the focus map. Throws ParseError.
nlohmann::json renderDocument(const std::string& text, const FocusMap& focus, const RenderOptions& opts = {});

/// Ranked completions for code typed at `context` (any node id, or 0 for the
/// top level). Each entry has `display`, `insert` and `kind`, plus `colorKey`
/// for values. Throws ParseError.
nlohmann::json autocomplete(const std::string& text, NodeId context, const std::string& prefix,
                            const FocusMap& focus, const RenderOptions& opts = {});

}  // namespace manipos
