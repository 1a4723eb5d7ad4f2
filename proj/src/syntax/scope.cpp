#include "syntax/scope.hpp"

#include <vector>

namespace manipos {

namespace {

void collect(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out, bool allRec) {
    auto isBound = [&](const std::string& n) {
        for (auto it = bound.rbegin(); it != bound.rend(); ++it)
            if (*it == n) return true;
        return false;
    };
    auto pushPat = [&](const Pattern& p) {
        for (auto& n : p.boundNames()) bound.push_back(n);
    };
    switch (e.kind) {
        case ExprKind::Var:
            if (!isBound(e.name)) out.insert(e.name);
            return;
        case ExprKind::Fun: {
            std::size_t n = bound.size();
            pushPat(e.pats[0]);
            collect(e.kids[0], bound, out, allRec);
            bound.resize(n);
            return;
        }
        case ExprKind::Let: {
            std::size_t n = bound.size();
            if ((e.rec || allRec) && e.pats[0].kind == PatKind::Var) bound.push_back(e.pats[0].name);
            collect(e.kids[0], bound, out, allRec);
            bound.resize(n);
            pushPat(e.pats[0]);
            collect(e.kids[1], bound, out, allRec);
            bound.resize(n);
            return;
        }
        case ExprKind::Match: {
            collect(e.kids[0], bound, out, allRec);
            for (std::size_t i = 0; i < e.pats.size(); ++i) {
                std::size_t n = bound.size();
                pushPat(e.pats[i]);
                collect(e.kids[i + 1], bound, out, allRec);
                bound.resize(n);
            }
            return;
        }
        default:
            for (const auto& k : e.kids) collect(k, bound, out, allRec);
    }
}

}  // namespace

std::set<std::string> freeVars(const Expr& e) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect(e, bound, out, false);
    return out;
}

std::set<std::string> freeVarsAsRec(const Expr& e) {
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect(e, bound, out, true);
    return out;
}

std::set<std::string> topLevelNames(const Program& p) {
    std::set<std::string> out;
    for (const auto& item : p.items)
        if (item.kind == ItemKind::Binding)
            for (auto& n : item.pat.boundNames()) out.insert(n);
    return out;
}

}  // namespace manipos
