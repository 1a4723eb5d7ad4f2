#include "nonlinear/nonlinear.hpp"
#include "synth/synth.hpp"
#include "syntax/scope.hpp"

namespace manipos {

namespace {

// Scrutinee variables of the matches whose arms enclose `target`.
bool enclosingScrutinees(const Expr& e, NodeId target, std::vector<std::string>& out) {
    if (e.id == target) return true;
    for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (!enclosingScrutinees(e.kids[i], target, out)) continue;
        if (e.kind == ExprKind::Match && i > 0 && e.kids[0].kind == ExprKind::Var) out.push_back(e.kids[0].name);
        return true;
    }
    return false;
}

std::vector<std::string> scrutineesAround(const Program& p, NodeId hole) {
    std::vector<std::string> out;
    for (const auto& item : p.items)
        if (enclosingScrutinees(item.expr, hole, out)) break;
    return out;
}

std::set<std::string> takenNames(const Program& p) {
    std::set<std::string> taken = allBoundNames(p);
    for (auto& n : topLevelNames(p)) taken.insert(n);
    return taken;
}

Expr caseSplit(const std::string& scrutinee, const std::string& typeName, const CtorTable& ctors,
               const std::set<std::string>& taken) {
    std::vector<std::pair<Pattern, Expr>> arms;
    const TypeDecl* decl = ctors.type(typeName);
    for (const auto& c : decl->ctors) {
        std::set<std::string> mine = taken;
        arms.emplace_back(branchPattern(*ctors.find(c.name), mine), Expr::hole());
    }
    return Expr::match(Expr::var(scrutinee), std::move(arms));
}

}  // namespace

std::vector<Sketch> refine(const Program& p, NodeId hole, const std::vector<HoleConstraint>& constraints,
                           const InferOptions& typing) {
    if (!findExpr(p, hole)) throw UnknownNode(hole);
    std::size_t maxWraps = 0;
    bool any = false, allPairs = true;
    for (const auto& c : constraints) {
        if (c.hole != hole) continue;
        std::size_t n = c.args.size();
        if (!any) maxWraps = n;
        any = true;
        allPairs = allPairs && c.form() == ConstraintForm::IoPair;
        maxWraps = std::min(maxWraps, n);
    }
    if (!any || !allPairs) maxWraps = 0;
    maxWraps = std::min<std::size_t>(maxWraps, 3);

    CtorTable ctors(p.types);
    const Attrs holeAttrs = findExpr(p, hole)->attrs;
    std::vector<Sketch> out;
    for (std::size_t w = 0; w <= maxWraps; ++w) {
        Sketch s;
        s.program = p;
        std::set<std::string> taken = takenNames(p);
        NodeId body = hole;
        if (w > 0) {
            Expr chain = Expr::hole();
            chain.id = s.program.mint();
            body = chain.id;
            std::vector<std::string> params;
            for (int k = 1; params.size() < w; ++k) {
                std::string n = "x" + std::to_string(k);
                if (taken.count(n)) continue;
                taken.insert(n);
                params.push_back(n);
            }
            for (std::size_t k = w; k-- > 0;) chain = Expr::fun(Pattern::var(params[k]), std::move(chain));
            chain.id = hole;
            chain.attrs = holeAttrs;
            mintMissing(s.program, chain);
            *findExpr(s.program, hole) = std::move(chain);
            s.introducedParams = params;
            s.label = "fun";
            for (const auto& n : params) s.label += " " + n;
        }
        Sketch plain = s;
        out.push_back(std::move(plain));

        Typing t = inferProgram(s.program, ctors, typing);
        auto hc = t.holes.find(body);
        if (hc == t.holes.end()) continue;
        std::vector<std::string> outer = scrutineesAround(s.program, body);
        for (const auto& local : hc->second.locals) {
            if (!local.nonConstant || !local.lexical) continue;
            bool again = false;
            for (const auto& o : outer) again = again || o == local.name;
            if (again) continue;
            Ty ty = TypeStore::repr(local.scheme.body);
            if (ty->kind != TyNode::Kind::Con) continue;
            const TypeDecl* decl = ctors.type(ty->name);
            if (!decl || decl->ctors.size() < 2) continue;
            Sketch m = s;
            Expr split = caseSplit(local.name, ty->name, ctors, taken);
            if (body == hole) {
                split.id = hole;
                split.attrs = holeAttrs;
            }
            mintMissing(m.program, split);
            *findExpr(m.program, body) = std::move(split);
            m.label = (s.label.empty() ? "" : s.label + ", ") + "match " + local.name;
            out.push_back(std::move(m));
        }
    }
    return out;
}

}  // namespace manipos
