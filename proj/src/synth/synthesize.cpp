#include <algorithm>
#include <chrono>

#include "nonlinear/nonlinear.hpp"
#include "synth/synth.hpp"
#include "syntax/print.hpp"
#include "syntax/scope.hpp"

namespace manipos {

NoResult::NoResult(NoResultReason r)
    : std::runtime_error(r == NoResultReason::Timeout           ? "synthesis timed out"
                         : r == NoResultReason::SearchExhausted ? "no candidate satisfies the assertions"
                                                                : "synthesis cancelled"),
      reason(r) {}

namespace {

void collectHoles(const Expr& e, std::vector<NodeId>& out) {
    if (e.kind == ExprKind::Hole) out.push_back(e.id);
    for (const auto& k : e.kids) collectHoles(k, out);
}

// The expression `e` with every filled hole replaced by its fill.
Expr assemble(const Expr& e, const std::map<NodeId, Expr>& fills) {
    if (e.kind == ExprKind::Hole) {
        auto it = fills.find(e.id);
        if (it != fills.end()) return it->second;
    }
    Expr out = e;
    for (auto& k : out.kids) k = assemble(k, fills);
    return out;
}

void spliceInto(Expr& e, Program& p, const std::map<NodeId, Expr>& fills) {
    if (e.kind == ExprKind::Hole) {
        auto it = fills.find(e.id);
        if (it == fills.end()) return;
        NodeId id = e.id;
        Attrs attrs = e.attrs;
        e = it->second;
        e.id = id;
        e.attrs = attrs;
        mintMissing(p, e);
        return;
    }
    for (auto& k : e.kids) spliceInto(k, p, fills);
}

void splice(Program& p, const std::map<NodeId, Expr>& fills) {
    for (auto& item : p.items) {
        spliceInto(item.expr, p, fills);
        spliceInto(item.expected, p, fills);
    }
}

// Puts holes back at the filled locations, keeping their ids.
void unsplice(Expr& e, const std::map<NodeId, Expr>& fills) {
    if (fills.count(e.id)) {
        Attrs attrs = e.attrs;
        NodeId id = e.id;
        e = Expr::hole();
        e.id = id;
        e.attrs = attrs;
        return;
    }
    for (auto& k : e.kids) unsplice(k, fills);
}

bool anyNotHashHit(const Expr& e, const std::map<NodeId, Expr>& fills) {
    if (!e.attrs.notHashes.empty()) {
        std::string h = notHash(assemble(e, fills));
        for (const auto& n : e.attrs.notHashes)
            if (n == h) return true;
    }
    for (const auto& k : e.kids)
        if (anyNotHashHit(k, fills)) return true;
    return false;
}

bool mentions(const Expr& e, const std::string& name) {
    if (e.kind == ExprKind::Var && e.name == name) return true;
    for (const auto& k : e.kids)
        if (mentions(k, name)) return true;
    return false;
}

std::size_t itemOf(const Program& p, NodeId node) {
    for (std::size_t i = 0; i < p.items.size(); ++i) {
        bool hit = false;
        forEachExpr(p.items[i].expr, [&](const Expr& e) { hit = hit || e.id == node; });
        if (hit) return i;
    }
    return p.items.size();
}

// Fills needing the reorder pass: those naming the enclosing or a later binding.
bool needsReorder(const Program& sketch, const Candidate& c) {
    for (const auto& [hole, fill] : c.fills) {
        std::size_t at = itemOf(sketch, hole);
        std::set<std::string> fv = freeVars(fill);
        for (std::size_t i = at; i < sketch.items.size(); ++i) {
            const TopItem& item = sketch.items[i];
            if (item.kind != ItemKind::Binding || (i == at && item.rec)) continue;
            for (const auto& n : item.pat.boundNames())
                if (fv.count(n)) return true;
        }
    }
    return false;
}

bool runsClean(const Program& sketch, const Candidate& c, const FuelPolicy& fuel) {
    std::shared_ptr<const Program> prog;
    if (needsReorder(sketch, c)) {
        Program q = sketch;
        splice(q, c.fills);
        try {
            q = reorder(std::move(q));
        } catch (const DuplicateName&) {
            return false;
        }
        for (auto& item : q.items) unsplice(item.expr, c.fills);
        prog = std::make_shared<const Program>(std::move(q));
    } else {
        prog = std::shared_ptr<const Program>(&sketch, [](const Program*) {});
    }
    FillMap fills;
    for (const auto& [id, e] : c.fills) fills[id] = &e;
    RunOptions opts;
    opts.fuel = fuel;
    opts.trace = false;
    opts.fills = &fills;
    opts.assertsOnly = true;
    opts.stopAtFailure = true;
    RunResult r = run(prog, opts);
    if (r.asserts.empty() || !r.allAssertsPass()) return false;
    for (const auto& [id, e] : c.fills)
        if (!r.filledHolesVisited.count(id)) return false;
    return true;
}

}  // namespace

bool acceptCandidate(const Program& sketch, const Candidate& c, const AcceptContext& ctx) {
    if (c.constantHoles > 1) return false;
    for (const auto& param : ctx.introducedParams) {
        bool used = false;
        for (const auto& [id, e] : c.fills) used = used || mentions(e, param);
        for (const auto& item : sketch.items) used = used || mentions(item.expr, param);
        if (!used) return false;
    }
    for (const auto& item : sketch.items)
        if (anyNotHashHit(item.expr, c.fills)) return false;
    return runsClean(sketch, c, ctx.fuel);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Plan {
    Sketch sketch;
    std::vector<NodeId> holes;
    std::vector<ConstRules> rules;
    std::unique_ptr<Typing> typing;
    std::vector<GuessScope> scopes;
};

struct Stop {
    NoResultReason reason;
};

std::vector<NodeId> targetHoles(const Program& p) {
    std::map<std::string, std::size_t> byName;
    for (std::size_t i = 0; i < p.items.size(); ++i)
        if (p.items[i].kind == ItemKind::Binding)
            for (const auto& n : p.items[i].pat.boundNames()) byName[n] = i;
    std::vector<bool> needed(p.items.size(), false);
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < p.items.size(); ++i)
        if (p.items[i].kind == ItemKind::Assert) {
            needed[i] = true;
            work.push_back(i);
        }
    while (!work.empty()) {
        std::size_t i = work.back();
        work.pop_back();
        std::set<std::string> fv = freeVarsAsRec(p.items[i].expr);
        for (auto& n : freeVars(p.items[i].expected)) fv.insert(n);
        for (const auto& n : fv) {
            auto it = byName.find(n);
            if (it == byName.end() || needed[it->second]) continue;
            needed[it->second] = true;
            work.push_back(it->second);
        }
    }
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < p.items.size(); ++i)
        if (needed[i]) {
            collectHoles(p.items[i].expr, out);
            if (p.items[i].kind == ItemKind::Assert) collectHoles(p.items[i].expected, out);
        }
    return out;
}

class Search {
public:
    Search(const SynthOptions& opts, const PcfgModel& pcfg, Clock::time_point start)
        : opts_(opts), pcfg_(pcfg), start_(start) {}

    std::size_t tested = 0;
    bool cut = false;
    std::optional<Candidate> best;
    const Plan* bestPlan = nullptr;

    void round(const std::vector<Plan>& plans, double bound) {
        cut = false;
        for (const auto& plan : plans) {
            plan_ = &plan;
            ctors_ = std::make_unique<CtorTable>(plan.sketch.program.types);
            Candidate c;
            fill(0, bound, c);
        }
    }

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

private:
    const SynthOptions& opts_;
    const PcfgModel& pcfg_;
    Clock::time_point start_;
    const Plan* plan_ = nullptr;
    std::unique_ptr<CtorTable> ctors_;

    void checkStop() {
        if (opts_.cancel && opts_.cancel->load()) throw Stop{NoResultReason::Cancelled};
        if (elapsed() > opts_.capSeconds) throw Stop{NoResultReason::Timeout};
    }

    void fill(std::size_t i, double bound, Candidate& c) {
        const Plan& plan = *plan_;
        if (i == plan.holes.size()) {
            test(c);
            return;
        }
        NodeId hole = plan.holes[i];
        auto hc = plan.typing->holes.find(hole);
        if (hc == plan.typing->holes.end()) return;
        ConstRules rules = plan.rules[i];
        if (c.constantHoles >= 1) rules.allowConstant = false;
        double before = c.probability;
        bool wasCut = guess(*plan.typing->store, hc->second.goal, plan.scopes[i], *ctors_, pcfg_, bound / before, rules,
                            [&](const Expr& e, double p, bool constant) {
                                checkStop();
                                c.fills[hole] = e;
                                c.probability = before * p;
                                c.constantHoles += constant ? 1 : 0;
                                fill(i + 1, bound, c);
                                c.constantHoles -= constant ? 1 : 0;
                                c.fills.erase(hole);
                                c.probability = before;
                                return true;
                            });
        cut = cut || wasCut;
    }

    void test(const Candidate& c) {
        checkStop();
        if (best && c.probability <= best->probability) return;
        ++tested;
        AcceptContext ctx;
        ctx.introducedParams = plan_->sketch.introducedParams;
        ctx.fuel = opts_.fuel;
        if (!acceptCandidate(plan_->sketch.program, c, ctx)) return;
        best = c;
        bestPlan = plan_;
    }
};

std::vector<Plan> makePlans(const Program& p, const std::vector<NodeId>& targets,
                            const std::vector<AssertExample>& examples, const InferOptions& typing) {
    std::vector<HoleConstraint> constraints = pushDownExamples(p, examples);
    std::vector<Sketch> sketches{Sketch{p, {}, ""}};
    for (NodeId h : targets) {
        std::vector<Sketch> next;
        for (const auto& s : sketches)
            for (auto& r : refine(s.program, h, constraints, typing)) {
                std::vector<std::string> params = s.introducedParams;
                params.insert(params.end(), r.introducedParams.begin(), r.introducedParams.end());
                r.introducedParams = std::move(params);
                if (!s.label.empty()) r.label = s.label + (r.label.empty() ? "" : "; " + r.label);
                next.push_back(std::move(r));
                if (next.size() >= 64) break;
            }
        sketches = std::move(next);
    }

    // Parameters of `fun x1 .. xn -> (??)` skeletons count as introduced.
    std::vector<std::string> skeleton;
    for (const auto& item : p.items) {
        const Expr* e = &item.expr;
        std::vector<std::string> ps;
        while (e->kind == ExprKind::Fun && e->pats[0].kind == PatKind::Var) {
            ps.push_back(e->pats[0].name);
            e = &e->kids[0];
        }
        if (!ps.empty() && e->kind == ExprKind::Hole && std::find(targets.begin(), targets.end(), e->id) != targets.end())
            skeleton.insert(skeleton.end(), ps.begin(), ps.end());
    }

    CtorTable ctors(p.types);
    std::vector<Plan> plans;
    for (auto& s : sketches) {
        Plan plan;
        plan.sketch = std::move(s);
        plan.sketch.introducedParams.insert(plan.sketch.introducedParams.end(), skeleton.begin(), skeleton.end());
        const Program& q = plan.sketch.program;
        std::vector<NodeId> all = targetHoles(q);
        std::vector<HoleConstraint> cs = pushDownExamples(q, examples);
        plan.typing = std::make_unique<Typing>(inferProgram(q, ctors, typing));
        for (NodeId h : all) {
            auto hc = plan.typing->holes.find(h);
            if (hc == plan.typing->holes.end()) continue;
            plan.holes.push_back(h);
            ConstRules rules;
            std::set<NodeId> reaching;
            const HoleConstraint* only = nullptr;
            for (const auto& c : cs)
                if (c.hole == h) {
                    reaching.insert(c.assertion);
                    only = &c;
                }
            if (reaching.size() > 1) {
                rules.allowConstant = false;
            } else if (reaching.size() == 1) {
                Expr v;
                if (only->form() == ConstraintForm::Plain && valueToExpr(*only->expected, v))
                    rules.onlyConstant = printExpr(v);
                else
                    rules.allowConstant = false;
            }
            plan.rules.push_back(rules);

            GuessScope scope;
            scope.level = hc->second.level;
            scope.locals = hc->second.locals;
            std::set<std::string> seen;
            for (const auto& l : scope.locals) seen.insert(l.name);
            for (const auto& tb : plan.typing->topBindings) {
                if (tb.index <= hc->second.topIndex || seen.count(tb.name)) continue;
                seen.insert(tb.name);
                LocalName n;
                n.name = tb.name;
                n.scheme = tb.scheme;
                n.binder = tb.binder;
                n.lexical = false;
                scope.locals.push_back(std::move(n));
            }
            plan.scopes.push_back(std::move(scope));
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

}  // namespace

Program synthesize(const Program& input, const SynthOptions& opts, SynthStats* stats) {
    Clock::time_point start = Clock::now();
    const PcfgModel& pcfg = opts.pcfg ? *opts.pcfg : PcfgModel::builtin();
    Program p = input;
    dedupeIds(p);

    std::vector<NodeId> targets = targetHoles(p);
    bool hasAssert = false;
    for (const auto& item : p.items) hasAssert = hasAssert || item.kind == ItemKind::Assert;
    if (targets.empty() || !hasAssert) throw NoResult(NoResultReason::SearchExhausted);

    RunResult r0 = run(std::make_shared<const Program>(p));
    std::vector<AssertExample> examples = collectExamples(p, r0);
    InferOptions typing;
    for (auto& s : speculateTypes(p, examples)) typing.speculative[s.bindingName] = s.type;

    std::vector<Plan> plans = makePlans(p, targets, examples, typing);
    Search search(opts, pcfg, start);
    double bound = opts.initialBound;
    int rounds = 0;
    auto report = [&](double prob) {
        if (!stats) return;
        stats->rounds = rounds;
        stats->lastBound = bound;
        stats->candidatesTested = search.tested;
        stats->probability = prob;
        stats->seconds = search.elapsed();
    };
    for (;;) {
        ++rounds;
        try {
            search.round(plans, bound);
        } catch (const Stop& s) {
            if (!search.best) {
                report(0);
                throw NoResult(s.reason);
            }
        }
        if (search.best) break;
        if (!search.cut) {
            report(0);
            throw NoResult(NoResultReason::SearchExhausted);
        }
        if (search.elapsed() >= opts.roundTimeoutSeconds) {
            report(0);
            throw NoResult(NoResultReason::Timeout);
        }
        bound /= opts.boundDivisor;
    }
    report(search.best->probability);

    const Plan& plan = *search.bestPlan;
    Program out = plan.sketch.program;
    std::map<NodeId, Expr> fills = search.best->fills;
    splice(out, fills);
    for (NodeId h : targets)
        if (Expr* e = findExpr(out, h)) e->attrs.pending = true;
    out = reorder(std::move(out));
    dedupeIds(out);
    return out;
}

Program rejectFill(const Program& p, NodeId fill) {
    Program out = p;
    Expr* e = findExpr(out, fill);
    if (!e) throw UnknownNode(fill);
    Expr hole = Expr::hole();
    hole.id = e->id;
    hole.attrs = e->attrs;
    hole.attrs.pending = false;
    std::string h = notHash(*e);
    if (std::find(hole.attrs.notHashes.begin(), hole.attrs.notHashes.end(), h) == hole.attrs.notHashes.end())
        hole.attrs.notHashes.push_back(h);
    *e = std::move(hole);
    return out;
}

Program acceptFill(const Program& p, NodeId fill) {
    Program out = p;
    Expr* e = findExpr(out, fill);
    if (!e) throw UnknownNode(fill);
    e->attrs.pending = false;
    return out;
}

}  // namespace manipos
