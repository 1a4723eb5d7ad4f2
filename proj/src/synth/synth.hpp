#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "interp/interp.hpp"
#include "syntax/ast.hpp"
#include "syntax/ctors.hpp"
#include "types/infer.hpp"

namespace manipos {

/// Production probabilities of the term grammar.
struct PcfgModel {
    std::map<std::string, double> exprKind;  // var app fun ctor const match if
    double localName = 0.73;
    double pervasiveName = 0.27;
    std::vector<double> recency;             // ranks 1, 2, 3, ...
    double recencyDecay = 0.6;
    std::map<std::string, double> pervasives;
    double pervasiveOther = 0.003;
    double pervasiveCtor = 0.54;
    double userCtor = 0.46;
    std::map<std::string, double> pervasiveCtors;
    std::map<std::string, double> constType;  // int string char float
    std::vector<std::pair<Literal, double>> literals;

    /// Probability of the local name at 1-based recency rank `rank`.
    double recencyAt(std::size_t rank) const;
    double pervasiveNamePrice(const std::string& name) const;
    double literalPrice(const Literal& l) const;  // 0 when untabled
    double kind(const std::string& k) const;

    static PcfgModel parse(const std::string& text);
    static PcfgModel load(const std::string& path);
    /// The table shipped in data/pcfg.txt.
    static const PcfgModel& builtin();
};

struct PcfgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnscorableForm : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Probability of `e` under `pcfg`. `locals` lists the names in scope, most
/// recently introduced first; binders inside `e` are pushed in front.
double score(const Expr& e, const PcfgModel& pcfg, const std::vector<std::string>& locals, const CtorTable& ctors);

enum class ConstraintForm { Plain, IoPair };

struct HoleConstraint {
    NodeId hole;
    NodeId assertion;
    EnvPtr env;                   // names bound on the way to the hole
    std::vector<ValuePtr> args;   // arguments still unapplied at the hole
    ValuePtr expected;

    ConstraintForm form() const { return args.empty() ? ConstraintForm::Plain : ConstraintForm::IoPair; }
};

/// Concrete argument and expected values of each assertion, from a run.
struct AssertExample {
    NodeId item;
    std::string callee;            // empty unless the subject is `f a1 .. an`
    std::vector<ValuePtr> args;
    ValuePtr expected;
};

std::vector<AssertExample> collectExamples(const Program& p, const RunResult& r);

std::vector<HoleConstraint> pushDownExamples(const Program& p, const std::vector<AssertExample>& examples);
std::vector<HoleConstraint> pushDownExamples(const Program& p);

struct SpeculativeType {
    std::string bindingName;
    TypeExpr type;
};

std::vector<SpeculativeType> speculateTypes(const Program& p, const std::vector<AssertExample>& examples);
std::vector<SpeculativeType> speculateTypes(const Program& p);

struct Sketch {
    Program program;
    std::vector<std::string> introducedParams;
    std::string label;  // e.g. "fun x1", "match list"
};

/// Sketches for the hole: the hole itself, up to three function wraps when
/// every constraint is an io-pair, each optionally followed by one case split.
std::vector<Sketch> refine(const Program& p, NodeId hole, const std::vector<HoleConstraint>& constraints,
                           const InferOptions& typing = {});

/// Placement rules for constants, per hole.
struct ConstRules {
    bool allowConstant = true;
    std::optional<std::string> onlyConstant;  // printed value the constant must equal
};

struct GuessScope {
    std::vector<LocalName> locals;  // most recent first; non-lexical names last
    int level = 0;
};

/// Enumerates terms of type `goal` with probability at least `bound`, depth
/// first, likeliest production first. The callback receives each term, its
/// probability and whether it is constant; returning false stops.
/// Returns true when some production was cut by the bound.
bool guess(TypeStore& store, Ty goal, const GuessScope& scope, const CtorTable& ctors, const PcfgModel& pcfg,
           double bound, const ConstRules& rules,
           const std::function<bool(const Expr&, double, bool)>& yield);

struct Candidate {
    std::map<NodeId, Expr> fills;  // hole id -> fill
    double probability = 1.0;
    int constantHoles = 0;
};

struct AcceptContext {
    std::vector<std::string> introducedParams;
    FuelPolicy fuel;
};

/// Heuristics (a)-(e).
bool acceptCandidate(const Program& sketch, const Candidate& c, const AcceptContext& ctx);

struct SynthOptions {
    double initialBound = 0.05;
    double boundDivisor = 20.0;
    double roundTimeoutSeconds = 10.0;
    double capSeconds = 40.0;
    FuelPolicy fuel;
    const PcfgModel* pcfg = nullptr;
    const std::atomic<bool>* cancel = nullptr;
};

enum class NoResultReason { Timeout, SearchExhausted, Cancelled };

struct NoResult : std::runtime_error {
    NoResultReason reason;
    explicit NoResult(NoResultReason r);
};

struct SynthStats {
    int rounds = 0;
    double lastBound = 0;
    std::size_t candidatesTested = 0;
    double probability = 0;
    double seconds = 0;
};

/// Fills the program's holes so that every assertion passes. The returned
/// program has the fills marked pending review. Throws NoResult.
Program synthesize(const Program& p, const SynthOptions& opts = {}, SynthStats* stats = nullptr);

/// Turns a pending fill back into a hole that remembers the rejected text.
Program rejectFill(const Program& p, NodeId fill);
/// Keeps a pending fill and clears its review mark.
Program acceptFill(const Program& p, NodeId fill);

}  // namespace manipos
