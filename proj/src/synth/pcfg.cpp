#include <cmath>
#include <fstream>
#include <sstream>

#include "pcfg_data.hpp"
#include "synth/synth.hpp"
#include "syntax/parse.hpp"
#include "types/pervasives.hpp"

namespace manipos {

double PcfgModel::recencyAt(std::size_t rank) const {
    if (rank == 0 || recency.empty()) return 0.0;
    if (rank <= recency.size()) return recency[rank - 1];
    return recency.back() * std::pow(recencyDecay, static_cast<double>(rank - recency.size()));
}

double PcfgModel::pervasiveNamePrice(const std::string& name) const {
    auto it = pervasives.find(name);
    return it == pervasives.end() ? pervasiveOther : it->second;
}

double PcfgModel::literalPrice(const Literal& l) const {
    for (const auto& [lit, p] : literals)
        if (lit == l) return p;
    return 0.0;
}

double PcfgModel::kind(const std::string& k) const {
    auto it = exprKind.find(k);
    return it == exprKind.end() ? 0.0 : it->second;
}

namespace {

double parseProb(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        double p = std::stod(s, &used);
        if (used != s.size() || !(p > 0.0 && p <= 1.0)) throw std::invalid_argument(s);
        return p;
    } catch (const std::exception&) {
        throw PcfgError("line " + std::to_string(line) + ": bad probability '" + s + "'");
    }
}

Literal parseLiteralKey(const std::string& rule, const std::string& key, int line) {
    auto fail = [&]() -> Literal { throw PcfgError("line " + std::to_string(line) + ": bad " + rule + " literal " + key); };
    try {
        if (rule == "int") {
            std::size_t used = 0;
            long long v = std::stoll(key, &used);
            if (used != key.size()) return fail();
            return Literal::ofInt(v);
        }
        if (rule == "float") {
            std::size_t used = 0;
            double v = std::stod(key, &used);
            if (used != key.size()) return fail();
            return Literal::ofFloat(v);
        }
        Expr e = parseExpr(key, CtorTable{});
        if (e.kind != ExprKind::Const) return fail();
        if (rule == "string" && e.lit.kind != Literal::Kind::String) return fail();
        if (rule == "char" && e.lit.kind != Literal::Kind::Char) return fail();
        return e.lit;
    } catch (const PcfgError&) {
        throw;
    } catch (const std::exception&) {
        return fail();
    }
}

}  // namespace

PcfgModel PcfgModel::parse(const std::string& text) {
    PcfgModel m;
    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;
    std::map<std::size_t, double> ranks;
    while (std::getline(in, raw)) {
        ++lineNo;
        auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == '#') continue;
        auto last = raw.find_last_not_of(" \t\r");
        std::string line = raw.substr(first, last - first + 1);
        auto sp1 = line.find_first_of(" \t");
        auto sp2 = line.find_last_of(" \t");
        if (sp1 == std::string::npos || sp1 == sp2)
            throw PcfgError("line " + std::to_string(lineNo) + ": expected <rule> <key> <probability>");
        std::string rule = line.substr(0, sp1);
        std::string key = line.substr(sp1, sp2 - sp1);
        key = key.substr(key.find_first_not_of(" \t"));
        key = key.substr(0, key.find_last_not_of(" \t") + 1);
        double p = parseProb(line.substr(sp2 + 1), lineNo);

        if (rule == "kind") {
            m.exprKind[key] = p;
        } else if (rule == "name") {
            if (key == "local") m.localName = p;
            else if (key == "pervasive") m.pervasiveName = p;
            else throw PcfgError("line " + std::to_string(lineNo) + ": unknown name rule " + key);
        } else if (rule == "recency") {
            if (key == "decay") {
                m.recencyDecay = p;
            } else {
                int r = 0;
                try { r = std::stoi(key); } catch (const std::exception&) {}
                if (r <= 0) throw PcfgError("line " + std::to_string(lineNo) + ": bad recency rank " + key);
                ranks[static_cast<std::size_t>(r)] = p;
            }
        } else if (rule == "pervasive") {
            if (key == "other") m.pervasiveOther = p;
            else m.pervasives[key] = p;
        } else if (rule == "ctor") {
            if (key == "pervasive") m.pervasiveCtor = p;
            else if (key == "user") m.userCtor = p;
            else throw PcfgError("line " + std::to_string(lineNo) + ": unknown ctor rule " + key);
        } else if (rule == "pctor") {
            m.pervasiveCtors[key] = p;
        } else if (rule == "const") {
            m.constType[key] = p;
        } else if (rule == "int" || rule == "float" || rule == "string" || rule == "char") {
            m.literals.emplace_back(parseLiteralKey(rule, key, lineNo), p);
        } else {
            throw PcfgError("line " + std::to_string(lineNo) + ": unknown rule " + rule);
        }
    }
    std::size_t expect = 1;
    for (const auto& [r, p] : ranks) {
        if (r != expect++) throw PcfgError("recency ranks must be consecutive from 1");
        m.recency.push_back(p);
    }
    if (m.recency.empty()) throw PcfgError("no recency rows");
    return m;
}

PcfgModel PcfgModel::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PcfgError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

const PcfgModel& PcfgModel::builtin() {
    static const PcfgModel m = parse(kBuiltinPcfg);
    return m;
}

namespace {

const char* constKey(Literal::Kind k) {
    switch (k) {
        case Literal::Kind::Int: return "int";
        case Literal::Kind::Float: return "float";
        case Literal::Kind::String: return "string";
        case Literal::Kind::Char: return "char";
    }
    return "int";
}

class Scorer {
public:
    Scorer(const PcfgModel& pcfg, const CtorTable& ctors, std::vector<std::string> locals)
        : pcfg_(pcfg), ctors_(ctors), locals_(std::move(locals)) {
        userCtors_ = ctors.userCtors().size();
    }

    double expr(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Var: return pcfg_.kind("var") * name(e.name);
            case ExprKind::Const: {
                auto it = pcfg_.constType.find(constKey(e.lit.kind));
                double t = it == pcfg_.constType.end() ? 0.0 : it->second;
                return pcfg_.kind("const") * t * pcfg_.literalPrice(e.lit);
            }
            case ExprKind::Ctor: {
                double p = pcfg_.kind("ctor") * ctor(e.name);
                for (const auto& k : e.kids) p *= expr(k);
                return p;
            }
            case ExprKind::App: {
                if (e.kids[0].kind != ExprKind::Var) throw UnscorableForm("application of a non-variable");
                double p = pcfg_.kind("app") * name(e.kids[0].name);
                for (std::size_t i = 1; i < e.kids.size(); ++i) p *= expr(e.kids[i]);
                return p;
            }
            case ExprKind::Fun: {
                if (e.pats[0].kind != PatKind::Var) throw UnscorableForm("function over a pattern");
                std::size_t mark = push({e.pats[0].name});
                double p = pcfg_.kind("fun") * expr(e.kids[0]);
                pop(mark);
                return p;
            }
            case ExprKind::If:
                return pcfg_.kind("if") * expr(e.kids[0]) * expr(e.kids[1]) * expr(e.kids[2]);
            case ExprKind::Match: {
                double p = pcfg_.kind("match") * expr(e.kids[0]);
                for (std::size_t i = 0; i < e.pats.size(); ++i) {
                    std::size_t mark = push(e.pats[i].boundNames());
                    p *= expr(e.kids[i + 1]);
                    pop(mark);
                }
                return p;
            }
            case ExprKind::Hole: throw UnscorableForm("hole");
            case ExprKind::Let: throw UnscorableForm("let");
            case ExprKind::Tuple: throw UnscorableForm("tuple");
        }
        throw UnscorableForm("unknown form");
    }

private:
    const PcfgModel& pcfg_;
    const CtorTable& ctors_;
    std::vector<std::string> locals_;  // most recent last
    std::size_t userCtors_ = 0;

    std::size_t push(const std::vector<std::string>& names) {
        std::size_t mark = locals_.size();
        for (const auto& n : names) locals_.push_back(n);
        return mark;
    }
    void pop(std::size_t mark) { locals_.resize(mark); }

    double name(const std::string& n) const {
        std::size_t rank = 0;
        std::vector<std::string> seen;
        for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
            bool dup = false;
            for (const auto& s : seen) dup = dup || s == *it;
            if (dup) continue;
            seen.push_back(*it);
            ++rank;
            if (*it == n) return pcfg_.localName * pcfg_.recencyAt(rank);
        }
        if (findPervasive(n)) return pcfg_.pervasiveName * pcfg_.pervasiveNamePrice(n);
        throw UnscorableForm("unknown name " + n);
    }

    double ctor(const std::string& c) const {
        const CtorInfo* info = ctors_.find(c);
        if (!info) throw UnscorableForm("unknown constructor " + c);
        if (info->builtin) {
            auto it = pcfg_.pervasiveCtors.find(c);
            return pcfg_.pervasiveCtor * (it == pcfg_.pervasiveCtors.end() ? 0.0 : it->second);
        }
        return pcfg_.userCtor / static_cast<double>(userCtors_ ? userCtors_ : 1);
    }
};

}  // namespace

double score(const Expr& e, const PcfgModel& pcfg, const std::vector<std::string>& locals, const CtorTable& ctors) {
    std::vector<std::string> stack(locals.rbegin(), locals.rend());
    return Scorer(pcfg, ctors, std::move(stack)).expr(e);
}

}  // namespace manipos
