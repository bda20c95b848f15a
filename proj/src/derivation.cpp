#include "condlog/derivation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace condlog {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Axiom: return "axiom";
        case Rule::Detachment: return "detachment";
        case Rule::Normality: return "normality";
        case Rule::Necessitation: return "necessitation";
        case Rule::FlatteningRule: return "flattening-rule";
    }
    return "?";
}

Rule parse_rule(const std::string& s) {
    for (Rule r : {Rule::Axiom, Rule::Detachment, Rule::Normality, Rule::Necessitation, Rule::FlatteningRule})
        if (s == rule_name(r)) return r;
    throw std::invalid_argument("unknown rule '" + s + "'");
}

std::vector<std::string> axioms_of(Logic logic) {
    std::vector<std::string> ax = {"PC",           "Identity",      "Reciprocity",   "MP", "CEM", "K",
                                   "StalnakerNec", "StalnakerPoss", "StalnakerDist"};
    if (logic != Logic::C2) ax.push_back("Flattening");
    if (logic == Logic::C2FS || logic == Logic::C2FSM) ax.push_back("Sequentiality");
    if (logic == Logic::C2FM || logic == Logic::C2FSM) ax.push_back("McKinsey");
    return ax;
}

bool is_tautology(const Formula& f) {
    Formula g = dn_canon(normalize(f));
    std::map<std::string, int> vars;
    std::function<void(const Formula&)> collect = [&](const Formula& h) {
        switch (h->kind) {
            case Kind::Neg: collect(h->a); return;
            case Kind::And:
                collect(h->a);
                collect(h->b);
                return;
            default: vars.emplace(key(h), int(vars.size())); return;
        }
    };
    collect(g);
    if (vars.size() > 22) throw std::invalid_argument("too many propositional variables for a truth table");
    // flatten into postfix once, then sweep assignments
    struct Op {
        int kind;  // 0 var, 1 neg, 2 and
        int var;
    };
    std::vector<Op> prog;
    std::function<void(const Formula&)> emit = [&](const Formula& h) {
        switch (h->kind) {
            case Kind::Neg:
                emit(h->a);
                prog.push_back({1, -1});
                return;
            case Kind::And:
                emit(h->a);
                emit(h->b);
                prog.push_back({2, -1});
                return;
            default: prog.push_back({0, vars.at(key(h))}); return;
        }
    };
    emit(g);
    std::vector<char> st;
    for (unsigned long m = 0; m < (1ul << vars.size()); ++m) {
        st.clear();
        for (const Op& op : prog) {
            if (op.kind == 0) st.push_back((m >> op.var) & 1);
            else if (op.kind == 1) st.back() = !st.back();
            else {
                char b = st.back();
                st.pop_back();
                st.back() = st.back() && b;
            }
        }
        if (!st.back()) return false;
    }
    return true;
}

namespace {

// normalized x -> y is Neg(And(x, Neg(y)))
bool as_imp(const Formula& n, Formula& x, Formula& y) {
    if (n->kind != Kind::Neg || n->a->kind != Kind::And || n->a->b->kind != Kind::Neg) return false;
    x = n->a->a;
    y = n->a->b->a;
    return true;
}

// normalized x <-> y is And(Neg(And(x, Neg y)), Neg(And(y, Neg x)))
bool as_iff(const Formula& n, Formula& x, Formula& y) {
    if (n->kind != Kind::And) return false;
    Formula x1, y1, x2, y2;
    if (!as_imp(n->a, x1, y1) || !as_imp(n->b, x2, y2)) return false;
    if (!equiv_dn(x1, y2) || !equiv_dn(y1, x2)) return false;
    x = x1;
    y = y1;
    return true;
}

struct Bad {
    std::string why;
};

void check_step(const Derivation& d, std::size_t k, const std::vector<std::string>& axioms) {
    const Step& s = d.steps[k];
    for (int i : s.from)
        if (i < 0 || std::size_t(i) >= k) throw Bad{"cites step " + std::to_string(i) + " which is not earlier"};
    auto need = [&](std::size_t n) {
        if (s.from.size() != n) throw Bad{std::string(rule_name(s.rule)) + " needs " + std::to_string(n) + " premise(s)"};
    };
    Formula cur = normalize(s.formula);
    switch (s.rule) {
        case Rule::Axiom: {
            if (std::find(axioms.begin(), axioms.end(), s.schema) == axioms.end())
                throw Bad{"'" + s.schema + "' is not an axiom of " + logic_name(d.logic)};
            if (s.schema == "PC") {
                if (!is_tautology(s.formula)) throw Bad{"not a propositional tautology"};
                return;
            }
            Formula inst;
            try {
                inst = instantiate(find_schema(s.schema), s.binding);
            } catch (const BindingError& e) {
                throw Bad{e.what()};
            }
            if (!equiv_dn(inst, s.formula)) throw Bad{"not an instance of " + s.schema + " under the binding"};
            return;
        }
        case Rule::Detachment: {
            need(2);
            Formula x, y;
            if (!as_imp(normalize(d.steps[s.from[0]].formula), x, y))
                throw Bad{"step " + std::to_string(s.from[0]) + " is not an implication"};
            if (!equiv_dn(x, d.steps[s.from[1]].formula))
                throw Bad{"step " + std::to_string(s.from[1]) + " is not the antecedent"};
            if (!equiv_dn(y, cur)) throw Bad{"formula is not the consequent"};
            return;
        }
        case Rule::Normality: {
            need(1);
            Formula pq, r;
            Formula prem = normalize(d.steps[s.from[0]].formula);
            if (!as_imp(prem, pq, r) || pq->kind != Kind::And)
                throw Bad{"premise is not of the form (p & q) -> r"};
            Formula lhs, rhs;
            if (!as_imp(cur, lhs, rhs) || lhs->kind != Kind::And || lhs->a->kind != Kind::Cond ||
                lhs->b->kind != Kind::Cond || rhs->kind != Kind::Cond)
                throw Bad{"formula is not of the form ((s > p) & (s > q)) -> s > r"};
            const Formula& sp = lhs->a;
            const Formula& sq = lhs->b;
            if (!equiv_dn(sp->a, sq->a) || !equiv_dn(sp->a, rhs->a)) throw Bad{"antecedents differ"};
            if (!equiv_dn(sp->b, pq->a) || !equiv_dn(sq->b, pq->b) || !equiv_dn(rhs->b, r))
                throw Bad{"consequents do not match the premise"};
            return;
        }
        case Rule::Necessitation: {
            need(1);
            const Formula& p = d.steps[s.from[0]].formula;
            if (cur->kind != Kind::Cond || !equiv_dn(cur->b, p) || !equiv_dn(cur->a, neg(p)))
                throw Bad{"formula is not the box of the premise"};
            return;
        }
        case Rule::FlatteningRule: {
            if (d.logic == Logic::C2) throw Bad{"the Flattening Rule is not available in c2"};
            if (s.from.size() > 1) throw Bad{"flattening-rule takes at most one premise"};
            Formula l, r;
            if (!as_iff(cur, l, r)) throw Bad{"formula is not a biconditional"};
            // accept either orientation
            if (l->kind != Kind::Cond || l->b->kind != Kind::Cond) std::swap(l, r);
            if (l->kind != Kind::Cond || l->b->kind != Kind::Cond || r->kind != Kind::Cond)
                throw Bad{"formula is not of the form p > (q > r) <-> q > r"};
            if (!equiv_dn(l->b, r)) throw Bad{"inner conditional differs from the right side"};
            Formula p = l->a, q = r->a;
            if (s.from.empty()) {
                if (!is_tautology(imp(q, p))) throw Bad{"q -> p is not a tautology and no step is cited"};
                return;
            }
            Formula x, y;
            if (!as_imp(normalize(d.steps[s.from[0]].formula), x, y) || !equiv_dn(x, q) || !equiv_dn(y, p))
                throw Bad{"cited step is not q -> p"};
            return;
        }
    }
}

}  // namespace

CheckResult check_derivation(const Derivation& d) {
    std::vector<std::string> axioms = axioms_of(d.logic);
    for (std::size_t k = 0; k < d.steps.size(); ++k) {
        try {
            check_step(d, k, axioms);
        } catch (const Bad& b) {
            return {false, int(k), b.why};
        }
    }
    return {};
}

}  // namespace condlog
