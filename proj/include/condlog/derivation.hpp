#pragma once

#include <string>
#include <vector>

#include "condlog/formula.hpp"
#include "condlog/schemas.hpp"

namespace condlog {

enum class Rule { Axiom, Detachment, Normality, Necessitation, FlatteningRule };

[[nodiscard]] const char* rule_name(Rule r);
[[nodiscard]] Rule parse_rule(const std::string& s);

// Step indices are 0-based and must point backwards.
// Axiom steps name a library schema, or "PC" for a propositional tautology
// (conditionals count as atoms). FlatteningRule with from = {} asks for a
// truth-table certificate of q -> p instead of a cited step.
struct Step {
    Formula formula;
    Rule rule = Rule::Axiom;
    std::string schema;
    Binding binding;
    std::vector<int> from;
};

struct Derivation {
    std::string name;
    Logic logic = Logic::C2;
    std::vector<Step> steps;
};

struct CheckResult {
    bool ok = true;
    int bad_step = -1;
    std::string reason;
};

// Schemas usable as axioms in the logic. Both the Identity/Reciprocity/MP/CEM
// base and the K-based base are admitted for C2.
[[nodiscard]] std::vector<std::string> axioms_of(Logic logic);

// PC check: tautology once every conditional is treated as an atom
// (after normalization and double-negation stripping).
[[nodiscard]] bool is_tautology(const Formula& f);

[[nodiscard]] CheckResult check_derivation(const Derivation& d);

}  // namespace condlog
