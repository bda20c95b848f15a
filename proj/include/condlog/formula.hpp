#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace condlog {

enum class Kind {
    Atom,
    Meta,  // schematic letter ?a..?z
    Neg,
    And,
    Cond,
    Or,
    MatImp,
    MatIff,
    Box,
    Dia,
    StrongCond,
    Bot,
    Top,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    std::string name;  // atoms and metavariables only
    Formula a, b;
};

enum class Style { ascii, unicode };

enum class Fragment { boolean, boolean_antecedent, modal, general };

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& msg);
};

struct BindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// constructors
[[nodiscard]] Formula atom(const std::string& name);
[[nodiscard]] Formula atom(int index);
[[nodiscard]] Formula meta(const std::string& name);
[[nodiscard]] Formula neg(Formula f);
[[nodiscard]] Formula conj(Formula l, Formula r);
[[nodiscard]] Formula cond(Formula l, Formula r);
[[nodiscard]] Formula disj(Formula l, Formula r);
[[nodiscard]] Formula imp(Formula l, Formula r);
[[nodiscard]] Formula iff(Formula l, Formula r);
[[nodiscard]] Formula box(Formula f);
[[nodiscard]] Formula dia(Formula f);
[[nodiscard]] Formula scond(Formula l, Formula r);
[[nodiscard]] Formula bot();
[[nodiscard]] Formula top();
[[nodiscard]] Formula conj_all(const std::vector<Formula>& fs);  // empty -> Top
[[nodiscard]] Formula disj_all(const std::vector<Formula>& fs);  // empty -> Bot

[[nodiscard]] Formula parse(const std::string& text);
[[nodiscard]] std::string print(const Formula& f, Style style = Style::ascii);

// Only Atom/Meta/Neg/And/Cond in the result.
[[nodiscard]] Formula normalize(const Formula& f);
// Strips every double negation. Used for comparisons, never stored.
[[nodiscard]] Formula dn_canon(const Formula& f);

[[nodiscard]] bool same(const Formula& a, const Formula& b);
// normalize both sides, then compare modulo double negation
[[nodiscard]] bool equiv_dn(const Formula& a, const Formula& b);
// stable key for the dn-canonical normal form
[[nodiscard]] std::string key(const Formula& f);

[[nodiscard]] int modal_depth(const Formula& f);
[[nodiscard]] Fragment classify_fragment(const Formula& f);
[[nodiscard]] const char* fragment_name(Fragment fr);
[[nodiscard]] bool is_boolean(const Formula& f);
// every conditional antecedent Boolean (also true for modal formulas like []p -> p)
[[nodiscard]] bool is_lba(const Formula& f);

// sorted atom names occurring in f (after normalization, so Bot contributes p0)
[[nodiscard]] std::vector<std::string> atoms_of(const Formula& f);
[[nodiscard]] std::vector<std::string> metas_of(const Formula& f);

struct Schema {
    std::string name;
    Formula tmpl;
};

using Binding = std::map<std::string, Formula>;

[[nodiscard]] Formula instantiate(const Schema& s, const Binding& b);
// Replace atoms by formulas (used for the modal translation and tests).
[[nodiscard]] Formula substitute_atoms(const Formula& f, const Binding& b);

}  // namespace condlog
