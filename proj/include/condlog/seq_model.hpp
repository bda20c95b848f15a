#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "condlog/formula.hpp"
#include "condlog/order_model.hpp"

namespace condlog {

// Ordinal below omega^omega in Cantor normal form: sum of omega^e * c,
// exponents strictly decreasing, coefficients positive.
struct Ordinal {
    std::vector<std::pair<int, long>> terms;

    static Ordinal finite(long n);
    static Ordinal omega_pow(int e);

    [[nodiscard]] bool is_zero() const { return terms.empty(); }
    [[nodiscard]] bool is_successor() const;  // last term has exponent 0
    [[nodiscard]] int degree() const;         // leading exponent, -1 for zero
    [[nodiscard]] std::string str() const;

    friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms == b.terms; }
    friend bool operator<(const Ordinal& a, const Ordinal& b);
    friend bool operator<=(const Ordinal& a, const Ordinal& b) { return !(b < a); }
};

// a * n for finite n >= 0, and a * omega.
[[nodiscard]] Ordinal times_finite(const Ordinal& a, long n);
[[nodiscard]] Ordinal times_omega(const Ordinal& a);
// the gamma with a + gamma = b (requires a <= b)
[[nodiscard]] Ordinal left_subtract(const Ordinal& a, const Ordinal& b);

struct SeqNode;
using SeqExpr = std::shared_ptr<const SeqNode>;

struct SeqNode {
    enum Kind { Elem, Cat, Omega } kind;
    std::string label;            // Elem
    std::vector<SeqExpr> parts;   // Cat parts, or the single Omega body
};

[[nodiscard]] SeqExpr elem(const std::string& label);
[[nodiscard]] SeqExpr cat(std::vector<SeqExpr> parts);  // may return nullptr for empty
[[nodiscard]] SeqExpr omega_rep(SeqExpr body);
[[nodiscard]] SeqExpr list_expr(const std::vector<std::string>& labels);
[[nodiscard]] SeqExpr concat(const SeqExpr& a, const SeqExpr& b);  // nullptr is the empty sequence

[[nodiscard]] SeqExpr normalize_seq(const SeqExpr& e);
[[nodiscard]] Ordinal length(const SeqExpr& e);
[[nodiscard]] std::string head(const SeqExpr& e);
[[nodiscard]] SeqExpr drop(const SeqExpr& e, const Ordinal& a);  // nullptr when nothing is left
[[nodiscard]] std::string element_at(const SeqExpr& e, const Ordinal& a);

// text form: labels separated by commas, (body)^w for omega repetition
[[nodiscard]] std::string print_seq(const SeqExpr& e);
[[nodiscard]] SeqExpr parse_seq(const std::string& text);
[[nodiscard]] bool struct_equal(const SeqExpr& a, const SeqExpr& b);

[[nodiscard]] bool expr_equal(const SeqExpr& a, const SeqExpr& b);

struct Tail {
    SeqExpr expr;
    Ordinal rank;
};

// Distinct non-empty tails, ordered by least rank.
[[nodiscard]] std::vector<Tail> tails(const SeqExpr& e);

[[nodiscard]] SeqExpr lasso_expr(const Lasso& l);
[[nodiscard]] bool to_lasso(const SeqExpr& e, Lasso& out);  // false when length > omega

// categorical valuation: atom -> protoworlds where it holds
struct ProtoworldTable {
    std::map<std::string, std::set<std::string>> atoms;
    [[nodiscard]] bool holds(const std::string& atom, const std::string& proto) const;
};

struct SequenceModel {
    SeqExpr root;
    ProtoworldTable table;
};

// Worlds are the tails, named by their printed form; world 0 is the root.
[[nodiscard]] OrderModel induced_order_model(const SeqExpr& root, const ProtoworldTable& table);
[[nodiscard]] bool evaluate_seq(const SeqExpr& root, const ProtoworldTable& table, const Formula& f);

struct LassoModel {
    Lasso lasso;
    ProtoworldTable table;
};

[[nodiscard]] LassoModel minimal_representation(const LassoModel& m);
[[nodiscard]] Lasso omega_padding(const std::vector<std::string>& l);

[[nodiscard]] std::vector<Ordinal> relevant_positions(const SeqExpr& root, const ProtoworldTable& table,
                                                      const Formula& f);
[[nodiscard]] std::vector<std::string> restrict_seq(const SeqExpr& root, const std::vector<Ordinal>& X);

}  // namespace condlog
