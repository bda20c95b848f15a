#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "condlog/formula.hpp"
#include "condlog/seq_model.hpp"

namespace condlog {

using Rational = boost::multiprecision::cpp_rational;

struct ProbError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Shape { omega, tree };

// Protoworld weights; non-negative and summing to exactly 1.
struct ProtoMeasure {
    std::map<std::string, Rational> weight;
};

// Atoms are read off a world's first protoworld (sequences) or its root (trees).
struct ProductSpec {
    ProtoMeasure pi;
    ProtoworldTable table;
    Shape shape = Shape::omega;
};

void check_spec(const ProductSpec& spec);  // throws ProbError
[[nodiscard]] Rational parse_rational(const std::string& text);
[[nodiscard]] std::string rational_str(const Rational& r);
[[nodiscard]] double to_double(const Rational& r);

// pi-mass of the protoworlds at which a Boolean formula holds
[[nodiscard]] Rational boolean_mass(const Formula& f, const ProductSpec& spec);

// Exact engine scope: every conditional antecedent is a truth-functional
// combination of atoms and zero-degree conditionals. This covers L_BA and
// (Boolean > Boolean) > Boolean.
[[nodiscard]] bool in_exact_scope(const Formula& f);

// Probability on omega-sequences with the product measure, as a rational.
// Conditionals whose antecedent has probability 0 count as (vacuously) true.
[[nodiscard]] Rational exact_prob(const Formula& f, const ProductSpec& spec);

struct Estimate {
    double value = 0;
    double std_err = 0;  // sample standard deviation / sqrt(samples)
    long samples = 0;
    std::uint64_t seed = 0;
    long aborted = 0;  // draws that hit the horizon before settling
};

struct McOptions {
    long samples = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    long horizon = 200000;  // positions (sequences) or branches per node (trees)
};

// Monte Carlo on lazily drawn i.i.d. omega-sequences. Any formula.
// Throws ProbError if more than 0.1% of draws abort.
[[nodiscard]] Estimate mc_prob_seq(const Formula& f, const ProductSpec& spec, const McOptions& opt = {});
// Monte Carlo on lazily grown trees, branches probed in index order.
[[nodiscard]] Estimate mc_prob_tree(const Formula& f, const ProductSpec& spec, const McOptions& opt = {});

enum class Method { exact, mc_seq, mc_tree };
[[nodiscard]] const char* method_name(Method m);

struct ProbValue {
    bool is_exact = false;
    Rational exact;
    Estimate est;
    [[nodiscard]] double value() const { return is_exact ? to_double(exact) : est.value; }
    [[nodiscard]] std::string str() const;
};

// P(f | g) = P(f & g) / P(g). Throws ProbError on a zero denominator. The MC
// methods estimate the ratio from one sample set.
[[nodiscard]] ProbValue conditional_prob(const Formula& f, const Formula& g, const ProductSpec& spec, Method m,
                                         const McOptions& opt = {});

// One line per fact: applicability against its side conditions, then both
// sides (exact where the engine covers them, else Monte Carlo).
struct FactLine {
    std::string fact;
    bool applicable = false;
    std::string reason;  // why not applicable, or a note
    std::string lhs_expr, rhs_expr;
    ProbValue lhs, rhs;
    bool agree = false;
};

[[nodiscard]] std::vector<FactLine> stalnaker_report(const Formula& p, const Formula& q, const Formula& r,
                                                     const ProductSpec& spec, const McOptions& opt = {});

// A conditional (or box) between Booleans.
[[nodiscard]] bool is_zero_degree(const Formula& f);
// A conjunction whose conjuncts are Boolean or zero-degree conditionals.
[[nodiscard]] bool is_bool_zd_conjunction(const Formula& f);

}  // namespace condlog
