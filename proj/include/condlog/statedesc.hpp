#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "condlog/decide.hpp"
#include "condlog/formula.hpp"
#include "condlog/schemas.hpp"
#include "condlog/seq_model.hpp"

namespace condlog {

[[nodiscard]] bool is_bot(const Formula& f);

// <tau> : <> is Top, <tau + x> is <tau> & (~V tau >> x), or
// <tau> & (~V tau > x) when x is Bot. V is the disjunction in list order.
[[nodiscard]] Formula make_sentence(const std::vector<Formula>& tau);

// State descriptions are interned in a DescSpace. Depth 0 is a label (one
// literal per atom); depth n+1 is <items + Bot> for a list of distinct
// depth-n descriptions. Bot itself is kBot and only appears in lists.
using DescId = int;
inline constexpr DescId kBot = -1;

struct Desc {
    int depth = 0;
    unsigned label = 0;          // depth 0: bit i set iff atoms[i] is true
    std::vector<DescId> items;   // depth >= 1, without the trailing Bot
};

struct DescError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class DescSpace {
public:
    explicit DescSpace(std::vector<std::string> atoms);

    [[nodiscard]] const std::vector<std::string>& atoms() const { return atoms_; }
    [[nodiscard]] DescId label(unsigned mask);
    [[nodiscard]] DescId list(const std::vector<DescId>& items);
    [[nodiscard]] const Desc& at(DescId d) const { return descs_.at(std::size_t(d)); }
    [[nodiscard]] int depth(DescId d) const { return at(d).depth; }
    [[nodiscard]] unsigned head(DescId d) const;  // the label the description entails
    [[nodiscard]] bool entails_atom(DescId d, int atom) const { return (head(d) >> atom) & 1u; }

    // Names: labels are literal strings such as "p~q"; lists are "[x/y/z]"
    // for <x, y, z, Bot>. Bot is "#f".
    [[nodiscard]] std::string name(DescId d) const;
    [[nodiscard]] DescId parse_name(const std::string& text);
    [[nodiscard]] Formula sentence(DescId d) const;

    // The fixed order on descriptions: by depth, labels positive-literal
    // first in atom order, lists length-lexicographically. Bot is last.
    [[nodiscard]] bool less(DescId a, DescId b) const;

    [[nodiscard]] unsigned label_count() const { return 1u << atoms_.size(); }

private:
    std::vector<std::string> atoms_;
    std::vector<Desc> descs_;
    std::map<std::vector<int>, DescId> index_;  // (depth, label or items...) -> id
    mutable std::vector<Formula> sentences_;
    DescId intern(Desc d, std::vector<int> key);
};

// Consistency of <tau> in a logic for lists of descriptions of depth <= 1
// (Bot allowed last). Exact: for the sequence logics it is computed from the
// set of depth-2 descriptions realized in the logic's sequence class over the
// labels involved, for c2 from the first-occurrence projection constraint.
class DescOracle {
public:
    DescOracle(DescSpace& sp, Logic logic);
    ~DescOracle();
    DescOracle(const DescOracle&) = delete;
    DescOracle& operator=(const DescOracle&) = delete;

    [[nodiscard]] Logic logic() const { return logic_; }
    [[nodiscard]] DescSpace& space() { return sp_; }

    // <tau> consistent, tau non-empty, distinct, Bot only last, <Bot> excluded.
    [[nodiscard]] bool orderly(const std::vector<DescId>& tau);
    // A sequence over labels at whose root <tau> holds (sequence logics).
    [[nodiscard]] std::optional<SeqExpr> witness(const std::vector<DescId>& tau);

    // Depth-2 descriptions (as their item lists) realized by some sequence
    // over the given labels. Sequence logics only.
    [[nodiscard]] const std::map<std::vector<DescId>, SeqExpr>& level2(std::vector<unsigned> labels);

private:
    struct Level2;
    DescSpace& sp_;
    Logic logic_;
    std::map<std::vector<unsigned>, std::unique_ptr<Level2>> cache_;
    std::map<std::vector<DescId>, bool> memo_;
    bool c2_orderly(const std::vector<DescId>& tau) const;
    const Level2& level2_for(const std::vector<DescId>& tau);
};

// Y_L(A, n) as description ids, in the fixed order. Supported: n <= 1
// everywhere, n = 2 for c2 with one atom and for the sequence logics with
// up to two atoms (two atoms usually exceed the size cap). Throws DescError
// beyond that.
[[nodiscard]] std::vector<DescId> state_descriptions(DescOracle& o, int n);

enum class ListClass { disorderly, orderly_short, direct, circuitous };
[[nodiscard]] const char* list_class_name(ListClass c);
[[nodiscard]] ListClass classify_list(DescOracle& o, const std::vector<DescId>& tau);

struct MakeSeqStep {
    std::vector<DescId> tau;
    ListClass kind = ListClass::orderly_short;
    int j = -1;                                // direct
    std::vector<DescId> rho, theta;            // direct
    std::vector<std::vector<DescId>> pi;       // circuitous, in orbit order
    std::vector<DescId> orbit;                 // circuitous: t0, g(t0), ... up to the first repeat
};

struct MakeSeqResult {
    SeqExpr seq;  // nullptr for the empty sequence
    std::vector<MakeSeqStep> trace;
};

// The recursive sequence construction for an orderly list (logic must be a
// sequence logic). Protoworlds are named by the descriptions' names.
[[nodiscard]] MakeSeqResult make_seq(DescOracle& o, const std::vector<DescId>& tau);

// M_s for s = <tau + Bot> of depth >= 1: the tails of make_seq(tau + Bot),
// with atoms read off each protoworld's label.
[[nodiscard]] SequenceModel canonical_model_for(DescOracle& o, DescId s);

// M_{A,n}: worlds are the c2 state descriptions of depth <= n; at
// s = <tau + Bot> the order is s, tau[1], tau[2], ... .
struct CanonicalC2 {
    OrderModel model;
    std::vector<DescId> world_desc;  // world index -> description
};
[[nodiscard]] CanonicalC2 canonical_c2_model(DescSpace& sp, int n);

// ceil(3 (k-1)! / 2): the bound on the tails of make_seq of a length-k list.
[[nodiscard]] long finitetails_bound(int k);

// Elements of a sequence in order of first occurrence.
[[nodiscard]] std::vector<std::string> first_occurrences(const SeqExpr& e);

enum class Consistency { yes, no_exact, no_within_bound, budget_exceeded };
[[nodiscard]] const char* consistency_name(Consistency c);

struct ConsistencyAnswer {
    Consistency answer = Consistency::budget_exceeded;
    std::optional<Found> witness;
    int bound = 0;
};

// Consistency of an arbitrary formula through the decision procedures.
[[nodiscard]] ConsistencyAnswer consistent(const Formula& f, Logic logic, const SearchBudget& budget = {});

}  // namespace condlog
