#pragma once

#include <optional>
#include <string>

#include "condlog/exact.hpp"
#include "condlog/search.hpp"

namespace condlog {

struct SearchBudget {
    int bound = 5;              // worlds for C2, tails for the sequence logics
    bool bounded_only = false;  // skip the exact engines
    long deadline_ms = 0;       // 0 = none
    ExactLimits limits;
};

enum class Status {
    SAT,
    UNSAT_EXACT,
    UNSAT_WITHIN_BOUND,
    VALID_EXACT,
    VALID_WITHIN_BOUND,
    INVALID,
    BUDGET_EXCEEDED,
};

[[nodiscard]] const char* status_name(Status s);

struct Verdict {
    Status status = Status::BUDGET_EXCEEDED;
    std::optional<Found> model;  // SAT / INVALID witness
    int bound = 0;               // for the WITHIN_BOUND statuses
    std::string route;           // "bounded" or "exact"
};

// Throws std::logic_error if a witness fails to replay.
[[nodiscard]] Verdict satisfiable(const Formula& f, Logic logic, const SearchBudget& budget = {});
[[nodiscard]] Verdict valid(const Formula& f, Logic logic, const SearchBudget& budget = {});
[[nodiscard]] std::optional<Found> countermodel(const Formula& f, Logic logic, const SearchBudget& budget = {});

// Re-evaluates a witness; true when f has the claimed value at the root.
[[nodiscard]] bool replay(const Found& w, const Formula& f, bool expected);

enum class SchemaClass { order_all, order_flat, order_flat_ancestral, ordinal_seq, lasso, final_seq, list };

[[nodiscard]] const char* schema_class_name(SchemaClass c);
[[nodiscard]] SchemaClass parse_schema_class(const std::string& s);

struct SchemaReport {
    bool valid = true;
    int frames_checked = 0;
    int max_size = 0;
    std::optional<Found> counter;  // model is pointed at the failing world
};

// Exhaustive over frames of size 1..max_size in the class and every
// valuation of the schema's plain instance.
[[nodiscard]] SchemaReport test_schema(const Schema& s, SchemaClass cls, int max_size, const Deadline& dl = {});
[[nodiscard]] SchemaReport test_formula_on_class(const Formula& f, SchemaClass cls, int max_size,
                                                 const Deadline& dl = {});

struct ModalVerdict {
    Status status = Status::BUDGET_EXCEEDED;
    std::optional<KripkeModel> kripke;
    std::string route;
};

struct FragmentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

[[nodiscard]] Logic logic_for(ModalSystem s);
[[nodiscard]] const char* modal_system_name(ModalSystem s);
[[nodiscard]] ModalSystem parse_modal_system(const std::string& s);
// Kripke search up to `bound` worlds (lasso tails for S431), cross-checked
// against validity in the matching conditional logic.
[[nodiscard]] ModalVerdict decide_modal(const Formula& f, ModalSystem sys, int bound = 4);

}  // namespace condlog
