#pragma once

#include <optional>

#include "condlog/search.hpp"

namespace condlog {

struct ExactLimits {
    int max_conds = 12;
    int max_atoms = 6;
    std::size_t max_values = 40000;  // sequence engine
    std::size_t max_types = 1u << 15;  // C2 engine
};

// Decides satisfiability at the root of some model in the logic's class.
// nullopt means the formula is outside the engine's limits.
// On success the witness replays (checked by the caller).
struct ExactAnswer {
    bool sat = false;
    std::optional<Found> witness;
};

[[nodiscard]] std::optional<ExactAnswer> exact_sat(const Formula& f, Logic logic, const ExactLimits& lim = {},
                                                   const Deadline& dl = {});

}  // namespace condlog
