#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "condlog/compiled.hpp"
#include "condlog/order_model.hpp"
#include "condlog/schemas.hpp"
#include "condlog/seq_model.hpp"

namespace condlog {

using Clock = std::chrono::steady_clock;

struct Deadline {
    std::optional<Clock::time_point> at;
    static Deadline after_ms(long ms);
    [[nodiscard]] bool passed() const { return at && Clock::now() > *at; }
};

struct DeadlineExceeded : std::runtime_error {
    DeadlineExceeded() : std::runtime_error("deadline exceeded") {}
};

// Sweeps every valuation of c.atoms over the frame's worlds, 64 at a time,
// and reports the first one making c.root true at world `target`.
// Bit i*n+w of the valuation index says atom i holds at world w.
[[nodiscard]] bool sweep_frame(const OrderFrame& fr, const Compiled& c, int target, Valuation* found,
                               const Deadline& dl = {});

// Same, but at every world; reports the failing world too. Used by the
// characterisation sweeps where validity on a frame is the question.
[[nodiscard]] bool sweep_frame_any(const OrderFrame& fr, const Compiled& c, int* world, Valuation* found,
                                   const Deadline& dl = {});

// Pointed order frames where only worlds closer than `depth` steps to w0 get
// an order. Worlds are named w0.. in order of first appearance.
void for_each_pointed_frame(int worlds, int depth, const std::function<bool(const OrderFrame&)>& fn);

// Sequence shapes with `leaves` distinct protoworlds s0.. in the class of `logic`
// (C2 is not a sequence class). Deduplicated by pointed tail frame.
[[nodiscard]] std::vector<SeqExpr> sequence_shapes(int leaves, Logic logic);

struct Found {
    OrderModel model;
    SeqExpr seq;  // set for sequence classes
    ProtoworldTable table;
    int size = 0;
};

// Bounded satisfiability in the logic's canonical class, sizes 1..bound
// (worlds for C2, tails for the sequence logics).
[[nodiscard]] std::optional<Found> bounded_sat(const Formula& f, Logic logic, int bound, const Deadline& dl = {});

enum class ModalSystem { KT, S43, S431 };

[[nodiscard]] std::optional<KripkeModel> kripke_countermodel(const Formula& f, ModalSystem sys, int bound,
                                                             const Deadline& dl = {});

}  // namespace condlog
