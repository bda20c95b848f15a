#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "condlog/formula.hpp"

namespace condlog {

using World = std::string;

struct FrameDesc {
    std::vector<World> worlds;
    std::map<World, std::vector<World>> after;
};

struct FrameError : std::runtime_error {
    std::vector<std::string> violations;
    explicit FrameError(std::vector<std::string> v);
};

// Worlds are indexed 0..n-1; names are kept for IO.
struct OrderFrame {
    std::vector<World> names;
    std::vector<std::vector<int>> after;

    [[nodiscard]] std::size_t size() const { return names.size(); }
    [[nodiscard]] int index(const World& w) const;  // -1 when unknown
    [[nodiscard]] bool accessible(int w, int x) const;  // x in R(w)
    [[nodiscard]] std::vector<int> order(int w) const;  // w then after(w)
    [[nodiscard]] bool before(int w, int x, int y) const;  // x <_w y
};

// atom -> membership per world index
using Valuation = std::map<std::string, std::vector<char>>;

struct OrderModel {
    OrderFrame frame;
    Valuation val;
    int designated = 0;
};

struct KripkeModel {
    std::vector<World> names;
    std::vector<std::vector<char>> rel;
    Valuation val;
    int designated = 0;
};

struct FrameReport {
    bool reflexive_accessibility = true;
    bool transitive = false;
    bool connected = false;
    bool semi_flat = false;
    bool flat = false;
    bool ancestral = false;
};

struct Lasso {
    std::vector<World> prefix;
    std::vector<World> cycle;
};

[[nodiscard]] OrderFrame validate(const FrameDesc& d);
[[nodiscard]] FrameDesc describe(const OrderFrame& f);

[[nodiscard]] bool evaluate(const OrderModel& m, const Formula& f);
[[nodiscard]] bool evaluate_at(const OrderModel& m, const Formula& f, int w);
[[nodiscard]] std::vector<char> denotation(const OrderFrame& fr, const Valuation& v, const Formula& f);

[[nodiscard]] FrameReport frame_properties(const OrderFrame& f);
[[nodiscard]] bool is_transitive(const OrderFrame& f);
[[nodiscard]] bool is_connected(const OrderFrame& f);
[[nodiscard]] bool is_semi_flat(const OrderFrame& f);

[[nodiscard]] int successor(const OrderFrame& f, int w);
[[nodiscard]] std::vector<int> reachable_set(const OrderFrame& f, int w);  // sorted
[[nodiscard]] bool is_ancestral(const OrderFrame& f);
[[nodiscard]] Lasso successor_sequence(const OrderFrame& f, int w);

// tie_order lists world indices; earlier means smaller.
[[nodiscard]] OrderFrame kripke_to_flat_order(const KripkeModel& k, const std::vector<int>& tie_order);
[[nodiscard]] OrderModel kripke_to_flat_model(const KripkeModel& k, const std::vector<int>& tie_order);
[[nodiscard]] bool evaluate_kripke(const KripkeModel& k, const Formula& f, int w);

// Selection function over a finite frame: value for each (set bitmask, world).
struct SelectionTable {
    std::vector<World> names;
    // sel[w][mask] = bitmask of the selected set
    std::vector<std::vector<std::uint32_t>> sel;
};

struct SelectionError : std::runtime_error {
    int constraint;
    SelectionError(int c, const std::string& msg);
};

[[nodiscard]] SelectionTable order_to_selection(const OrderFrame& f);
[[nodiscard]] OrderFrame selection_to_order(const SelectionTable& t);

enum class FrameClass { all, flat, flat_ancestral };

// Every labelled frame on n worlds, one representative per renaming class,
// in canonical order. Worlds are named w0..w{n-1}.
[[nodiscard]] std::vector<OrderFrame> enumerate_frames(int n, FrameClass cls, int cap = 4);
// Every labelled frame (no symmetry reduction), streamed.
void for_each_labelled_frame(int n, const std::function<void(const OrderFrame&)>& fn);
[[nodiscard]] std::string frame_key(const OrderFrame& f);  // canonical up to renaming

[[nodiscard]] OrderModel gamma_finite_witness(int k);

[[nodiscard]] std::string frame_signature(const OrderFrame& f);  // labelled, for dedup

}  // namespace condlog
