#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "condlog/compiled.hpp"
#include "condlog/io.hpp"
#include "condlog/order_model.hpp"
#include "condlog/schemas.hpp"
#include "condlog/search.hpp"
#include "condlog/derivation.hpp"

#include "support.hpp"

using namespace condlog;
namespace ts = testsupport;

namespace {

OrderModel load(const std::string& fig) { return model_from_json(read_json_file(ts::data("figures/" + fig))); }

int idx(const OrderFrame& f, const std::string& w) {
    int i = f.index(w);
    REQUIRE(i >= 0);
    return i;
}

// Reference evaluator written straight from the truth clauses, on the
// surface syntax (no normalization).
bool ref_eval(const OrderFrame& fr, const Valuation& val, const Formula& f, int w) {
    auto at = [&](const Formula& g, int x) { return ref_eval(fr, val, g, x); };
    auto order = [&] {
        std::vector<int> o{w};
        for (int x : fr.after[std::size_t(w)]) o.push_back(x);
        return o;
    };
    switch (f->kind) {
        case Kind::Atom: {
            auto it = val.find(f->name);
            return it != val.end() && it->second[std::size_t(w)];
        }
        case Kind::Neg: return !at(f->a, w);
        case Kind::And: return at(f->a, w) && at(f->b, w);
        case Kind::Or: return at(f->a, w) || at(f->b, w);
        case Kind::MatImp: return !at(f->a, w) || at(f->b, w);
        case Kind::MatIff: return at(f->a, w) == at(f->b, w);
        case Kind::Top: return true;
        case Kind::Bot: return false;
        case Kind::Cond:
            for (int x : order())
                if (at(f->a, x)) return at(f->b, x);
            return true;
        case Kind::StrongCond:
            for (int x : order())
                if (at(f->a, x)) return at(f->b, x);
            return false;
        case Kind::Box:
            for (int x : order())
                if (!at(f->a, x)) return false;
            return true;
        case Kind::Dia:
            for (int x : order())
                if (at(f->a, x)) return true;
            return false;
        default: throw std::logic_error("unexpected node");
    }
}

OrderFrame random_frame(std::mt19937_64& rng, int n) {
    FrameDesc d;
    for (int i = 0; i < n; ++i) d.worlds.push_back("w" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> others;
        for (int j = 0; j < n; ++j)
            if (j != i && rng() % 2) others.push_back(d.worlds[std::size_t(j)]);
        std::shuffle(others.begin(), others.end(), rng);
        d.after[d.worlds[std::size_t(i)]] = others;
    }
    return validate(d);
}

Valuation random_val(std::mt19937_64& rng, int n, const std::vector<std::string>& atoms) {
    Valuation v;
    for (const auto& a : atoms) {
        auto& s = v[a];
        s.assign(std::size_t(n), 0);
        for (int i = 0; i < n; ++i) s[std::size_t(i)] = char(rng() & 1);
    }
    return v;
}

}  // namespace

TEST_CASE("validate: figure frames and violations") {
    FrameDesc fig1{{"1", "2", "3", "4"}, {{"1", {"2", "3"}}, {"2", {"4"}}, {"3", {}}, {"4", {}}}};
    CHECK(validate(fig1).size() == 4);

    auto violations = [](const FrameDesc& d) {
        try {
            (void)validate(d);
        } catch (const FrameError& e) {
            return e.violations;
        }
        return std::vector<std::string>{};
    };
    auto own = violations({{"1"}, {{"1", {"1"}}}});
    REQUIRE(own.size() == 1);
    CHECK(own[0].find("own after-list") != std::string::npos);
    auto dup = violations({{"1", "2"}, {{"1", {"2", "2"}}}});
    REQUIRE_FALSE(dup.empty());
    CHECK(dup[0].find("duplicate") != std::string::npos);
    auto unknown = violations({{"1"}, {{"1", {"9"}}}});
    REQUIRE_FALSE(unknown.empty());
    CHECK(unknown[0].find("9") != std::string::npos);
}

TEST_CASE("evaluate: fig1 and fig3 models") {
    OrderModel m = load("fig1.json");
    CHECK_FALSE(evaluate(m, parse("(p & q) > r")));
    CHECK(evaluate(m, parse("p > ((p & q) > r)")));
    CHECK(evaluate(m, parse("(p & q) > (p & q)")));

    OrderModel f3 = load("fig3.json");
    CHECK(evaluate(f3, parse("[](p -> (~p > r))")));
    CHECK(evaluate(f3, parse("[](q -> (~q > r))")));
    CHECK(evaluate(f3, parse("p | q")));
    CHECK_FALSE(evaluate(f3, parse("~(p | q) > r")));
}

TEST_CASE("denotation examples") {
    OrderModel m = load("fig1.json");
    auto d = denotation(m.frame, m.val, parse("p & q"));
    std::set<std::string> got;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i]) got.insert(m.frame.names[i]);
    CHECK(got == std::set<std::string>{"3", "4"});
    auto all = denotation(m.frame, m.val, top());
    CHECK(std::all_of(all.begin(), all.end(), [](char c) { return c; }));

    OrderModel f3 = load("fig3.json");
    auto n = denotation(f3.frame, f3.val, parse("~(p | q)"));
    for (std::size_t i = 0; i < n.size(); ++i) CHECK(bool(n[i]) == (f3.frame.names[i] == "3"));
}

TEST_CASE("frame properties of the figures") {
    CHECK(frame_properties(load("fig2_left.json").frame).flat);
    CHECK_FALSE(frame_properties(load("fig2_right.json").frame).semi_flat);
    FrameReport r1 = frame_properties(load("fig4_1.json").frame);
    CHECK(r1.flat);
    CHECK_FALSE(r1.ancestral);
    CHECK(frame_properties(load("fig4_2.json").frame).ancestral);
    CHECK(frame_properties(load("fig4_3.json").frame).ancestral);
    CHECK(frame_properties(load("fig1.json").frame).reflexive_accessibility);
}

TEST_CASE("successor, reachability and successor sequences") {
    OrderFrame f1 = load("fig4_1.json").frame;
    CHECK(successor(f1, idx(f1, "1")) == idx(f1, "2"));
    CHECK(successor(f1, idx(f1, "2")) == idx(f1, "1"));
    std::vector<int> want{idx(f1, "1"), idx(f1, "2")};
    std::sort(want.begin(), want.end());
    CHECK(reachable_set(f1, idx(f1, "1")) == want);
    CHECK_FALSE(is_ancestral(f1));
    Lasso l3 = successor_sequence(f1, idx(f1, "3"));
    CHECK(l3.prefix.empty());
    CHECK(l3.cycle == std::vector<World>{"3"});

    OrderFrame single = validate({{"a"}, {{"a", {}}}});
    CHECK(successor(single, 0) == 0);

    OrderFrame f3 = load("fig4_3.json").frame;
    CHECK(reachable_set(f3, idx(f3, "1")).size() == 3);
    Lasso a = successor_sequence(f3, idx(f3, "1"));
    CHECK(a.prefix.empty());
    CHECK(a.cycle == std::vector<World>{"1", "2", "3"});

    OrderFrame f2 = load("fig4_2.json").frame;
    Lasso b = successor_sequence(f2, idx(f2, "1"));
    CHECK(b.prefix == std::vector<World>{"1", "2"});
    CHECK(b.cycle == std::vector<World>{"3"});
}

TEST_CASE("property: successor sequence visits exactly the reachable set") {
    for (int n = 1; n <= 3; ++n)
        for_each_labelled_frame(n, [&](const OrderFrame& fr) {
            for (int w = 0; w < int(fr.size()); ++w) {
                Lasso l = successor_sequence(fr, w);
                std::set<int> seen;
                for (const auto& x : l.prefix) seen.insert(fr.index(x));
                for (const auto& x : l.cycle) seen.insert(fr.index(x));
                auto r = reachable_set(fr, w);
                CHECK(std::vector<int>(seen.begin(), seen.end()) == r);
            }
        });
}

TEST_CASE("property: evaluator agrees with the reference clauses") {
    std::mt19937_64 rng(21);
    ts::FormulaGen g(22, {"p", "q", "r"});
    for (int i = 0; i < 400; ++i) {
        int n = 1 + int(rng() % 5);
        OrderFrame fr = random_frame(rng, n);
        OrderModel m{fr, random_val(rng, n, {"p", "q", "r"}), 0};
        Formula f = g.full(4);
        auto den = denotation(fr, m.val, f);
        for (int w = 0; w < n; ++w) {
            bool want = ref_eval(fr, m.val, f, w);
            CHECK(evaluate_at(m, f, w) == want);
            CHECK(bool(den[std::size_t(w)]) == want);
        }
    }
}

TEST_CASE("property: sweep_frame_any agrees with brute-force evaluation") {
    std::mt19937_64 rng(23);
    ts::FormulaGen g(24, {"p", "q"});
    for (int i = 0; i < 150; ++i) {
        int n = 1 + int(rng() % 3);
        OrderFrame fr = random_frame(rng, n);
        Formula f = g.any(3);
        Compiled c = compile(f, {"p", "q"});
        int w = -1;
        Valuation v;
        bool found = sweep_frame_any(fr, c, &w, &v);
        bool brute = false;
        for (int m = 0; m < (1 << (2 * n)) && !brute; ++m) {
            Valuation val;
            val["p"].assign(std::size_t(n), 0);
            val["q"].assign(std::size_t(n), 0);
            for (int x = 0; x < n; ++x) {
                val["p"][std::size_t(x)] = char((m >> x) & 1);
                val["q"][std::size_t(x)] = char((m >> (n + x)) & 1);
            }
            for (int x = 0; x < n && !brute; ++x) brute = ref_eval(fr, val, f, x);
        }
        CHECK(found == brute);
        if (found) CHECK(ref_eval(fr, v, f, w));
    }
}

TEST_CASE("soundness: C2 axiom instances hold on every frame up to 3 worlds") {
    const std::vector<std::string> atoms{"p0", "p1", "p2"};
    std::vector<std::pair<std::string, Compiled>> neg_axioms;
    for (const auto& a : axioms_of(Logic::C2))
        if (a != "PC") neg_axioms.push_back({a, compile(neg(plain_instance(find_schema(a))), atoms)});
    REQUIRE(neg_axioms.size() >= 4);
    long frames = 0;
    for (int n = 1; n <= 3; ++n)
        for_each_labelled_frame(n, [&](const OrderFrame& fr) {
            ++frames;
            for (const auto& [name, c] : neg_axioms) {
                int w;
                Valuation v;
                if (sweep_frame_any(fr, c, &w, &v)) FAIL_CHECK(name << " fails on " << frame_signature(fr));
            }
        });
    CHECK(frames > 100);
}

TEST_CASE("kripke_to_flat_order") {
    KripkeModel chain{{"1", "2"}, {{1, 1}, {0, 1}}, {}, 0};
    OrderFrame f = kripke_to_flat_order(chain, {0, 1});
    CHECK(f.after[0] == std::vector<int>{1});
    CHECK(f.after[1].empty());

    KripkeModel one{{"w"}, {{1}}, {}, 0};
    CHECK(kripke_to_flat_order(one, {0}).after[0].empty());

    KripkeModel total{{"1", "2", "3"}, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}, {}, 0};
    OrderFrame t = kripke_to_flat_order(total, {0, 1, 2});
    CHECK(t.after[1] == std::vector<int>{0, 2});
    CHECK(frame_properties(t).flat);

    KripkeModel notrefl{{"1"}, {{0}}, {}, 0};
    CHECK_THROWS((void)kripke_to_flat_order(notrefl, {0}));
}

TEST_CASE("property: kripke_to_flat is flat and preserves modal formulas") {
    std::mt19937_64 rng(25);
    ts::FormulaGen g(26, {"p", "q"});
    for (int i = 0; i < 200; ++i) {
        int n = 1 + int(rng() % 4);
        // total preorders by rank: reflexive, transitive and connected
        std::vector<int> rank(static_cast<std::size_t>(n));
        for (auto& r : rank) r = int(rng() % 3);
        KripkeModel k;
        for (int x = 0; x < n; ++x) k.names.push_back("k" + std::to_string(x));
        k.rel.assign(std::size_t(n), std::vector<char>(std::size_t(n), 0));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) k.rel[std::size_t(x)][std::size_t(y)] = rank[std::size_t(x)] <= rank[std::size_t(y)];
        k.val = random_val(rng, n, {"p", "q"});
        std::vector<int> tie(static_cast<std::size_t>(n));
        std::iota(tie.begin(), tie.end(), 0);
        std::stable_sort(tie.begin(), tie.end(), [&](int a, int b) { return rank[std::size_t(a)] < rank[std::size_t(b)]; });
        OrderModel m = kripke_to_flat_model(k, tie);
        CHECK(frame_properties(m.frame).flat);
        for (int j = 0; j < 5; ++j) {
            // modal formulas: only box and diamond over Booleans and each other
            Formula f = g.boolean(2);
            for (int d = 0; d < 2; ++d) f = g.pick(2) ? box(disj(f, g.boolean(1))) : dia(conj(f, g.boolean(1)));
            if (g.pick(2)) f = imp(f, box(g.boolean(1)));
            for (int w = 0; w < n; ++w) CHECK(evaluate_kripke(k, f, w) == evaluate_at(m, f, w));
        }
    }
}

TEST_CASE("selection tables") {
    OrderFrame f1 = load("fig1.json").frame;
    SelectionTable t = order_to_selection(f1);
    std::uint32_t mask = (1u << idx(f1, "3")) | (1u << idx(f1, "4"));
    CHECK(t.sel[std::size_t(idx(f1, "2"))][mask] == (1u << idx(f1, "4")));
    // constraint 1: w in the set selects {w}
    for (std::size_t w = 0; w < f1.size(); ++w)
        for (std::uint32_t m = 0; m < (1u << f1.size()); ++m)
            if (m & (1u << w)) CHECK(t.sel[w][m] == (1u << w));

    OrderFrame left = load("fig2_left.json").frame;
    CHECK(frame_signature(selection_to_order(order_to_selection(left))) == frame_signature(left));

    SelectionTable broken = order_to_selection(left);
    broken.sel[0][1u << 0] = 0;
    CHECK_THROWS_AS((void)selection_to_order(broken), SelectionError);
}

TEST_CASE("property: selection round-trip on every frame up to 3 worlds") {
    for (int n = 1; n <= 3; ++n)
        for_each_labelled_frame(n, [&](const OrderFrame& fr) {
            CHECK(frame_signature(selection_to_order(order_to_selection(fr))) == frame_signature(fr));
        });
}

TEST_CASE("frame enumeration") {
    CHECK(enumerate_frames(1, FrameClass::all).size() == 1);
    CHECK(enumerate_frames(2, FrameClass::all).size() == 3);
    auto all3 = enumerate_frames(3, FrameClass::all);
    long flat = std::count_if(all3.begin(), all3.end(), [](const OrderFrame& f) { return frame_properties(f).flat; });
    long fa = std::count_if(all3.begin(), all3.end(), [](const OrderFrame& f) {
        auto r = frame_properties(f);
        return r.flat && r.ancestral;
    });
    CHECK(long(enumerate_frames(3, FrameClass::flat).size()) == flat);
    CHECK(long(enumerate_frames(3, FrameClass::flat_ancestral).size()) == fa);
    // labelled count / renaming classes: each class appears once
    std::set<std::string> keys;
    for (const auto& f : all3) keys.insert(frame_key(f));
    CHECK(keys.size() == all3.size());
    std::set<std::string> from_labelled;
    for_each_labelled_frame(3, [&](const OrderFrame& f) { from_labelled.insert(frame_key(f)); });
    CHECK(from_labelled == keys);
    CHECK_THROWS((void)enumerate_frames(5, FrameClass::all));
}

TEST_CASE("gamma finite witness") {
    for (int k : {1, 2, 5}) {
        OrderModel m = gamma_finite_witness(k);
        CHECK(m.frame.size() == std::size_t(k + 1));
        for (int i = 0; i < k; ++i) {
            Formula s = neg(cond(disj(atom(i), atom(i + 1)), atom(i)));
            CHECK(evaluate(m, s));
        }
    }
}

TEST_CASE("model JSON round-trip") {
    for (const char* f : {"fig1.json", "fig1_flip.json", "fig2_left.json", "fig2_right.json", "fig3.json",
                          "fig4_1.json", "fig4_2.json", "fig4_3.json"}) {
        CAPTURE(f);
        json j = read_json_file(ts::data(std::string("figures/") + f));
        OrderModel m = model_from_json(j);
        OrderModel back = model_from_json(model_to_json(m));
        CHECK(frame_signature(back.frame) == frame_signature(m.frame));
        CHECK(model_to_json(back) == model_to_json(m));
    }
}
