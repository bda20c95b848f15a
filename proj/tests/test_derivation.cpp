#include "doctest.h"

#include "condlog/decide.hpp"
#include "condlog/derivation.hpp"
#include "condlog/io.hpp"

#include "support.hpp"

using namespace condlog;
namespace ts = testsupport;

namespace {

const char* kNames[] = {"mod", "four", "h", "appg_c"};

Derivation load(const std::string& name) {
    return derivation_from_json(read_json_file(ts::data("derivations/" + name + ".json")));
}

Step ax(const std::string& f, const std::string& schema, Binding b = {}) {
    return Step{parse(f), Rule::Axiom, schema, std::move(b), {}};
}
Step rule(const std::string& f, Rule r, std::vector<int> from) { return Step{parse(f), r, "", {}, std::move(from)}; }

}  // namespace

TEST_CASE("bundled transcripts check") {
    for (const char* n : kNames) {
        CAPTURE(n);
        CheckResult r = check_derivation(load(n));
        CHECK(r.ok);
        CHECK(r.reason.empty());
    }
    CHECK(same(load("four").steps.back().formula, parse("[]p -> [][]p")));
    CHECK(same(load("mod").steps.back().formula, parse("[]p -> q > p")));
    CHECK(same(load("appg_c").steps.back().formula, plain_instance(find_schema("RestrictedSequentiality"))) ==
          false);  // same shape, letters p q rather than p0 p1
}

TEST_CASE("corrupted transcripts are rejected at the corrupted step") {
    for (const char* n : kNames) {
        CAPTURE(n);
        json j = read_json_file(ts::data(std::string("derivations/") + n + "_corrupt.json"));
        CheckResult r = check_derivation(derivation_from_json(j));
        CHECK_FALSE(r.ok);
        CHECK(r.bad_step == j.at("rejected_at").get<int>());
        CHECK_FALSE(r.reason.empty());
    }
}

TEST_CASE("property: every step of every transcript is semantically valid in its logic") {
    for (const char* n : kNames) {
        Derivation d = load(n);
        for (std::size_t i = 0; i < d.steps.size(); ++i) {
            CAPTURE(n);
            CAPTURE(i);
            Verdict v = valid(d.steps[i].formula, d.logic);
            CHECK(v.status != Status::INVALID);
        }
    }
}

TEST_CASE("property: admitted axioms are valid in their logic") {
    for (Logic l : {Logic::C2, Logic::C2F, Logic::C2FS, Logic::C2FM, Logic::C2FSM}) {
        for (const auto& a : axioms_of(l)) {
            if (a == "PC") continue;
            CAPTURE(a);
            CAPTURE(logic_name(l));
            CHECK(valid(plain_instance(find_schema(a)), l).status == Status::VALID_EXACT);
        }
    }
}

TEST_CASE("rule shapes") {
    Derivation d{"t", Logic::C2, {}};
    d.steps = {ax("p > p", "Identity", {{"p", atom("p")}}), ax("(p > p) -> ((q > q) | (p > p))", "PC"),
               rule("(q > q) | (p > p)", Rule::Detachment, {1, 0})};
    CheckResult ok = check_derivation(d);
    CAPTURE(ok.reason);
    CHECK(ok.ok);

    // detachment citing a non-implication
    Derivation bad = d;
    bad.steps[2] = rule("q", Rule::Detachment, {0, 0});
    CheckResult r = check_derivation(bad);
    CHECK_FALSE(r.ok);
    CHECK(r.bad_step == 2);

    // forward reference
    Derivation fwd = d;
    fwd.steps[2].from = {1, 2};
    CHECK(check_derivation(fwd).bad_step == 2);

    // wrong schema binding
    Derivation wrong{"t", Logic::C2, {ax("p > q", "Identity", {{"p", atom("p")}})}};
    CHECK(check_derivation(wrong).bad_step == 0);

    // not a tautology
    Derivation pc{"t", Logic::C2, {ax("p -> q", "PC")}};
    CHECK(check_derivation(pc).bad_step == 0);

    // normality: from (a & b) -> c infer ((s > a) & (s > b)) -> s > c
    Derivation nm{"t", Logic::C2, {ax("(p & q) -> p", "PC"), rule("(r > p & r > q) -> r > p", Rule::Normality, {0})}};
    CHECK(check_derivation(nm).ok);
    nm.steps[1] = rule("(r > p & r > q) -> r > q", Rule::Normality, {0});
    CHECK(check_derivation(nm).bad_step == 1);
}

TEST_CASE("the Flattening Rule needs a logic containing C2.F") {
    Derivation d = load("four");
    REQUIRE(d.logic == Logic::C2F);
    CHECK(check_derivation(d).ok);
    d.logic = Logic::C2;
    CheckResult r = check_derivation(d);
    CHECK_FALSE(r.ok);
    CHECK(r.bad_step == 3);

    // without a cited premise, q -> p must be a tautology
    Derivation cert{"t", Logic::C2F, {rule("(p > ((p & q) > r)) <-> ((p & q) > r)", Rule::FlatteningRule, {})}};
    CHECK(check_derivation(cert).ok);
    Derivation nocert{"t", Logic::C2F, {rule("(q > (p > r)) <-> (p > r)", Rule::FlatteningRule, {})}};
    CHECK_FALSE(check_derivation(nocert).ok);
}

TEST_CASE("axiom lists grow with the logic") {
    auto has = [](Logic l, const std::string& a) {
        auto v = axioms_of(l);
        return std::find(v.begin(), v.end(), a) != v.end();
    };
    CHECK(has(Logic::C2, "CEM"));
    CHECK_FALSE(has(Logic::C2, "Flattening"));
    CHECK(has(Logic::C2F, "Flattening"));
    CHECK(has(Logic::C2FS, "Sequentiality"));
    CHECK_FALSE(has(Logic::C2FS, "McKinsey"));
    CHECK(has(Logic::C2FSM, "McKinsey"));
}

TEST_CASE("tautology check treats conditionals as atoms") {
    CHECK(is_tautology(parse("(p > q) | ~(p > q)")));
    CHECK(is_tautology(parse("[]p -> []p")));
    CHECK_FALSE(is_tautology(parse("(p > q) -> (p -> q)")));
    CHECK(is_tautology(parse("~~p <-> p")));
    CHECK_FALSE(is_tautology(parse("p > p")));
}

TEST_CASE("derivation JSON round-trip") {
    for (const char* n : kNames) {
        Derivation d = load(n);
        Derivation back = derivation_from_json(derivation_to_json(d));
        REQUIRE(back.steps.size() == d.steps.size());
        for (std::size_t i = 0; i < d.steps.size(); ++i) {
            CHECK(same(back.steps[i].formula, d.steps[i].formula));
            CHECK(back.steps[i].rule == d.steps[i].rule);
            CHECK(back.steps[i].from == d.steps[i].from);
        }
    }
}
