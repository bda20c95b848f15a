#include "doctest.h"

#include "condlog/compiled.hpp"
#include "condlog/decide.hpp"
#include "condlog/io.hpp"

#include "support.hpp"

using namespace condlog;
namespace ts = testsupport;

namespace {

Formula inst(const char* n) { return plain_instance(find_schema(n)); }

const std::vector<Logic> kAll = {Logic::C2, Logic::C2F, Logic::C2FS, Logic::C2FM, Logic::C2FSM};

bool is_sat(Status s) { return s == Status::SAT; }

}  // namespace

TEST_CASE("satisfiable examples") {
    Formula nf = neg(inst("Flattening"));
    Verdict c2 = satisfiable(nf, Logic::C2);
    REQUIRE(c2.status == Status::SAT);
    REQUIRE(c2.model);
    CHECK(replay(*c2.model, nf, true));
    CHECK(c2.model->model.frame.size() <= 4);

    CHECK(satisfiable(nf, Logic::C2F).status == Status::UNSAT_EXACT);

    Formula abcd = parse("[](p -> (~p > r)) & [](q -> (~q > r)) & (p | q) & ~(~(p | q) > r)");
    Verdict f = satisfiable(abcd, Logic::C2F);
    REQUIRE(f.status == Status::SAT);
    REQUIRE(f.model->seq);
    CHECK(length(f.model->seq) == Ordinal::omega_pow(1) + Ordinal::finite(1));
    CHECK(evaluate_seq(f.model->seq, f.model->table, abcd));
    CHECK(satisfiable(abcd, Logic::C2FS).status == Status::UNSAT_EXACT);
}

TEST_CASE("valid and countermodel examples") {
    Verdict s = valid(inst("Sequentiality"), Logic::C2FS);
    CHECK(s.status == Status::VALID_EXACT);

    Formula mck = inst("McKinsey");
    auto cm = countermodel(mck, Logic::C2FS);
    REQUIRE(cm);
    Lasso l;
    REQUIRE(cm->seq);
    CHECK(to_lasso(cm->seq, l));
    CHECK(l.cycle.size() >= 2);
    CHECK(replay(*cm, mck, false));

    SearchBudget b;
    b.bound = 5;
    b.bounded_only = true;
    Verdict dum = valid(inst("Dum"), Logic::C2FS, b);
    CHECK(dum.status == Status::VALID_WITHIN_BOUND);
    CHECK(dum.bound == 5);
    CHECK(valid(inst("Dum"), Logic::C2FS).status == Status::VALID_EXACT);

    CHECK(valid(inst("Flattening"), Logic::C2F).status == Status::VALID_EXACT);
    CHECK(valid(inst("McKinsey"), Logic::C2FM).status == Status::VALID_EXACT);
    CHECK(valid(inst("Materialism"), Logic::C2FSM).status == Status::INVALID);
}

TEST_CASE("schema tests on frame classes") {
    SchemaReport ie = test_schema(find_schema("IE"), SchemaClass::lasso, 4);
    CHECK_FALSE(ie.valid);
    REQUIRE(ie.counter);
    CHECK(replay(*ie.counter, inst("IE"), false));

    SchemaReport mat = test_schema(find_schema("Materialism"), SchemaClass::lasso, 3);
    CHECK_FALSE(mat.valid);
    REQUIRE(mat.counter);
    REQUIRE(mat.counter->seq);
    CHECK(replay(*mat.counter, inst("Materialism"), false));

    SchemaReport fl = test_schema(find_schema("Flattening"), SchemaClass::order_flat, 3);
    CHECK(fl.valid);
    CHECK(fl.frames_checked > 0);
    CHECK_FALSE(test_schema(find_schema("Flattening"), SchemaClass::order_all, 3).valid);
    CHECK(test_schema(find_schema("McKinsey"), SchemaClass::final_seq, 3).valid);
    CHECK_FALSE(test_schema(find_schema("McKinsey"), SchemaClass::lasso, 3).valid);
    CHECK(test_schema(find_schema("Sequentiality"), SchemaClass::list, 4).valid);
    CHECK_THROWS((void)parse_schema_class("bogus"));
}

TEST_CASE("the three Sequentiality schemas agree frame by frame on flat frames") {
    const std::vector<std::string> atoms{"p0", "p1", "p2"};
    std::vector<Compiled> cs;
    for (const char* n : {"Sequentiality", "RestrictedSequentiality", "ConditionalSequentiality"})
        cs.push_back(compile(neg(inst(n)), atoms));
    long flat = 0;
    for (int n = 1; n <= 3; ++n)
        for_each_labelled_frame(n, [&](const OrderFrame& fr) {
            if (!frame_properties(fr).flat) return;
            ++flat;
            std::vector<bool> v;
            for (const auto& c : cs) {
                int w;
                Valuation val;
                v.push_back(!sweep_frame_any(fr, c, &w, &val));
            }
            CHECK(v[0] == v[1]);
            CHECK(v[0] == v[2]);
        });
    CHECK(flat > 10);
}

TEST_CASE("modal fragment") {
    CHECK(decide_modal(parse("[]p -> p"), ModalSystem::KT).status == Status::VALID_EXACT);
    ModalVerdict four = decide_modal(inst("4"), ModalSystem::KT);
    CHECK(four.status == Status::INVALID);
    REQUIRE(four.kripke);
    CHECK_FALSE(evaluate_kripke(*four.kripke, inst("4"), four.kripke->designated));
    CHECK(decide_modal(inst("4"), ModalSystem::S43).status == Status::VALID_EXACT);
    CHECK(decide_modal(inst("H"), ModalSystem::S43).status == Status::VALID_EXACT);
    CHECK(decide_modal(inst("Dum"), ModalSystem::S431).status == Status::VALID_EXACT);
    CHECK(decide_modal(inst("Dum"), ModalSystem::S43).status == Status::INVALID);
    // the lasso (12)^w with p at 1 refutes McKinsey
    CHECK(decide_modal(inst("McKinsey"), ModalSystem::S431).status == Status::INVALID);
    CHECK_THROWS_AS((void)decide_modal(parse("(p > q) > p"), ModalSystem::KT), FragmentError);
}

TEST_CASE("property: witnesses replay and the logic lattice holds") {
    ts::FormulaGen g(51, {"p", "q"});
    SearchBudget b;
    b.bound = 4;
    for (int i = 0; i < 120; ++i) {
        Formula f = g.any(3);
        CAPTURE(print(f));
        std::map<Logic, Status> st;
        for (Logic l : kAll) {
            Verdict v = valid(f, l, b);
            st[l] = v.status;
            if (v.status == Status::INVALID) {
                REQUIRE(v.model);
                CHECK(replay(*v.model, f, false));
            }
        }
        auto ok = [&](Logic l) { return st[l] != Status::INVALID; };
        if (ok(Logic::C2)) CHECK(ok(Logic::C2F));
        if (ok(Logic::C2F)) {
            CHECK(ok(Logic::C2FS));
            CHECK(ok(Logic::C2FM));
        }
        if (ok(Logic::C2FS) || ok(Logic::C2FM)) CHECK(ok(Logic::C2FSM));
    }
}

TEST_CASE("property: larger bounds never lose a witness") {
    ts::FormulaGen g(52, {"p", "q"});
    for (int i = 0; i < 80; ++i) {
        Formula f = g.any(3);
        for (Logic l : {Logic::C2, Logic::C2F, Logic::C2FS}) {
            auto small = bounded_sat(f, l, 2);
            auto big = bounded_sat(f, l, 4);
            if (small) CHECK(big.has_value());
        }
    }
}

TEST_CASE("property: exact engines agree with the bounded search") {
    ts::FormulaGen g(53, {"p", "q"});
    for (int i = 0; i < 120; ++i) {
        Formula f = g.any(3);
        for (Logic l : kAll) {
            auto ex = exact_sat(f, l);
            if (!ex) continue;
            auto bs = bounded_sat(f, l, 3);
            CAPTURE(print(f));
            CAPTURE(logic_name(l));
            if (bs) CHECK(ex->sat);
            if (ex->sat) {
                REQUIRE(ex->witness);
                CHECK(replay(*ex->witness, f, true));
            }
        }
    }
}

TEST_CASE("logic names and containment") {
    for (Logic l : kAll) CHECK(parse_logic(logic_name(l)) == l);
    CHECK_THROWS((void)parse_logic("c3"));
    CHECK(extends(Logic::C2FSM, Logic::C2F));
    CHECK(extends(Logic::C2FS, Logic::C2));
    CHECK_FALSE(extends(Logic::C2FS, Logic::C2FM));
}

TEST_CASE("verdict JSON carries a replayable witness") {
    Formula nf = neg(inst("Flattening"));
    Verdict v = satisfiable(nf, Logic::C2);
    json j = verdict_to_json(v);
    CHECK(j["status"] == "SAT");
    OrderModel m = model_from_json(j["witness"]["model"]);
    CHECK(evaluate(m, nf));
}
