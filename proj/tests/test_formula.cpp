#include "doctest.h"

#include "condlog/formula.hpp"
#include "condlog/schemas.hpp"

#include "support.hpp"

using namespace condlog;

namespace {

bool has_only_core(const Formula& f) {
    switch (f->kind) {
        case Kind::Atom:
        case Kind::Meta: return true;
        case Kind::Neg: return has_only_core(f->a);
        case Kind::And:
        case Kind::Cond: return has_only_core(f->a) && has_only_core(f->b);
        default: return false;
    }
}

// Independent truth-table oracle for formulas without conditionals.
bool tt(const Formula& f, const std::map<std::string, bool>& v) {
    switch (f->kind) {
        case Kind::Atom: return v.at(f->name);
        case Kind::Neg: return !tt(f->a, v);
        case Kind::And: return tt(f->a, v) && tt(f->b, v);
        case Kind::Or: return tt(f->a, v) || tt(f->b, v);
        case Kind::MatImp: return !tt(f->a, v) || tt(f->b, v);
        case Kind::MatIff: return tt(f->a, v) == tt(f->b, v);
        case Kind::Bot: return false;
        case Kind::Top: return true;
        default: throw std::logic_error("not Boolean");
    }
}

}  // namespace

TEST_CASE("parse: shapes and precedence") {
    Formula f = parse("p0 > p0");
    CHECK(f->kind == Kind::Cond);
    CHECK(same(f, cond(atom(0), atom(0))));

    CHECK(same(parse("~p & q -> r"), imp(conj(neg(atom("p")), atom("q")), atom("r"))));
    // > binds tighter than &
    CHECK(same(parse("p > (p & q > r)"), cond(atom("p"), conj(atom("p"), cond(atom("q"), atom("r"))))));
    CHECK(same(parse("p > ((p & q) > r)"), cond(atom("p"), cond(conj(atom("p"), atom("q")), atom("r")))));
    // & tighter than |
    CHECK(same(parse("p | q & r"), disj(atom("p"), conj(atom("q"), atom("r")))));
    CHECK(same(parse("[]p > <>q"), cond(box(atom("p")), dia(atom("q")))));
    CHECK(same(parse("p >> q"), scond(atom("p"), atom("q"))));
    CHECK(same(parse("#t | #f"), disj(top(), bot())));
}

TEST_CASE("parse: unicode aliases match ascii") {
    CHECK(same(parse("¬p ∧ q → r"), parse("~p & q -> r")));
    CHECK(same(parse("□p ↔ ◇q"), parse("[]p <-> <>q")));
    CHECK(same(parse("p ≫ q ∨ ⊥"), parse("p >> q | #f")));
    CHECK(same(parse("⊤"), top()));
}

TEST_CASE("parse: errors carry offsets") {
    auto offset_of = [](const std::string& s) -> long {
        try {
            (void)parse(s);
        } catch (const ParseError& e) {
            return long(e.offset);
        }
        return -1;
    };
    CHECK(offset_of("p > q > r") >= 0);
    CHECK(offset_of("p -> q -> r") >= 0);
    CHECK(offset_of("p & ") >= 0);
    CHECK(offset_of("(p") >= 0);
    CHECK(offset_of("p $ q") == 2);
    CHECK(offset_of("p > (q > r)") == -1);
}

TEST_CASE("print examples") {
    CHECK(print(cond(atom(0), atom(0))) == "p0 > p0");
    CHECK(print(box(atom(1)), Style::unicode) == "□p1");
    CHECK(print(normalize(box(atom(1)))) == "~p1 > p1");
}

TEST_CASE("normalize examples") {
    // diamond: dual of the box expansion, equal to ~(p > ~p) modulo double negation
    Formula d = normalize(dia(atom("p")));
    CHECK(same(d, neg(cond(neg(neg(atom("p"))), neg(atom("p"))))));
    CHECK(equiv_dn(dia(atom("p")), neg(cond(atom("p"), neg(atom("p"))))));
    CHECK(same(normalize(disj(atom("p"), atom("q"))), neg(conj(neg(atom("p")), neg(atom("q"))))));
    CHECK(same(normalize(bot()), conj(atom("p0"), neg(atom("p0")))));
    CHECK(same(normalize(scond(atom("p"), atom("q"))), neg(cond(atom("p"), neg(atom("q"))))));
}

TEST_CASE("modal depth and fragments") {
    CHECK(modal_depth(parse("p0 & ~p1")) == 0);
    CHECK(modal_depth(parse("p > ((p & q) > r)")) == 2);
    CHECK(modal_depth(parse("[]p")) == 1);

    CHECK(classify_fragment(parse("(p | q) > r")) == Fragment::boolean_antecedent);
    CHECK(classify_fragment(parse("(p > q) > p")) == Fragment::general);
    CHECK(classify_fragment(parse("[](p -> []p)")) == Fragment::modal);
    CHECK(classify_fragment(parse("[]p -> p")) == Fragment::modal);
    CHECK(classify_fragment(parse("p | ~q")) == Fragment::boolean);
    CHECK(is_lba(parse("[]p -> p")));
    CHECK_FALSE(is_lba(parse("(p > q) > p")));
}

TEST_CASE("instantiate examples") {
    Binding b{{"p", atom(0)}, {"q", atom(1)}, {"r", atom(2)}};
    Formula fl = instantiate(find_schema("Flattening"), b);
    CHECK(same(fl, parse("(p0 > ((p0 & p1) > p2)) <-> ((p0 & p1) > p2)")));
    CHECK(same(instantiate(find_schema("Identity"), {{"p", bot()}}), cond(bot(), bot())));
    CHECK(same(instantiate(find_schema("McKinsey"), {{"p", atom(0)}}), parse("[]<>p0 -> <>[]p0")));
    CHECK_THROWS_AS((void)instantiate(find_schema("Flattening"), {{"p", atom(0)}}), BindingError);
    CHECK(same(plain_instance(find_schema("Flattening")), fl));
}

TEST_CASE("schema library names resolve and templates round-trip") {
    for (const char* n : {"Identity", "Reciprocity", "MP", "CEM", "MOD", "K", "T", "4", "H", "Dum", "McKinsey", "M*",
                          "Flattening", "CautiousImportation", "CautiousExportation", "CrashingCautiousImportation",
                          "CrashingCautiousExportation", ">>-Flattening", "IE", "Materialism", "Transitivity",
                          "Monotonicity", "CautiousTransitivity", "CautiousMonotonicity", "CMon", "CMon>>",
                          "Distribution", "Sequentiality", "RestrictedSequentiality", "ConditionalSequentiality"}) {
        CAPTURE(n);
        const Schema& s = find_schema(n);
        CHECK(same(parse(print(s.tmpl)), s.tmpl));
        CHECK_FALSE(metas_of(s.tmpl).empty());
    }
    CHECK_THROWS_AS((void)find_schema("NoSuchSchema"), std::out_of_range);
}

TEST_CASE("property: print/parse round-trip in both styles") {
    testsupport::FormulaGen g(11, {"p", "q", "p0", "r7"});
    for (int i = 0; i < 1000; ++i) {
        Formula f = g.full(4);
        CAPTURE(print(f));
        CHECK(same(parse(print(f)), f));
        CHECK(same(parse(print(f, Style::unicode)), f));
    }
}

TEST_CASE("property: normalize is core-only, idempotent and depth-preserving") {
    testsupport::FormulaGen g(12, {"p", "q", "r"});
    for (int i = 0; i < 1000; ++i) {
        Formula f = g.full(4);
        Formula n = normalize(f);
        CAPTURE(print(f));
        CHECK(has_only_core(n));
        CHECK(same(normalize(n), n));
        CHECK(modal_depth(n) == modal_depth(f));
        CHECK(key(f) == key(n));
        if (classify_fragment(f) == Fragment::boolean) CHECK(modal_depth(f) == 0);
    }
}

TEST_CASE("property: normalize preserves truth tables of Boolean formulas") {
    testsupport::FormulaGen g(13, {"p0", "p1", "p2"});
    for (int i = 0; i < 500; ++i) {
        Formula f = g.boolean(5);
        if (i % 3 == 0) f = iff(imp(f, g.boolean(3)), disj(bot(), top()));
        Formula n = normalize(f);
        for (int m = 0; m < 8; ++m) {
            std::map<std::string, bool> v{{"p0", m & 1}, {"p1", (m >> 1) & 1}, {"p2", (m >> 2) & 1}};
            CHECK(tt(f, v) == tt(n, v));
        }
    }
}

TEST_CASE("property: L_BA closed under negation and conjunction") {
    testsupport::FormulaGen g(14, {"p", "q"});
    for (int i = 0; i < 300; ++i) {
        int b1 = 3, b2 = 3;
        Formula f = g.lba(2, b1), h = g.lba(2, b2);
        REQUIRE(is_lba(f));
        CHECK(is_lba(neg(f)));
        CHECK(is_lba(conj(f, h)));
    }
}

TEST_CASE("property: instantiate commutes with normalize") {
    testsupport::FormulaGen g(15, {"p", "q"});
    for (const auto& s : schema_library()) {
        for (int i = 0; i < 20; ++i) {
            Binding b, nb;
            for (const auto& m : metas_of(s.tmpl)) {
                Formula x = g.full(2);
                b[m] = x;
                nb[m] = normalize(x);
            }
            CAPTURE(s.name);
            CHECK(equiv_dn(normalize(instantiate(s, b)), instantiate(s, nb)));
        }
    }
}

TEST_CASE("atoms_of and double-negation comparisons") {
    CHECK(atoms_of(parse("q & (p > r)")) == std::vector<std::string>{"p", "q", "r"});
    CHECK(atoms_of(bot()) == std::vector<std::string>{"p0"});
    CHECK(equiv_dn(parse("~~p > q"), parse("p > ~~q")));
    CHECK_FALSE(same(parse("~~p"), parse("p")));
    CHECK_FALSE(equiv_dn(parse("p > q"), parse("q > p")));
}
