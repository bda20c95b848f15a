#include "doctest.h"

#include <random>

#include "condlog/io.hpp"
#include "condlog/prob.hpp"

#include "support.hpp"

using namespace condlog;
namespace ts = testsupport;

namespace {

ProductSpec load(const char* name) { return prob_spec_from_json(read_json_file(ts::data(std::string("prob/") + name))); }

Rational R(long a, long b) { return Rational(a) / b; }

// Four protoworlds over p, q with the given weights.
ProductSpec pq_spec(const std::vector<Rational>& w, Shape shape = Shape::omega) {
    ProductSpec s;
    const char* names[] = {"pq", "p~q", "~pq", "~p~q"};
    for (int i = 0; i < 4; ++i) s.pi.weight[names[i]] = w[std::size_t(i)];
    s.table.atoms["p"] = {"pq", "p~q"};
    s.table.atoms["q"] = {"pq", "~pq"};
    s.shape = shape;
    return s;
}

std::vector<Rational> random_weights(std::mt19937_64& rng) {
    std::vector<long> raw(4);
    long tot = 0;
    for (auto& x : raw) tot += x = 1 + long(rng() % 9);
    std::vector<Rational> w;
    for (long x : raw) w.push_back(R(x, tot));
    return w;
}

// Truth of a Boolean formula at a protoworld, from the table alone.
bool bool_at(const Formula& f, const ProductSpec& s, const std::string& w) {
    switch (f->kind) {
        case Kind::Atom: return s.table.atoms.count(f->name) && s.table.atoms.at(f->name).count(w);
        case Kind::Neg: return !bool_at(f->a, s, w);
        case Kind::And: return bool_at(f->a, s, w) && bool_at(f->b, s, w);
        default: throw std::logic_error("not Boolean after normalize");
    }
}

Rational mass(const Formula& f, const ProductSpec& s) {
    Formula n = normalize(f);
    Rational m = 0;
    for (const auto& [w, x] : s.pi.weight)
        if (bool_at(n, s, w)) m += x;
    return m;
}

// Three-valued evaluation on a finite prefix: 1 true, 0 false, -1 unsettled.
struct Prefix {
    const ProductSpec& s;
    std::vector<std::string> seq;

    int eval(const Formula& f, std::size_t i) const {
        switch (f->kind) {
            case Kind::Atom: return bool_at(f, s, seq[i]);
            case Kind::Neg: {
                int a = eval(f->a, i);
                return a < 0 ? -1 : 1 - a;
            }
            case Kind::And: {
                int a = eval(f->a, i), b = eval(f->b, i);
                if (a == 0 || b == 0) return 0;
                return a < 0 || b < 0 ? -1 : 1;
            }
            case Kind::Cond: {
                if (mass(f->a, s) == 0) return 1;
                for (std::size_t j = i; j < seq.size(); ++j)
                    if (bool_at(f->a, s, seq[j])) return eval(f->b, j);
                return -1;
            }
            default: throw std::logic_error("unexpected kind");
        }
    }
};

// Lower and upper bounds on P(f) from all prefixes of length len.
std::pair<double, double> prefix_bounds(const Formula& f, const ProductSpec& s, int len) {
    Formula n = normalize(f);
    std::vector<std::string> names;
    std::vector<double> w;
    for (const auto& [k, x] : s.pi.weight) {
        names.push_back(k);
        w.push_back(to_double(x));
    }
    double lo = 0, und = 0;
    std::vector<std::size_t> idx(std::size_t(len), 0);
    Prefix pre{s, std::vector<std::string>(std::size_t(len))};
    while (true) {
        double p = 1;
        for (int i = 0; i < len; ++i) {
            pre.seq[std::size_t(i)] = names[idx[std::size_t(i)]];
            p *= w[idx[std::size_t(i)]];
        }
        int v = pre.eval(n, 0);
        if (v == 1) lo += p;
        else if (v < 0) und += p;
        int k = 0;
        while (k < len && ++idx[std::size_t(k)] == names.size()) idx[std::size_t(k++)] = 0;
        if (k == len) break;
    }
    return {lo, lo + und};
}

}  // namespace

TEST_CASE("exact examples") {
    ProductSpec pi = load("pi.json");
    CHECK(exact_prob(parse("p0 > p1"), pi) == R(2, 5));
    CHECK(exact_prob(parse("p > q"), pi) == R(2, 5));
    CHECK(exact_prob(parse("p > p"), pi) == 1);
    CHECK(exact_prob(parse("(p > q) > p"), pi) == R(1, 2));
    CHECK(exact_prob(bot(), pi) == 0);
    CHECK(rational_str(exact_prob(parse("p > q"), pi)) == "2/5");
    CHECK(in_exact_scope(parse("(p > q) > p")));
    CHECK_FALSE(in_exact_scope(parse("((p > q) > p) > q")));
    CHECK_THROWS_AS((void)exact_prob(parse("((p > q) > p) > q"), pi), ProbError);
}

TEST_CASE("spec validation and rationals") {
    CHECK(parse_rational("3/10") == R(3, 10));
    CHECK(parse_rational("1") == 1);
    CHECK(rational_str(R(6, 4)) == "3/2");
    CHECK_THROWS((void)parse_rational("x/2"));
    CHECK_NOTHROW(check_spec(load("pi.json")));
    CHECK_NOTHROW(check_spec(load("tree.json")));
    CHECK_THROWS_AS(check_spec(pq_spec({R(1, 2), R(1, 2), R(1, 2), 0})), ProbError);
    CHECK_THROWS_AS(check_spec(pq_spec({R(3, 2), R(-1, 2), 0, 0})), ProbError);
}

TEST_CASE("property: exact engine lies within finite-prefix bounds") {
    ProductSpec pi = load("pi.json");
    ts::FormulaGen g(61, {"p", "q"});
    double gap = 0;
    for (int i = 0; i < 120; ++i) {
        int budget = 3;
        Formula f = g.lba(2, budget);
        auto [lo, hi] = prefix_bounds(f, pi, 6);
        double ex = to_double(exact_prob(f, pi));
        CAPTURE(print(f));
        CHECK(ex >= lo - 1e-12);
        CHECK(ex <= hi + 1e-12);
        gap = std::max(gap, hi - lo);
    }
    CHECK(gap < 0.5);
}

TEST_CASE("property: van Fraassen identity holds as a rational equality") {
    std::mt19937_64 rng(62);
    ts::FormulaGen g(63, {"p", "q"});
    for (int i = 0; i < 60; ++i) {
        ProductSpec s = pq_spec(random_weights(rng));
        Formula a = g.boolean(2), b = g.boolean(2);
        Rational ma = mass(a, s);
        if (ma == 0) continue;
        CAPTURE(print(cond(a, b)));
        CHECK(exact_prob(cond(a, b), s) == mass(conj(a, b), s) / ma);
        // the nested closed form: P((p>q)>p) = pi(p)
        CHECK(exact_prob(parse("(p > q) > p"), s) == mass(atom("p"), s));
    }
}

TEST_CASE("property: normalization and monotonicity") {
    std::mt19937_64 rng(64);
    ts::FormulaGen g(65, {"p", "q"});
    for (int i = 0; i < 100; ++i) {
        ProductSpec s = pq_spec(random_weights(rng));
        int b1 = 2, b2 = 2;
        Formula f = g.lba(2, b1), h = g.lba(2, b2);
        Rational pf = exact_prob(f, s), ph = exact_prob(h, s);
        CAPTURE(print(f));
        CHECK(pf + exact_prob(neg(f), s) == 1);
        CHECK(pf >= 0);
        CHECK(pf <= 1);
        Rational both = exact_prob(conj(f, h), s);
        CHECK(both <= pf);
        CHECK(both <= ph);
    }
}

TEST_CASE("Monte Carlo on sequences") {
    ProductSpec pi = load("pi.json");
    McOptions o;
    o.samples = 40000;
    o.seed = 9;
    Estimate e = mc_prob_seq(parse("p > q"), pi, o);
    CHECK(e.samples == 40000);
    CHECK(e.seed == 9);
    CHECK(std::abs(e.value - 0.4) <= 4 * e.std_err);

    Estimate z = mc_prob_seq(bot(), pi, o);
    CHECK(z.value == 0);
    CHECK(z.std_err == 0);

    Estimate nest = mc_prob_seq(parse("(p > q) > p"), pi, o);
    CHECK(std::abs(nest.value - 0.5) <= 4 * nest.std_err);

    // formulas outside the exact scope still run
    Estimate deep = mc_prob_seq(parse("((p > q) > p) > q"), pi, o);
    CHECK(deep.value > 0);
    CHECK(deep.value < 1);
    CHECK(deep.aborted == 0);
}

TEST_CASE("seed determinism across worker counts") {
    ProductSpec pi = load("pi.json");
    ProductSpec tr = load("tree.json");
    McOptions o;
    o.samples = 6000;
    o.seed = 1234;
    Estimate a = mc_prob_seq(parse("(p > q) > p"), pi, o);
    Estimate t = mc_prob_tree(parse("(p > q) > p"), tr, o);
    o.workers = 3;
    Estimate b = mc_prob_seq(parse("(p > q) > p"), pi, o);
    Estimate u = mc_prob_tree(parse("(p > q) > p"), tr, o);
    CHECK(a.value == b.value);
    CHECK(a.std_err == b.std_err);
    CHECK(t.value == u.value);
    o.seed = 1235;
    CHECK(mc_prob_seq(parse("(p > q) > p"), pi, o).value != a.value);
}

TEST_CASE("Monte Carlo on trees") {
    ProductSpec tr = load("tree.json");
    McOptions o;
    o.samples = 40000;
    o.seed = 5;
    Estimate e = mc_prob_tree(parse("p > q"), tr, o);
    CHECK(std::abs(e.value - 0.2) <= 4 * e.std_err);  // P(q|p) = 0.1 / 0.5
    Estimate nest = mc_prob_tree(parse("(p > q) > p"), tr, o);
    CHECK(nest.value < 0.5 - 5 * nest.std_err);
}

TEST_CASE("conditional probabilities") {
    ProductSpec pi = load("pi.json");
    Formula pq = parse("p > q");
    // background entailed by the antecedent leaves P(p>q) unchanged
    ProbValue v = conditional_prob(pq, parse("p | q"), pi, Method::exact);
    REQUIRE(v.is_exact);
    CHECK(v.exact == R(2, 5));
    CHECK(conditional_prob(pq, top(), pi, Method::exact).exact == exact_prob(pq, pi));
    CHECK(conditional_prob(atom("q"), atom("p"), pi, Method::exact).exact == R(2, 5));
    CHECK_THROWS_AS((void)conditional_prob(pq, parse("p & ~p"), pi, Method::exact), ProbError);

    McOptions o;
    o.samples = 40000;
    ProbValue m = conditional_prob(pq, parse("p | q"), pi, Method::mc_seq, o);
    CHECK_FALSE(m.is_exact);
    CHECK(std::abs(m.value() - 0.4) <= 4 * m.est.std_err + 1e-3);
    CHECK(std::string(method_name(Method::mc_tree)).size() > 0);
}

TEST_CASE("fact report") {
    ProductSpec pi = load("pi.json");
    McOptions o;
    o.samples = 20000;
    auto lines = stalnaker_report(atom("p"), atom("q"), top(), pi, o);
    REQUIRE_FALSE(lines.empty());
    bool seen = false;
    for (const auto& l : lines) {
        CAPTURE(l.fact);
        if (!l.applicable) {
            CHECK_FALSE(l.reason.empty());
            continue;
        }
        CHECK(l.agree);
        if (l.fact == "sequence: P(p>q) = P(q|p)") {
            seen = true;
            REQUIRE(l.lhs.is_exact);
            CHECK(l.lhs.exact == l.rhs.exact);
        }
    }
    CHECK(seen);

    // a zero-degree antecedent with a Boolean consequent is covered
    for (const auto& l : stalnaker_report(parse("p > q"), atom("p"), top(), pi, o))
        if (l.fact == "sequence: P(p>q) = P(q|p)") {
            CHECK(l.applicable);
            CHECK(l.agree);
        }
    // a first-degree antecedent is not
    for (const auto& l : stalnaker_report(parse("(p > q) > q"), atom("p"), top(), pi, o))
        if (l.fact == "sequence: P(p>q) = P(q|p)") CHECK_FALSE(l.applicable);
    CHECK(is_zero_degree(parse("p > q")));
    CHECK_FALSE(is_zero_degree(parse("(p > q) > q")));
    CHECK(is_bool_zd_conjunction(parse("p & (p > q)")));
}

TEST_CASE("spec JSON round-trip") {
    ProductSpec pi = load("pi.json");
    ProductSpec back = prob_spec_from_json(prob_spec_to_json(pi));
    CHECK(back.pi.weight == pi.pi.weight);
    CHECK(back.table.atoms == pi.table.atoms);
    CHECK(back.shape == pi.shape);
}
