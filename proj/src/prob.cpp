#include "condlog/prob.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <thread>
#include <tuple>
#include <unordered_map>

namespace condlog {

Rational parse_rational(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw ProbError("bad rational '" + text + "'");
    }
}

std::string rational_str(const Rational& r) { return r.str(); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

void check_spec(const ProductSpec& spec) {
    if (spec.pi.weight.empty()) throw ProbError("empty protoworld measure");
    if (spec.pi.weight.size() > 64) throw ProbError("at most 64 protoworlds");
    Rational total = 0;
    for (const auto& [w, x] : spec.pi.weight) {
        if (x < 0) throw ProbError("negative weight for " + w);
        total += x;
    }
    if (total != 1) throw ProbError("weights sum to " + total.str() + ", not 1");
    for (const auto& [atom, ps] : spec.table.atoms)
        for (const auto& p : ps)
            if (!spec.pi.weight.count(p)) throw ProbError("atom " + atom + " names unknown protoworld " + p);
}

const char* method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::mc_seq: return "mc";
        case Method::mc_tree: return "tree";
    }
    return "?";
}

std::string ProbValue::str() const {
    if (is_exact) return rational_str(exact);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f +- %.6f", est.value, est.std_err);
    return buf;
}

bool is_zero_degree(const Formula& f) {
    switch (f->kind) {
        case Kind::Cond: return is_boolean(f->a) && is_boolean(f->b);
        case Kind::Box: return is_boolean(f->a);
        default: return false;
    }
}

bool is_bool_zd_conjunction(const Formula& f) {
    if (f->kind == Kind::And) return is_bool_zd_conjunction(f->a) && is_bool_zd_conjunction(f->b);
    return is_boolean(f) || is_zero_degree(f);
}

namespace {

// truth-functional combination of atoms and zero-degree conditionals
bool tf_of_zd(const Formula& f) {
    if (is_boolean(f)) return true;
    switch (f->kind) {
        case Kind::Neg: return tf_of_zd(f->a);
        case Kind::And:
        case Kind::Or:
        case Kind::MatImp:
        case Kind::MatIff: return tf_of_zd(f->a) && tf_of_zd(f->b);
        case Kind::Cond:
        case Kind::StrongCond: return is_boolean(f->a) && is_boolean(f->b);
        case Kind::Box:
        case Kind::Dia: return is_boolean(f->a);
        default: return false;
    }
}

}  // namespace

bool in_exact_scope(const Formula& f) {
    switch (f->kind) {
        case Kind::Atom:
        case Kind::Bot:
        case Kind::Top: return true;
        case Kind::Meta: return false;
        case Kind::Neg: return in_exact_scope(f->a);
        case Kind::Box:
        case Kind::Dia: return tf_of_zd(f->a) && in_exact_scope(f->a);
        case Kind::Cond:
        case Kind::StrongCond: return tf_of_zd(f->a) && in_exact_scope(f->b);
        default: return in_exact_scope(f->a) && in_exact_scope(f->b);
    }
}

namespace {

// Formula compiled over the protoworlds of positive mass. Ops are stored
// children first; every Cond has an index into the conditional list.
struct Prog {
    enum T { Lit, Not, And, Cond, True };
    struct Op {
        T t;
        int a = -1, b = -1;
        std::uint64_t mask = 0;  // Lit
        int ci = -1;             // Cond
        bool vacuous = false;    // Cond whose antecedent has probability 0
        bool boolean = true;     // no conditional below
    };
    std::vector<Op> ops;
    std::vector<int> conds;  // op index per conditional
    std::vector<std::string> protos;
    std::vector<Rational> weight;
    std::map<std::tuple<int, int, int, std::uint64_t>, int> index;

    int add(Op op) {
        auto k = std::make_tuple(int(op.t), op.a, op.b, op.mask);
        if (auto it = index.find(k); it != index.end()) return it->second;
        if (op.a >= 0 && !ops[op.a].boolean) op.boolean = false;
        if (op.b >= 0 && !ops[op.b].boolean) op.boolean = false;
        if (op.t == Cond) {
            op.boolean = false;
            op.ci = int(conds.size());
            conds.push_back(int(ops.size()));
        }
        ops.push_back(op);
        index.emplace(k, int(ops.size()) - 1);
        return int(ops.size()) - 1;
    }
    int lit(std::uint64_t m) { return add({Lit, -1, -1, m}); }
    int tru() { return add({True}); }
    int no(int a) { return add({Not, a}); }
    int an(int a, int b) { return add({And, a, b}); }
    int co(int a, int b) { return add({Cond, a, b}); }
};

Prog compile(const Formula& f, const ProductSpec& spec, int& root) {
    check_spec(spec);
    Prog p;
    for (const auto& [w, x] : spec.pi.weight)
        if (x > 0) {
            p.protos.push_back(w);
            p.weight.push_back(x);
        }
    std::function<int(const Formula&)> go = [&](const Formula& g) -> int {
        switch (g->kind) {
            case Kind::Atom: {
                auto it = spec.table.atoms.find(g->name);
                if (it == spec.table.atoms.end()) throw ProbError("atom " + g->name + " is not in the spec's table");
                std::uint64_t m = 0;
                for (std::size_t i = 0; i < p.protos.size(); ++i)
                    if (it->second.count(p.protos[i])) m |= std::uint64_t(1) << i;
                return p.lit(m);
            }
            case Kind::Meta: throw ProbError("schematic letter in a probability query");
            case Kind::Top: return p.tru();
            case Kind::Bot: return p.no(p.tru());
            case Kind::Neg: return p.no(go(g->a));
            case Kind::And: return p.an(go(g->a), go(g->b));
            case Kind::Or: return p.no(p.an(p.no(go(g->a)), p.no(go(g->b))));
            case Kind::MatImp: return p.no(p.an(go(g->a), p.no(go(g->b))));
            case Kind::MatIff: {
                int a = go(g->a), b = go(g->b);
                return p.an(p.no(p.an(a, p.no(b))), p.no(p.an(b, p.no(a))));
            }
            case Kind::Cond: {
                int a = go(g->a);
                return p.co(a, go(g->b));
            }
            case Kind::Box: {
                int a = go(g->a);
                return p.co(p.no(a), a);
            }
            case Kind::Dia: {
                int a = go(g->a);
                return p.no(p.co(a, p.no(a)));
            }
            case Kind::StrongCond: {
                int a = go(g->a);
                return p.no(p.co(a, p.no(go(g->b))));
            }
        }
        throw std::logic_error("unknown formula kind");
    };
    root = go(f);
    return p;
}

// values of all ops at a sequence whose head is w and whose first tail has
// conditional values vnext
void eval_ops(const Prog& p, int w, std::uint64_t vnext, std::vector<char>& val) {
    val.resize(p.ops.size());
    for (std::size_t i = 0; i < p.ops.size(); ++i) {
        const auto& op = p.ops[i];
        switch (op.t) {
            case Prog::Lit: val[i] = (op.mask >> w) & 1; break;
            case Prog::True: val[i] = 1; break;
            case Prog::Not: val[i] = !val[op.a]; break;
            case Prog::And: val[i] = val[op.a] && val[op.b]; break;
            case Prog::Cond:
                val[i] = val[op.a] ? val[op.b] : (op.vacuous ? 1 : char((vnext >> op.ci) & 1));
                break;
        }
    }
}

std::uint64_t cond_bits(const Prog& p, const std::vector<char>& val, int k) {
    std::uint64_t v = 0;
    for (int c = 0; c < k; ++c)
        if (val[p.conds[c]]) v |= std::uint64_t(1) << c;
    return v;
}

// Stationary law of the first k conditional values at a random sequence:
// mu(u) = sum_v mu(v) sum_w pi(w) [F(w, v) = u]. Unique once every
// non-vacuous antecedent has positive probability.
std::map<std::uint64_t, Rational> stationary(const Prog& p, int k) {
    if (k > 12) throw ProbError("too many conditionals for the exact engine (limit 12)");
    std::vector<char> val;
    const std::uint64_t mask = (std::uint64_t(1) << k) - 1;
    auto step = [&](int w, std::uint64_t v) {
        eval_ops(p, w, v, val);
        return cond_bits(p, val, k) & mask;
    };
    std::set<std::uint64_t> support;
    for (std::uint64_t v = 0; v <= mask; ++v)
        for (std::size_t w = 0; w < p.protos.size(); ++w) support.insert(step(int(w), v));
    for (;;) {
        std::set<std::uint64_t> next;
        for (auto v : support)
            for (std::size_t w = 0; w < p.protos.size(); ++w) next.insert(step(int(w), v));
        if (next == support) break;
        support = std::move(next);
    }
    std::vector<std::uint64_t> states(support.begin(), support.end());
    std::map<std::uint64_t, int> at;
    for (std::size_t i = 0; i < states.size(); ++i) at[states[i]] = int(i);
    const int n = int(states.size());
    // rows: (T - I) mu = 0, last row replaced by sum mu = 1
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n + 1, Rational(0)));
    for (int j = 0; j < n; ++j) {
        A[j][j] -= 1;
        for (std::size_t w = 0; w < p.protos.size(); ++w) A[at.at(step(int(w), states[j]))][j] += p.weight[w];
    }
    for (int j = 0; j <= n; ++j) A[n - 1][j] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (A[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::logic_error("stationary law is not unique");
        std::swap(A[piv], A[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rational f = A[r][col] / A[col][col];
            for (int c = col; c <= n; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::map<std::uint64_t, Rational> mu;
    for (int i = 0; i < n; ++i) {
        Rational x = A[i][n] / A[i][i];
        if (x != 0) mu[states[i]] = x;
    }
    return mu;
}

Rational prob_of(const Prog& p, const std::map<std::uint64_t, Rational>& mu, int op) {
    Rational total = 0;
    std::vector<char> val;
    for (const auto& [v, m] : mu)
        for (std::size_t w = 0; w < p.protos.size(); ++w) {
            eval_ops(p, int(w), v, val);
            if (val[op]) total += m * p.weight[w];
        }
    return total;
}

// marks conditionals whose antecedent has probability 0
void settle_vacuous(Prog& p) {
    for (std::size_t c = 0; c < p.conds.size(); ++c) {
        Prog::Op& op = p.ops[p.conds[c]];
        std::map<std::uint64_t, Rational> mu;
        if (p.ops[op.a].boolean) mu[0] = 1;
        else mu = stationary(p, int(c));
        op.vacuous = prob_of(p, mu, op.a) == 0;
    }
}

}  // namespace

Rational boolean_mass(const Formula& f, const ProductSpec& spec) {
    if (!is_boolean(f)) throw ProbError("not a Boolean formula: " + print(f));
    int root;
    Prog p = compile(f, spec, root);
    std::map<std::uint64_t, Rational> mu{{0, 1}};
    return prob_of(p, mu, root);
}

Rational exact_prob(const Formula& f, const ProductSpec& spec) {
    if (spec.shape != Shape::omega) throw ProbError("the exact engine is for omega-sequence models");
    if (!in_exact_scope(f)) throw ProbError("outside the exact fragment (use mc): " + print(f));
    int root;
    Prog p = compile(f, spec, root);
    settle_vacuous(p);
    return prob_of(p, stationary(p, int(p.conds.size())), root);
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

// one engine per sample, so results do not depend on the worker split
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t i) { return seed ^ (i * 0x9E3779B97F4A7C15ull); }

// draw-by-draw evaluation on one sampled omega-sequence
class SeqSample {
public:
    SeqSample(const Prog& p, std::discrete_distribution<int>& dist, std::uint64_t seed, std::uint64_t i, long horizon)
        : p_(p), dist_(dist), horizon_(horizon) {
        rng_.seed(sample_seed(seed, i));
    }
    bool aborted = false;

    bool eval(int op, long pos) {
        const auto& o = p_.ops[op];
        switch (o.t) {
            case Prog::Lit: return (o.mask >> at(pos)) & 1;
            case Prog::True: return true;
            case Prog::Not: return !eval(o.a, pos);
            case Prog::And: return eval(o.a, pos) && eval(o.b, pos);
            case Prog::Cond: break;
        }
        if (o.vacuous) {
            if (eval(o.a, pos)) return eval(o.b, pos);
            return true;
        }
        std::uint64_t key = std::uint64_t(pos) * p_.ops.size() + op;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool res = true;
        long k = pos;
        for (; k < pos + horizon_; ++k) {
            auto hit = memo_.find(std::uint64_t(k) * p_.ops.size() + op);
            if (hit != memo_.end()) {
                res = hit->second;
                break;
            }
            if (eval(o.a, k)) {
                res = eval(o.b, k);
                break;
            }
        }
        if (k == pos + horizon_) aborted = true;  // counted true, as if vacuous
        for (long j = pos; j < k; ++j) memo_[std::uint64_t(j) * p_.ops.size() + op] = res;
        return res;
    }

private:
    int at(long pos) {
        while (long(draws_.size()) <= pos) draws_.push_back(dist_(rng_));
        return draws_[pos];
    }
    const Prog& p_;
    std::discrete_distribution<int>& dist_;
    long horizon_;
    std::mt19937_64 rng_;
    std::vector<int> draws_;
    std::unordered_map<std::uint64_t, bool> memo_;
};

// one sampled tree, grown on demand; node 0 is the root
class TreeSample {
public:
    TreeSample(const Prog& p, std::discrete_distribution<int>& dist, std::uint64_t seed, std::uint64_t i, long horizon)
        : p_(p), dist_(dist), horizon_(horizon) {
        rng_.seed(sample_seed(seed, i));
        new_node();
    }
    bool aborted = false;

    bool eval(int op, int node) {
        const auto& o = p_.ops[op];
        switch (o.t) {
            case Prog::Lit: return (o.mask >> nodes_[node].proto) & 1;
            case Prog::True: return true;
            case Prog::Not: return !eval(o.a, node);
            case Prog::And: return eval(o.a, node) && eval(o.b, node);
            case Prog::Cond: break;
        }
        std::uint64_t key = std::uint64_t(node) * p_.ops.size() + op;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool res = true;
        if (eval(o.a, node)) {
            res = eval(o.b, node);
        } else if (!o.vacuous) {
            long n = 0;
            for (; n < horizon_; ++n) {
                int b = child(node, n);
                if (eval(o.a, b)) {
                    res = eval(o.b, b);
                    break;
                }
            }
            if (n == horizon_) aborted = true;
        }
        memo_[key] = res;
        return res;
    }

private:
    struct TNode {
        int proto;
        std::vector<int> kids;
    };
    int new_node() {
        nodes_.push_back({dist_(rng_), {}});
        return int(nodes_.size()) - 1;
    }
    int child(int node, long n) {
        while (long(nodes_[node].kids.size()) <= n) {
            int c = new_node();
            nodes_[node].kids.push_back(c);
        }
        return nodes_[node].kids[n];
    }
    const Prog& p_;
    std::discrete_distribution<int>& dist_;
    long horizon_;
    std::mt19937_64 rng_;
    std::vector<TNode> nodes_;
    std::unordered_map<std::uint64_t, bool> memo_;
};

// Evaluates the roots on each sample; counts[m] = samples whose root values
// spell the bit pattern m. Per-sample seeding keeps this schedule-independent.
struct Counts {
    std::vector<long> by_pattern;
    long aborted = 0;
};

template <class Sample>
Counts run_mc(const Prog& p, const std::vector<int>& roots, const McOptions& opt) {
    if (opt.samples <= 1) throw ProbError("need at least 2 samples");
    std::vector<double> w;
    for (const auto& x : p.weight) w.push_back(to_double(x));
    int workers = std::max(1, opt.workers);
    std::vector<Counts> part(workers, Counts{std::vector<long>(std::size_t(1) << roots.size(), 0), 0});
    auto work = [&](int id) {
        std::discrete_distribution<int> dist(w.begin(), w.end());
        for (long i = id; i < opt.samples; i += workers) {
            Sample s(p, dist, opt.seed, std::uint64_t(i), opt.horizon);
            std::size_t m = 0;
            for (std::size_t r = 0; r < roots.size(); ++r)
                if (s.eval(roots[r], 0)) m |= std::size_t(1) << r;
            ++part[id].by_pattern[m];
            if (s.aborted) ++part[id].aborted;
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> ts;
        for (int id = 0; id < workers; ++id) ts.emplace_back(work, id);
        for (auto& t : ts) t.join();
    }
    Counts total = part[0];
    for (int id = 1; id < workers; ++id) {
        for (std::size_t m = 0; m < total.by_pattern.size(); ++m) total.by_pattern[m] += part[id].by_pattern[m];
        total.aborted += part[id].aborted;
    }
    if (total.aborted * 1000 > opt.samples)
        throw ProbError("horizon exceeded on " + std::to_string(total.aborted) + " of " + std::to_string(opt.samples) +
                        " draws");
    return total;
}

Estimate proportion(long hits, long n, const McOptions& opt, long aborted) {
    Estimate e;
    e.samples = n;
    e.seed = opt.seed;
    e.aborted = aborted;
    if (n == 0) return e;
    e.value = double(hits) / double(n);
    e.std_err = n > 1 ? std::sqrt(e.value * (1 - e.value) / double(n - 1)) : 0.0;
    return e;
}

// Boolean antecedents of mass 0 are vacuous without probing
void mark_boolean_vacuous(Prog& p) {
    std::map<std::uint64_t, Rational> mu{{0, 1}};
    for (int c : p.conds) {
        auto& op = p.ops[c];
        if (p.ops[op.a].boolean) op.vacuous = prob_of(p, mu, op.a) == 0;
    }
}

template <class Sample>
Estimate mc_one(const Formula& f, const ProductSpec& spec, const McOptions& opt) {
    int root;
    Prog p = compile(f, spec, root);
    mark_boolean_vacuous(p);
    Counts c = run_mc<Sample>(p, {root}, opt);
    return proportion(c.by_pattern[1], opt.samples, opt, c.aborted);
}

template <class Sample>
Estimate mc_conditional(const Formula& f, const Formula& g, const ProductSpec& spec, const McOptions& opt) {
    int root;
    Prog p = compile(conj(f, g), spec, root);
    mark_boolean_vacuous(p);
    int fg = root, gi = p.ops[root].b;
    Counts c = run_mc<Sample>(p, {fg, gi}, opt);
    long n_g = c.by_pattern[2] + c.by_pattern[3];
    if (n_g == 0) throw ProbError("conditioning event never sampled");
    return proportion(c.by_pattern[3], n_g, opt, c.aborted);
}

}  // namespace

Estimate mc_prob_seq(const Formula& f, const ProductSpec& spec, const McOptions& opt) {
    return mc_one<SeqSample>(f, spec, opt);
}

Estimate mc_prob_tree(const Formula& f, const ProductSpec& spec, const McOptions& opt) {
    return mc_one<TreeSample>(f, spec, opt);
}

ProbValue conditional_prob(const Formula& f, const Formula& g, const ProductSpec& spec, Method m,
                           const McOptions& opt) {
    ProbValue out;
    switch (m) {
        case Method::exact: {
            Rational pg = exact_prob(g, spec);
            if (pg == 0) throw ProbError("conditioning on a probability-0 event");
            out.is_exact = true;
            out.exact = exact_prob(conj(f, g), spec) / pg;
            break;
        }
        case Method::mc_seq: out.est = mc_conditional<SeqSample>(f, g, spec, opt); break;
        case Method::mc_tree: out.est = mc_conditional<TreeSample>(f, g, spec, opt); break;
    }
    return out;
}

// ---------------------------------------------------------------- report

namespace {

bool agree(const ProbValue& a, const ProbValue& b) {
    if (a.is_exact && b.is_exact) return a.exact == b.exact;
    double se = std::hypot(a.is_exact ? 0.0 : a.est.std_err, b.is_exact ? 0.0 : b.est.std_err);
    return std::fabs(a.value() - b.value()) <= 4 * se + 1e-12;
}

ProbValue exact_value(const Rational& r) {
    ProbValue v;
    v.is_exact = true;
    v.exact = r;
    return v;
}

}  // namespace

std::vector<FactLine> stalnaker_report(const Formula& p, const Formula& q, const Formula& r, const ProductSpec& spec,
                                       const McOptions& opt) {
    check_spec(spec);
    std::vector<FactLine> out;
    const bool omega = spec.shape == Shape::omega;
    const Formula pq = cond(p, q);

    // both sides on sequences, exact where in scope
    auto seq_cond = [&](const Formula& f, const Formula& g) {
        if (in_exact_scope(f) && in_exact_scope(g)) return conditional_prob(f, g, spec, Method::exact, opt);
        return conditional_prob(f, g, spec, Method::mc_seq, opt);
    };

    {
        FactLine l;
        l.fact = "sequence: P(p>q) = P(q|p)";
        l.lhs_expr = "P(" + print(pq) + ")";
        l.rhs_expr = "P(" + print(q) + " | " + print(p) + ")";
        bool shape_ok = (is_boolean(p) && is_boolean(q)) || (is_boolean(p) && is_zero_degree(q)) ||
                        (is_zero_degree(p) && is_boolean(q));
        if (!omega) l.reason = "side condition unmet: not an omega-sequence model";
        else if (!shape_ok) l.reason = "side condition unmet: p, q must be Boolean, or one Boolean and one zero-degree";
        else if (exact_prob(p, spec) == 0) l.reason = "side condition unmet: P(p) = 0";
        else l.applicable = true;
        if (l.applicable) {
            l.lhs = seq_cond(pq, top());
            l.rhs = seq_cond(q, p);
            l.agree = agree(l.lhs, l.rhs);
        }
        out.push_back(l);
    }
    {
        FactLine l;
        l.fact = "sequence, background r: P(p>q | r) = P(q|p)";
        l.lhs_expr = "P(" + print(pq) + " | " + print(r) + ")";
        l.rhs_expr = "P(" + print(q) + " | " + print(p) + ")";
        if (!omega) l.reason = "side condition unmet: not an omega-sequence model";
        else if (!is_bool_zd_conjunction(p) || !is_bool_zd_conjunction(r))
            l.reason = "side condition unmet: p, r must be conjunctions of Booleans and zero-degree conditionals";
        else if (exact_prob(p, spec) == 0) l.reason = "side condition unmet: P(p) = 0";
        else if (conditional_prob(r, p, spec, Method::exact).exact != 1) l.reason = "side condition unmet: P(r|p) < 1";
        else l.applicable = true;
        if (l.applicable) {
            l.lhs = seq_cond(pq, r);
            l.rhs = seq_cond(q, p);
            l.agree = agree(l.lhs, l.rhs);
        }
        out.push_back(l);
    }
    {
        FactLine l;
        l.fact = "tree, background r: P(p>q | r) = P(q|p)";
        l.lhs_expr = "P(" + print(pq) + " | " + print(r) + ")";
        l.rhs_expr = "P(" + print(q) + " | " + print(p) + ")";
        if (omega) {
            l.reason = "side condition unmet: not a tree model";
        } else if (!is_boolean(p) || !is_boolean(r)) {
            l.reason = "side condition unmet: p and r must be Boolean; tree models may diverge here";
        } else {
            Rational mp = boolean_mass(p, spec);
            if (mp == 0) l.reason = "side condition unmet: P(p) = 0";
            else if (boolean_mass(conj(r, p), spec) != mp) l.reason = "side condition unmet: P(r|p) < 1";
            else l.applicable = true;
            if (l.applicable) {
                l.lhs = conditional_prob(pq, r, spec, Method::mc_tree, opt);
                if (is_boolean(q)) l.rhs = exact_value(boolean_mass(conj(q, p), spec) / mp);
                else l.rhs = conditional_prob(q, p, spec, Method::mc_tree, opt);
                l.agree = agree(l.lhs, l.rhs);
            }
        }
        out.push_back(l);
    }
    return out;
}

}  // namespace condlog
