#include "condlog/statedesc.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>

#include "condlog/detail/closure.hpp"

namespace condlog {

bool is_bot(const Formula& f) {
    if (f->kind == Kind::Bot) return true;
    return f->kind == Kind::And && same(f, conj(atom(0), neg(atom(0))));
}

Formula make_sentence(const std::vector<Formula>& tau) {
    Formula out = top();
    std::vector<Formula> seen;
    for (const Formula& x : tau) {
        Formula ante = neg(disj_all(seen));
        out = conj(out, is_bot(x) ? cond(ante, x) : scond(ante, x));
        seen.push_back(x);
    }
    return out;
}

// ---------------------------------------------------------------- DescSpace

DescSpace::DescSpace(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DescError("state descriptions need at least one atom");
    if (atoms_.size() > 4) throw DescError("state descriptions are limited to 4 atoms");
}

DescId DescSpace::intern(Desc d, std::vector<int> key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    DescId id = DescId(descs_.size());
    descs_.push_back(std::move(d));
    index_.emplace(std::move(key), id);
    return id;
}

DescId DescSpace::label(unsigned mask) {
    if (mask >= label_count()) throw DescError("label outside the atom set");
    Desc d;
    d.label = mask;
    return intern(std::move(d), {0, int(mask)});
}

DescId DescSpace::list(const std::vector<DescId>& items) {
    if (items.empty()) throw DescError("a state description needs a non-empty list");
    std::vector<int> key{depth(items[0]) + 1};
    for (std::size_t i = 0; i < items.size(); ++i) {
        DescId x = items[i];
        if (x == kBot) throw DescError("Bot inside a description list");
        if (depth(x) != key[0] - 1) throw DescError("description list mixes depths");
        for (std::size_t k = 0; k < i; ++k)
            if (items[k] == x) throw DescError("description list repeats " + name(x));
        key.push_back(x);
    }
    Desc d;
    d.depth = key[0];
    d.items = items;
    return intern(std::move(d), std::move(key));
}

unsigned DescSpace::head(DescId d) const {
    while (depth(d) > 0) d = at(d).items[0];
    return at(d).label;
}

std::string DescSpace::name(DescId d) const {
    if (d == kBot) return "#f";
    const Desc& x = at(d);
    if (x.depth == 0) {
        std::string s;
        for (std::size_t i = 0; i < atoms_.size(); ++i) s += ((x.label >> i) & 1u ? "" : "~") + atoms_[i];
        return s;
    }
    std::string s = "[";
    for (std::size_t i = 0; i < x.items.size(); ++i) s += (i ? "/" : "") + name(x.items[i]);
    return s + "]";
}

DescId DescSpace::parse_name(const std::string& text) {
    std::size_t p = 0;
    std::function<DescId()> item = [&]() -> DescId {
        if (text.compare(p, 2, "#f") == 0) {
            p += 2;
            return kBot;
        }
        if (p < text.size() && text[p] == '[') {
            ++p;
            std::vector<DescId> xs{item()};
            while (p < text.size() && text[p] == '/') {
                ++p;
                xs.push_back(item());
            }
            if (p >= text.size() || text[p] != ']') throw DescError("expected ']' at " + std::to_string(p));
            ++p;
            return list(xs);
        }
        // literals, each atom exactly once; longest atom name wins
        unsigned mask = 0, seen = 0;
        while (p < text.size() && text[p] != '/' && text[p] != ']') {
            bool negated = text[p] == '~';
            if (negated) ++p;
            int best = -1;
            for (std::size_t i = 0; i < atoms_.size(); ++i)
                if (text.compare(p, atoms_[i].size(), atoms_[i]) == 0 &&
                    (best < 0 || atoms_[i].size() > atoms_[best].size()))
                    best = int(i);
            if (best < 0) throw DescError("unknown atom at " + std::to_string(p) + " in '" + text + "'");
            if ((seen >> best) & 1u) throw DescError("atom " + atoms_[best] + " repeated in a label");
            seen |= 1u << best;
            if (!negated) mask |= 1u << best;
            p += atoms_[best].size();
        }
        if (seen != label_count() - 1) throw DescError("a label must give every atom a literal: '" + text + "'");
        return label(mask);
    };
    DescId d = item();
    if (p != text.size()) throw DescError("trailing text in description '" + text + "'");
    return d;
}

Formula DescSpace::sentence(DescId d) const {
    if (d == kBot) return bot();
    if (sentences_.size() <= std::size_t(d)) sentences_.resize(descs_.size());
    if (sentences_[d]) return sentences_[d];
    const Desc& x = at(d);
    Formula f;
    if (x.depth == 0) {
        std::vector<Formula> lits;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            Formula a = atom(atoms_[i]);
            lits.push_back((x.label >> i) & 1u ? a : neg(a));
        }
        f = conj_all(lits);
    } else {
        std::vector<Formula> parts;
        for (DescId y : x.items) parts.push_back(sentence(y));
        parts.push_back(bot());
        f = make_sentence(parts);
    }
    sentences_[d] = f;
    return f;
}

bool DescSpace::less(DescId a, DescId b) const {
    if (a == b) return false;
    if (a == kBot) return false;
    if (b == kBot) return true;
    const Desc &x = at(a), &y = at(b);
    if (x.depth != y.depth) return x.depth < y.depth;
    if (x.depth == 0) {
        // positive literals first, atom by atom
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            bool u = (x.label >> i) & 1u, v = (y.label >> i) & 1u;
            if (u != v) return u;
        }
        return false;
    }
    if (x.items.size() != y.items.size()) return x.items.size() < y.items.size();
    for (std::size_t i = 0; i < x.items.size(); ++i)
        if (x.items[i] != y.items[i]) return less(x.items[i], y.items[i]);
    return false;
}

// ---------------------------------------------------------------- depth-2 algebra

namespace {

// Values of sequences over k labels, for computing depth-2 descriptions.
// p0 is the first-occurrence list of the sequence's labels. p1[c] is the
// first-occurrence list of the depth-1 descriptions of the tails starting
// inside the sequence, when it is followed by a continuation whose
// first-occurrence label list is c. Depth-1 descriptions and continuations
// share one index space (first-occurrence label lists).
class Level2Engine {
public:
    explicit Level2Engine(int k) : k_(k) {
        std::vector<std::uint8_t> cur;
        std::vector<char> used(k, 0);
        std::function<void()> gen = [&] {
            fo_id_.emplace(cur, int(fos_.size()));
            fos_.push_back(cur);
            for (int x = 0; x < k_; ++x)
                if (!used[x]) {
                    used[x] = 1;
                    cur.push_back(std::uint8_t(x));
                    gen();
                    cur.pop_back();
                    used[x] = 0;
                }
        };
        gen();
        int n = int(fos_.size());
        foc_.assign(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) foc_[a][b] = fo_id_.at(fo_merge(fos_[a], fos_[b]));
    }

    struct Overflow {};

    int conts() const { return int(fos_.size()); }
    const std::vector<std::uint8_t>& fo(int id) const { return fos_[id]; }
    int empty_cont() const { return 0; }

    int element(int x, SeqExpr w) {
        int p0 = fo_id_.at({std::uint8_t(x)});
        std::vector<int> p1(conts());
        for (int c = 0; c < conts(); ++c) p1[c] = l2_id({foc_[p0][c]});
        return intern(p0, std::move(p1), std::move(w));
    }

    int concat(int a, int b) {
        auto key = std::make_pair(a, b);
        if (auto it = cat_memo_.find(key); it != cat_memo_.end()) return it->second;
        const auto& x = vals_[a];
        const auto& y = vals_[b];
        int p0 = foc_[x.first][y.first];
        std::vector<int> p1(conts());
        for (int c = 0; c < conts(); ++c) p1[c] = l2_cat(x.second[foc_[y.first][c]], y.second[c]);
        int r = intern(p0, std::move(p1), condlog::concat(wit_[a], wit_[b]));
        cat_memo_.emplace(key, r);
        return r;
    }

    int omega(int a) {
        const auto& x = vals_[a];
        std::vector<int> p1(conts());
        for (int c = 0; c < conts(); ++c) p1[c] = x.second[foc_[x.first][c]];
        return intern(x.first, std::move(p1), omega_rep(wit_[a]));
    }

    // root description: the depth-1 descriptions of all tails, continuation empty
    const std::vector<int>& root_list(int v) const { return l2s_[vals_[v].second[empty_cont()]]; }
    const SeqExpr& witness(int v) const { return wit_[v]; }

private:
    static std::vector<std::uint8_t> fo_merge(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
        std::vector<std::uint8_t> out;
        for (auto* part : {&a, &b})
            for (auto x : *part)
                if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        return out;
    }

    int l2_id(std::vector<int> l) {
        auto it = l2_index_.find(l);
        if (it != l2_index_.end()) return it->second;
        int id = int(l2s_.size());
        l2s_.push_back(l);
        l2_index_.emplace(std::move(l), id);
        return id;
    }

    int l2_cat(int a, int b) {
        auto key = std::make_pair(a, b);
        if (auto it = l2_cat_memo_.find(key); it != l2_cat_memo_.end()) return it->second;
        std::vector<int> out = l2s_[a];
        for (int x : l2s_[b])
            if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        int r = l2_id(std::move(out));
        l2_cat_memo_.emplace(key, r);
        return r;
    }

    int intern(int p0, std::vector<int> p1, SeqExpr w) {
        std::vector<int> key = p1;
        key.push_back(p0);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        if (vals_.size() >= kMaxValues) throw Overflow{};
        int id = int(vals_.size());
        vals_.emplace_back(p0, std::move(p1));
        wit_.push_back(std::move(w));
        index_.emplace(std::move(key), id);
        return id;
    }

    static constexpr std::size_t kMaxValues = 150000;
    int k_;
    std::vector<std::vector<std::uint8_t>> fos_;
    std::map<std::vector<std::uint8_t>, int> fo_id_;
    std::vector<std::vector<int>> foc_;
    std::vector<std::vector<int>> l2s_;
    std::map<std::vector<int>, int> l2_index_;
    std::map<std::pair<int, int>, int> l2_cat_memo_;
    std::map<std::pair<int, int>, int> cat_memo_;
    std::vector<std::pair<int, std::vector<int>>> vals_;
    std::vector<SeqExpr> wit_;
    std::map<std::vector<int>, int> index_;
};

}  // namespace

struct DescOracle::Level2 {
    std::map<std::vector<DescId>, SeqExpr> members;
    std::map<std::vector<DescId>, SeqExpr> prefixes;  // every non-empty prefix, with a witness
};

DescOracle::DescOracle(DescSpace& sp, Logic logic) : sp_(sp), logic_(logic) {}
DescOracle::~DescOracle() = default;

const std::map<std::vector<DescId>, SeqExpr>& DescOracle::level2(std::vector<unsigned> labels) {
    if (logic_ == Logic::C2) throw DescError("the depth-2 algebra is for the sequence logics");
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    auto& slot = cache_[labels];
    if (slot) return slot->members;
    Level2Engine e(int(labels.size()));
    std::vector<DescId> lab_ids;
    std::vector<int> elems;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        lab_ids.push_back(sp_.label(labels[i]));
        elems.push_back(e.element(int(i), elem(sp_.name(lab_ids.back()))));
    }
    std::vector<int> roots;
    try {
        roots = detail::class_roots(e, elems, logic_);
    } catch (const Level2Engine::Overflow&) {
        throw DescError("depth-2 description algebra exceeded its value cap");
    }
    std::vector<DescId> fo_desc(e.conts(), kBot);
    for (int c = 1; c < e.conts(); ++c) {
        std::vector<DescId> xs;
        for (auto x : e.fo(c)) xs.push_back(lab_ids[x]);
        fo_desc[c] = sp_.list(xs);
    }
    auto out = std::make_unique<Level2>();
    for (int r : roots) {
        std::vector<DescId> l;
        for (int c : e.root_list(r)) l.push_back(fo_desc[c]);
        out->members.emplace(l, e.witness(r));
        for (std::size_t n = 1; n <= l.size(); ++n) out->prefixes.emplace(std::vector<DescId>(l.begin(), l.begin() + n), e.witness(r));
    }
    slot = std::move(out);
    return slot->members;
}

const DescOracle::Level2& DescOracle::level2_for(const std::vector<DescId>& tau) {
    std::vector<unsigned> labels;
    for (DescId x : sp_.at(tau[0]).items) labels.push_back(sp_.at(x).label);
    std::sort(labels.begin(), labels.end());
    (void)level2(labels);
    return *cache_.at(labels);
}

namespace {

// number of depth-1 descriptions with a given head over n labels
long lists_with_head(unsigned n) {
    long total = 0, term = 1;
    for (unsigned m = 0; m < n; ++m) {
        total += term;
        term *= long(n - 1 - m);
    }
    return total;
}

}  // namespace

bool DescOracle::c2_orderly(const std::vector<DescId>& tau) const {
    bool closed = tau.back() == kBot;
    std::size_t n = tau.size() - (closed ? 1 : 0);
    std::vector<DescId> heads;
    std::map<DescId, long> used;
    for (std::size_t i = 0; i < n; ++i) {
        DescId h = sp_.at(tau[i]).items[0];
        ++used[h];
        if (std::find(heads.begin(), heads.end(), h) == heads.end()) heads.push_back(h);
    }
    const auto& first = sp_.at(tau[0]).items;
    if (closed) return heads == first;
    if (heads.size() > first.size() || !std::equal(heads.begin(), heads.end(), first.begin())) return false;
    // the remaining heads of tau[0] each need an unused description to extend with
    for (std::size_t i = heads.size(); i < first.size(); ++i)
        if (used[first[i]] >= lists_with_head(sp_.label_count())) return false;
    return true;
}

bool DescOracle::orderly(const std::vector<DescId>& tau) {
    if (tau.empty() || tau[0] == kBot) return false;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (tau[i] == kBot) {
            if (i + 1 != tau.size()) return false;
            continue;
        }
        if (sp_.depth(tau[i]) != sp_.depth(tau[0])) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (tau[k] == tau[i]) return false;
    }
    int d = sp_.depth(tau[0]);
    if (d == 0) return true;
    if (d > 1) throw DescError("orderliness is computed for lists of depth-0 and depth-1 descriptions");
    if (auto it = memo_.find(tau); it != memo_.end()) return it->second;
    bool r;
    if (logic_ == Logic::C2) {
        r = c2_orderly(tau);
    } else {
        const Level2& l2 = level2_for(tau);
        if (tau.back() == kBot)
            r = l2.members.count(std::vector<DescId>(tau.begin(), tau.end() - 1)) > 0;
        else
            r = l2.prefixes.count(tau) > 0;
    }
    memo_.emplace(tau, r);
    return r;
}

std::optional<SeqExpr> DescOracle::witness(const std::vector<DescId>& tau) {
    if (logic_ == Logic::C2 || !orderly(tau)) return std::nullopt;
    if (sp_.depth(tau[0]) == 0) {
        std::vector<std::string> names;
        for (DescId x : tau)
            if (x != kBot) names.push_back(sp_.name(x));
        if (logic_ == Logic::C2FS) return lasso_expr(omega_padding(names));
        return list_expr(names);
    }
    const Level2& l2 = level2_for(tau);
    if (tau.back() == kBot) return l2.members.at(std::vector<DescId>(tau.begin(), tau.end() - 1));
    return l2.prefixes.at(tau);
}

// ---------------------------------------------------------------- Y sets

std::vector<DescId> state_descriptions(DescOracle& o, int n) {
    DescSpace& sp = o.space();
    const unsigned N = sp.label_count();
    std::vector<DescId> out;
    if (n < 0) throw DescError("negative depth");
    if (n == 0) {
        for (unsigned m = 0; m < N; ++m) out.push_back(sp.label(m));
    } else if (n == 1) {
        if (N > 8) throw DescError("depth-1 descriptions are limited to 3 atoms");
        std::vector<DescId> labels;
        for (unsigned m = 0; m < N; ++m) labels.push_back(sp.label(m));
        std::vector<DescId> cur;
        std::function<void()> gen = [&] {
            if (!cur.empty()) out.push_back(sp.list(cur));
            for (DescId x : labels)
                if (std::find(cur.begin(), cur.end(), x) == cur.end()) {
                    cur.push_back(x);
                    gen();
                    cur.pop_back();
                }
        };
        gen();
    } else if (n == 2) {
        if (o.logic() == Logic::C2) {
            if (sp.atoms().size() > 1) throw DescError("Y_c2(A, 2) is enumerated for one atom only");
            std::vector<DescId> lower = state_descriptions(o, 1);
            std::vector<DescId> cur;
            std::function<void()> gen = [&] {
                if (!cur.empty()) {
                    auto closed = cur;
                    closed.push_back(kBot);
                    if (o.orderly(closed)) out.push_back(sp.list(cur));
                }
                for (DescId x : lower)
                    if (std::find(cur.begin(), cur.end(), x) == cur.end()) {
                        cur.push_back(x);
                        gen();
                        cur.pop_back();
                    }
            };
            gen();
        } else {
            if (sp.atoms().size() > 2) throw DescError("depth-2 descriptions are limited to 2 atoms");
            std::vector<unsigned> labels;
            for (unsigned m = 0; m < N; ++m) labels.push_back(m);
            for (const auto& [items, w] : o.level2(labels)) out.push_back(sp.list(items));
        }
    } else {
        throw DescError("state descriptions are enumerated up to depth 2");
    }
    std::sort(out.begin(), out.end(), [&](DescId a, DescId b) { return sp.less(a, b); });
    return out;
}

// ---------------------------------------------------------------- classification and make_seq

const char* list_class_name(ListClass c) {
    switch (c) {
        case ListClass::disorderly: return "disorderly";
        case ListClass::orderly_short: return "orderly_short";
        case ListClass::direct: return "direct";
        case ListClass::circuitous: return "circuitous";
    }
    return "?";
}

namespace {

// First orderly list start + middle + end (length-lexicographic in the fixed
// order), the middle an ordered selection from `pool` of length lo..hi.
std::optional<std::vector<DescId>> first_orderly(DescOracle& o, DescId start, DescId end, std::vector<DescId> pool,
                                                 std::size_t lo, std::size_t hi) {
    DescSpace& sp = o.space();
    std::sort(pool.begin(), pool.end(), [&](DescId a, DescId b) { return sp.less(a, b); });
    std::vector<DescId> cur{start};
    std::vector<char> used(pool.size(), 0);
    std::optional<std::vector<DescId>> found;
    std::function<bool(std::size_t)> dfs = [&](std::size_t m) -> bool {
        if (cur.size() - 1 == m) {
            cur.push_back(end);
            bool ok = o.orderly(cur);
            if (ok) found = cur;
            cur.pop_back();
            return ok;
        }
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            cur.push_back(pool[i]);
            // initial segments of orderly lists are orderly
            if (o.orderly(cur)) {
                used[i] = 1;
                bool done = dfs(m);
                used[i] = 0;
                if (done) return true;
            }
            cur.pop_back();
        }
        return false;
    };
    for (std::size_t m = lo; m <= std::min(hi, pool.size()); ++m) {
        cur.assign(1, start);
        if (dfs(m)) return found;
    }
    return std::nullopt;
}

std::vector<DescId> without(const std::vector<DescId>& tau, std::initializer_list<DescId> drop) {
    std::vector<DescId> out;
    for (DescId x : tau)
        if (std::find(drop.begin(), drop.end(), x) == drop.end()) out.push_back(x);
    return out;
}

struct DirectChoice {
    int j;
    std::vector<DescId> rho;
};

std::optional<DirectChoice> find_direct(DescOracle& o, const std::vector<DescId>& tau) {
    std::size_t n = tau.size();
    for (int j = int(n) - 2; j >= 0; --j) {
        auto rho = first_orderly(o, tau[j], tau[n - 1], without(tau, {tau[j], tau[n - 1]}), 0, n - 3);
        if (rho) return DirectChoice{j, *rho};
    }
    return std::nullopt;
}

class MakeSeq {
public:
    explicit MakeSeq(DescOracle& o) : o_(o) {}

    SeqExpr run(const std::vector<DescId>& tau) {
        if (auto it = memo_.find(tau); it != memo_.end()) return it->second;
        SeqExpr r = compute(tau);
        memo_.emplace(tau, r);
        return r;
    }

    std::vector<MakeSeqStep> trace;

private:
    SeqExpr compute(const std::vector<DescId>& tau) {
        DescSpace& sp = o_.space();
        if (!o_.orderly(tau)) throw DescError("make_seq needs an orderly list");
        std::size_t n = tau.size();
        std::size_t slot = trace.size();
        trace.emplace_back();
        trace[slot].tau = tau;
        if (n <= 2) {
            trace[slot].kind = ListClass::orderly_short;
            return n == 1 ? nullptr : elem(sp.name(tau[0]));
        }
        auto complete = [&](DescId start) {
            auto l = first_orderly(o_, start, tau[n - 1], without(tau, {start, tau[n - 1]}), n - 2, n - 2);
            if (!l) throw std::logic_error("no orderly rearrangement from " + sp.name(start) + "; oracle inconsistent");
            return *l;
        };
        if (auto d = find_direct(o_, tau)) {
            std::vector<DescId> theta;
            if (d->j == int(n) - 2) {
                theta = {tau[n - 2]};
            } else {
                std::vector<DescId> plus = complete(tau[n - 2]);
                auto at = std::find(plus.begin(), plus.end(), tau[d->j]);
                theta.assign(plus.begin(), at + 1);
            }
            MakeSeqStep st;
            st.tau = tau;
            st.kind = ListClass::direct;
            st.j = d->j;
            st.rho = d->rho;
            st.theta = theta;
            trace[slot] = st;
            SeqExpr a = run(std::vector<DescId>(tau.begin(), tau.end() - 1));
            SeqExpr b = run(theta);
            SeqExpr c = run(d->rho);
            return concat(concat(a, b), c);
        }
        // circuitous: follow t -> g(t) until it repeats
        std::map<DescId, std::vector<DescId>> pi;
        std::vector<DescId> orbit;
        std::map<DescId, std::size_t> pos;
        DescId t = tau[0];
        while (!pos.count(t)) {
            pos[t] = orbit.size();
            orbit.push_back(t);
            pi[t] = t == tau[0] ? tau : complete(t);
            t = pi[t][n - 2];
        }
        MakeSeqStep st;
        st.tau = tau;
        st.kind = ListClass::circuitous;
        st.orbit = orbit;
        for (DescId u : orbit) st.pi.push_back(pi[u]);
        trace[slot] = st;
        auto piece = [&](DescId u) { return run(std::vector<DescId>(pi[u].begin(), pi[u].end() - 1)); };
        SeqExpr prefix, cycle;
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            if (i < pos[t]) prefix = concat(prefix, piece(orbit[i]));
            else cycle = concat(cycle, piece(orbit[i]));
        }
        return concat(prefix, omega_rep(cycle));
    }

    DescOracle& o_;
    std::map<std::vector<DescId>, SeqExpr> memo_;
};

}  // namespace

ListClass classify_list(DescOracle& o, const std::vector<DescId>& tau) {
    if (!o.orderly(tau)) return ListClass::disorderly;
    if (tau.size() < 3) return ListClass::orderly_short;
    return find_direct(o, tau) ? ListClass::direct : ListClass::circuitous;
}

MakeSeqResult make_seq(DescOracle& o, const std::vector<DescId>& tau) {
    if (o.logic() == Logic::C2) throw DescError("make_seq is defined for logics containing c2f");
    MakeSeq m(o);
    MakeSeqResult r;
    r.seq = m.run(tau);
    if (r.seq) r.seq = normalize_seq(r.seq);
    r.trace = std::move(m.trace);
    return r;
}

SequenceModel canonical_model_for(DescOracle& o, DescId s) {
    DescSpace& sp = o.space();
    if (sp.depth(s) < 1) throw DescError("M_s needs a description of positive depth");
    std::vector<DescId> tau = sp.at(s).items;
    tau.push_back(kBot);
    if (!o.orderly(tau)) throw DescError(sp.name(s) + " is not a state description of " + logic_name(o.logic()));
    SequenceModel m;
    m.root = make_seq(o, tau).seq;
    for (std::size_t i = 0; i < sp.atoms().size(); ++i) {
        auto& set = m.table.atoms[sp.atoms()[i]];
        for (DescId x : sp.at(s).items)
            if (sp.entails_atom(x, int(i))) set.insert(sp.name(x));
    }
    return m;
}

CanonicalC2 canonical_c2_model(DescSpace& sp, int n) {
    if (n > 2) throw DescError("M_{A,n} is built up to depth 2");
    DescOracle o(sp, Logic::C2);
    CanonicalC2 out;
    FrameDesc fd;
    for (int m = 0; m <= n; ++m)
        for (DescId d : state_descriptions(o, m)) {
            out.world_desc.push_back(d);
            fd.worlds.push_back(sp.name(d));
            std::vector<World> after;
            if (m > 0)
                for (std::size_t i = 1; i < sp.at(d).items.size(); ++i) after.push_back(sp.name(sp.at(d).items[i]));
            fd.after[sp.name(d)] = after;
        }
    out.model.frame = validate(fd);
    // validate keeps the world order given
    for (std::size_t i = 0; i < sp.atoms().size(); ++i) {
        auto& bits = out.model.val[sp.atoms()[i]];
        bits.assign(out.world_desc.size(), 0);
        for (std::size_t w = 0; w < out.world_desc.size(); ++w) bits[w] = sp.entails_atom(out.world_desc[w], int(i));
    }
    return out;
}

long finitetails_bound(int k) {
    if (k < 2) return 1;
    long f = 1;
    for (int i = 2; i <= k - 1; ++i) f *= i;
    return (3 * f + 1) / 2;
}

std::vector<std::string> first_occurrences(const SeqExpr& e) {
    std::vector<std::string> out;
    std::function<void(const SeqExpr&)> walk = [&](const SeqExpr& x) {
        if (!x) return;
        if (x->kind == SeqNode::Elem) {
            if (std::find(out.begin(), out.end(), x->label) == out.end()) out.push_back(x->label);
            return;
        }
        for (const auto& p : x->parts) walk(p);
    };
    walk(e);
    return out;
}

const char* consistency_name(Consistency c) {
    switch (c) {
        case Consistency::yes: return "consistent";
        case Consistency::no_exact: return "inconsistent (exact)";
        case Consistency::no_within_bound: return "inconsistent within bound";
        case Consistency::budget_exceeded: return "budget exceeded";
    }
    return "?";
}

ConsistencyAnswer consistent(const Formula& f, Logic logic, const SearchBudget& budget) {
    Verdict v = satisfiable(f, logic, budget);
    ConsistencyAnswer a;
    switch (v.status) {
        case Status::SAT:
            a.answer = Consistency::yes;
            a.witness = std::move(v.model);
            break;
        case Status::UNSAT_EXACT: a.answer = Consistency::no_exact; break;
        case Status::UNSAT_WITHIN_BOUND:
            a.answer = Consistency::no_within_bound;
            a.bound = v.bound;
            break;
        default: a.answer = Consistency::budget_exceeded; break;
    }
    return a;
}

}  // namespace condlog
