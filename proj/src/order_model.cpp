#include "condlog/order_model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "condlog/compiled.hpp"

namespace condlog {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
    return s;
}

}  // namespace

FrameError::FrameError(std::vector<std::string> v)
    : std::runtime_error("invalid frame: " + join(v)), violations(std::move(v)) {}

SelectionError::SelectionError(int c, const std::string& msg)
    : std::runtime_error("selection constraint " + std::to_string(c) + " violated: " + msg), constraint(c) {}

int OrderFrame::index(const World& w) const {
    auto it = std::find(names.begin(), names.end(), w);
    return it == names.end() ? -1 : int(it - names.begin());
}

bool OrderFrame::accessible(int w, int x) const {
    if (w == x) return true;
    const auto& a = after[w];
    return std::find(a.begin(), a.end(), x) != a.end();
}

std::vector<int> OrderFrame::order(int w) const {
    std::vector<int> o{w};
    o.insert(o.end(), after[w].begin(), after[w].end());
    return o;
}

bool OrderFrame::before(int w, int x, int y) const {
    if (x == y) return false;
    auto o = order(w);
    auto ix = std::find(o.begin(), o.end(), x);
    auto iy = std::find(o.begin(), o.end(), y);
    return ix != o.end() && iy != o.end() && ix < iy;
}

OrderFrame validate(const FrameDesc& d) {
    std::vector<std::string> bad;
    OrderFrame f;
    f.names = d.worlds;
    std::set<World> uniq(d.worlds.begin(), d.worlds.end());
    if (uniq.size() != d.worlds.size()) bad.push_back("duplicate world identifier");
    for (const auto& [w, _] : d.after)
        if (!uniq.count(w)) bad.push_back("unknown world '" + w + "' has an after-list");
    f.after.resize(f.names.size());
    for (std::size_t i = 0; i < f.names.size(); ++i) {
        auto it = d.after.find(f.names[i]);
        if (it == d.after.end()) continue;
        std::set<World> seen;
        for (const auto& x : it->second) {
            if (x == f.names[i]) {
                bad.push_back("world in own after-list: " + x);
                continue;
            }
            if (!uniq.count(x)) {
                bad.push_back("unknown world '" + x + "' in after(" + f.names[i] + ")");
                continue;
            }
            if (!seen.insert(x).second) {
                bad.push_back("duplicate '" + x + "' in after(" + f.names[i] + ")");
                continue;
            }
            f.after[i].push_back(f.index(x));
        }
    }
    if (!bad.empty()) throw FrameError(bad);
    return f;
}

FrameDesc describe(const OrderFrame& f) {
    FrameDesc d;
    d.worlds = f.names;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto& a = d.after[f.names[i]];
        for (int x : f.after[i]) a.push_back(f.names[x]);
    }
    return d;
}

// ---------------------------------------------------------------- evaluation

std::vector<char> denotation(const OrderFrame& fr, const Valuation& v, const Formula& f) {
    Compiled c = compile(f);
    const std::size_t n = fr.size();
    std::vector<std::vector<char>> t(c.nodes.size(), std::vector<char>(n, 0));
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
        const CNode& nd = c.nodes[k];
        for (std::size_t w = 0; w < n; ++w) {
            switch (nd.op) {
                case CNode::Atom: {
                    auto it = v.find(c.atoms[nd.atom]);
                    t[k][w] = it != v.end() && w < it->second.size() && it->second[w];
                    break;
                }
                case CNode::Neg: t[k][w] = !t[nd.a][w]; break;
                case CNode::And: t[k][w] = t[nd.a][w] && t[nd.b][w]; break;
                case CNode::Cond: {
                    char r = 1;
                    for (int x : fr.order(int(w))) {
                        if (t[nd.a][x]) {
                            r = t[nd.b][x];
                            break;
                        }
                    }
                    t[k][w] = r;
                    break;
                }
            }
        }
    }
    return t[c.root];
}

bool evaluate_at(const OrderModel& m, const Formula& f, int w) { return denotation(m.frame, m.val, f)[w]; }

bool evaluate(const OrderModel& m, const Formula& f) { return evaluate_at(m, f, m.designated); }

// ---------------------------------------------------------------- frame properties

bool is_transitive(const OrderFrame& f) {
    int n = int(f.size());
    for (int w = 0; w < n; ++w)
        for (int x : f.after[w])
            for (int y : f.after[x])
                if (!f.accessible(w, y)) return false;
    return true;
}

bool is_connected(const OrderFrame& f) {
    int n = int(f.size());
    for (int w = 0; w < n; ++w) {
        auto o = f.order(w);
        for (int x : o)
            for (int y : o)
                if (!f.accessible(x, y) && !f.accessible(y, x)) return false;
    }
    return true;
}

namespace {

// y <=_x z iff y,z in R(x) and not z <_x y
bool leq(const OrderFrame& f, int x, int y, int z) {
    return f.accessible(x, y) && f.accessible(x, z) && !f.before(x, z, y);
}

}  // namespace

bool is_semi_flat(const OrderFrame& f) {
    int n = int(f.size());
    for (int w = 0; w < n; ++w)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (!f.before(w, x, y)) continue;
                for (int z = 0; z < n; ++z) {
                    bool trig = leq(f, w, y, z) || (f.accessible(x, z) && !f.accessible(w, z));
                    if (trig && !leq(f, x, y, z)) return false;
                }
            }
    return true;
}

int successor(const OrderFrame& f, int w) { return f.after[w].empty() ? w : f.after[w][0]; }

std::vector<int> reachable_set(const OrderFrame& f, int w) {
    std::set<int> seen{w};
    int cur = w;
    for (;;) {
        int nx = successor(f, cur);
        if (!seen.insert(nx).second) break;
        cur = nx;
    }
    return {seen.begin(), seen.end()};
}

bool is_ancestral(const OrderFrame& f) {
    for (std::size_t w = 0; w < f.size(); ++w) {
        auto r = reachable_set(f, int(w));
        for (int x : f.order(int(w)))
            if (!std::binary_search(r.begin(), r.end(), x)) return false;
    }
    return true;
}

FrameReport frame_properties(const OrderFrame& f) {
    FrameReport r;
    r.transitive = is_transitive(f);
    r.connected = is_connected(f);
    r.semi_flat = is_semi_flat(f);
    r.flat = r.semi_flat && r.transitive;
    r.ancestral = is_ancestral(f);
    return r;
}

Lasso successor_sequence(const OrderFrame& f, int w) {
    std::vector<int> seq;
    std::map<int, std::size_t> pos;
    int cur = w;
    while (!pos.count(cur)) {
        pos[cur] = seq.size();
        seq.push_back(cur);
        cur = successor(f, cur);
    }
    Lasso l;
    std::size_t start = pos[cur];
    for (std::size_t i = 0; i < seq.size(); ++i)
        (i < start ? l.prefix : l.cycle).push_back(f.names[seq[i]]);
    return l;
}

// ---------------------------------------------------------------- Kripke

OrderFrame kripke_to_flat_order(const KripkeModel& k, const std::vector<int>& tie) {
    int n = int(k.names.size());
    for (int w = 0; w < n; ++w) {
        if (!k.rel[w][w]) throw std::invalid_argument("not reflexive at " + k.names[w]);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (k.rel[w][x] && k.rel[x][y] && !k.rel[w][y])
                    throw std::invalid_argument("not transitive: (" + k.names[w] + "," + k.names[x] + "," +
                                                k.names[y] + ")");
                if (k.rel[w][x] && k.rel[w][y] && !k.rel[x][y] && !k.rel[y][x])
                    throw std::invalid_argument("not connected: (" + k.names[x] + "," + k.names[y] + ")");
            }
    }
    if (int(tie.size()) != n) throw std::invalid_argument("tie order must list every world once");
    std::vector<int> rank(n, -1);
    for (int i = 0; i < n; ++i) {
        if (tie[i] < 0 || tie[i] >= n || rank[tie[i]] != -1)
            throw std::invalid_argument("tie order must list every world once");
        rank[tie[i]] = i;
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y && rank[x] < rank[y] && !k.rel[x][y])
                throw std::invalid_argument("tie order violates x<y => xRy at (" + k.names[x] + "," + k.names[y] +
                                            ")");
    OrderFrame f;
    f.names = k.names;
    f.after.resize(n);
    for (int w = 0; w < n; ++w) {
        for (int i = 0; i < n; ++i) {
            int y = tie[i];
            if (y != w && k.rel[w][y]) f.after[w].push_back(y);
        }
    }
    return f;
}

OrderModel kripke_to_flat_model(const KripkeModel& k, const std::vector<int>& tie) {
    return OrderModel{kripke_to_flat_order(k, tie), k.val, k.designated};
}

bool evaluate_kripke(const KripkeModel& k, const Formula& f, int w) {
    Compiled c = compile(f);
    int n = int(k.names.size());
    std::vector<std::vector<char>> t(c.nodes.size(), std::vector<char>(n, 0));
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        const CNode& nd = c.nodes[i];
        for (int u = 0; u < n; ++u) {
            switch (nd.op) {
                case CNode::Atom: {
                    auto it = k.val.find(c.atoms[nd.atom]);
                    t[i][u] = it != k.val.end() && it->second[u];
                    break;
                }
                case CNode::Neg: t[i][u] = !t[nd.a][u]; break;
                case CNode::And: t[i][u] = t[nd.a][u] && t[nd.b][u]; break;
                case CNode::Cond: {
                    // only the box shape ~x > x is meaningful here
                    char r = 1;
                    for (int v = 0; v < n; ++v)
                        if (k.rel[u][v] && !t[nd.b][v]) r = 0;
                    t[i][u] = r;
                    break;
                }
            }
        }
    }
    return t[c.root][w];
}

// ---------------------------------------------------------------- selection functions

SelectionTable order_to_selection(const OrderFrame& f) {
    int n = int(f.size());
    if (n > 16) throw std::invalid_argument("selection tables limited to 16 worlds");
    SelectionTable t;
    t.names = f.names;
    t.sel.assign(n, std::vector<std::uint32_t>(1u << n, 0));
    for (int w = 0; w < n; ++w)
        for (std::uint32_t m = 0; m < (1u << n); ++m)
            for (int x : f.order(w))
                if (m >> x & 1u) {
                    t.sel[w][m] = 1u << x;
                    break;
                }
    return t;
}

OrderFrame selection_to_order(const SelectionTable& t) {
    int n = int(t.names.size());
    std::uint32_t full = 1u << n;
    for (int w = 0; w < n; ++w) {
        if (t.sel[w].size() != full) throw SelectionError(3, "table incomplete at " + t.names[w]);
        for (std::uint32_t m = 0; m < full; ++m) {
            std::uint32_t s = t.sel[w][m];
            if ((m >> w & 1u) && !(s >> w & 1u)) throw SelectionError(1, "w in phi but not selected at " + t.names[w]);
            if (s & ~m) throw SelectionError(3, "selection outside phi at " + t.names[w]);
            if (s & (s - 1)) throw SelectionError(4, "more than one world selected at " + t.names[w]);
        }
        for (std::uint32_t a = 0; a < full; ++a)
            for (std::uint32_t b = 0; b < full; ++b) {
                std::uint32_t fa = t.sel[w][a], fb = t.sel[w][b];
                if ((fa & ~b) == 0 && (fb & ~a) == 0 && fa != fb)
                    throw SelectionError(2, "reciprocity fails at " + t.names[w]);
            }
    }
    OrderFrame f;
    f.names = t.names;
    f.after.resize(n);
    for (int w = 0; w < n; ++w) {
        std::vector<int> acc;
        for (int y = 0; y < n; ++y)
            if (y != w && t.sel[w][1u << y] == (1u << y)) acc.push_back(y);
        auto less = [&](int x, int y) { return t.sel[w][(1u << x) | (1u << y)] == (1u << x); };
        std::sort(acc.begin(), acc.end(), less);
        f.after[w] = acc;
    }
    return f;
}

// ---------------------------------------------------------------- enumeration

void for_each_labelled_frame(int n, const std::function<void(const OrderFrame&)>& fn) {
    // options per world: every ordered list of distinct other worlds
    std::vector<std::vector<std::vector<int>>> opts(n);
    for (int w = 0; w < n; ++w) {
        std::vector<int> others;
        for (int x = 0; x < n; ++x)
            if (x != w) others.push_back(x);
        std::vector<std::vector<int>>& o = opts[w];
        std::function<void(std::vector<int>&, unsigned)> rec = [&](std::vector<int>& cur, unsigned used) {
            o.push_back(cur);
            for (std::size_t i = 0; i < others.size(); ++i) {
                if (used >> i & 1u) continue;
                cur.push_back(others[i]);
                rec(cur, used | 1u << i);
                cur.pop_back();
            }
        };
        std::vector<int> cur;
        rec(cur, 0);
    }
    OrderFrame f;
    for (int i = 0; i < n; ++i) f.names.push_back("w" + std::to_string(i));
    f.after.assign(n, {});
    std::function<void(int)> go = [&](int w) {
        if (w == n) {
            fn(f);
            return;
        }
        for (const auto& o : opts[w]) {
            f.after[w] = o;
            go(w + 1);
        }
    };
    go(0);
}

std::string frame_signature(const OrderFrame& f) {
    std::string s;
    for (std::size_t w = 0; w < f.size(); ++w) {
        s += std::to_string(w) + ":";
        for (int x : f.after[w]) s += std::to_string(x) + ",";
        s += ";";
    }
    return s;
}

std::string frame_key(const OrderFrame& f) {
    int n = int(f.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    bool first = true;
    do {
        // perm[i] = new name of old world i
        OrderFrame g;
        g.names = f.names;
        g.after.assign(n, {});
        for (int w = 0; w < n; ++w)
            for (int x : f.after[w]) g.after[perm[w]].push_back(perm[x]);
        std::string s = frame_signature(g);
        if (first || s < best) best = s;
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<OrderFrame> enumerate_frames(int n, FrameClass cls, int cap) {
    if (n < 1 || n > cap) throw std::invalid_argument("frame size outside [1," + std::to_string(cap) + "]");
    std::map<std::string, OrderFrame> reps;
    for_each_labelled_frame(n, [&](const OrderFrame& f) {
        if (cls != FrameClass::all) {
            FrameReport r = frame_properties(f);
            if (!r.flat) return;
            if (cls == FrameClass::flat_ancestral && !r.ancestral) return;
        }
        std::string k = frame_key(f);
        if (!reps.count(k)) {
            // store the canonical relabelling so output order is deterministic
            OrderFrame g;
            for (int i = 0; i < n; ++i) g.names.push_back("w" + std::to_string(i));
            g.after.assign(n, {});
            // parse key back
            std::size_t p = 0;
            for (int w = 0; w < n; ++w) {
                p = k.find(':', p) + 1;
                std::size_t e = k.find(';', p);
                std::string body = k.substr(p, e - p);
                std::size_t q = 0;
                while (q < body.size()) {
                    std::size_t c = body.find(',', q);
                    g.after[w].push_back(std::stoi(body.substr(q, c - q)));
                    q = c + 1;
                }
                p = e + 1;
            }
            reps.emplace(k, g);
        }
    });
    std::vector<OrderFrame> out;
    for (auto& [_, f] : reps) out.push_back(f);
    return out;
}

OrderModel gamma_finite_witness(int k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    OrderModel m;
    for (int i = 0; i <= k; ++i) m.frame.names.push_back("w" + std::to_string(i));
    m.frame.after.assign(k + 1, {});
    // at w_k: w_k, then w_{k-1}, ..., w_0
    for (int i = k - 1; i >= 0; --i) m.frame.after[k].push_back(i);
    for (int i = 0; i <= k; ++i) {
        std::vector<char> v(k + 1, 0);
        v[i] = 1;
        m.val["p" + std::to_string(i)] = v;
    }
    m.designated = k;
    return m;
}

}  // namespace condlog
