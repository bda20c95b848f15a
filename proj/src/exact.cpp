#include "condlog/exact.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>

#include "condlog/detail/closure.hpp"

namespace condlog {

namespace {

using Mask = std::uint32_t;

// Per-node truth at a single position, given its label.
struct Local {
    const Compiled& c;
    std::vector<int> cidx;  // node -> cond position

    explicit Local(const Compiled& cc) : c(cc), cidx(cc.nodes.size(), -1) {
        for (std::size_t i = 0; i < cc.conds.size(); ++i) cidx[cc.conds[i]] = int(i);
    }

    // values at a world with this label whose conditionals are `v`
    void eval(Mask label, Mask v, std::vector<char>& out) const {
        out.resize(c.nodes.size());
        for (std::size_t k = 0; k < c.nodes.size(); ++k) {
            const CNode& n = c.nodes[k];
            switch (n.op) {
                case CNode::Atom: out[k] = (label >> n.atom) & 1; break;
                case CNode::Neg: out[k] = !out[n.a]; break;
                case CNode::And: out[k] = out[n.a] && out[n.b]; break;
                case CNode::Cond: out[k] = (v >> cidx[k]) & 1; break;
            }
        }
    }

    // head x followed by a continuation in state s: hits and values
    void step(Mask label, Mask s, Mask& hit, Mask& val, std::vector<char>& out) const {
        out.resize(c.nodes.size());
        hit = val = 0;
        for (std::size_t k = 0; k < c.nodes.size(); ++k) {
            const CNode& n = c.nodes[k];
            switch (n.op) {
                case CNode::Atom: out[k] = (label >> n.atom) & 1; break;
                case CNode::Neg: out[k] = !out[n.a]; break;
                case CNode::And: out[k] = out[n.a] && out[n.b]; break;
                case CNode::Cond: {
                    int ci = cidx[k];
                    if (out[n.a]) {
                        hit |= Mask(1) << ci;
                        if (out[n.b]) val |= Mask(1) << ci;
                        out[k] = out[n.b];
                    } else {
                        out[k] = (s >> ci) & 1;
                    }
                    break;
                }
            }
        }
    }
};

std::string proto_name(Mask label) { return "u" + std::to_string(label); }

// ---------------------------------------------------------------- sequence classes

struct SeqValue {
    Mask head = 0;
    std::vector<Mask> hit, val;  // indexed by continuation state
};

class SeqEngine {
  public:
    SeqEngine(const Compiled& c, const ExactLimits& lim, const Deadline& dl)
        : c_(c), loc_(c), lim_(lim), dl_(dl), nc_(int(c.conds.size())), ns_(std::size_t(1) << nc_) {
        all_ = nc_ == 32 ? ~Mask(0) : ((Mask(1) << nc_) - 1);
    }

    struct Overflow {};

    int element(Mask label) {
        SeqValue v;
        v.head = label;
        v.hit.resize(ns_);
        v.val.resize(ns_);
        std::vector<char> tmp;
        for (std::size_t s = 0; s < ns_; ++s) loc_.step(label, Mask(s), v.hit[s], v.val[s], tmp);
        return add(std::move(v), elem(proto_name(label)));
    }

    int concat(int a, int b) {
        const SeqValue& x = vals_[a];
        const SeqValue& y = vals_[b];
        SeqValue v;
        v.head = x.head;
        v.hit.resize(ns_);
        v.val.resize(ns_);
        for (std::size_t s = 0; s < ns_; ++s) {
            Mask f2 = apply(y, Mask(s));
            Mask h1 = x.hit[f2];
            v.hit[s] = h1 | y.hit[s];
            v.val[s] = (x.val[f2] & h1) | (y.val[s] & ~h1);
        }
        return add(std::move(v), cat({wit_[a], wit_[b]}));
    }

    int omega(int a) {
        const SeqValue& b = vals_[a];
        SeqValue v;
        v.head = b.head;
        v.hit.resize(ns_);
        v.val.resize(ns_);
        for (std::size_t s = 0; s < ns_; ++s) {
            Mask t = Mask(s);
            for (int ci = 0; ci < nc_; ++ci) {
                Mask bit = Mask(1) << ci;
                if (b.hit[t] & bit) t = (t & ~bit) | (b.val[t] & bit);
                else t = (t & ~bit) | (Mask(s) & bit);
            }
            v.hit[s] = b.hit[t];
            v.val[s] = b.val[t];
        }
        return add(std::move(v), omega_rep(wit_[a]));
    }

    bool root_true(int id) const {
        const SeqValue& v = vals_[id];
        Mask conds = apply(v, all_);
        std::vector<char> out;
        loc_.eval(v.head, conds, out);
        return out[c_.root];
    }

    std::size_t size() const { return vals_.size(); }
    const SeqExpr& witness(int id) const { return wit_[id]; }

  private:
    const Compiled& c_;
    Local loc_;
    const ExactLimits& lim_;
    const Deadline& dl_;
    int nc_;
    std::size_t ns_;
    Mask all_ = 0;
    std::vector<SeqValue> vals_;
    std::vector<SeqExpr> wit_;
    std::unordered_map<std::string, int> index_;

    static Mask apply(const SeqValue& v, Mask s) { return (v.val[s] & v.hit[s]) | (s & ~v.hit[s]); }

    int add(SeqValue v, SeqExpr w) {
        std::string key(reinterpret_cast<const char*>(&v.head), sizeof(Mask));
        key.append(reinterpret_cast<const char*>(v.hit.data()), v.hit.size() * sizeof(Mask));
        key.append(reinterpret_cast<const char*>(v.val.data()), v.val.size() * sizeof(Mask));
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        if (vals_.size() >= lim_.max_values || vals_.size() * ns_ > (std::size_t(1) << 23)) throw Overflow{};
        if (dl_.passed()) throw DeadlineExceeded();
        int id = int(vals_.size());
        vals_.push_back(std::move(v));
        wit_.push_back(std::move(w));
        index_.emplace(std::move(key), id);
        return id;
    }
};

std::optional<ExactAnswer> seq_exact(const Compiled& c, Logic logic, const ExactLimits& lim, const Deadline& dl) {
    SeqEngine e(c, lim, dl);
    std::vector<int> elems;
    for (Mask l = 0; l < (Mask(1) << c.atoms.size()); ++l) elems.push_back(e.element(l));

    std::vector<int> roots;
    try {
        if (logic == Logic::C2) return std::nullopt;
        roots = detail::class_roots(e, elems, logic);
    } catch (const SeqEngine::Overflow&) {
        return std::nullopt;
    }

    // prefer the witness with the fewest tails among the satisfying roots
    int best = -1;
    std::size_t best_tails = 0;
    for (int r : roots) {
        if (!e.root_true(r)) continue;
        std::size_t n = tails(normalize_seq(e.witness(r))).size();
        if (best < 0 || n < best_tails) {
            best = r;
            best_tails = n;
        }
    }
    ExactAnswer ans;
    if (best < 0) return ans;
    ans.sat = true;
    Found fd;
    fd.seq = normalize_seq(e.witness(best));
    for (Mask l = 0; l < (Mask(1) << c.atoms.size()); ++l)
        for (std::size_t i = 0; i < c.atoms.size(); ++i)
            if ((l >> i) & 1) fd.table.atoms[c.atoms[i]].insert(proto_name(l));
    for (const auto& a : c.atoms) fd.table.atoms[a];
    fd.model = induced_order_model(fd.seq, fd.table);
    fd.size = int(fd.model.frame.size());
    ans.witness = std::move(fd);
    return ans;
}

// ---------------------------------------------------------------- C2 types

std::optional<ExactAnswer> c2_exact(const Compiled& c, const ExactLimits& lim, const Deadline& dl) {
    const int nc = int(c.conds.size());
    const int na = int(c.atoms.size());
    const std::size_t ntypes = std::size_t(1) << (na + nc);
    if (ntypes > lim.max_types) return std::nullopt;
    Local loc(c);
    const Mask all = nc == 32 ? ~Mask(0) : ((Mask(1) << nc) - 1);

    struct Type {
        Mask label, v, A, B;
        bool root;
    };
    std::vector<Type> types;
    std::vector<char> out;
    for (Mask label = 0; label < (Mask(1) << na); ++label)
        for (Mask v = 0; v <= all; ++v) {
            loc.eval(label, v, out);
            Type t{label, v, 0, 0, bool(out[c.root])};
            for (int i = 0; i < nc; ++i) {
                const CNode& n = c.nodes[c.conds[i]];
                if (out[n.a]) t.A |= Mask(1) << i;
                if (out[n.b]) t.B |= Mask(1) << i;
            }
            // own antecedent hits settle the conditional
            if (((t.B ^ t.v) & t.A) == 0) types.push_back(t);
            if (v == all) break;
        }

    std::vector<char> alive(types.size(), 1);
    // justification search over unresolved conditionals
    auto justify = [&](const Type& t, std::vector<int>* path) {
        std::map<std::pair<Mask, Mask>, int> profiles;  // (A,B) -> representative
        for (std::size_t i = 0; i < types.size(); ++i)
            if (alive[i]) profiles.emplace(std::make_pair(types[i].A, types[i].B), int(i));
        std::map<Mask, bool> memo;
        std::function<bool(Mask)> dfs = [&](Mask U) -> bool {
            if ((U & ~t.v) == 0) return true;
            auto it = memo.find(U);
            if (it != memo.end()) return it->second;
            bool ok = false;
            for (const auto& [ab, idx] : profiles) {
                Mask H = ab.first & U;
                if (!H || ((ab.second ^ t.v) & H)) continue;
                if (dfs(U & ~H)) {
                    if (path) path->push_back(idx);
                    ok = true;
                    break;
                }
            }
            memo[U] = ok;
            return ok;
        };
        bool ok = dfs(all & ~t.A);
        if (path) std::reverse(path->begin(), path->end());
        return ok;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        if (dl.passed()) throw DeadlineExceeded();
        for (std::size_t i = 0; i < types.size(); ++i) {
            if (!alive[i]) continue;
            if (!justify(types[i], nullptr)) {
                alive[i] = 0;
                changed = true;
            }
        }
    }

    ExactAnswer ans;
    int root = -1;
    for (std::size_t i = 0; i < types.size(); ++i)
        if (alive[i] && types[i].root) {
            root = int(i);
            break;
        }
    if (root < 0) return ans;
    ans.sat = true;

    // one world per reachable type
    std::map<int, int> world;
    std::vector<int> order{root};
    world[root] = 0;
    std::vector<std::vector<int>> after;
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::vector<int> path;
        justify(types[order[k]], &path);
        std::vector<int> row;
        for (int t : path) {
            if (t == order[k]) continue;
            auto it = world.find(t);
            if (it == world.end()) {
                it = world.emplace(t, int(order.size())).first;
                order.push_back(t);
            }
            row.push_back(it->second);
        }
        after.push_back(row);
    }
    Found fd;
    fd.model.frame.after = after;
    for (std::size_t k = 0; k < order.size(); ++k) fd.model.frame.names.push_back("w" + std::to_string(k));
    for (int i = 0; i < na; ++i) {
        std::vector<char> bits(order.size(), 0);
        for (std::size_t k = 0; k < order.size(); ++k) bits[k] = (types[order[k]].label >> i) & 1;
        fd.model.val[c.atoms[i]] = bits;
    }
    fd.model.designated = 0;
    fd.size = int(order.size());
    ans.witness = std::move(fd);
    return ans;
}

}  // namespace

std::optional<ExactAnswer> exact_sat(const Formula& f, Logic logic, const ExactLimits& lim, const Deadline& dl) {
    Compiled c = compile(f);
    if (int(c.conds.size()) > lim.max_conds || int(c.atoms.size()) > lim.max_atoms) return std::nullopt;
    if (logic == Logic::C2) return c2_exact(c, lim, dl);
    return seq_exact(c, logic, lim, dl);
}

}  // namespace condlog
