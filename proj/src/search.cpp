#include "condlog/search.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>

namespace condlog {

Deadline Deadline::after_ms(long ms) {
    Deadline d;
    if (ms > 0) d.at = Clock::now() + std::chrono::milliseconds(ms);
    return d;
}

namespace {

constexpr std::uint64_t kLow[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

// Evaluates every node at every world for one chunk of valuations.
class Sweeper {
  public:
    Sweeper(const OrderFrame& fr, const Compiled& c) : fr_(fr), c_(c), n_(int(fr.size())) {
        total_ = int(c.atoms.size()) * n_;
        low_ = std::min(total_, 12);
        words_ = low_ <= 6 ? 1 : (1 << (low_ - 6));
        valid_ = low_ >= 6 ? ~0ull : ((1ull << (1u << low_)) - 1);
        chunks_ = 1ull << (total_ - low_);
        buf_.assign(c.nodes.size() * n_ * words_, 0);
        orders_.resize(n_);
        for (int w = 0; w < n_; ++w) orders_[w] = fr.order(w);
    }

    std::uint64_t chunks() const { return chunks_; }

    void run(std::uint64_t chunk) {
        std::vector<std::uint64_t> none(words_);
        for (std::size_t k = 0; k < c_.nodes.size(); ++k) {
            const CNode& nd = c_.nodes[k];
            for (int w = 0; w < n_; ++w) {
                std::uint64_t* out = at(int(k), w);
                switch (nd.op) {
                    case CNode::Atom: {
                        int b = nd.atom * n_ + w;
                        for (int j = 0; j < words_; ++j) {
                            std::uint64_t v;
                            if (b < 6 && b < low_) v = kLow[b];
                            else if (b < low_) v = (j >> (b - 6) & 1) ? ~0ull : 0;
                            else v = (chunk >> (b - low_) & 1) ? ~0ull : 0;
                            out[j] = v;
                        }
                        break;
                    }
                    case CNode::Neg: {
                        const std::uint64_t* a = at(nd.a, w);
                        for (int j = 0; j < words_; ++j) out[j] = ~a[j];
                        break;
                    }
                    case CNode::And: {
                        const std::uint64_t* a = at(nd.a, w);
                        const std::uint64_t* b = at(nd.b, w);
                        for (int j = 0; j < words_; ++j) out[j] = a[j] & b[j];
                        break;
                    }
                    case CNode::Cond: {
                        std::fill(none.begin(), none.end(), ~0ull);
                        std::fill(out, out + words_, 0);
                        for (int x : orders_[w]) {
                            const std::uint64_t* a = at(nd.a, x);
                            const std::uint64_t* b = at(nd.b, x);
                            for (int j = 0; j < words_; ++j) {
                                out[j] |= none[j] & a[j] & b[j];
                                none[j] &= ~a[j];
                            }
                        }
                        for (int j = 0; j < words_; ++j) out[j] |= none[j];
                        break;
                    }
                }
            }
        }
    }

    // first valuation index (within chunk) where root holds at w, or -1
    long long first_true(int w) const {
        const std::uint64_t* r = at(c_.root, w);
        for (int j = 0; j < words_; ++j) {
            std::uint64_t v = r[j] & valid_;
            if (v) return (long long)j * 64 + __builtin_ctzll(v);
        }
        return -1;
    }

    Valuation decode(std::uint64_t chunk, long long idx) const {
        std::uint64_t v = (chunk << low_) | std::uint64_t(idx);
        Valuation val;
        for (std::size_t i = 0; i < c_.atoms.size(); ++i) {
            std::vector<char> s(n_, 0);
            for (int w = 0; w < n_; ++w) s[w] = (v >> (i * n_ + w)) & 1;
            val[c_.atoms[i]] = s;
        }
        return val;
    }

  private:
    const OrderFrame& fr_;
    const Compiled& c_;
    int n_;
    int total_ = 0, low_ = 0, words_ = 1;
    std::uint64_t valid_ = ~0ull, chunks_ = 1;
    std::vector<std::uint64_t> buf_;
    std::vector<std::vector<int>> orders_;

    std::uint64_t* at(int node, int w) { return buf_.data() + (std::size_t(node) * n_ + w) * words_; }
    const std::uint64_t* at(int node, int w) const {
        return buf_.data() + (std::size_t(node) * n_ + w) * words_;
    }
};

}  // namespace

bool sweep_frame(const OrderFrame& fr, const Compiled& c, int target, Valuation* found, const Deadline& dl) {
    Sweeper s(fr, c);
    for (std::uint64_t ch = 0; ch < s.chunks(); ++ch) {
        if (dl.passed()) throw DeadlineExceeded();
        s.run(ch);
        long long i = s.first_true(target);
        if (i >= 0) {
            if (found) *found = s.decode(ch, i);
            return true;
        }
    }
    return false;
}

bool sweep_frame_any(const OrderFrame& fr, const Compiled& c, int* world, Valuation* found, const Deadline& dl) {
    Sweeper s(fr, c);
    for (std::uint64_t ch = 0; ch < s.chunks(); ++ch) {
        if (dl.passed()) throw DeadlineExceeded();
        s.run(ch);
        for (int w = 0; w < int(fr.size()); ++w) {
            long long i = s.first_true(w);
            if (i >= 0) {
                if (world) *world = w;
                if (found) *found = s.decode(ch, i);
                return true;
            }
        }
    }
    return false;
}

// ---------------------------------------------------------------- pointed frames

void for_each_pointed_frame(int worlds, int depth, const std::function<bool(const OrderFrame&)>& fn) {
    OrderFrame f;
    std::vector<int> dist;
    bool stop = false;
    // process world u; cnt worlds exist so far
    std::function<void(int)> process = [&](int u) {
        if (stop) return;
        int cnt = int(f.after.size());
        if (u == cnt) {
            if (cnt == worlds) {
                f.names.clear();
                for (int i = 0; i < cnt; ++i) f.names.push_back("w" + std::to_string(i));
                if (!fn(f)) stop = true;
            }
            return;
        }
        if (dist[u] >= depth) {
            f.after[u].clear();
            process(u + 1);
            return;
        }
        std::vector<char> used(worlds, 0);
        std::function<void()> extend = [&]() {
            if (stop) return;
            process(u + 1);
            int now = int(f.after.size());
            for (int x = 0; x <= now && x < worlds; ++x) {
                if (x == u || (x < now && used[x])) continue;
                bool fresh = x == now;
                if (fresh) {
                    f.after.emplace_back();
                    dist.push_back(dist[u] + 1);
                }
                used[x] = 1;
                f.after[u].push_back(x);
                extend();
                f.after[u].pop_back();
                used[x] = 0;
                if (fresh) {
                    f.after.pop_back();
                    dist.pop_back();
                }
                if (stop) return;
            }
        };
        f.after[u].clear();
        extend();
    };
    f.after.assign(1, {});
    dist.assign(1, 0);
    process(0);
}

// ---------------------------------------------------------------- sequence shapes

namespace {

// shapes as strings: 'L' leaf, '[' body ']' omega repetition
std::map<int, std::vector<std::string>> g_plain, g_blocks, g_seqs;

const std::vector<std::string>& blocks(int k);
const std::vector<std::string>& seqs(int k);

// sequences with k leaves that are not a single omega block
const std::vector<std::string>& plain(int k) {
    auto it = g_plain.find(k);
    if (it != g_plain.end()) return it->second;
    std::vector<std::string> out;
    if (k == 1) out.push_back("L");
    for (int first = 1; first < k; ++first)
        for (const auto& b : blocks(first))
            for (const auto& rest : seqs(k - first)) out.push_back(b + rest);
    return g_plain[k] = out;
}

const std::vector<std::string>& blocks(int k) {
    auto it = g_blocks.find(k);
    if (it != g_blocks.end()) return it->second;
    std::vector<std::string> out;
    if (k == 1) out.push_back("L");
    for (const auto& s : plain(k)) out.push_back("[" + s + "]");
    return g_blocks[k] = out;
}

const std::vector<std::string>& seqs(int k) {
    auto it = g_seqs.find(k);
    if (it != g_seqs.end()) return it->second;
    std::vector<std::string> out = plain(k);
    for (const auto& s : plain(k)) out.push_back("[" + s + "]");
    return g_seqs[k] = out;
}

SeqExpr shape_expr(const std::string& s) {
    int next = 0;
    std::size_t p = 0;
    std::function<SeqExpr()> parse_seq_ = [&]() -> SeqExpr {
        std::vector<SeqExpr> parts;
        while (p < s.size() && s[p] != ']') {
            if (s[p] == 'L') {
                parts.push_back(elem("s" + std::to_string(next++)));
                ++p;
            } else {
                ++p;
                SeqExpr body = parse_seq_();
                ++p;  // ']'
                parts.push_back(omega_rep(body));
            }
        }
        return cat(parts);
    };
    return normalize_seq(parse_seq_());
}

bool in_class(const std::string& s, Logic logic) {
    switch (logic) {
        case Logic::C2F: return true;
        case Logic::C2FM: return s.back() == 'L';
        case Logic::C2FSM: return s.find('[') == std::string::npos;
        case Logic::C2FS: {
            // L* [L+]
            std::size_t b = s.find('[');
            if (b == std::string::npos) return false;
            if (s.back() != ']') return false;
            std::string body = s.substr(b + 1, s.size() - b - 2);
            return body.find_first_not_of('L') == std::string::npos && !body.empty();
        }
        case Logic::C2: return false;
    }
    return false;
}

std::string pointed_key(const OrderFrame& f) {
    std::vector<int> name(f.size(), -1);
    std::vector<int> queue{0};
    name[0] = 0;
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (int x : f.after[queue[i]])
            if (name[x] < 0) {
                name[x] = int(queue.size());
                queue.push_back(x);
            }
    std::string key;
    for (int u : queue) {
        key += "|";
        for (int x : f.after[u]) key += std::to_string(name[x]) + ",";
    }
    return key;
}

}  // namespace

std::vector<SeqExpr> sequence_shapes(int leaves, Logic logic) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::vector<SeqExpr> out;
    std::set<std::string> seen;
    for (const auto& s : seqs(leaves)) {
        if (!in_class(s, logic)) continue;
        SeqExpr e = shape_expr(s);
        OrderModel m = induced_order_model(e, {});
        if (int(m.frame.size()) != leaves) continue;
        if (!seen.insert(pointed_key(m.frame)).second) continue;
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------- bounded search

std::optional<Found> bounded_sat(const Formula& f, Logic logic, int bound, const Deadline& dl) {
    Compiled c = compile(f);
    if (logic == Logic::C2) {
        int depth = modal_depth(f);
        for (int n = 1; n <= bound; ++n) {
            std::optional<Found> res;
            for_each_pointed_frame(n, std::max(depth, 0), [&](const OrderFrame& fr) {
                Valuation v;
                if (sweep_frame(fr, c, 0, &v, dl)) {
                    res = Found{OrderModel{fr, v, 0}, nullptr, {}, n};
                    return false;
                }
                return true;
            });
            if (res) return res;
        }
        return std::nullopt;
    }
    for (int k = 1; k <= bound; ++k) {
        for (const SeqExpr& e : sequence_shapes(k, logic)) {
            OrderModel m = induced_order_model(e, {});
            Valuation v;
            if (sweep_frame(m.frame, c, 0, &v, dl)) {
                Found out;
                out.seq = e;
                out.size = k;
                for (const auto& [a, bits] : v) {
                    auto& s = out.table.atoms[a];
                    for (std::size_t w = 0; w < bits.size(); ++w)
                        if (bits[w]) s.insert(head(parse_seq(m.frame.names[w])));
                }
                out.model = induced_order_model(e, out.table);
                return out;
            }
        }
    }
    return std::nullopt;
}

std::optional<KripkeModel> kripke_countermodel(const Formula& f, ModalSystem sys, int bound, const Deadline& dl) {
    Compiled c = compile(neg(f));
    if (sys == ModalSystem::S431) {
        auto r = bounded_sat(neg(f), Logic::C2FS, bound, dl);
        if (!r) return std::nullopt;
        KripkeModel k;
        k.names = r->model.frame.names;
        int n = int(k.names.size());
        k.rel.assign(n, std::vector<char>(n, 0));
        for (int w = 0; w < n; ++w)
            for (int x = 0; x < n; ++x) k.rel[w][x] = r->model.frame.accessible(w, x);
        k.val = r->model.val;
        k.designated = 0;
        return k;
    }
    for (int n = 1; n <= bound; ++n) {
        int pairs = n * (n - 1);
        for (std::uint64_t bits = 0; bits < (1ull << pairs); ++bits) {
            KripkeModel k;
            for (int i = 0; i < n; ++i) k.names.push_back("w" + std::to_string(i));
            k.rel.assign(n, std::vector<char>(n, 0));
            int b = 0;
            for (int w = 0; w < n; ++w) {
                k.rel[w][w] = 1;
                for (int x = 0; x < n; ++x)
                    if (x != w) k.rel[w][x] = (bits >> b++) & 1;
            }
            if (sys == ModalSystem::S43) {
                bool ok = true;
                for (int w = 0; w < n && ok; ++w)
                    for (int x = 0; x < n && ok; ++x)
                        for (int y = 0; y < n && ok; ++y) {
                            if (k.rel[w][x] && k.rel[x][y] && !k.rel[w][y]) ok = false;
                            if (k.rel[w][x] && k.rel[w][y] && !k.rel[x][y] && !k.rel[y][x]) ok = false;
                        }
                if (!ok) continue;
            }
            OrderFrame fr;
            fr.names = k.names;
            fr.after.assign(n, {});
            for (int w = 0; w < n; ++w)
                for (int x = 0; x < n; ++x)
                    if (x != w && k.rel[w][x]) fr.after[w].push_back(x);
            Valuation v;
            if (sweep_frame(fr, c, 0, &v, dl)) {
                k.val = v;
                k.designated = 0;
                return k;
            }
        }
    }
    return std::nullopt;
}

}  // namespace condlog
