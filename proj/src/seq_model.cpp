#include "condlog/seq_model.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <functional>
#include <stdexcept>

#include "condlog/compiled.hpp"

namespace condlog {

// ---------------------------------------------------------------- ordinals

Ordinal Ordinal::finite(long n) {
    Ordinal o;
    if (n > 0) o.terms.push_back({0, n});
    return o;
}

Ordinal Ordinal::omega_pow(int e) {
    Ordinal o;
    o.terms.push_back({e, 1});
    return o;
}

bool Ordinal::is_successor() const { return !terms.empty() && terms.back().first == 0; }

int Ordinal::degree() const { return terms.empty() ? -1 : terms.front().first; }

std::string Ordinal::str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        auto [e, c] = terms[i];
        if (i) s += "+";
        if (e == 0) {
            s += std::to_string(c);
            continue;
        }
        s += e == 1 ? "w" : "w^" + std::to_string(e);
        if (c != 1) s += "*" + std::to_string(c);
    }
    return s;
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
    if (b.terms.empty()) return a;
    int e = b.terms.front().first;
    Ordinal r;
    long carry = 0;
    for (auto [x, c] : a.terms) {
        if (x > e) r.terms.push_back({x, c});
        else if (x == e) carry = c;
    }
    bool firstb = true;
    for (auto [x, c] : b.terms) {
        r.terms.push_back({x, firstb ? c + carry : c});
        firstb = false;
    }
    return r;
}

bool operator<(const Ordinal& a, const Ordinal& b) {
    std::size_t n = std::min(a.terms.size(), b.terms.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto [ea, ca] = a.terms[i];
        auto [eb, cb] = b.terms[i];
        if (ea != eb) return ea < eb;
        if (ca != cb) return ca < cb;
    }
    return a.terms.size() < b.terms.size();
}

Ordinal times_finite(const Ordinal& a, long n) {
    if (n <= 0 || a.is_zero()) return {};
    Ordinal r = a;
    r.terms.front().second *= n;
    return r;
}

Ordinal times_omega(const Ordinal& a) {
    if (a.is_zero()) return {};
    return Ordinal::omega_pow(a.degree() + 1);
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
    if (b < a) throw std::invalid_argument("left_subtract: a > b");
    std::size_t i = 0;
    while (i < a.terms.size() && i < b.terms.size() && a.terms[i] == b.terms[i]) ++i;
    Ordinal g;
    if (i == b.terms.size()) return g;
    if (i < a.terms.size() && a.terms[i].first == b.terms[i].first) {
        g.terms.push_back({b.terms[i].first, b.terms[i].second - a.terms[i].second});
        ++i;
    }
    for (; i < b.terms.size(); ++i) g.terms.push_back(b.terms[i]);
    return g;
}

// ---------------------------------------------------------------- expressions

SeqExpr elem(const std::string& label) {
    return std::make_shared<const SeqNode>(SeqNode{SeqNode::Elem, label, {}});
}

namespace {

SeqExpr raw_cat(std::vector<SeqExpr> parts) {
    return std::make_shared<const SeqNode>(SeqNode{SeqNode::Cat, "", std::move(parts)});
}

SeqExpr raw_omega(SeqExpr body) { return std::make_shared<const SeqNode>(SeqNode{SeqNode::Omega, "", {body}}); }

void blocks_of(const SeqExpr& e, std::vector<SeqExpr>& out) {
    if (!e) return;
    if (e->kind == SeqNode::Cat) {
        for (const auto& p : e->parts) blocks_of(p, out);
    } else {
        out.push_back(e);
    }
}

SeqExpr from_blocks(const std::vector<SeqExpr>& b) {
    if (b.empty()) return nullptr;
    if (b.size() == 1) return b[0];
    return raw_cat(b);
}

bool blocks_equal(const std::vector<SeqExpr>& a, std::size_t ia, const std::vector<SeqExpr>& b, std::size_t ib,
                  std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
        if (!struct_equal(a[ia + k], b[ib + k])) return false;
    return true;
}

SeqExpr norm(const SeqExpr& e);

SeqExpr norm_omega(const SeqExpr& body) {
    std::vector<SeqExpr> b;
    blocks_of(norm(body), b);
    if (b.empty()) throw std::invalid_argument("omega repetition of an empty body");
    // shortest period
    for (std::size_t p = 1; p < b.size(); ++p) {
        if (b.size() % p) continue;
        bool ok = true;
        for (std::size_t k = p; k < b.size() && ok; ++k) ok = struct_equal(b[k], b[k - p]);
        if (ok) {
            b.resize(p);
            break;
        }
    }
    return raw_omega(from_blocks(b));
}

SeqExpr norm(const SeqExpr& e) {
    if (!e) return nullptr;
    switch (e->kind) {
        case SeqNode::Elem: return e;
        case SeqNode::Omega: return norm_omega(e->parts[0]);
        case SeqNode::Cat: break;
    }
    std::vector<SeqExpr> b;
    for (const auto& p : e->parts) blocks_of(norm(p), b);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t j = 0; j < b.size() && !changed; ++j) {
            if (b[j]->kind != SeqNode::Omega) continue;
            std::vector<SeqExpr> body;
            blocks_of(b[j]->parts[0], body);
            std::size_t m = body.size();
            // x.(y.x)^w -> (x.y)^w, with y possibly empty
            for (std::size_t s = m; s >= 1 && !changed; --s) {
                if (s > j) continue;
                if (!blocks_equal(b, j - s, body, m - s, s)) continue;
                std::vector<SeqExpr> nb(body.end() - long(s), body.end());
                nb.insert(nb.end(), body.begin(), body.end() - long(s));
                SeqExpr om = norm_omega(from_blocks(nb));
                b.erase(b.begin() + long(j - s), b.begin() + long(j) + 1);
                b.insert(b.begin() + long(j - s), om);
                changed = true;
            }
        }
    }
    return from_blocks(b);
}

}  // namespace

SeqExpr cat(std::vector<SeqExpr> parts) {
    std::vector<SeqExpr> keep;
    for (auto& p : parts)
        if (p) keep.push_back(p);
    return from_blocks(keep);
}

SeqExpr omega_rep(SeqExpr body) { return raw_omega(std::move(body)); }

SeqExpr list_expr(const std::vector<std::string>& labels) {
    std::vector<SeqExpr> b;
    for (const auto& l : labels) b.push_back(elem(l));
    return from_blocks(b);
}

SeqExpr normalize_seq(const SeqExpr& e) { return norm(e); }

SeqExpr concat(const SeqExpr& a, const SeqExpr& b) {
    if (!a) return norm(b);
    if (!b) return norm(a);
    return norm(raw_cat({a, b}));
}

bool struct_equal(const SeqExpr& a, const SeqExpr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->label != b->label || a->parts.size() != b->parts.size()) return false;
    for (std::size_t i = 0; i < a->parts.size(); ++i)
        if (!struct_equal(a->parts[i], b->parts[i])) return false;
    return true;
}

Ordinal length(const SeqExpr& e) {
    if (!e) return {};
    switch (e->kind) {
        case SeqNode::Elem: return Ordinal::finite(1);
        case SeqNode::Omega: return times_omega(length(e->parts[0]));
        case SeqNode::Cat: {
            Ordinal s;
            for (const auto& p : e->parts) s = s + length(p);
            return s;
        }
    }
    return {};
}

std::string head(const SeqExpr& e) {
    if (!e) throw std::invalid_argument("head of the empty sequence");
    switch (e->kind) {
        case SeqNode::Elem: return e->label;
        default: return head(e->parts[0]);
    }
}

SeqExpr drop(const SeqExpr& e, const Ordinal& a) {
    if (!e) return nullptr;
    if (a.is_zero()) return e;
    switch (e->kind) {
        case SeqNode::Elem: return nullptr;
        case SeqNode::Cat: {
            Ordinal rem = a;
            for (std::size_t i = 0; i < e->parts.size(); ++i) {
                Ordinal L = length(e->parts[i]);
                if (rem < L) {
                    std::vector<SeqExpr> rest{drop(e->parts[i], rem)};
                    rest.insert(rest.end(), e->parts.begin() + long(i) + 1, e->parts.end());
                    return norm(cat(rest));
                }
                rem = left_subtract(L, rem);
            }
            return nullptr;
        }
        case SeqNode::Omega: {
            const SeqExpr& body = e->parts[0];
            Ordinal L = length(body);
            if (!(a < times_omega(L))) return nullptr;
            long n = 0;
            while (times_finite(L, n + 1) <= a) ++n;
            Ordinal r = left_subtract(times_finite(L, n), a);
            return concat(drop(body, r), e);
        }
    }
    return nullptr;
}

std::string element_at(const SeqExpr& e, const Ordinal& a) {
    SeqExpr t = drop(e, a);
    if (!t) throw std::out_of_range("position " + a.str() + " beyond the sequence");
    return head(t);
}

std::string print_seq(const SeqExpr& e) {
    if (!e) return "";
    switch (e->kind) {
        case SeqNode::Elem: return e->label;
        case SeqNode::Omega: return "(" + print_seq(e->parts[0]) + ")^w";
        case SeqNode::Cat: {
            std::string s;
            for (std::size_t i = 0; i < e->parts.size(); ++i) s += (i ? "," : "") + print_seq(e->parts[i]);
            return s;
        }
    }
    return "";
}

namespace {

struct SeqParser {
    const std::string& s;
    std::size_t p = 0;

    void ws() {
        while (p < s.size() && std::isspace((unsigned char)s[p])) ++p;
    }

    SeqExpr seq() {
        std::vector<SeqExpr> parts{item()};
        ws();
        while (p < s.size() && s[p] == ',') {
            ++p;
            parts.push_back(item());
            ws();
        }
        return cat(parts);
    }

    SeqExpr item() {
        ws();
        if (p < s.size() && s[p] == '(') {
            ++p;
            SeqExpr inner = seq();
            ws();
            if (p >= s.size() || s[p] != ')') throw std::invalid_argument("sequence: expected ')' at " + std::to_string(p));
            ++p;
            if (s.compare(p, 2, "^w") == 0) {
                p += 2;
                return omega_rep(inner);
            }
            return inner;
        }
        std::size_t q = p;
        while (q < s.size() && !std::strchr(",()^ \t\n", s[q])) ++q;
        if (q == p) throw std::invalid_argument("sequence: expected a label at " + std::to_string(p));
        std::string lab = s.substr(p, q - p);
        p = q;
        return elem(lab);
    }
};

}  // namespace

SeqExpr parse_seq(const std::string& text) {
    SeqParser ps{text};
    SeqExpr e = ps.seq();
    ps.ws();
    if (ps.p != text.size()) throw std::invalid_argument("sequence: trailing input at " + std::to_string(ps.p));
    return norm(e);
}

bool expr_equal(const SeqExpr& a0, const SeqExpr& b0) {
    SeqExpr a = norm(a0), b = norm(b0);
    int K = std::max(length(a).degree(), length(b).degree());
    std::set<std::pair<std::string, std::string>> seen;
    std::deque<std::pair<SeqExpr, SeqExpr>> work{{a, b}};
    while (!work.empty()) {
        auto [x, y] = work.front();
        work.pop_front();
        if (!x && !y) continue;
        if (!x || !y) return false;
        if (head(x) != head(y)) return false;
        if (!seen.insert({print_seq(x), print_seq(y)}).second) continue;
        work.push_back({drop(x, Ordinal::finite(1)), drop(y, Ordinal::finite(1))});
        for (int k = 1; k <= K; ++k) work.push_back({drop(x, Ordinal::omega_pow(k)), drop(y, Ordinal::omega_pow(k))});
    }
    return true;
}

// ---------------------------------------------------------------- tails

namespace {

void raw_tails(const SeqExpr& e, std::vector<Tail>& out) {
    switch (e->kind) {
        case SeqNode::Elem: out.push_back({e, {}}); return;
        case SeqNode::Omega: {
            std::vector<Tail> inner;
            raw_tails(e->parts[0], inner);
            for (auto& t : inner) out.push_back({concat(t.expr, e), t.rank});
            return;
        }
        case SeqNode::Cat: {
            Ordinal offset;
            for (std::size_t i = 0; i < e->parts.size(); ++i) {
                std::vector<SeqExpr> rest(e->parts.begin() + long(i) + 1, e->parts.end());
                SeqExpr r = cat(rest);
                std::vector<Tail> inner;
                raw_tails(e->parts[i], inner);
                for (auto& t : inner) out.push_back({concat(t.expr, r), offset + t.rank});
                offset = offset + length(e->parts[i]);
            }
            return;
        }
    }
}

}  // namespace

std::vector<Tail> tails(const SeqExpr& e0) {
    SeqExpr e = norm(e0);
    if (!e) return {};
    std::vector<Tail> raw;
    raw_tails(e, raw);
    std::stable_sort(raw.begin(), raw.end(), [](const Tail& x, const Tail& y) { return x.rank < y.rank; });
    std::vector<Tail> out;
    for (auto& t : raw) {
        bool dup = false;
        for (auto& u : out) {
            if (struct_equal(u.expr, t.expr) || expr_equal(u.expr, t.expr)) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(t);
    }
    return out;
}

SeqExpr lasso_expr(const Lasso& l) {
    std::vector<SeqExpr> parts{list_expr(l.prefix)};
    if (!l.cycle.empty()) parts.push_back(omega_rep(list_expr(l.cycle)));
    return norm(cat(parts));
}

bool to_lasso(const SeqExpr& e0, Lasso& out) {
    SeqExpr e = norm(e0);
    out = {};
    std::vector<SeqExpr> b;
    blocks_of(e, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i]->kind == SeqNode::Elem) {
            out.prefix.push_back(b[i]->label);
            continue;
        }
        if (i + 1 != b.size()) return false;
        std::vector<SeqExpr> body;
        blocks_of(b[i]->parts[0], body);
        for (auto& x : body) {
            if (x->kind != SeqNode::Elem) return false;
            out.cycle.push_back(x->label);
        }
    }
    return true;
}

bool ProtoworldTable::holds(const std::string& atom, const std::string& proto) const {
    auto it = atoms.find(atom);
    return it != atoms.end() && it->second.count(proto);
}

OrderModel induced_order_model(const SeqExpr& root, const ProtoworldTable& table) {
    std::vector<Tail> ts = tails(root);
    OrderModel m;
    for (auto& t : ts) m.frame.names.push_back(print_seq(t.expr));
    m.frame.after.assign(ts.size(), {});
    auto find = [&](const SeqExpr& x) {
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (struct_equal(ts[i].expr, x)) return int(i);
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (expr_equal(ts[i].expr, x)) return int(i);
        throw std::logic_error("tail of a tail missing from the tail set");
    };
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<Tail> sub = tails(ts[i].expr);
        for (auto& t : sub) {
            int j = find(t.expr);
            if (j != int(i)) m.frame.after[i].push_back(j);
        }
    }
    for (const auto& [atom, protos] : table.atoms) {
        std::vector<char> v(ts.size(), 0);
        for (std::size_t i = 0; i < ts.size(); ++i) v[i] = protos.count(head(ts[i].expr)) ? 1 : 0;
        m.val[atom] = v;
    }
    m.designated = 0;
    return m;
}

bool evaluate_seq(const SeqExpr& root, const ProtoworldTable& table, const Formula& f) {
    return evaluate(induced_order_model(root, table), f);
}

// ---------------------------------------------------------------- transforms

LassoModel minimal_representation(const LassoModel& m) {
    SeqExpr e = lasso_expr(m.lasso);
    std::vector<Tail> ts = tails(e);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < ts.size(); ++i) labels.push_back("n" + std::to_string(i));
    auto id_at = [&](long pos) {
        SeqExpr t = drop(e, Ordinal::finite(pos));
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (expr_equal(ts[i].expr, t)) return labels[i];
        throw std::logic_error("position tail not found");
    };
    LassoModel out;
    long P = long(m.lasso.prefix.size()), C = long(m.lasso.cycle.size());
    for (long i = 0; i < P; ++i) out.lasso.prefix.push_back(id_at(i));
    for (long i = 0; i < C; ++i) out.lasso.cycle.push_back(id_at(P + i));
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::string h = head(ts[i].expr);
        for (const auto& [atom, protos] : m.table.atoms) {
            auto& s = out.table.atoms[atom];
            if (protos.count(h)) s.insert(labels[i]);
        }
    }
    Lasso norm_l;
    if (to_lasso(lasso_expr(out.lasso), norm_l)) out.lasso = norm_l;
    return out;
}

Lasso omega_padding(const std::vector<std::string>& l) {
    if (l.empty()) throw std::invalid_argument("omega_padding of an empty list");
    Lasso r;
    r.prefix.assign(l.begin(), l.end() - 1);
    r.cycle = {l.back()};
    return r;
}

namespace {

bool label_sat(const Compiled& c, int node, const ProtoworldTable& t, const std::string& proto) {
    const CNode& n = c.nodes[node];
    switch (n.op) {
        case CNode::Atom: return t.holds(c.atoms[n.atom], proto);
        case CNode::Neg: return !label_sat(c, n.a, t, proto);
        case CNode::And: return label_sat(c, n.a, t, proto) && label_sat(c, n.b, t, proto);
        case CNode::Cond: throw std::invalid_argument("conditional in a Boolean position");
    }
    return false;
}

void h_rec(const Compiled& c, int node, const SeqExpr& s, const ProtoworldTable& t, const Ordinal& base,
           std::vector<Ordinal>& out) {
    const CNode& n = c.nodes[node];
    switch (n.op) {
        case CNode::Atom: out.push_back(base); return;
        case CNode::Neg: h_rec(c, n.a, s, t, base, out); return;
        case CNode::And:
            h_rec(c, n.a, s, t, base, out);
            h_rec(c, n.b, s, t, base, out);
            return;
        case CNode::Cond: {
            out.push_back(base);
            for (const Tail& tl : tails(s)) {
                if (label_sat(c, n.a, t, head(tl.expr))) {
                    h_rec(c, n.b, tl.expr, t, base + tl.rank, out);
                    return;
                }
            }
            return;
        }
    }
}

}  // namespace

std::vector<Ordinal> relevant_positions(const SeqExpr& root, const ProtoworldTable& table, const Formula& f) {
    if (!is_lba(f))
        throw std::invalid_argument("relevant_positions needs a Boolean-antecedent formula");
    Compiled c = compile(f);
    std::vector<Ordinal> out;
    h_rec(c, c.root, norm(root), table, {}, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> restrict_seq(const SeqExpr& root, const std::vector<Ordinal>& X) {
    std::vector<Ordinal> xs = X;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<std::string> out;
    Ordinal L = length(root);
    for (const auto& x : xs) {
        if (!(x < L)) throw std::out_of_range("position " + x.str() + " outside the sequence");
        out.push_back(element_at(root, x));
    }
    return out;
}

}  // namespace condlog
