#include "condlog/compiled.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace condlog {

int Compiled::cond_index(int node) const {
    auto it = std::find(conds.begin(), conds.end(), node);
    return it == conds.end() ? -1 : int(it - conds.begin());
}

namespace {

struct Builder {
    Compiled& c;
    std::map<std::tuple<int, int, int, int>, int> memo;
    std::map<std::string, int> atom_ids;

    int add(CNode n) {
        auto k = std::make_tuple(int(n.op), n.a, n.b, n.atom);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        int id = int(c.nodes.size());
        c.nodes.push_back(n);
        if (n.op == CNode::Cond) c.conds.push_back(id);
        memo.emplace(k, id);
        return id;
    }

    int go(const Formula& f) {
        switch (f->kind) {
            case Kind::Atom:
            case Kind::Meta: {
                std::string nm = f->kind == Kind::Meta ? "?" + f->name : f->name;
                return add({CNode::Atom, -1, -1, atom_ids.at(nm)});
            }
            case Kind::Neg: return add({CNode::Neg, go(f->a), -1, -1});
            case Kind::And: {
                int a = go(f->a);
                int b = go(f->b);
                return add({CNode::And, a, b, -1});
            }
            case Kind::Cond: {
                int a = go(f->a);
                int b = go(f->b);
                return add({CNode::Cond, a, b, -1});
            }
            default: throw std::logic_error("compile: non-core node after normalize");
        }
    }
};

void gather_atoms(const Formula& f, std::set<std::string>& out) {
    if (f->kind == Kind::Atom) out.insert(f->name);
    if (f->kind == Kind::Meta) out.insert("?" + f->name);
    if (f->a) gather_atoms(f->a, out);
    if (f->b) gather_atoms(f->b, out);
}

}  // namespace

Compiled compile_many(const std::vector<Formula>& fs, std::vector<int>& roots,
                      const std::vector<std::string>& atom_order) {
    Compiled c;
    Builder b{c, {}, {}};
    std::vector<Formula> core;
    std::set<std::string> seen;
    for (const auto& f : fs) {
        core.push_back(dn_canon(normalize(f)));
        gather_atoms(core.back(), seen);
    }
    for (const auto& a : atom_order) {
        if (!b.atom_ids.count(a)) {
            b.atom_ids[a] = int(c.atoms.size());
            c.atoms.push_back(a);
        }
    }
    for (const auto& a : seen) {
        if (!b.atom_ids.count(a)) {
            b.atom_ids[a] = int(c.atoms.size());
            c.atoms.push_back(a);
        }
    }
    roots.clear();
    for (const auto& f : core) roots.push_back(b.go(f));
    c.root = roots.empty() ? -1 : roots.back();
    return c;
}

Compiled compile(const Formula& f, const std::vector<std::string>& atom_order) {
    std::vector<int> roots;
    Compiled c = compile_many({f}, roots, atom_order);
    c.root = roots[0];
    return c;
}

}  // namespace condlog
