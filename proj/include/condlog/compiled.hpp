#pragma once

#include <string>
#include <vector>

#include "condlog/formula.hpp"

namespace condlog {

// A formula flattened into a hash-consed DAG over the core connectives.
// Children always precede parents, so a forward sweep evaluates everything.
struct CNode {
    enum Op { Atom, Neg, And, Cond } op;
    int a = -1;
    int b = -1;
    int atom = -1;  // index into Compiled::atoms
};

struct Compiled {
    std::vector<CNode> nodes;
    std::vector<std::string> atoms;
    std::vector<int> conds;  // node ids of Cond nodes, in DAG order (inner first)
    int root = -1;

    [[nodiscard]] int cond_index(int node) const;  // position in conds or -1
};

// Normalizes, strips double negations and shares equal subterms.
// Atoms listed in `atom_order` get those indices; others are appended sorted.
[[nodiscard]] Compiled compile(const Formula& f, const std::vector<std::string>& atom_order = {});

// Compile several formulas into one DAG; returns root ids in order.
[[nodiscard]] Compiled compile_many(const std::vector<Formula>& fs, std::vector<int>& roots,
                                    const std::vector<std::string>& atom_order = {});

}  // namespace condlog
