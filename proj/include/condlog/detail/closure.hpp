#pragma once

#include <algorithm>
#include <vector>

#include "condlog/schemas.hpp"

namespace condlog::detail {

// Closure of `gens` under concatenation (and omega when `with_omega`) over an
// engine whose values are interned ints: e.concat(a, b), e.omega(a).
// Returns the ids of every value reached.
template <class Engine>
std::vector<int> closure(Engine& e, const std::vector<int>& gens, bool with_omega) {
    std::vector<int> V;
    std::vector<char> inV, isGen, omegaDone;
    auto ensure = [&](int id) {
        if (std::size_t(id) >= inV.size()) {
            inV.resize(id + 1, 0);
            isGen.resize(id + 1, 0);
            omegaDone.resize(id + 1, 0);
        }
    };
    auto addV = [&](int id) {
        ensure(id);
        if (!inV[id]) {
            inV[id] = 1;
            V.push_back(id);
        }
    };
    std::vector<int> G;
    auto addG = [&](int id) {
        ensure(id);
        if (!isGen[id]) {
            isGen[id] = 1;
            G.push_back(id);
        }
        addV(id);
    };
    for (int g : gens) addG(g);
    std::vector<std::size_t> done;  // per V position, generators multiplied so far
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < V.size(); ++i) {
            if (done.size() <= i) done.push_back(0);
            while (done[i] < G.size()) {
                int r = e.concat(V[i], G[done[i]++]);
                ensure(r);
                if (!inV[r]) changed = true;
                addV(r);
            }
            if (with_omega && !omegaDone[V[i]]) {
                omegaDone[V[i]] = 1;
                int r = e.omega(V[i]);
                ensure(r);
                if (!isGen[r]) changed = true;
                addG(r);
            }
        }
    }
    return V;
}

// Root values of the logic's sequence class built from the element values:
// ordinal sequences (c2f), omega-sequences as lassos (c2fs), sequences of
// successor length (c2fm), finite lists (c2fsm). Empty for c2.
template <class Engine>
std::vector<int> class_roots(Engine& e, const std::vector<int>& elems, Logic logic) {
    std::vector<int> roots;
    switch (logic) {
        case Logic::C2F: roots = closure(e, elems, true); break;
        case Logic::C2FSM: roots = closure(e, elems, false); break;
        case Logic::C2FS: {
            std::vector<int> W = closure(e, elems, false);
            std::vector<int> O;
            for (int w : W) O.push_back(e.omega(w));
            std::sort(O.begin(), O.end());
            O.erase(std::unique(O.begin(), O.end()), O.end());
            roots = O;
            for (int u : W)
                for (int o : O) roots.push_back(e.concat(u, o));
            break;
        }
        case Logic::C2FM: {
            std::vector<int> V = closure(e, elems, true);
            roots = elems;
            for (int v : V)
                for (int x : elems) roots.push_back(e.concat(v, x));
            break;
        }
        case Logic::C2: break;
    }
    return roots;
}

}  // namespace condlog::detail
