#pragma once
// Helpers shared by the unit tests and the acceptance binary.

#include <array>
#include <cstdio>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "condlog/formula.hpp"
#include "condlog/seq_model.hpp"

namespace testsupport {

struct Run {
    int code = -1;
    std::string out;
};

inline std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

// Runs the CLI with the given arguments; stderr is discarded.
inline Run cli(const std::vector<std::string>& args) {
    std::string cmd = CONDLOG_CLI;
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

inline std::string data(const std::string& rel) { return std::string(CONDLOG_DATA) + "/" + rel; }

// Random formulas over the given atoms.
class FormulaGen {
public:
    FormulaGen(std::uint64_t seed, std::vector<std::string> atoms) : rng_(seed), atoms_(std::move(atoms)) {}

    condlog::Formula boolean(int depth) {
        using namespace condlog;
        if (depth <= 0 || pick(3) == 0) return atom(atoms_[pick(int(atoms_.size()))]);
        switch (pick(3)) {
            case 0: return neg(boolean(depth - 1));
            case 1: return conj(boolean(depth - 1), boolean(depth - 1));
            default: return disj(boolean(depth - 1), boolean(depth - 1));
        }
    }

    // modal depth <= depth, at most `budget` conditionals
    condlog::Formula lba(int depth, int& budget) {
        using namespace condlog;
        if (depth <= 0 || budget <= 0 || pick(4) == 0) return boolean(1);
        switch (pick(4)) {
            case 0: return neg(lba(depth, budget));
            case 1: {
                Formula a = lba(depth, budget);
                return conj(a, lba(depth, budget));
            }
            default: {
                --budget;
                Formula a = boolean(1);
                return cond(a, lba(depth - 1, budget));
            }
        }
    }

    condlog::Formula any(int depth) {
        using namespace condlog;
        if (depth <= 0 || pick(4) == 0) return atom(atoms_[pick(int(atoms_.size()))]);
        switch (pick(5)) {
            case 0: return neg(any(depth - 1));
            case 1: return conj(any(depth - 1), any(depth - 1));
            case 2: return disj(any(depth - 1), any(depth - 1));
            default: return cond(any(depth - 1), any(depth - 1));
        }
    }

    // every node kind, metavariables excluded
    condlog::Formula full(int depth) {
        using namespace condlog;
        if (depth <= 0 || pick(5) == 0) {
            int k = pick(12);
            if (k == 0) return bot();
            if (k == 1) return top();
            return atom(atoms_[pick(int(atoms_.size()))]);
        }
        auto l = [&] { return full(depth - 1); };
        switch (pick(10)) {
            case 0: return neg(l());
            case 1: return conj(l(), l());
            case 2: return disj(l(), l());
            case 3: return cond(l(), l());
            case 4: return imp(l(), l());
            case 5: return iff(l(), l());
            case 6: return box(l());
            case 7: return dia(l());
            case 8: return scond(l(), l());
            default: return neg(neg(l()));
        }
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::vector<std::string> atoms_;
};

// Random sequence expressions over labels s0..s{k-1}, omega-nesting <= 2.
inline condlog::SeqExpr random_seq(std::mt19937_64& rng, int labels, int depth) {
    using namespace condlog;
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    if (depth <= 0 || pick(3) == 0) return elem("s" + std::to_string(pick(labels)));
    if (pick(3) == 0) return omega_rep(random_seq(rng, labels, depth - 1));
    std::vector<SeqExpr> parts;
    int n = 2 + pick(2);
    for (int i = 0; i < n; ++i) parts.push_back(random_seq(rng, labels, depth - 1));
    return cat(parts);
}

// A random categorical table: each atom holds at a random subset of labels.
inline condlog::ProtoworldTable random_table(std::mt19937_64& rng, int labels, const std::vector<std::string>& atoms) {
    condlog::ProtoworldTable t;
    for (const auto& a : atoms) {
        auto& s = t.atoms[a];
        for (int i = 0; i < labels; ++i)
            if (rng() & 1) s.insert("s" + std::to_string(i));
    }
    return t;
}

}  // namespace testsupport
