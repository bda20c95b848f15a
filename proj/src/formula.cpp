#include "condlog/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace condlog {

ParseError::ParseError(std::size_t off, const std::string& msg)
    : std::runtime_error("offset " + std::to_string(off) + ": " + msg), offset(off) {}

namespace {

Formula mk(Kind k, Formula a = nullptr, Formula b = nullptr, std::string name = {}) {
    return std::make_shared<const Node>(Node{k, std::move(name), std::move(a), std::move(b)});
}

}  // namespace

Formula atom(const std::string& name) { return mk(Kind::Atom, nullptr, nullptr, name); }
Formula atom(int index) { return atom("p" + std::to_string(index)); }
Formula meta(const std::string& name) { return mk(Kind::Meta, nullptr, nullptr, name); }
Formula neg(Formula f) { return mk(Kind::Neg, std::move(f)); }
Formula conj(Formula l, Formula r) { return mk(Kind::And, std::move(l), std::move(r)); }
Formula cond(Formula l, Formula r) { return mk(Kind::Cond, std::move(l), std::move(r)); }
Formula disj(Formula l, Formula r) { return mk(Kind::Or, std::move(l), std::move(r)); }
Formula imp(Formula l, Formula r) { return mk(Kind::MatImp, std::move(l), std::move(r)); }
Formula iff(Formula l, Formula r) { return mk(Kind::MatIff, std::move(l), std::move(r)); }
Formula box(Formula f) { return mk(Kind::Box, std::move(f)); }
Formula dia(Formula f) { return mk(Kind::Dia, std::move(f)); }
Formula scond(Formula l, Formula r) { return mk(Kind::StrongCond, std::move(l), std::move(r)); }
Formula bot() { return mk(Kind::Bot); }
Formula top() { return mk(Kind::Top); }

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = conj(r, fs[i]);
    return r;
}

Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = disj(r, fs[i]);
    return r;
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { Ident, Meta, Not, And, Or, Imp, Iff, Gt, GtGt, Box, Dia, Top, Bot, LP, RP, End };

struct Token {
    Tok t;
    std::string text;
    std::size_t off;
};

struct Alias {
    const char* s;
    Tok t;
};

// longest first so "->" beats ">" etc.
const Alias kAliases[] = {
    {"<->", Tok::Iff}, {"->", Tok::Imp}, {">>", Tok::GtGt}, {"[]", Tok::Box}, {"<>", Tok::Dia},
    {"#t", Tok::Top},  {"#f", Tok::Bot}, {">", Tok::Gt},    {"~", Tok::Not},  {"&", Tok::And},
    {"|", Tok::Or},    {"(", Tok::LP},   {")", Tok::RP},    {"¬", Tok::Not},  {"∧", Tok::And},
    {"∨", Tok::Or},    {"→", Tok::Imp},  {"↔", Tok::Iff},   {"□", Tok::Box},  {"◇", Tok::Dia},
    {"⊤", Tok::Top},   {"⊥", Tok::Bot},  {"≫", Tok::GtGt},
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        if (c == '?') {
            std::size_t j = i + 1;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            if (j == i + 1) throw ParseError(i, "empty metavariable name");
            out.push_back({Tok::Meta, s.substr(i + 1, j - i - 1), i});
            i = j;
            continue;
        }
        bool hit = false;
        for (const auto& a : kAliases) {
            std::size_t n = std::char_traits<char>::length(a.s);
            if (s.compare(i, n, a.s) == 0) {
                out.push_back({a.t, a.s, i});
                i += n;
                hit = true;
                break;
            }
        }
        if (!hit) throw ParseError(i, std::string("unexpected character '") + s[i] + "'");
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

// Precedence, tightest first: unary; > >>; &; |; -> <->.
class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    Formula run() {
        Formula f = top_level();
        if (peek().t != Tok::End) throw ParseError(peek().off, "trailing input");
        return f;
    }

  private:
    std::vector<Token> t_;
    std::size_t p_ = 0;

    const Token& peek() const { return t_[p_]; }
    const Token& next() { return t_[p_++]; }

    Formula top_level() {
        Formula l = disjunction();
        Tok k = peek().t;
        if (k == Tok::Imp || k == Tok::Iff) {
            next();
            Formula r = disjunction();
            if (peek().t == Tok::Imp || peek().t == Tok::Iff)
                throw ParseError(peek().off, "ambiguous: chained -> or <-> needs parentheses");
            return k == Tok::Imp ? imp(l, r) : iff(l, r);
        }
        return l;
    }

    Formula disjunction() {
        Formula l = conjunction();
        while (peek().t == Tok::Or) {
            next();
            l = disj(l, conjunction());
        }
        return l;
    }

    Formula conjunction() {
        Formula l = conditional();
        while (peek().t == Tok::And) {
            next();
            l = conj(l, conditional());
        }
        return l;
    }

    Formula conditional() {
        Formula l = unary();
        Tok k = peek().t;
        if (k == Tok::Gt || k == Tok::GtGt) {
            next();
            Formula r = unary();
            if (peek().t == Tok::Gt || peek().t == Tok::GtGt)
                throw ParseError(peek().off, "ambiguous: nested conditional needs parentheses");
            return k == Tok::Gt ? cond(l, r) : scond(l, r);
        }
        return l;
    }

    Formula unary() {
        const Token& tk = peek();
        switch (tk.t) {
            case Tok::Not: next(); return neg(unary());
            case Tok::Box: next(); return box(unary());
            case Tok::Dia: next(); return dia(unary());
            case Tok::Top: next(); return top();
            case Tok::Bot: next(); return bot();
            case Tok::Ident: next(); return atom(tk.text);
            case Tok::Meta: next(); return meta(tk.text);
            case Tok::LP: {
                next();
                Formula f = top_level();
                if (peek().t != Tok::RP) throw ParseError(peek().off, "expected ')'");
                next();
                return f;
            }
            case Tok::End: throw ParseError(tk.off, "unexpected end of input");
            default: throw ParseError(tk.off, "unexpected token '" + tk.text + "'");
        }
    }
};

}  // namespace

Formula parse(const std::string& text) { return Parser(lex(text)).run(); }

// ---------------------------------------------------------------- printer

namespace {

int level(Kind k) {
    switch (k) {
        case Kind::MatImp:
        case Kind::MatIff: return 1;
        case Kind::Or: return 2;
        case Kind::And: return 3;
        case Kind::Cond:
        case Kind::StrongCond: return 4;
        default: return 5;
    }
}

struct Sym {
    const char *neg, *band, *bor, *imp, *iff, *gt, *gtgt, *box, *dia, *top, *bot;
};

const Sym kAscii{"~", " & ", " | ", " -> ", " <-> ", " > ", " >> ", "[]", "<>", "#t", "#f"};
const Sym kUni{"¬", " ∧ ", " ∨ ", " → ", " ↔ ", " > ", " ≫ ", "□", "◇", "⊤", "⊥"};

void emit(const Formula& f, const Sym& s, std::string& out);

void emit_at(const Formula& f, int min_level, const Sym& s, std::string& out) {
    if (level(f->kind) < min_level) {
        out += '(';
        emit(f, s, out);
        out += ')';
    } else {
        emit(f, s, out);
    }
}

void emit(const Formula& f, const Sym& s, std::string& out) {
    switch (f->kind) {
        case Kind::Atom: out += f->name; return;
        case Kind::Meta: out += '?' + f->name; return;
        case Kind::Top: out += s.top; return;
        case Kind::Bot: out += s.bot; return;
        case Kind::Neg: out += s.neg; emit_at(f->a, 5, s, out); return;
        case Kind::Box: out += s.box; emit_at(f->a, 5, s, out); return;
        case Kind::Dia: out += s.dia; emit_at(f->a, 5, s, out); return;
        case Kind::And:
            emit_at(f->a, 3, s, out);
            out += s.band;
            emit_at(f->b, 4, s, out);
            return;
        case Kind::Or:
            emit_at(f->a, 2, s, out);
            out += s.bor;
            emit_at(f->b, 3, s, out);
            return;
        case Kind::Cond:
        case Kind::StrongCond:
            emit_at(f->a, 5, s, out);
            out += f->kind == Kind::Cond ? s.gt : s.gtgt;
            emit_at(f->b, 5, s, out);
            return;
        case Kind::MatImp:
        case Kind::MatIff:
            emit_at(f->a, 2, s, out);
            out += f->kind == Kind::MatImp ? s.imp : s.iff;
            emit_at(f->b, 2, s, out);
            return;
    }
}

}  // namespace

std::string print(const Formula& f, Style style) {
    std::string out;
    emit(f, style == Style::ascii ? kAscii : kUni, out);
    return out;
}

// ---------------------------------------------------------------- normal forms

Formula normalize(const Formula& f) {
    switch (f->kind) {
        case Kind::Atom:
        case Kind::Meta: return f;
        case Kind::Bot: return conj(atom(0), neg(atom(0)));
        case Kind::Top: return neg(normalize(bot()));
        case Kind::Neg: return neg(normalize(f->a));
        case Kind::And: return conj(normalize(f->a), normalize(f->b));
        case Kind::Cond: return cond(normalize(f->a), normalize(f->b));
        case Kind::Or: return neg(conj(neg(normalize(f->a)), neg(normalize(f->b))));
        case Kind::MatImp: return neg(conj(normalize(f->a), neg(normalize(f->b))));
        case Kind::MatIff: {
            Formula a = normalize(f->a), b = normalize(f->b);
            return conj(neg(conj(a, neg(b))), neg(conj(b, neg(a))));
        }
        case Kind::Box: {
            Formula a = normalize(f->a);
            return cond(neg(a), a);
        }
        case Kind::Dia: {
            // ◇φ is ¬□¬φ with the □ expansion applied to ¬φ
            Formula na = neg(normalize(f->a));
            return neg(cond(neg(na), na));
        }
        case Kind::StrongCond: return neg(cond(normalize(f->a), neg(normalize(f->b))));
    }
    return f;
}

Formula dn_canon(const Formula& f) {
    switch (f->kind) {
        case Kind::Neg:
            if (f->a->kind == Kind::Neg) return dn_canon(f->a->a);
            return neg(dn_canon(f->a));
        case Kind::Atom:
        case Kind::Meta:
        case Kind::Bot:
        case Kind::Top: return f;
        case Kind::Box: return box(dn_canon(f->a));
        case Kind::Dia: return dia(dn_canon(f->a));
        default: return mk(f->kind, dn_canon(f->a), dn_canon(f->b));
    }
}

bool same(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name) return false;
    if ((a->a == nullptr) != (b->a == nullptr) || (a->b == nullptr) != (b->b == nullptr)) return false;
    if (a->a && !same(a->a, b->a)) return false;
    if (a->b && !same(a->b, b->b)) return false;
    return true;
}

bool equiv_dn(const Formula& a, const Formula& b) {
    return same(dn_canon(normalize(a)), dn_canon(normalize(b)));
}

std::string key(const Formula& f) { return print(dn_canon(normalize(f))); }

int modal_depth(const Formula& f) {
    std::function<int(const Formula&)> go = [&](const Formula& g) -> int {
        switch (g->kind) {
            case Kind::Atom:
            case Kind::Meta: return 0;
            case Kind::Neg: return go(g->a);
            case Kind::And: return std::max(go(g->a), go(g->b));
            case Kind::Cond: return 1 + std::max(go(g->a), go(g->b));
            default: return 0;
        }
    };
    return go(normalize(f));
}

bool is_boolean(const Formula& f) { return modal_depth(f) == 0; }

namespace {

bool all_antecedents_boolean(const Formula& g) {
    switch (g->kind) {
        case Kind::Neg: return all_antecedents_boolean(g->a);
        case Kind::And: return all_antecedents_boolean(g->a) && all_antecedents_boolean(g->b);
        case Kind::Cond: return modal_depth(g->a) == 0 && all_antecedents_boolean(g->b);
        default: return true;
    }
}

bool only_box_shapes(const Formula& g) {
    switch (g->kind) {
        case Kind::Neg: return only_box_shapes(g->a);
        case Kind::And: return only_box_shapes(g->a) && only_box_shapes(g->b);
        case Kind::Cond:
            return g->a->kind == Kind::Neg && same(dn_canon(g->a->a), dn_canon(g->b)) && only_box_shapes(g->b);
        default: return true;
    }
}

}  // namespace

Fragment classify_fragment(const Formula& f) {
    Formula n = normalize(f);
    if (modal_depth(n) == 0) return Fragment::boolean;
    // □p -> p is in both fragments; the narrower label wins
    if (only_box_shapes(n)) return Fragment::modal;
    if (all_antecedents_boolean(n)) return Fragment::boolean_antecedent;
    return Fragment::general;
}

bool is_lba(const Formula& f) { return all_antecedents_boolean(normalize(f)); }

const char* fragment_name(Fragment fr) {
    switch (fr) {
        case Fragment::boolean: return "boolean";
        case Fragment::boolean_antecedent: return "boolean_antecedent";
        case Fragment::modal: return "modal";
        case Fragment::general: return "general";
    }
    return "?";
}

namespace {

void collect(const Formula& f, Kind k, std::set<std::string>& out) {
    if (f->kind == k) out.insert(f->name);
    if (f->a) collect(f->a, k, out);
    if (f->b) collect(f->b, k, out);
}

}  // namespace

std::vector<std::string> atoms_of(const Formula& f) {
    std::set<std::string> s;
    collect(normalize(f), Kind::Atom, s);
    return {s.begin(), s.end()};
}

std::vector<std::string> metas_of(const Formula& f) {
    std::set<std::string> s;
    collect(f, Kind::Meta, s);
    return {s.begin(), s.end()};
}

namespace {

Formula subst(const Formula& f, Kind k, const Binding& b) {
    if (f->kind == k) {
        auto it = b.find(f->name);
        if (it != b.end()) return it->second;
        if (k == Kind::Meta) throw BindingError("missing binding for ?" + f->name);
        return f;
    }
    if (!f->a) return f;
    return mk(f->kind, subst(f->a, k, b), f->b ? subst(f->b, k, b) : nullptr);
}

}  // namespace

Formula instantiate(const Schema& s, const Binding& b) { return subst(s.tmpl, Kind::Meta, b); }

Formula substitute_atoms(const Formula& f, const Binding& b) { return subst(f, Kind::Atom, b); }

}  // namespace condlog
