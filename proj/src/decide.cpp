#include "condlog/decide.hpp"

#include <algorithm>
#include <stdexcept>

namespace condlog {

const char* status_name(Status s) {
    switch (s) {
        case Status::SAT: return "SAT";
        case Status::UNSAT_EXACT: return "UNSAT_EXACT";
        case Status::UNSAT_WITHIN_BOUND: return "UNSAT_WITHIN_BOUND";
        case Status::VALID_EXACT: return "VALID_EXACT";
        case Status::VALID_WITHIN_BOUND: return "VALID_WITHIN_BOUND";
        case Status::INVALID: return "INVALID";
        case Status::BUDGET_EXCEEDED: return "BUDGET_EXCEEDED";
    }
    return "?";
}

bool replay(const Found& w, const Formula& f, bool expected) {
    if (evaluate(w.model, f) != expected) return false;
    if (w.seq && evaluate_seq(w.seq, w.table, f) != expected) return false;
    return true;
}

namespace {

// Size up to which the first bounded pass runs before the exact engines.
// Small witnesses read better than the engines' reachable-type models.
int small_bound(const Formula& f, Logic logic, int bound) {
    int atoms = int(atoms_of(f).size());
    int s = logic == Logic::C2 ? (atoms <= 3 ? 4 : 3) : 4;
    if (atoms > 4) s = 2;
    return std::min(bound, s);
}

Verdict checked(Verdict v, const Formula& f) {
    if (v.model && !replay(*v.model, f, true)) throw std::logic_error("witness failed to replay");
    return v;
}

}  // namespace

Verdict satisfiable(const Formula& f, Logic logic, const SearchBudget& budget) {
    Deadline dl = Deadline::after_ms(budget.deadline_ms);
    Verdict v;
    try {
        if (!budget.bounded_only) {
            int small = small_bound(f, logic, budget.bound);
            if (auto r = bounded_sat(f, logic, small, dl)) {
                v.status = Status::SAT;
                v.model = std::move(r);
                v.route = "bounded";
                return checked(std::move(v), f);
            }
            if (auto e = exact_sat(f, logic, budget.limits, dl)) {
                v.route = "exact";
                if (e->sat) {
                    v.status = Status::SAT;
                    v.model = std::move(e->witness);
                    return checked(std::move(v), f);
                }
                v.status = Status::UNSAT_EXACT;
                return v;
            }
        }
        v.route = "bounded";
        if (auto r = bounded_sat(f, logic, budget.bound, dl)) {
            v.status = Status::SAT;
            v.model = std::move(r);
            return checked(std::move(v), f);
        }
        v.status = Status::UNSAT_WITHIN_BOUND;
        v.bound = budget.bound;
        return v;
    } catch (const DeadlineExceeded&) {
        v.status = Status::BUDGET_EXCEEDED;
        v.model.reset();
        return v;
    }
}

Verdict valid(const Formula& f, Logic logic, const SearchBudget& budget) {
    Verdict v = satisfiable(neg(f), logic, budget);
    switch (v.status) {
        case Status::SAT: v.status = Status::INVALID; break;
        case Status::UNSAT_EXACT: v.status = Status::VALID_EXACT; break;
        case Status::UNSAT_WITHIN_BOUND: v.status = Status::VALID_WITHIN_BOUND; break;
        default: break;
    }
    return v;
}

std::optional<Found> countermodel(const Formula& f, Logic logic, const SearchBudget& budget) {
    Verdict v = valid(f, logic, budget);
    if (v.status == Status::INVALID) return v.model;
    return std::nullopt;
}

// ---------------------------------------------------------------- schema testing

const char* schema_class_name(SchemaClass c) {
    switch (c) {
        case SchemaClass::order_all: return "all";
        case SchemaClass::order_flat: return "flat";
        case SchemaClass::order_flat_ancestral: return "flat-ancestral";
        case SchemaClass::ordinal_seq: return "ordinal";
        case SchemaClass::lasso: return "lasso";
        case SchemaClass::final_seq: return "final";
        case SchemaClass::list: return "list";
    }
    return "?";
}

SchemaClass parse_schema_class(const std::string& s) {
    for (auto c : {SchemaClass::order_all, SchemaClass::order_flat, SchemaClass::order_flat_ancestral,
                   SchemaClass::ordinal_seq, SchemaClass::lasso, SchemaClass::final_seq, SchemaClass::list})
        if (s == schema_class_name(c)) return c;
    throw std::invalid_argument("unknown frame class '" + s + "'");
}

SchemaReport test_formula_on_class(const Formula& f, SchemaClass cls, int max_size, const Deadline& dl) {
    SchemaReport rep;
    rep.max_size = max_size;
    Compiled c = compile(neg(f));
    auto try_frame = [&](const OrderFrame& fr) {
        ++rep.frames_checked;
        int w = -1;
        Valuation v;
        if (!sweep_frame_any(fr, c, &w, &v, dl)) return false;
        rep.valid = false;
        Found fd;
        fd.model = OrderModel{fr, v, w};
        fd.size = int(fr.size());
        rep.counter = std::move(fd);
        return true;
    };
    if (cls == SchemaClass::order_all || cls == SchemaClass::order_flat ||
        cls == SchemaClass::order_flat_ancestral) {
        FrameClass fc = cls == SchemaClass::order_all    ? FrameClass::all
                        : cls == SchemaClass::order_flat ? FrameClass::flat
                                                         : FrameClass::flat_ancestral;
        for (int n = 1; n <= max_size; ++n)
            for (const auto& fr : enumerate_frames(n, fc, std::max(4, max_size)))
                if (try_frame(fr)) return rep;
        return rep;
    }
    Logic logic = cls == SchemaClass::ordinal_seq ? Logic::C2F
                  : cls == SchemaClass::lasso     ? Logic::C2FS
                  : cls == SchemaClass::final_seq ? Logic::C2FM
                                                  : Logic::C2FSM;
    for (int k = 1; k <= max_size; ++k)
        for (const SeqExpr& e : sequence_shapes(k, logic)) {
            OrderModel base = induced_order_model(e, {});
            if (!try_frame(base.frame)) continue;
            // lift the valuation to protoworlds so the witness is a sequence model
            Found& fd = *rep.counter;
            fd.seq = e;
            for (const auto& [a, bits] : fd.model.val) {
                auto& s = fd.table.atoms[a];
                for (std::size_t w = 0; w < bits.size(); ++w)
                    if (bits[w]) s.insert(head(parse_seq(base.frame.names[w])));
            }
            int w = fd.model.designated;
            fd.seq = parse_seq(base.frame.names[w]);
            fd.model = induced_order_model(fd.seq, fd.table);
            return rep;
        }
    return rep;
}

SchemaReport test_schema(const Schema& s, SchemaClass cls, int max_size, const Deadline& dl) {
    return test_formula_on_class(plain_instance(s), cls, max_size, dl);
}

// ---------------------------------------------------------------- modal fragment

Logic logic_for(ModalSystem s) {
    switch (s) {
        case ModalSystem::KT: return Logic::C2;
        case ModalSystem::S43: return Logic::C2F;
        case ModalSystem::S431: return Logic::C2FS;
    }
    return Logic::C2;
}

const char* modal_system_name(ModalSystem s) {
    switch (s) {
        case ModalSystem::KT: return "KT";
        case ModalSystem::S43: return "S4.3";
        case ModalSystem::S431: return "S4.3.1";
    }
    return "?";
}

ModalSystem parse_modal_system(const std::string& s) {
    std::string t;
    for (char ch : s)
        if (ch != '.') t += char(std::toupper((unsigned char)ch));
    if (t == "KT") return ModalSystem::KT;
    if (t == "S43") return ModalSystem::S43;
    if (t == "S431") return ModalSystem::S431;
    throw std::invalid_argument("unknown modal system '" + s + "'");
}

namespace {

KripkeModel to_kripke(const OrderModel& m) {
    KripkeModel k;
    k.names = m.frame.names;
    int n = int(m.frame.size());
    k.rel.assign(n, std::vector<char>(n, 0));
    for (int w = 0; w < n; ++w)
        for (int x = 0; x < n; ++x) k.rel[w][x] = m.frame.accessible(w, x);
    k.val = m.val;
    k.designated = m.designated;
    return k;
}

}  // namespace

ModalVerdict decide_modal(const Formula& f, ModalSystem sys, int bound) {
    Fragment fr = classify_fragment(f);
    if (fr != Fragment::modal && fr != Fragment::boolean)
        throw FragmentError("formula is not in the modal fragment");
    ModalVerdict out;
    auto k = kripke_countermodel(f, sys, bound);
    Verdict cond = valid(f, logic_for(sys));
    if (k) {
        if (evaluate_kripke(*k, f, k->designated)) throw std::logic_error("kripke countermodel failed to replay");
        if (cond.status == Status::VALID_EXACT)
            throw std::logic_error("modal search and conditional engine disagree");
        out.status = Status::INVALID;
        out.kripke = std::move(k);
        out.route = "kripke";
        return out;
    }
    out.route = "conditional";
    out.status = cond.status;
    if (cond.status == Status::INVALID) {
        out.kripke = to_kripke(cond.model->model);
        if (evaluate_kripke(*out.kripke, f, out.kripke->designated))
            throw std::logic_error("converted countermodel failed to replay");
    }
    return out;
}

}  // namespace condlog
