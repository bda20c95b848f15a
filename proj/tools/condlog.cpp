// condlog: command-line front end.
// Exit codes: 0 success / valid / satisfiable, 1 refuted, 2 inconclusive
// within the bound, 3 input error, 4 budget exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "condlog/decide.hpp"
#include "condlog/derivation.hpp"
#include "condlog/io.hpp"
#include "condlog/prob.hpp"
#include "condlog/statedesc.hpp"

using namespace condlog;

namespace {

enum Exit { kOk = 0, kRefuted = 1, kInconclusive = 2, kInput = 3, kBudget = 4 };

struct Opts {
    std::string logic = "c2";
    int bound = 0;  // 0: not given
    std::string atoms = "p";
    int depth = 1;
    std::uint64_t seed = 1;
    long samples = 100000;
    int workers = 1;
    std::string format = "text";
    std::string file;
    std::string spec;
    std::string model;
    std::string world;
    std::string cls;
    std::string given;
    long deadline_ms = 0;
    std::vector<std::string> args;
};

bool as_json(const Opts& o) { return o.format == "json"; }

void emit(const Opts& o, const json& j, const std::string& text) {
    if (as_json(o)) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

std::string arg_text(const Opts& o, std::size_t i = 0) {
    if (!o.file.empty() && i == 0) {
        std::ifstream in(o.file);
        if (!in) throw InputError("cannot open " + o.file);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    std::size_t k = o.file.empty() ? i : i - 1;
    if (k >= o.args.size()) throw InputError("missing formula argument");
    return o.args[k];
}

Formula formula_arg(const Opts& o, std::size_t i = 0) {
    try {
        return parse(arg_text(o, i));
    } catch (const ParseError& e) {
        throw InputError(std::string("parse error: ") + e.what());
    }
}

Logic logic_of(const Opts& o) {
    try {
        return parse_logic(o.logic);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

SearchBudget budget_of(const Opts& o) {
    SearchBudget b;
    if (o.bound > 0) {
        b.bound = o.bound;
        b.bounded_only = true;  // an explicit bound asks for the bounded search only
    }
    b.deadline_ms = o.deadline_ms;
    return b;
}

std::vector<std::string> atom_list(const Opts& o) {
    std::vector<std::string> out;
    std::stringstream ss(o.atoms);
    std::string a;
    while (std::getline(ss, a, ','))
        if (!a.empty()) out.push_back(a);
    if (out.empty()) throw InputError("--atoms needs at least one atom");
    return out;
}

int status_exit(Status s) {
    switch (s) {
        case Status::SAT:
        case Status::VALID_EXACT: return kOk;
        case Status::UNSAT_EXACT:
        case Status::INVALID: return kRefuted;
        case Status::UNSAT_WITHIN_BOUND:
        case Status::VALID_WITHIN_BOUND: return kInconclusive;
        case Status::BUDGET_EXCEEDED: return kBudget;
    }
    return kInput;
}

std::string model_text(const Found& f) {
    std::string s;
    if (f.seq) s += "sequence: " + print_seq(f.seq) + "  (length " + length(f.seq).str() + ")\n";
    s += model_to_json(f.model).dump() + "\n";
    return s;
}

std::string verdict_text(const Verdict& v) {
    std::string s = status_name(v.status);
    if (v.status == Status::UNSAT_WITHIN_BOUND || v.status == Status::VALID_WITHIN_BOUND)
        s += " (bound " + std::to_string(v.bound) + ")";
    s += " [" + v.route + "]\n";
    if (v.model) s += model_text(*v.model);
    return s;
}

// ---------------------------------------------------------------- commands

int cmd_parse(const Opts& o) {
    Formula f = formula_arg(o);
    json j{{"ascii", print(f)},
           {"unicode", print(f, Style::unicode)},
           {"normal", print(normalize(f))},
           {"fragment", fragment_name(classify_fragment(f))},
           {"modal_depth", modal_depth(f)}};
    emit(o, j,
         print(f) + "\n" + print(f, Style::unicode) + "\nnormal form: " + print(normalize(f)) +
             "\nfragment: " + fragment_name(classify_fragment(f)) + "\n");
    return kOk;
}

// Countermodel and verdict output wrap the model; accept those files as is.
json unwrap_model(json j) {
    if (j.contains("witness")) j = j["witness"];
    if (j.contains("model") && !j.contains("worlds")) j = j["model"];
    return j;
}

// Reads any supported model file; returns truth of f at the chosen point.
bool eval_file(const Opts& o, const Formula& f, json& info) {
    if (o.model.empty()) throw InputError("eval needs --model FILE");
    json j = unwrap_model(read_json_file(o.model));
    if (j.contains("sequence")) {
        SequenceModel m = sequence_model_from_json(j);
        info["kind"] = "sequence";
        return evaluate_seq(m.root, m.table, f);
    }
    if (j.contains("cycle")) {
        LassoModel m = lasso_model_from_json(j);
        info["kind"] = "lasso";
        return evaluate_seq(lasso_expr(m.lasso), m.table, f);
    }
    if (j.contains("relation")) {
        KripkeModel k = kripke_from_json(j);
        int w = k.designated;
        if (!o.world.empty()) {
            auto it = std::find(k.names.begin(), k.names.end(), o.world);
            if (it == k.names.end()) throw InputError("unknown world " + o.world);
            w = int(it - k.names.begin());
        }
        info["kind"] = "kripke";
        info["world"] = k.names[w];
        return evaluate_kripke(k, f, w);
    }
    OrderModel m;
    try {
        m = model_from_json(j);
    } catch (const FrameError& e) {
        std::string why = e.what();
        for (const auto& v : e.violations) why += "; " + v;
        throw InputError(why);
    }
    int w = m.designated;
    if (!o.world.empty()) {
        w = m.frame.index(o.world);
        if (w < 0) throw InputError("unknown world " + o.world);
    }
    info["kind"] = "order";
    info["world"] = m.frame.names[w];
    return evaluate_at(m, f, w);
}

int cmd_eval(const Opts& o) {
    Formula f = formula_arg(o);
    json info;
    bool v = eval_file(o, f, info);
    info["formula"] = print(f);
    info["value"] = v;
    std::string at = info.contains("world") ? " at " + info["world"].get<std::string>() : "";
    emit(o, info, std::string(v ? "true" : "false") + at + "\n");
    return v ? kOk : kRefuted;
}

int cmd_frame_info(const Opts& o) {
    if (o.model.empty()) throw InputError("frame-info needs --model FILE");
    OrderModel m;
    try {
        m = model_from_json(unwrap_model(read_json_file(o.model)));
    } catch (const FrameError& e) {
        std::string why = e.what();
        for (const auto& v : e.violations) why += "; " + v;
        throw InputError(why);
    }
    const OrderFrame& fr = m.frame;
    FrameReport r = frame_properties(fr);
    json j{{"worlds", fr.size()},
           {"transitive", r.transitive},
           {"connected", r.connected},
           {"semi_flat", r.semi_flat},
           {"flat", r.flat},
           {"ancestral", r.ancestral}};
    json per = json::object();
    std::string text;
    for (std::size_t w = 0; w < fr.size(); ++w) {
        json e;
        int s = successor(fr, int(w));
        e["successor"] = fr.names[s];
        json reach = json::array();
        for (int x : reachable_set(fr, int(w))) reach.push_back(fr.names[x]);
        e["reachable"] = reach;
        if (r.flat) e["successor_sequence"] = lasso_to_json(successor_sequence(fr, int(w)));
        per[fr.names[w]] = e;
        text += fr.names[w] + ": successor " + fr.names[s] + ", reachable " + reach.dump();
        if (r.flat) text += ", successor sequence " + e["successor_sequence"].dump();
        text += "\n";
    }
    j["per_world"] = per;
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    text = std::string("transitive: ") + yn(r.transitive) + "\nconnected: " + yn(r.connected) +
           "\nsemi-flat: " + yn(r.semi_flat) + "\nflat: " + yn(r.flat) + "\nancestral: " + yn(r.ancestral) + "\n" +
           text;
    emit(o, j, text);
    return kOk;
}

int cmd_sat(const Opts& o) {
    Verdict v = satisfiable(formula_arg(o), logic_of(o), budget_of(o));
    emit(o, verdict_to_json(v), verdict_text(v));
    return status_exit(v.status);
}

int cmd_valid(const Opts& o) {
    Verdict v = valid(formula_arg(o), logic_of(o), budget_of(o));
    emit(o, verdict_to_json(v), verdict_text(v));
    return status_exit(v.status);
}

int cmd_countermodel(const Opts& o) {
    Verdict v = valid(formula_arg(o), logic_of(o), budget_of(o));
    if (v.status == Status::INVALID) {
        emit(o, found_to_json(*v.model), model_text(*v.model));
        return kRefuted;
    }
    json j = verdict_to_json(v);
    emit(o, j, std::string("no countermodel: ") + verdict_text(v));
    return status_exit(v.status);
}

SchemaClass class_for(const Opts& o) {
    try {
        if (!o.cls.empty()) return parse_schema_class(o.cls);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    switch (logic_of(o)) {
        case Logic::C2: return SchemaClass::order_all;
        case Logic::C2F: return SchemaClass::ordinal_seq;
        case Logic::C2FS: return SchemaClass::lasso;
        case Logic::C2FM: return SchemaClass::final_seq;
        case Logic::C2FSM: return SchemaClass::list;
    }
    return SchemaClass::order_all;
}

int cmd_schema_test(const Opts& o) {
    if (o.args.empty()) throw InputError("schema-test needs a schema name");
    const Schema* s;
    try {
        s = &find_schema(o.args[0]);
    } catch (const std::out_of_range&) {
        std::string names;
        for (const auto& x : schema_library()) names += " " + x.name;
        throw InputError("unknown schema " + o.args[0] + "; known:" + names);
    }
    SchemaClass cls = class_for(o);
    int size = o.bound > 0 ? o.bound : 3;
    Deadline dl = o.deadline_ms > 0 ? Deadline::after_ms(o.deadline_ms) : Deadline{};
    SchemaReport r = test_schema(*s, cls, size, dl);
    json j{{"schema", s->name},
           {"template", print(s->tmpl)},
           {"class", schema_class_name(cls)},
           {"max_size", r.max_size},
           {"frames_checked", r.frames_checked},
           {"valid", r.valid}};
    std::string text = s->name + " on " + schema_class_name(cls) + " up to size " + std::to_string(size) + ": " +
                       (r.valid ? "no countermodel" : "countermodel") + " (" + std::to_string(r.frames_checked) +
                       " frames)\n";
    if (r.counter) {
        j["countermodel"] = found_to_json(*r.counter);
        text += model_text(*r.counter);
    }
    emit(o, j, text);
    return r.valid ? kOk : kRefuted;
}

std::vector<DescId> desc_args(DescSpace& sp, const Opts& o) {
    std::vector<DescId> tau;
    for (const auto& a : o.args) tau.push_back(sp.parse_name(a));
    if (tau.empty()) throw InputError("expected a list of description names");
    return tau;
}

int cmd_statedesc(const Opts& o) {
    DescSpace sp(atom_list(o));
    DescOracle or_(sp, logic_of(o));
    if (!o.args.empty()) {
        // classify a given list
        std::vector<DescId> tau = desc_args(sp, o);
        ListClass c = classify_list(or_, tau);
        json j{{"list", descs_to_json(sp, tau)}, {"class", list_class_name(c)}};
        std::string text = std::string(list_class_name(c)) + "\n";
        if (auto w = or_.witness(tau)) {
            j["witness"] = print_seq(*w);
            text += "witness: " + print_seq(*w) + "\n";
        }
        emit(o, j, text);
        return c == ListClass::disorderly ? kRefuted : kOk;
    }
    std::vector<DescId> ys = state_descriptions(or_, o.depth);
    json j{{"logic", logic_name(or_.logic())}, {"depth", o.depth}, {"count", ys.size()}, {"descriptions", descs_to_json(sp, ys)}};
    std::string text = std::to_string(ys.size()) + " descriptions\n";
    for (DescId d : ys) text += sp.name(d) + "\n";
    emit(o, j, text);
    return kOk;
}

int cmd_makeseq(const Opts& o) {
    DescSpace sp(atom_list(o));
    DescOracle or_(sp, logic_of(o));
    std::vector<DescId> tau = desc_args(sp, o);
    ListClass c = classify_list(or_, tau);
    if (c == ListClass::disorderly) throw InputError("the list is not orderly in " + std::string(logic_name(or_.logic())));
    MakeSeqResult r = make_seq(or_, tau);
    json j = makeseq_to_json(sp, r);
    j["class"] = list_class_name(c);
    std::string text = std::string(list_class_name(c)) + "\n" + print_seq(r.seq) + "\nlength " + length(r.seq).str() + "\n";
    for (const auto& st : r.trace) text += "  " + descs_to_json(sp, st.tau).dump() + ": " + list_class_name(st.kind) + "\n";
    emit(o, j, text);
    return kOk;
}

int cmd_canonical_model(const Opts& o) {
    DescSpace sp(atom_list(o));
    Logic logic = logic_of(o);
    if (logic == Logic::C2) {
        CanonicalC2 m = canonical_c2_model(sp, o.depth);
        json j = model_to_json(m.model);
        emit(o, j, std::to_string(m.world_desc.size()) + " worlds\n" + j.dump() + "\n");
        return kOk;
    }
    if (o.args.size() != 1) throw InputError("canonical-model for a sequence logic needs one description name");
    DescOracle or_(sp, logic);
    SequenceModel m = canonical_model_for(or_, sp.parse_name(o.args[0]));
    json j = sequence_model_to_json(m.root, m.table);
    emit(o, j, print_seq(m.root) + "\nlength " + length(m.root).str() + "\n");
    return kOk;
}

int cmd_check_derivation(const Opts& o) {
    std::string path = !o.file.empty() ? o.file : (o.args.empty() ? "" : o.args[0]);
    if (path.empty()) throw InputError("check-derivation needs a transcript file");
    Derivation d = derivation_from_json(read_json_file(path));
    CheckResult r = check_derivation(d);
    json j{{"name", d.name}, {"logic", logic_name(d.logic)}, {"steps", d.steps.size()}, {"ok", r.ok}};
    std::string text;
    if (r.ok) {
        text = "ok: " + std::to_string(d.steps.size()) + " steps\n";
    } else {
        j["bad_step"] = r.bad_step;
        j["reason"] = r.reason;
        text = "rejected at step " + std::to_string(r.bad_step) + ": " + r.reason + "\n";
    }
    emit(o, j, text);
    return r.ok ? kOk : kRefuted;
}

ProductSpec spec_of(const Opts& o) {
    if (o.spec.empty()) throw InputError("needs --spec FILE");
    return prob_spec_from_json(read_json_file(o.spec));
}

McOptions mc_of(const Opts& o) {
    McOptions m;
    m.samples = o.samples;
    m.seed = o.seed;
    m.workers = o.workers;
    return m;
}

int cmd_prob(const Opts& o, Method m) {
    ProductSpec spec = spec_of(o);
    Formula f = formula_arg(o);
    ProbValue v;
    if (!o.given.empty()) {
        Formula g;
        try {
            g = parse(o.given);
        } catch (const ParseError& e) {
            throw InputError(std::string("parse error in --given: ") + e.what());
        }
        v = conditional_prob(f, g, spec, m, mc_of(o));
    } else if (m == Method::exact) {
        v.is_exact = true;
        v.exact = exact_prob(f, spec);
    } else {
        v.est = m == Method::mc_seq ? mc_prob_seq(f, spec, mc_of(o)) : mc_prob_tree(f, spec, mc_of(o));
    }
    json j = prob_value_to_json(v);
    j["formula"] = print(f);
    j["method"] = method_name(m);
    emit(o, j, v.str() + "\n");
    return kOk;
}

int cmd_prob_report(const Opts& o) {
    ProductSpec spec = spec_of(o);
    if (o.args.size() != 3) throw InputError("prob report needs three formulas p q r");
    std::vector<Formula> fs;
    for (std::size_t i = 0; i < 3; ++i) fs.push_back(formula_arg(o, i));
    auto lines = stalnaker_report(fs[0], fs[1], fs[2], spec, mc_of(o));
    std::string text;
    for (const auto& l : lines) {
        text += l.fact + ": ";
        if (!l.applicable) text += l.reason + "\n";
        else
            text += l.lhs_expr + " = " + l.lhs.str() + ", " + l.rhs_expr + " = " + l.rhs.str() +
                    (l.agree ? "  agree\n" : "  DIFFER\n");
    }
    emit(o, report_to_json(lines), text);
    return kOk;
}

int cmd_omega_pad(const Opts& o) {
    if (o.args.empty()) throw InputError("omega-pad needs a list of labels");
    std::vector<std::string> labels;
    for (const auto& a : o.args) {
        std::stringstream ss(a);
        std::string x;
        while (std::getline(ss, x, ','))
            if (!x.empty()) labels.push_back(x);
    }
    Lasso l = omega_padding(labels);
    emit(o, lasso_to_json(l), print_seq(lasso_expr(l)) + "\n");
    return kOk;
}

int cmd_min_rep(const Opts& o) {
    if (o.model.empty()) throw InputError("min-rep needs --model FILE (a lasso model)");
    LassoModel m = minimal_representation(lasso_model_from_json(read_json_file(o.model)));
    json j = lasso_model_to_json(m);
    emit(o, j, j.dump() + "\n");
    return kOk;
}

int cmd_kripke_to_flat(const Opts& o) {
    if (o.model.empty()) throw InputError("kripke-to-flat needs --model FILE (a Kripke model)");
    KripkeModel k = kripke_from_json(read_json_file(o.model));
    std::vector<int> tie;
    for (std::size_t i = 0; i < k.names.size(); ++i) tie.push_back(int(i));
    OrderModel m = kripke_to_flat_model(k, tie);
    json j = model_to_json(m);
    emit(o, j, j.dump() + "\n");
    return kOk;
}

int cmd_selection(const Opts& o) {
    if (o.model.empty()) throw InputError("selection needs --model FILE");
    json in = read_json_file(o.model);
    json j;
    if (in.contains("selection")) {
        try {
            j = frame_to_json(selection_to_order(selection_from_json(in)));
        } catch (const SelectionError& e) {
            throw InputError(std::string("selection violates constraint ") + std::to_string(e.constraint) + ": " + e.what());
        }
    } else {
        j = selection_to_json(order_to_selection(model_from_json(in).frame));
    }
    emit(o, j, j.dump() + "\n");
    return kOk;
}

void diag(const std::string& kind, const std::string& msg) {
    std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"condlog: conditional logics on order and sequence models"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every command");
    Opts o;

    auto common = [&](CLI::App* c, bool formula_args = true) {
        c->add_option("--logic", o.logic, "c2 | c2f | c2fs | c2fm | c2fsm")->capture_default_str();
        c->add_option("--bound", o.bound, "search bound (worlds for c2, tails otherwise); implies bounded-only");
        c->add_option("--atoms", o.atoms, "comma-separated atoms")->capture_default_str();
        c->add_option("--depth", o.depth, "description depth")->capture_default_str();
        c->add_option("--seed", o.seed, "random seed")->capture_default_str();
        c->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
        c->add_option("--workers", o.workers, "Monte Carlo threads")->capture_default_str();
        c->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
        c->add_option("--file", o.file, "read the (first) formula or transcript from a file");
        c->add_option("--spec", o.spec, "probability spec JSON");
        c->add_option("--model", o.model, "model JSON");
        c->add_option("--world", o.world, "evaluation world (default: designated)");
        c->add_option("--class", o.cls, "frame class for schema-test: all | flat | flat-ancestral | ordinal | lasso | final | list");
        c->add_option("--given", o.given, "condition on this formula");
        c->add_option("--deadline-ms", o.deadline_ms, "wall-clock budget");
        if (formula_args) c->add_option("args", o.args, "formulas, names or labels");
    };

    std::vector<std::pair<CLI::App*, std::function<int()>>> cmds;
    auto sub = [&](CLI::App* parent, const char* name, const char* help, std::function<int()> fn) {
        CLI::App* c = parent->add_subcommand(name, help);
        common(c);
        cmds.emplace_back(c, std::move(fn));
        return c;
    };
    sub(&app, "parse", "parse and print a formula", [&] { return cmd_parse(o); });
    sub(&app, "eval", "evaluate a formula on a model file (--model)", [&] { return cmd_eval(o); });
    sub(&app, "frame-info", "frame properties and successor sequences (--model)", [&] { return cmd_frame_info(o); });
    sub(&app, "sat", "satisfiability in a logic", [&] { return cmd_sat(o); });
    sub(&app, "valid", "validity in a logic", [&] { return cmd_valid(o); });
    sub(&app, "countermodel", "search for a countermodel", [&] { return cmd_countermodel(o); });
    sub(&app, "schema-test", "test a library schema on a frame class", [&] { return cmd_schema_test(o); });
    sub(&app, "statedesc", "list state descriptions, or classify a description list", [&] { return cmd_statedesc(o); });
    sub(&app, "makeseq", "build the sequence for an orderly description list", [&] { return cmd_makeseq(o); });
    sub(&app, "canonical-model", "canonical model for a depth (c2) or a description", [&] { return cmd_canonical_model(o); });
    sub(&app, "check-derivation", "check a derivation transcript", [&] { return cmd_check_derivation(o); });

    CLI::App* prob = app.add_subcommand("prob", "probabilities under product measures");
    prob->require_subcommand(1);
    sub(prob, "exact", "exact probability on omega-sequences", [&] { return cmd_prob(o, Method::exact); });
    sub(prob, "mc", "Monte Carlo on omega-sequences", [&] { return cmd_prob(o, Method::mc_seq); });
    sub(prob, "tree", "Monte Carlo on trees", [&] { return cmd_prob(o, Method::mc_tree); });
    sub(prob, "report", "check the conditional-probability facts for p q r", [&] { return cmd_prob_report(o); });

    CLI::App* conv = app.add_subcommand("convert", "model conversions");
    conv->require_subcommand(1);
    sub(conv, "omega-pad", "pad a finite list into an omega-sequence", [&] { return cmd_omega_pad(o); });
    sub(conv, "min-rep", "minimal representation of a lasso model", [&] { return cmd_min_rep(o); });
    sub(conv, "kripke-to-flat", "flat order model from a reflexive transitive connected Kripke model",
        [&] { return cmd_kripke_to_flat(o); });
    sub(conv, "selection", "order frame <-> selection table", [&] { return cmd_selection(o); });

    // CLI11 reads "[a,b]" as an array literal and strips the brackets; shield
    // description names such as "[pq/~pq]" and unshield them after parsing.
    const char kShield = '\x1f';
    std::vector<std::string> argstore(argv, argv + argc);
    for (auto& a : argstore)
        if (a.size() >= 2 && a.front() == '[' && a.back() == ']') a.insert(a.begin(), kShield);
    std::vector<char*> args;
    for (auto& a : argstore) args.push_back(a.data());

    try {
        app.parse(int(args.size()), args.data());
        for (auto& a : o.args)
            if (!a.empty() && a.front() == kShield) a.erase(a.begin());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        diag("usage", e.what());
        return kInput;
    }

    try {
        for (auto& [c, fn] : cmds)
            if (c->parsed()) return fn();
        diag("usage", "no command");
        return kInput;
    } catch (const InputError& e) {
        diag("input", e.what());
    } catch (const ParseError& e) {
        diag("input", e.what());
    } catch (const DescError& e) {
        diag("input", e.what());
    } catch (const ProbError& e) {
        diag("input", e.what());
    } catch (const FrameError& e) {
        diag("input", e.what());
    } catch (const FragmentError& e) {
        diag("input", e.what());
    } catch (const DeadlineExceeded& e) {
        diag("budget", e.what());
        return kBudget;
    } catch (const std::invalid_argument& e) {
        diag("input", e.what());
    } catch (const std::exception& e) {
        diag("internal", e.what());
        return 70;
    }
    return kInput;
}
