#include "condlog/io.hpp"

#include <fstream>

namespace condlog {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad ") + what + ": " + e.what());
    } catch (const ParseError& e) {
        throw InputError(std::string("bad formula in ") + what + ": " + e.what());
    }
}

Valuation valuation_from(const json& j, const OrderFrame& fr) {
    Valuation v;
    if (!j.contains("valuation")) return v;
    for (const auto& [atom, ws] : j.at("valuation").items()) {
        auto& bits = v[atom];
        bits.assign(fr.size(), 0);
        for (const auto& w : ws) {
            int i = fr.index(w.get<std::string>());
            if (i < 0) throw InputError("valuation of " + atom + " names unknown world " + w.get<std::string>());
            bits[i] = 1;
        }
    }
    return v;
}

json valuation_to(const Valuation& v, const std::vector<World>& names) {
    json out = json::object();
    for (const auto& [atom, bits] : v) {
        json ws = json::array();
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) ws.push_back(names[i]);
        out[atom] = ws;
    }
    return out;
}

int designated_from(const json& j, const std::vector<World>& names) {
    if (!j.contains("designated")) return 0;
    auto d = j.at("designated").get<std::string>();
    auto it = std::find(names.begin(), names.end(), d);
    if (it == names.end()) throw InputError("designated world " + d + " is not a world");
    return int(it - names.begin());
}

}  // namespace

OrderModel model_from_json(const json& j) {
    return guarded("order model", [&] {
        FrameDesc d;
        d.worlds = j.at("worlds").get<std::vector<World>>();
        if (j.contains("after"))
            for (const auto& [w, xs] : j.at("after").items()) d.after[w] = xs.get<std::vector<World>>();
        OrderModel m;
        m.frame = validate(d);
        m.val = valuation_from(j, m.frame);
        m.designated = designated_from(j, m.frame.names);
        return m;
    });
}

json frame_to_json(const OrderFrame& f) {
    json j;
    j["worlds"] = f.names;
    json after = json::object();
    for (std::size_t w = 0; w < f.size(); ++w) {
        json xs = json::array();
        for (int x : f.after[w]) xs.push_back(f.names[x]);
        after[f.names[w]] = xs;
    }
    j["after"] = after;
    return j;
}

json model_to_json(const OrderModel& m) {
    json j = frame_to_json(m.frame);
    j["valuation"] = valuation_to(m.val, m.frame.names);
    if (m.frame.size()) j["designated"] = m.frame.names[m.designated];
    return j;
}

KripkeModel kripke_from_json(const json& j) {
    return guarded("kripke model", [&] {
        KripkeModel k;
        k.names = j.at("worlds").get<std::vector<World>>();
        int n = int(k.names.size());
        k.rel.assign(n, std::vector<char>(n, 0));
        auto idx = [&](const std::string& w) {
            auto it = std::find(k.names.begin(), k.names.end(), w);
            if (it == k.names.end()) throw InputError("relation names unknown world " + w);
            return int(it - k.names.begin());
        };
        for (const auto& pr : j.at("relation")) {
            auto ab = pr.get<std::vector<std::string>>();
            if (ab.size() != 2) throw InputError("relation entries are [from, to] pairs");
            k.rel[idx(ab[0])][idx(ab[1])] = 1;
        }
        OrderFrame tmp;
        tmp.names = k.names;
        tmp.after.assign(n, {});
        k.val = valuation_from(j, tmp);
        k.designated = designated_from(j, k.names);
        return k;
    });
}

json kripke_to_json(const KripkeModel& k) {
    json j;
    j["worlds"] = k.names;
    json rel = json::array();
    for (std::size_t a = 0; a < k.names.size(); ++a)
        for (std::size_t b = 0; b < k.names.size(); ++b)
            if (k.rel[a][b]) rel.push_back({k.names[a], k.names[b]});
    j["relation"] = rel;
    j["valuation"] = valuation_to(k.val, k.names);
    if (!k.names.empty()) j["designated"] = k.names[k.designated];
    return j;
}

ProtoworldTable table_from_json(const json& j) {
    return guarded("protoworld table", [&] {
        ProtoworldTable t;
        for (const auto& [atom, ps] : j.items()) {
            auto& s = t.atoms[atom];
            for (const auto& p : ps) s.insert(p.get<std::string>());
        }
        return t;
    });
}

json table_to_json(const ProtoworldTable& t) {
    json j = json::object();
    for (const auto& [atom, ps] : t.atoms) j[atom] = std::vector<std::string>(ps.begin(), ps.end());
    return j;
}

SequenceModel sequence_model_from_json(const json& j) {
    return guarded("sequence model", [&] {
        SequenceModel m;
        try {
            m.root = parse_seq(j.at("sequence").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("bad sequence: ") + e.what());
        }
        if (j.contains("protoworlds")) m.table = table_from_json(j.at("protoworlds"));
        return m;
    });
}

json sequence_model_to_json(const SeqExpr& root, const ProtoworldTable& t) {
    json j;
    j["sequence"] = print_seq(root);
    j["length"] = length(root).str();
    j["protoworlds"] = table_to_json(t);
    return j;
}

json lasso_to_json(const Lasso& l) {
    json j;
    j["prefix"] = l.prefix;
    j["cycle"] = l.cycle;
    return j;
}

LassoModel lasso_model_from_json(const json& j) {
    return guarded("lasso model", [&] {
        LassoModel m;
        m.lasso.prefix = j.value("prefix", std::vector<std::string>{});
        m.lasso.cycle = j.at("cycle").get<std::vector<std::string>>();
        if (m.lasso.cycle.empty()) throw InputError("lasso cycle must be non-empty");
        if (j.contains("protoworlds")) m.table = table_from_json(j.at("protoworlds"));
        return m;
    });
}

json lasso_model_to_json(const LassoModel& m) {
    json j = lasso_to_json(m.lasso);
    j["protoworlds"] = table_to_json(m.table);
    return j;
}

// {"worlds": [...], "selection": [{"world": w, "set": [...], "selected": [...]}, ...]}
// Missing entries are left empty and rejected by selection_to_order.
SelectionTable selection_from_json(const json& j) {
    return guarded("selection table", [&] {
        SelectionTable t;
        t.names = j.at("worlds").get<std::vector<World>>();
        int n = int(t.names.size());
        if (n > 16) throw InputError("selection tables are limited to 16 worlds");
        t.sel.assign(n, std::vector<std::uint32_t>(1u << n, 0));
        auto mask = [&](const json& ws) {
            std::uint32_t m = 0;
            for (const auto& w : ws) {
                auto it = std::find(t.names.begin(), t.names.end(), w.get<std::string>());
                if (it == t.names.end()) throw InputError("unknown world " + w.get<std::string>());
                m |= 1u << (it - t.names.begin());
            }
            return m;
        };
        for (const auto& e : j.at("selection")) {
            auto it = std::find(t.names.begin(), t.names.end(), e.at("world").get<std::string>());
            if (it == t.names.end()) throw InputError("unknown world in selection");
            t.sel[it - t.names.begin()][mask(e.at("set"))] = mask(e.at("selected"));
        }
        return t;
    });
}

json selection_to_json(const SelectionTable& t) {
    json j;
    j["worlds"] = t.names;
    json rows = json::array();
    auto names = [&](std::uint32_t m) {
        json ws = json::array();
        for (std::size_t i = 0; i < t.names.size(); ++i)
            if (m >> i & 1u) ws.push_back(t.names[i]);
        return ws;
    };
    for (std::size_t w = 0; w < t.sel.size(); ++w)
        for (std::uint32_t m = 1; m < t.sel[w].size(); ++m)
            rows.push_back({{"world", t.names[w]}, {"set", names(m)}, {"selected", names(t.sel[w][m])}});
    j["selection"] = rows;
    return j;
}

json found_to_json(const Found& f) {
    json j;
    j["model"] = model_to_json(f.model);
    if (f.seq) j["sequence_model"] = sequence_model_to_json(f.seq, f.table);
    return j;
}

json verdict_to_json(const Verdict& v) {
    json j;
    j["status"] = status_name(v.status);
    j["route"] = v.route;
    if (v.status == Status::UNSAT_WITHIN_BOUND || v.status == Status::VALID_WITHIN_BOUND) j["bound"] = v.bound;
    if (v.model) j["witness"] = found_to_json(*v.model);
    return j;
}

Derivation derivation_from_json(const json& j) {
    return guarded("derivation", [&] {
        Derivation d;
        d.name = j.value("name", "");
        try {
            d.logic = parse_logic(j.value("logic", "c2"));
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        for (const auto& s : j.at("steps")) {
            Step st;
            st.formula = parse(s.at("formula").get<std::string>());
            try {
                st.rule = parse_rule(s.at("rule").get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
            st.schema = s.value("schema", "");
            if (s.contains("binding"))
                for (const auto& [k, v] : s.at("binding").items()) st.binding[k] = parse(v.get<std::string>());
            st.from = s.value("from", std::vector<int>{});
            d.steps.push_back(std::move(st));
        }
        return d;
    });
}

json derivation_to_json(const Derivation& d) {
    json j;
    j["name"] = d.name;
    j["logic"] = logic_name(d.logic);
    json steps = json::array();
    for (const Step& s : d.steps) {
        json st;
        st["formula"] = print(s.formula);
        st["rule"] = rule_name(s.rule);
        if (!s.schema.empty()) st["schema"] = s.schema;
        if (!s.binding.empty()) {
            json b = json::object();
            for (const auto& [k, v] : s.binding) b[k] = print(v);
            st["binding"] = b;
        }
        if (!s.from.empty()) st["from"] = s.from;
        steps.push_back(st);
    }
    j["steps"] = steps;
    return j;
}

ProductSpec prob_spec_from_json(const json& j) {
    return guarded("probability spec", [&] {
        ProductSpec s;
        for (const auto& [w, x] : j.at("pi").items()) {
            try {
                s.pi.weight[w] = x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>());
            } catch (const ProbError& e) {
                throw InputError(e.what());
            }
        }
        if (j.contains("atoms")) s.table = table_from_json(j.at("atoms"));
        std::string shape = j.value("shape", "omega");
        if (shape == "omega") s.shape = Shape::omega;
        else if (shape == "tree") s.shape = Shape::tree;
        else throw InputError("shape must be omega or tree, not " + shape);
        try {
            check_spec(s);
        } catch (const ProbError& e) {
            throw InputError(e.what());
        }
        return s;
    });
}

json prob_spec_to_json(const ProductSpec& s) {
    json j;
    json pi = json::object();
    for (const auto& [w, x] : s.pi.weight) pi[w] = rational_str(x);
    j["pi"] = pi;
    j["atoms"] = table_to_json(s.table);
    j["shape"] = s.shape == Shape::omega ? "omega" : "tree";
    return j;
}

json estimate_to_json(const Estimate& e) {
    return {{"value", e.value}, {"stderr", e.std_err}, {"samples", e.samples}, {"seed", e.seed}, {"aborted", e.aborted}};
}

json prob_value_to_json(const ProbValue& v) {
    if (v.is_exact) return {{"exact", rational_str(v.exact)}, {"value", v.value()}};
    return estimate_to_json(v.est);
}

json report_to_json(const std::vector<FactLine>& lines) {
    json out = json::array();
    for (const auto& l : lines) {
        json j{{"fact", l.fact}, {"applicable", l.applicable}};
        if (!l.reason.empty()) j["reason"] = l.reason;
        if (l.applicable) {
            j["lhs"] = {{"expr", l.lhs_expr}, {"value", prob_value_to_json(l.lhs)}};
            j["rhs"] = {{"expr", l.rhs_expr}, {"value", prob_value_to_json(l.rhs)}};
            j["agree"] = l.agree;
        }
        out.push_back(j);
    }
    return out;
}

json descs_to_json(const DescSpace& sp, const std::vector<DescId>& ds) {
    json out = json::array();
    for (DescId d : ds) out.push_back(sp.name(d));
    return out;
}

json makeseq_to_json(const DescSpace& sp, const MakeSeqResult& r) {
    json j;
    j["sequence"] = print_seq(r.seq);
    j["length"] = length(r.seq).str();
    json trace = json::array();
    for (const auto& st : r.trace) {
        json t{{"tau", descs_to_json(sp, st.tau)}, {"case", list_class_name(st.kind)}};
        if (st.kind == ListClass::direct) {
            t["j"] = st.j;
            t["rho"] = descs_to_json(sp, st.rho);
            t["theta"] = descs_to_json(sp, st.theta);
        }
        if (st.kind == ListClass::circuitous) {
            t["orbit"] = descs_to_json(sp, st.orbit);
            json pi = json::array();
            for (const auto& l : st.pi) pi.push_back(descs_to_json(sp, l));
            t["pi"] = pi;
        }
        trace.push_back(t);
    }
    j["trace"] = trace;
    return j;
}

}  // namespace condlog
