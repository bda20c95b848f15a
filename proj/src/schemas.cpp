#include "condlog/schemas.hpp"

#include <stdexcept>

namespace condlog {

const char* logic_name(Logic l) {
    switch (l) {
        case Logic::C2: return "c2";
        case Logic::C2F: return "c2f";
        case Logic::C2FS: return "c2fs";
        case Logic::C2FM: return "c2fm";
        case Logic::C2FSM: return "c2fsm";
    }
    return "?";
}

Logic parse_logic(const std::string& s) {
    std::string t;
    for (char c : s)
        if (c != '.') t += char(std::tolower((unsigned char)c));
    if (t == "c2") return Logic::C2;
    if (t == "c2f") return Logic::C2F;
    if (t == "c2fs") return Logic::C2FS;
    if (t == "c2fm") return Logic::C2FM;
    if (t == "c2fsm") return Logic::C2FSM;
    throw std::invalid_argument("unknown logic '" + s + "'");
}

bool extends(Logic strong, Logic weak) {
    if (strong == weak || weak == Logic::C2) return true;
    switch (weak) {
        case Logic::C2F: return strong != Logic::C2;
        case Logic::C2FS: return strong == Logic::C2FSM;
        case Logic::C2FM: return strong == Logic::C2FSM;
        default: return false;
    }
}

namespace {

std::vector<Schema> build() {
    const std::vector<std::pair<const char*, const char*>> src = {
        {"Identity", "?p > ?p"},
        {"Reciprocity", "(?p > ?q) & (?q > ?p) & (?p > ?r) -> ?q > ?r"},
        {"MP", "?p > ?q -> (?p -> ?q)"},
        {"CEM", "?p > ?q | ?p > ~?q"},
        {"MOD", "[]?p -> ?q > ?p"},
        {"K", "[](?p -> ?q) -> ([]?p -> []?q)"},
        {"T", "[]?p -> ?p"},
        {"4", "[]?p -> [][]?p"},
        {"H", "<>?p & <>?q -> <>(?p & <>?q) | <>(?q & <>?p)"},
        {"Dum", "[]([](?p -> []?p) -> ?p) -> (<>[]?p -> ?p)"},
        {"McKinsey", "[]<>?p -> <>[]?p"},
        {"M*", "[](?p | ?q) -> <>[]?p | <>[]?q"},
        {"StalnakerNec", "[](?p -> ?q) -> ?p > ?q"},
        {"StalnakerPoss", "<>?p -> (?p > ?q -> ~(?p > ~?q))"},
        {"StalnakerDist", "?p > (?q | ?r) -> ?p > ?q | ?p > ?r"},
        {"Flattening", "?p > ((?p & ?q) > ?r) <-> (?p & ?q) > ?r"},
        {"CautiousImportation", "?p > ((?p & ?q) > ?r) -> (?p & ?q) > ?r"},
        {"CautiousExportation", "(?p & ?q) > ?r -> ?p > ((?p & ?q) > ?r)"},
        {"CrashingCautiousImportation", "?p > ~<>(?p & ?q) -> ~<>(?p & ?q)"},
        {"CrashingCautiousExportation", "~<>(?p & ?q) -> ?p > ~<>(?p & ?q)"},
        {">>-Flattening", "?p >> ((?p & ?q) >> ?r) <-> (?p & ?q) >> ?r"},
        {"IE", "?p > (?q > ?r) <-> (?p & ?q) > ?r"},
        {"Materialism", "?p > ?q <-> (?p -> ?q)"},
        {"Transitivity", "(?p > ?q) & (?q > ?r) -> ?p > ?r"},
        {"Monotonicity", "?p > ?q -> (?p & ?r) > ?q"},
        {"CautiousTransitivity", "(?p > ?q) & ((?p & ?q) > ?r) -> ?p > ?r"},
        {"CautiousMonotonicity", "?p > (?q & ?r) -> (?p & ?r) > ?q"},
        {"CMon", "?p > (?q & ?r) -> (?p & ?q) > ?r"},
        {"CMon>>", "?p >> (?q & ?r) -> (?p & ?q) >> ?r"},
        {"Distribution", "?p > (?q | ?r) -> ?p > ?q | ?p > ?r"},
        {"Sequentiality", "[](?p -> ~?p > ?r) & [](?q -> ~?q > ?r) -> (?p | ?q -> ~(?p | ?q) > ?r)"},
        {"RestrictedSequentiality", "[](?p -> ~?p > ?q) & [](?q -> ~?q > ?p) -> (?p | ?q -> [](?p | ?q))"},
        {"ConditionalSequentiality",
         "((~?p > ~?q) > ~?p) & ((~?q > ~?p) > ~?q) -> (?p | ?q -> [](?p | ?q))"},
    };
    std::vector<Schema> out;
    for (auto [n, t] : src) out.push_back({n, parse(t)});
    return out;
}

}  // namespace

const std::vector<Schema>& schema_library() {
    static const std::vector<Schema> lib = build();
    return lib;
}

const Schema& find_schema(const std::string& name) {
    for (const auto& s : schema_library())
        if (s.name == name) return s;
    throw std::out_of_range("unknown schema '" + name + "'");
}

Formula plain_instance(const Schema& s) {
    Binding b;
    int i = 0;
    for (const auto& m : metas_of(s.tmpl)) b[m] = atom(i++);
    return instantiate(s, b);
}

}  // namespace condlog
