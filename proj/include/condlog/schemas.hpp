#pragma once

#include <string>
#include <vector>

#include "condlog/formula.hpp"

namespace condlog {

enum class Logic { C2, C2F, C2FS, C2FM, C2FSM };

[[nodiscard]] const char* logic_name(Logic l);
[[nodiscard]] Logic parse_logic(const std::string& s);
// frame-class containment: every model of `strong` is a model of `weak`
[[nodiscard]] bool extends(Logic strong, Logic weak);

// The named schemas, templates over ?p ?q ?r.
[[nodiscard]] const std::vector<Schema>& schema_library();
[[nodiscard]] const Schema& find_schema(const std::string& name);  // throws std::out_of_range

// Substitutes p0, p1, p2, ... for the metavariables in sorted order.
[[nodiscard]] Formula plain_instance(const Schema& s);

}  // namespace condlog
