#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "condlog/decide.hpp"
#include "condlog/derivation.hpp"
#include "condlog/order_model.hpp"
#include "condlog/prob.hpp"
#include "condlog/seq_model.hpp"
#include "condlog/statedesc.hpp"

namespace condlog {

using json = nlohmann::json;

// Malformed input files. The CLI maps this to its input-error exit code.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[nodiscard]] json read_json_file(const std::string& path);

// Order models:
//   {"worlds": [...], "after": {"w": [...]}, "valuation": {"p": [...]}, "designated": "w"}
[[nodiscard]] OrderModel model_from_json(const json& j);
[[nodiscard]] json model_to_json(const OrderModel& m);
[[nodiscard]] json frame_to_json(const OrderFrame& f);

// Kripke models: "relation" is a list of [from, to] pairs.
[[nodiscard]] KripkeModel kripke_from_json(const json& j);
[[nodiscard]] json kripke_to_json(const KripkeModel& k);

// Sequence models: {"sequence": "(a,b)^w,c", "protoworlds": {"p": ["a"]}}
[[nodiscard]] ProtoworldTable table_from_json(const json& j);
[[nodiscard]] json table_to_json(const ProtoworldTable& t);
[[nodiscard]] SequenceModel sequence_model_from_json(const json& j);
[[nodiscard]] json sequence_model_to_json(const SeqExpr& root, const ProtoworldTable& t);

// Lasso models: {"prefix": [...], "cycle": [...], "protoworlds": {...}}
[[nodiscard]] LassoModel lasso_model_from_json(const json& j);
[[nodiscard]] json lasso_model_to_json(const LassoModel& m);
[[nodiscard]] json lasso_to_json(const Lasso& l);

[[nodiscard]] SelectionTable selection_from_json(const json& j);
[[nodiscard]] json selection_to_json(const SelectionTable& t);

// A witness: the order model, plus the sequence when there is one.
[[nodiscard]] json found_to_json(const Found& f);
[[nodiscard]] json verdict_to_json(const Verdict& v);

[[nodiscard]] Derivation derivation_from_json(const json& j);
[[nodiscard]] json derivation_to_json(const Derivation& d);

// {"pi": {"w": "1/5", ...}, "atoms": {"p": ["w", ...]}, "shape": "omega" | "tree"}
[[nodiscard]] ProductSpec prob_spec_from_json(const json& j);
[[nodiscard]] json prob_spec_to_json(const ProductSpec& s);
[[nodiscard]] json estimate_to_json(const Estimate& e);
[[nodiscard]] json prob_value_to_json(const ProbValue& v);
[[nodiscard]] json report_to_json(const std::vector<FactLine>& lines);

[[nodiscard]] json descs_to_json(const DescSpace& sp, const std::vector<DescId>& ds);
[[nodiscard]] json makeseq_to_json(const DescSpace& sp, const MakeSeqResult& r);

}  // namespace condlog
