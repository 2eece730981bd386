#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "snel/ast.hpp"
#include "snel/backend.hpp"
#include "snel/error.hpp"
#include "snel/scene.hpp"

namespace snel {

// How combined prompt scores are interpreted: as probabilities (product/sum
// rules), as fuzzy truth degrees (min/max), or binarized at the threshold
// and combined with exact 0/1 logic.
enum class Mode { Probabilistic, Fuzzy, Boolean };

const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(const std::string& name);

struct EvalConfig {
    Mode mode = Mode::Probabilistic;
    double threshold = 0.5;  // selection cutoff, in (0,1)
    int index_base = 0;      // 0 or 1; offsets reported entity indices
    SortOrder default_order = SortOrder::Desc;
    double epsilon = 1e-9;  // tolerance for numeric ==

    // Throws EvalError when threshold or index_base is out of contract.
    void validate() const;
};

struct IndexList {
    std::vector<std::int64_t> indices;
    friend bool operator==(const IndexList&, const IndexList&) = default;
};

struct ValueList {
    std::vector<std::string> values;
    friend bool operator==(const ValueList&, const ValueList&) = default;
};

using Value = std::variant<double, bool, IndexList, ValueList>;

// {"type": "indices"|"values"|"number"|"boolean", "result": ...} with that
// key order. Integral numbers serialize as JSON integers.
nlohmann::ordered_json value_to_json(const Value& v);
std::string value_to_pretty(const Value& v);

// Per-execution memo of raw backend score vectors keyed by prompt text, so
// repeated atoms hit the backend once. The REPL keeps one across a session.
class ScoreCache {
public:
    const ScoreVector& get_or_fetch(const Scene& scene, Backend& backend,
                                    const std::string& prompt);
    void clear() { by_prompt_.clear(); }
    std::size_t size() const { return by_prompt_.size(); }

private:
    std::unordered_map<std::string, ScoreVector> by_prompt_;
};

enum class CombineOp { And, Or, Not, Xor, Plus, Minus };

// Element-wise score combination for one interpretation mode. `b` must be
// null exactly when op == Not. Boolean mode expects binarized inputs and
// yields exact 0/1 outputs.
ScoreVector combine(CombineOp op, const ScoreVector& a, const ScoreVector* b, Mode mode);

// Orders candidate indices by their key scores (ties broken by ascending
// index) and truncates to `limit`. Without an order the candidate list is
// returned unsorted (ascending index order), truncated only.
std::vector<int> rank_and_limit(std::vector<int> candidates, const ScoreVector& key,
                                std::optional<SortOrder> order,
                                std::optional<std::int64_t> limit);

// Executes typechecked queries against one scene through one backend.
class Evaluator {
public:
    Evaluator(const Scene& scene, Backend& backend, const EvalConfig& config, ScoreCache& cache);

    Value evaluate(const Query& query);

    // Exposed for direct testing of the score algebra and clause semantics.
    ScoreVector eval_prompt(const PromptExpr& pexpr);
    std::vector<int> exec_select(const PromptExpr& selection, const QueryTail& tail);  // 0-based
    double exec_count(const PromptExpr& pexpr);
    bool exec_quant(const QuantExpr& quant);
    std::vector<std::string> exec_get(const GetQuery& query);
    Value eval_expr(const Expr& expr);

private:
    ScoreVector leaf_scores(const std::string& prompt);
    ScoreVector sort_key(const PromptExpr* sort, const ScoreVector& selection_scores);
    std::vector<int> passing_indices(const ScoreVector& scores) const;
    double eval_number(const Expr& expr);
    bool eval_boolean(const Expr& expr);
    double eval_call(const CallExpr& call, Span span);

    const Scene& scene_;
    Backend& backend_;
    const EvalConfig& config_;
    ScoreCache& cache_;
};

// One-shot convenience used by the CLI and tests.
Value evaluate_query(const Query& query, const Scene& scene, Backend& backend,
                     const EvalConfig& config, ScoreCache& cache);

}  // namespace snel
