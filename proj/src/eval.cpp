#include "snel/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace snel {

namespace {

[[noreturn]] void invariant_violation(const std::string& what) {
    throw EvalError("internal invariant violation: " + what);
}

double saturating_add(double a, double b) { return std::min(a + b, 1.0); }
double saturating_sub(double a, double b) { return std::max(a - b, 0.0); }

bool is_integral(double v) {
    return std::isfinite(v) && std::floor(v) == v && std::abs(v) < 9.007199254740992e15;
}

nlohmann::ordered_json number_to_json(double v) {
    if (is_integral(v)) return static_cast<std::int64_t>(v);
    return v;
}

}  // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Probabilistic: return "prob";
        case Mode::Fuzzy: return "fuzzy";
        case Mode::Boolean: return "bool";
    }
    return "?";
}

std::optional<Mode> mode_from_name(const std::string& name) {
    if (name == "prob" || name == "probabilistic") return Mode::Probabilistic;
    if (name == "fuzzy") return Mode::Fuzzy;
    if (name == "bool" || name == "boolean") return Mode::Boolean;
    return std::nullopt;
}

void EvalConfig::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw EvalError("threshold must lie strictly between 0 and 1");
    }
    if (index_base != 0 && index_base != 1) {
        throw EvalError("index base must be 0 or 1");
    }
}

nlohmann::ordered_json value_to_json(const Value& v) {
    nlohmann::ordered_json out;
    if (const double* num = std::get_if<double>(&v)) {
        out["type"] = "number";
        out["result"] = number_to_json(*num);
    } else if (const bool* b = std::get_if<bool>(&v)) {
        out["type"] = "boolean";
        out["result"] = *b;
    } else if (const IndexList* idx = std::get_if<IndexList>(&v)) {
        out["type"] = "indices";
        out["result"] = idx->indices;
    } else {
        out["type"] = "values";
        out["result"] = std::get<ValueList>(v).values;
    }
    return out;
}

std::string value_to_pretty(const Value& v) {
    if (const double* num = std::get_if<double>(&v)) {
        return number_to_json(*num).dump();
    }
    if (const bool* b = std::get_if<bool>(&v)) {
        return *b ? "true" : "false";
    }
    std::ostringstream os;
    if (const IndexList* idx = std::get_if<IndexList>(&v)) {
        os << "[";
        for (std::size_t i = 0; i < idx->indices.size(); ++i) {
            if (i) os << ", ";
            os << idx->indices[i];
        }
        os << "]";
        return os.str();
    }
    const auto& values = std::get<ValueList>(v).values;
    os << "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ", ";
        os << nlohmann::json(values[i]).dump();
    }
    os << "]";
    return os.str();
}

const ScoreVector& ScoreCache::get_or_fetch(const Scene& scene, Backend& backend,
                                            const std::string& prompt) {
    if (auto it = by_prompt_.find(prompt); it != by_prompt_.end()) return it->second;
    ScoreVector scores = backend.align(scene, prompt);
    const std::string problem = score_vector_problem(scores.scores, scene.size());
    if (!problem.empty()) {
        throw BackendError("backend returned an invalid score vector for prompt \"" + prompt +
                           "\": " + problem);
    }
    return by_prompt_.emplace(prompt, std::move(scores)).first->second;
}

ScoreVector combine(CombineOp op, const ScoreVector& a, const ScoreVector* b, Mode mode) {
    if (op == CombineOp::Not) {
        if (b != nullptr) invariant_violation("'not' takes a single score vector");
    } else {
        if (b == nullptr) invariant_violation("binary combine needs two score vectors");
        if (a.size() != b->size()) {
            invariant_violation("score vectors of lengths " + std::to_string(a.size()) + " and " +
                                std::to_string(b->size()) + " cannot be combined");
        }
    }

    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double sa = a[i];
        const double sb = b ? (*b)[i] : 0.0;
        double r = 0.0;
        switch (op) {
            case CombineOp::And:
                r = mode == Mode::Probabilistic ? sa * sb
                    : mode == Mode::Fuzzy       ? std::min(sa, sb)
                                                : ((sa == 1.0 && sb == 1.0) ? 1.0 : 0.0);
                break;
            case CombineOp::Or:
                r = mode == Mode::Probabilistic ? sa + sb - sa * sb
                    : mode == Mode::Fuzzy       ? std::max(sa, sb)
                                                : ((sa == 1.0 || sb == 1.0) ? 1.0 : 0.0);
                break;
            case CombineOp::Not:
                r = mode == Mode::Boolean ? (sa == 1.0 ? 0.0 : 1.0) : 1.0 - sa;
                break;
            case CombineOp::Xor:
                r = mode == Mode::Probabilistic ? sa * (1.0 - sb) + sb * (1.0 - sa)
                    : mode == Mode::Fuzzy       ? std::abs(sa - sb)
                                                : ((sa == 1.0) != (sb == 1.0) ? 1.0 : 0.0);
                break;
            case CombineOp::Plus:
                // Saturating add; on binarized 0/1 inputs this is exactly 'or'.
                r = saturating_add(sa, sb);
                break;
            case CombineOp::Minus:
                // Saturating subtract; on binarized inputs this is 'and not'.
                r = saturating_sub(sa, sb);
                break;
        }
        out[i] = r;
    }
    return ScoreVector{std::move(out)};
}

std::vector<int> rank_and_limit(std::vector<int> candidates, const ScoreVector& key,
                                std::optional<SortOrder> order,
                                std::optional<std::int64_t> limit) {
    if (order) {
        const bool asc = *order == SortOrder::Asc;
        std::sort(candidates.begin(), candidates.end(), [&](int lhs, int rhs) {
            const double a = key[static_cast<std::size_t>(lhs)];
            const double b = key[static_cast<std::size_t>(rhs)];
            if (a != b) return asc ? a < b : a > b;
            return lhs < rhs;
        });
    }
    if (limit && static_cast<std::size_t>(*limit) < candidates.size()) {
        candidates.resize(static_cast<std::size_t>(*limit));
    }
    return candidates;
}

Evaluator::Evaluator(const Scene& scene, Backend& backend, const EvalConfig& config,
                     ScoreCache& cache)
    : scene_(scene), backend_(backend), config_(config), cache_(cache) {
    config_.validate();
}

ScoreVector Evaluator::leaf_scores(const std::string& prompt) {
    ScoreVector scores = cache_.get_or_fetch(scene_, backend_, prompt);
    if (config_.mode == Mode::Boolean) {
        for (double& s : scores.scores) s = s >= config_.threshold ? 1.0 : 0.0;
    }
    return scores;
}

ScoreVector Evaluator::eval_prompt(const PromptExpr& pexpr) {
    if (const auto* atom = std::get_if<PromptAtom>(&pexpr.node)) {
        return leaf_scores(atom->text);
    }
    if (const auto* neg = std::get_if<PromptNot>(&pexpr.node)) {
        const ScoreVector child = eval_prompt(*neg->child);
        return combine(CombineOp::Not, child, nullptr, config_.mode);
    }
    if (const auto* paren = std::get_if<PromptParen>(&pexpr.node)) {
        return eval_prompt(*paren->child);
    }
    const auto& bin = std::get<PromptBin>(pexpr.node);
    const ScoreVector lhs = eval_prompt(*bin.lhs);
    const ScoreVector rhs = eval_prompt(*bin.rhs);
    CombineOp op;
    switch (bin.op) {
        case PromptOp::And: op = CombineOp::And; break;
        case PromptOp::Or: op = CombineOp::Or; break;
        case PromptOp::Xor: op = CombineOp::Xor; break;
        case PromptOp::Plus: op = CombineOp::Plus; break;
        case PromptOp::Minus: op = CombineOp::Minus; break;
        default:
            invariant_violation("prompt ==/!= survived typechecking");
    }
    return combine(op, lhs, &rhs, config_.mode);
}

std::vector<int> Evaluator::passing_indices(const ScoreVector& scores) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] >= config_.threshold) out.push_back(static_cast<int>(i));
    }
    return out;
}

// Sorting applies only when the query asks for it: a sort prompt or an
// explicit asc/desc. A bare limit truncates the index-ordered list.
ScoreVector Evaluator::sort_key(const PromptExpr* sort, const ScoreVector& selection_scores) {
    if (sort) return eval_prompt(*sort);
    return selection_scores;
}

std::vector<int> Evaluator::exec_select(const PromptExpr& selection, const QueryTail& tail) {
    const ScoreVector scores = eval_prompt(selection);
    std::vector<int> candidates = passing_indices(scores);
    const ScoreVector key = sort_key(tail.sort.get(), scores);
    std::optional<SortOrder> order = tail.order;
    if (!order && tail.sort) order = config_.default_order;
    return rank_and_limit(std::move(candidates), key, order, tail.limit);
}

double Evaluator::exec_count(const PromptExpr& pexpr) {
    const ScoreVector scores = eval_prompt(pexpr);
    return static_cast<double>(passing_indices(scores).size());
}

bool Evaluator::exec_quant(const QuantExpr& quant) {
    const ScoreVector scores = eval_prompt(*quant.prompt);
    std::vector<int> candidates(scene_.size());
    std::iota(candidates.begin(), candidates.end(), 0);
    const ScoreVector key = sort_key(quant.tail.sort.get(), scores);
    std::optional<SortOrder> order = quant.tail.order;
    if (!order && quant.tail.sort) order = config_.default_order;
    candidates = rank_and_limit(std::move(candidates), key, order, quant.tail.limit);

    if (quant.is_all) {
        return std::all_of(candidates.begin(), candidates.end(), [&](int i) {
            return scores[static_cast<std::size_t>(i)] >= config_.threshold;
        });
    }
    return std::any_of(candidates.begin(), candidates.end(), [&](int i) {
        return scores[static_cast<std::size_t>(i)] >= config_.threshold;
    });
}

std::vector<std::string> Evaluator::exec_get(const GetQuery& query) {
    if (!backend_.supports_attr()) {
        throw BackendError("backend does not support attribute prediction");
    }
    const std::vector<int> selected = exec_select(*query.selection, query.tail);
    const auto* atom = std::get_if<PromptAtom>(&query.attribute->node);
    if (atom == nullptr) invariant_violation("get attribute is not a bare prompt");
    std::vector<std::string> values = backend_.attr(scene_, selected, atom->text);
    if (values.size() != selected.size()) {
        throw BackendError("backend returned " + std::to_string(values.size()) +
                           " attribute values for " + std::to_string(selected.size()) +
                           " entities");
    }
    return values;
}

double Evaluator::eval_number(const Expr& expr) {
    const Value v = eval_expr(expr);
    if (const double* num = std::get_if<double>(&v)) return *num;
    invariant_violation("expression did not evaluate to a number");
}

bool Evaluator::eval_boolean(const Expr& expr) {
    const Value v = eval_expr(expr);
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    invariant_violation("expression did not evaluate to a boolean");
}

double Evaluator::eval_call(const CallExpr& call, Span span) {
    std::vector<double> args;
    args.reserve(call.args.size());
    for (const auto& arg : call.args) args.push_back(eval_number(*arg));

    auto domain_error = [&](const std::string& what) -> double {
        throw EvalError(std::string(func_name(call.func)) + ": " + what, span);
    };

    switch (call.func) {
        case Func::Abs: return std::abs(args[0]);
        case Func::Max: return *std::max_element(args.begin(), args.end());
        case Func::Min: return *std::min_element(args.begin(), args.end());
        case Func::Floor: return std::floor(args[0]);
        case Func::Ceil: return std::ceil(args[0]);
        case Func::Round: return std::round(args[0]);
        case Func::Pow: {
            const double r = std::pow(args[0], args[1]);
            if (std::isnan(r)) return domain_error("result is undefined for these arguments");
            return r;
        }
        case Func::Sqrt:
            if (args[0] < 0.0) return domain_error("argument must be non-negative");
            return std::sqrt(args[0]);
        case Func::Exp: return std::exp(args[0]);
        case Func::Log:
            if (args[0] <= 0.0) return domain_error("argument must be positive");
            return std::log(args[0]);
        case Func::Log2:
            if (args[0] <= 0.0) return domain_error("argument must be positive");
            return std::log2(args[0]);
        case Func::Log10:
            if (args[0] <= 0.0) return domain_error("argument must be positive");
            return std::log10(args[0]);
        case Func::Sin: return std::sin(args[0]);
        case Func::Cos: return std::cos(args[0]);
        case Func::Tan: return std::tan(args[0]);
        case Func::Asin:
            if (args[0] < -1.0 || args[0] > 1.0) return domain_error("argument must be in [-1,1]");
            return std::asin(args[0]);
        case Func::Acos:
            if (args[0] < -1.0 || args[0] > 1.0) return domain_error("argument must be in [-1,1]");
            return std::acos(args[0]);
        case Func::Atan: return std::atan(args[0]);
        case Func::Mean:
            return std::accumulate(args.begin(), args.end(), 0.0) /
                   static_cast<double>(args.size());
        case Func::Std: {
            // Population standard deviation.
            const double mean = std::accumulate(args.begin(), args.end(), 0.0) /
                                static_cast<double>(args.size());
            double sq = 0.0;
            for (double a : args) sq += (a - mean) * (a - mean);
            return std::sqrt(sq / static_cast<double>(args.size()));
        }
    }
    invariant_violation("unhandled function");
}

Value Evaluator::eval_expr(const Expr& expr) {
    if (const auto* num = std::get_if<NumberLit>(&expr.node)) {
        return num->value;
    }
    if (const auto* lit = std::get_if<BoolLit>(&expr.node)) {
        return lit->value;
    }
    if (const auto* count = std::get_if<CountExpr>(&expr.node)) {
        return exec_count(*count->prompt);
    }
    if (const auto* quant = std::get_if<QuantExpr>(&expr.node)) {
        return exec_quant(*quant);
    }
    if (const auto* un = std::get_if<UnaryExpr>(&expr.node)) {
        if (un->op == UnaryOp::Neg) return -eval_number(*un->child);
        return !eval_boolean(*un->child);
    }
    if (const auto* bin = std::get_if<BinaryExpr>(&expr.node)) {
        switch (bin->op) {
            case BinaryOp::Add: return eval_number(*bin->lhs) + eval_number(*bin->rhs);
            case BinaryOp::Sub: return eval_number(*bin->lhs) - eval_number(*bin->rhs);
            case BinaryOp::Mul: return eval_number(*bin->lhs) * eval_number(*bin->rhs);
            case BinaryOp::Div: {
                const double lhs = eval_number(*bin->lhs);
                const double rhs = eval_number(*bin->rhs);
                if (rhs == 0.0) throw EvalError("division by zero", expr.span);
                return lhs / rhs;
            }
            case BinaryOp::Mod: {
                const double lhs = eval_number(*bin->lhs);
                const double rhs = eval_number(*bin->rhs);
                if (rhs == 0.0) throw EvalError("modulo by zero", expr.span);
                return std::fmod(lhs, rhs);
            }
            case BinaryOp::Pow: {
                const double r = std::pow(eval_number(*bin->lhs), eval_number(*bin->rhs));
                if (std::isnan(r)) {
                    throw EvalError("'^' result is undefined for these operands", expr.span);
                }
                return r;
            }
            case BinaryOp::Lt: return eval_number(*bin->lhs) < eval_number(*bin->rhs);
            case BinaryOp::Le: return eval_number(*bin->lhs) <= eval_number(*bin->rhs);
            case BinaryOp::Gt: return eval_number(*bin->lhs) > eval_number(*bin->rhs);
            case BinaryOp::Ge: return eval_number(*bin->lhs) >= eval_number(*bin->rhs);
            case BinaryOp::Eq:
            case BinaryOp::Ne: {
                bool equal = false;
                if (bin->lhs->type == ExprType::Number) {
                    equal = std::abs(eval_number(*bin->lhs) - eval_number(*bin->rhs)) <=
                            config_.epsilon;
                } else {
                    equal = eval_boolean(*bin->lhs) == eval_boolean(*bin->rhs);
                }
                return bin->op == BinaryOp::Eq ? equal : !equal;
            }
            case BinaryOp::And: return eval_boolean(*bin->lhs) && eval_boolean(*bin->rhs);
            case BinaryOp::Or: return eval_boolean(*bin->lhs) || eval_boolean(*bin->rhs);
            case BinaryOp::Xor: return eval_boolean(*bin->lhs) != eval_boolean(*bin->rhs);
        }
        invariant_violation("unhandled binary operator");
    }
    const auto& call = std::get<CallExpr>(expr.node);
    return eval_call(call, expr.span);
}

Value Evaluator::evaluate(const Query& query) {
    if (const auto* sel = std::get_if<SelectQuery>(&query.node)) {
        const std::vector<int> selected = exec_select(*sel->selection, sel->tail);
        IndexList out;
        out.indices.reserve(selected.size());
        for (int i : selected) out.indices.push_back(i + config_.index_base);
        return out;
    }
    if (const auto* get = std::get_if<GetQuery>(&query.node)) {
        return ValueList{exec_get(*get)};
    }
    return eval_expr(*std::get<ExprPtr>(query.node));
}

Value evaluate_query(const Query& query, const Scene& scene, Backend& backend,
                     const EvalConfig& config, ScoreCache& cache) {
    Evaluator evaluator(scene, backend, config, cache);
    return evaluator.evaluate(query);
}

}  // namespace snel
