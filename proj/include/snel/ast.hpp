#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "snel/span.hpp"

namespace snel {

enum class SortOrder { Asc, Desc };

// ---------------------------------------------------------------------------
// Prompt expressions: trees whose leaves are natural-language prompts and
// whose operators combine per-entity score vectors.
// ---------------------------------------------------------------------------

enum class PromptOp { And, Or, Xor, Plus, Minus, Eq, Ne };

struct PromptExpr;
using PromptExprPtr = std::unique_ptr<PromptExpr>;

struct PromptAtom {
    std::string text;
};

struct PromptNot {
    PromptExprPtr child;
};

struct PromptParen {
    PromptExprPtr child;
};

struct PromptBin {
    PromptOp op;
    PromptExprPtr lhs;
    PromptExprPtr rhs;
};

struct PromptExpr {
    std::variant<PromptAtom, PromptNot, PromptParen, PromptBin> node;
    Span span;
};

// ---------------------------------------------------------------------------
// Numeric / boolean expressions.
// ---------------------------------------------------------------------------

enum class UnaryOp { Neg, Not };

enum class BinaryOp {
    Add, Sub, Mul, Div, Mod, Pow,
    Lt, Le, Gt, Ge, Eq, Ne,
    And, Or, Xor,
};

enum class Func {
    Abs, Max, Min, Floor, Ceil, Round, Pow, Sqrt, Exp,
    Log, Log2, Log10, Sin, Cos, Tan, Asin, Acos, Atan, Mean, Std,
};

std::optional<Func> func_from_name(const std::string& lower_name);
const char* func_name(Func f);

// Argument-count contract: pow takes 2, min/max/mean/std take 1 or more,
// everything else takes exactly 1.
struct FuncArity {
    int min_args;
    int max_args;  // -1 = unbounded
};
FuncArity func_arity(Func f);

enum class ExprType { Unknown, Number, Boolean };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

// Optional `sort by` / `asc|desc` / `limit N` modifiers shared by queries and
// the any/all atoms.
struct QueryTail {
    PromptExprPtr sort;  // null when absent
    std::optional<SortOrder> order;
    std::optional<std::int64_t> limit;
};

struct NumberLit {
    std::string text;  // literal as written; dumps reproduce it verbatim
    double value;
};

struct BoolLit {
    bool value;
};

struct CountExpr {
    PromptExprPtr prompt;
};

struct QuantExpr {
    bool is_all;  // false = any
    PromptExprPtr prompt;
    QueryTail tail;
};

struct UnaryExpr {
    UnaryOp op;
    ExprPtr child;
};

struct BinaryExpr {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct CallExpr {
    Func func;
    std::vector<ExprPtr> args;
};

struct Expr {
    std::variant<NumberLit, BoolLit, CountExpr, QuantExpr, UnaryExpr, BinaryExpr, CallExpr> node;
    Span span;
    ExprType type = ExprType::Unknown;  // filled in by typecheck
};

// ---------------------------------------------------------------------------
// Top-level queries. Select/get appear only at the root.
// ---------------------------------------------------------------------------

struct SelectQuery {
    PromptExprPtr selection;
    QueryTail tail;
    Span span;
};

struct GetQuery {
    PromptExprPtr attribute;  // always a bare prompt atom
    PromptExprPtr selection;
    QueryTail tail;
    Span span;
};

struct Query {
    std::variant<SelectQuery, GetQuery, ExprPtr> node;
};

// ---------------------------------------------------------------------------
// Printing and structural comparison.
// ---------------------------------------------------------------------------

// Stable s-expression dump, the format the CLI `check` command prints and
// golden tests freeze.
std::string dump(const Query& q);
std::string dump(const PromptExpr& p);
std::string dump(const Expr& e);

// Fully parenthesized concrete query syntax that re-parses to an equivalent
// tree (equivalent modulo grouping nodes).
std::string to_query_string(const Query& q);

// Structural equality ignoring PromptParen grouping nodes.
bool equal_ignoring_parens(const Query& a, const Query& b);
bool equal_ignoring_parens(const PromptExpr& a, const PromptExpr& b);
bool equal_ignoring_parens(const Expr& a, const Expr& b);

const char* prompt_op_symbol(PromptOp op);
const char* binary_op_symbol(BinaryOp op);

}  // namespace snel
