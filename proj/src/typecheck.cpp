#include "snel/typecheck.hpp"

#include <sstream>

namespace snel {

namespace {

const char* type_name(ExprType t) {
    switch (t) {
        case ExprType::Number: return "Number";
        case ExprType::Boolean: return "Boolean";
        default: return "Unknown";
    }
}

[[noreturn]] void type_fail(const std::string& op, const std::string& expectation,
                            ExprType got_a, ExprType got_b, Span span) {
    std::ostringstream os;
    os << "operator '" << op << "' expects " << expectation << ", got " << type_name(got_a);
    if (got_b != ExprType::Unknown) os << " and " << type_name(got_b);
    throw TypeError(os.str(), span);
}

void check_pexpr(const PromptExpr& p) {
    if (const auto* neg = std::get_if<PromptNot>(&p.node)) {
        check_pexpr(*neg->child);
    } else if (const auto* paren = std::get_if<PromptParen>(&p.node)) {
        check_pexpr(*paren->child);
    } else if (const auto* bin = std::get_if<PromptBin>(&p.node)) {
        if (bin->op == PromptOp::Eq || bin->op == PromptOp::Ne) {
            throw TypeError(std::string("'") + prompt_op_symbol(bin->op) +
                                "' between prompts has no defined combination semantics",
                            p.span);
        }
        check_pexpr(*bin->lhs);
        check_pexpr(*bin->rhs);
    }
}

void check_tail(const QueryTail& tail) {
    if (tail.sort) check_pexpr(*tail.sort);
}

ExprType check_expr(Expr& e) {
    ExprType result = ExprType::Unknown;

    if (std::holds_alternative<NumberLit>(e.node)) {
        result = ExprType::Number;
    } else if (std::holds_alternative<BoolLit>(e.node)) {
        result = ExprType::Boolean;
    } else if (const auto* count = std::get_if<CountExpr>(&e.node)) {
        check_pexpr(*count->prompt);
        result = ExprType::Number;
    } else if (const auto* quant = std::get_if<QuantExpr>(&e.node)) {
        check_pexpr(*quant->prompt);
        check_tail(quant->tail);
        result = ExprType::Boolean;
    } else if (auto* un = std::get_if<UnaryExpr>(&e.node)) {
        const ExprType child = check_expr(*un->child);
        if (un->op == UnaryOp::Neg) {
            if (child != ExprType::Number) {
                type_fail("-", "a Number operand", child, ExprType::Unknown, e.span);
            }
            result = ExprType::Number;
        } else {
            if (child != ExprType::Boolean) {
                type_fail("not", "a Boolean operand", child, ExprType::Unknown, e.span);
            }
            result = ExprType::Boolean;
        }
    } else if (auto* bin = std::get_if<BinaryExpr>(&e.node)) {
        const ExprType lhs = check_expr(*bin->lhs);
        const ExprType rhs = check_expr(*bin->rhs);
        const char* sym = binary_op_symbol(bin->op);
        switch (bin->op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
            case BinaryOp::Mul:
            case BinaryOp::Div:
            case BinaryOp::Mod:
            case BinaryOp::Pow:
                if (lhs != ExprType::Number || rhs != ExprType::Number) {
                    type_fail(sym, "Number/Prompt operands", lhs, rhs, e.span);
                }
                result = ExprType::Number;
                break;
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge:
                if (lhs != ExprType::Number || rhs != ExprType::Number) {
                    type_fail(sym, "Number operands", lhs, rhs, e.span);
                }
                result = ExprType::Boolean;
                break;
            case BinaryOp::Eq:
            case BinaryOp::Ne:
                if (lhs != rhs) {
                    type_fail(sym, "operands of the same type", lhs, rhs, e.span);
                }
                result = ExprType::Boolean;
                break;
            case BinaryOp::And:
            case BinaryOp::Or:
            case BinaryOp::Xor:
                if (lhs != ExprType::Boolean || rhs != ExprType::Boolean) {
                    type_fail(sym, "Boolean/Prompt operands", lhs, rhs, e.span);
                }
                result = ExprType::Boolean;
                break;
        }
    } else {
        auto& call = std::get<CallExpr>(e.node);
        const FuncArity arity = func_arity(call.func);
        const int argc = static_cast<int>(call.args.size());
        if (argc < arity.min_args || (arity.max_args >= 0 && argc > arity.max_args)) {
            std::ostringstream os;
            os << func_name(call.func) << "() takes ";
            if (arity.max_args < 0) {
                os << "at least " << arity.min_args << " argument" << (arity.min_args == 1 ? "" : "s");
            } else if (arity.min_args == arity.max_args) {
                os << arity.min_args << " argument" << (arity.min_args == 1 ? "" : "s");
            }
            os << ", got " << argc;
            throw TypeError(os.str(), e.span);
        }
        for (auto& arg : call.args) {
            const ExprType t = check_expr(*arg);
            if (t != ExprType::Number) {
                type_fail(func_name(call.func), "Number arguments", t, ExprType::Unknown,
                          arg->span);
            }
        }
        result = ExprType::Number;
    }

    e.type = result;
    return result;
}

}  // namespace

void typecheck(Query& q) {
    if (auto* sel = std::get_if<SelectQuery>(&q.node)) {
        check_pexpr(*sel->selection);
        check_tail(sel->tail);
    } else if (auto* get = std::get_if<GetQuery>(&q.node)) {
        check_pexpr(*get->attribute);
        check_pexpr(*get->selection);
        check_tail(get->tail);
    } else {
        check_expr(*std::get<ExprPtr>(q.node));
    }
}

ExprType root_type(const Query& q) {
    if (const auto* expr = std::get_if<ExprPtr>(&q.node)) return (*expr)->type;
    return ExprType::Unknown;
}

}  // namespace snel
