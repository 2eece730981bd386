#include "snel/ast.hpp"

#include <sstream>
#include <unordered_map>

namespace snel {

std::string to_query_string_pexpr(const PromptExpr& p);

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void dump_tail(std::ostringstream& os, const QueryTail& tail) {
    if (tail.sort) os << " :sort " << dump(*tail.sort);
    if (tail.order) os << " :order " << (*tail.order == SortOrder::Asc ? "asc" : "desc");
    if (tail.limit) os << " :limit " << *tail.limit;
}

void tail_syntax(std::ostringstream& os, const QueryTail& tail) {
    if (tail.sort) os << " sort by " << to_query_string_pexpr(*tail.sort);
    if (tail.order) os << (*tail.order == SortOrder::Asc ? " asc" : " desc");
    if (tail.limit) os << " limit " << *tail.limit;
}

bool tails_equal(const QueryTail& a, const QueryTail& b) {
    if (static_cast<bool>(a.sort) != static_cast<bool>(b.sort)) return false;
    if (a.sort && !equal_ignoring_parens(*a.sort, *b.sort)) return false;
    return a.order == b.order && a.limit == b.limit;
}

const PromptExpr& strip_parens(const PromptExpr& p) {
    if (const auto* paren = std::get_if<PromptParen>(&p.node)) return strip_parens(*paren->child);
    return p;
}

}  // namespace

std::optional<Func> func_from_name(const std::string& lower_name) {
    static const std::unordered_map<std::string, Func> table = {
        {"abs", Func::Abs},     {"max", Func::Max},   {"min", Func::Min},
        {"floor", Func::Floor}, {"ceil", Func::Ceil}, {"round", Func::Round},
        {"pow", Func::Pow},     {"sqrt", Func::Sqrt}, {"exp", Func::Exp},
        {"log", Func::Log},     {"log2", Func::Log2}, {"log10", Func::Log10},
        {"sin", Func::Sin},     {"cos", Func::Cos},   {"tan", Func::Tan},
        {"asin", Func::Asin},   {"acos", Func::Acos}, {"atan", Func::Atan},
        {"mean", Func::Mean},   {"std", Func::Std},
    };
    auto it = table.find(lower_name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Abs: return "abs";
        case Func::Max: return "max";
        case Func::Min: return "min";
        case Func::Floor: return "floor";
        case Func::Ceil: return "ceil";
        case Func::Round: return "round";
        case Func::Pow: return "pow";
        case Func::Sqrt: return "sqrt";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Log2: return "log2";
        case Func::Log10: return "log10";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Asin: return "asin";
        case Func::Acos: return "acos";
        case Func::Atan: return "atan";
        case Func::Mean: return "mean";
        case Func::Std: return "std";
    }
    return "?";
}

FuncArity func_arity(Func f) {
    switch (f) {
        case Func::Pow: return {2, 2};
        case Func::Max:
        case Func::Min:
        case Func::Mean:
        case Func::Std: return {1, -1};
        default: return {1, 1};
    }
}

const char* prompt_op_symbol(PromptOp op) {
    switch (op) {
        case PromptOp::And: return "and";
        case PromptOp::Or: return "or";
        case PromptOp::Xor: return "xor";
        case PromptOp::Plus: return "+";
        case PromptOp::Minus: return "-";
        case PromptOp::Eq: return "==";
        case PromptOp::Ne: return "!=";
    }
    return "?";
}

const char* binary_op_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
        case BinaryOp::Pow: return "^";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::And: return "and";
        case BinaryOp::Or: return "or";
        case BinaryOp::Xor: return "xor";
    }
    return "?";
}

std::string dump(const PromptExpr& p) {
    std::ostringstream os;
    if (const auto* atom = std::get_if<PromptAtom>(&p.node)) {
        os << "(prompt " << quote(atom->text) << ")";
    } else if (const auto* neg = std::get_if<PromptNot>(&p.node)) {
        os << "(not " << dump(*neg->child) << ")";
    } else if (const auto* paren = std::get_if<PromptParen>(&p.node)) {
        os << "(paren " << dump(*paren->child) << ")";
    } else {
        const auto& bin = std::get<PromptBin>(p.node);
        os << "(" << prompt_op_symbol(bin.op) << " " << dump(*bin.lhs) << " " << dump(*bin.rhs)
           << ")";
    }
    return os.str();
}

std::string dump(const Expr& e) {
    std::ostringstream os;
    if (const auto* num = std::get_if<NumberLit>(&e.node)) {
        os << num->text;
    } else if (const auto* b = std::get_if<BoolLit>(&e.node)) {
        os << (b->value ? "true" : "false");
    } else if (const auto* count = std::get_if<CountExpr>(&e.node)) {
        os << "(count " << dump(*count->prompt) << ")";
    } else if (const auto* quant = std::get_if<QuantExpr>(&e.node)) {
        os << "(" << (quant->is_all ? "all" : "any") << " " << dump(*quant->prompt);
        dump_tail(os, quant->tail);
        os << ")";
    } else if (const auto* un = std::get_if<UnaryExpr>(&e.node)) {
        os << "(" << (un->op == UnaryOp::Neg ? "neg" : "not") << " " << dump(*un->child) << ")";
    } else if (const auto* bin = std::get_if<BinaryExpr>(&e.node)) {
        os << "(" << binary_op_symbol(bin->op) << " " << dump(*bin->lhs) << " " << dump(*bin->rhs)
           << ")";
    } else {
        const auto& call = std::get<CallExpr>(e.node);
        os << "(" << func_name(call.func);
        for (const auto& arg : call.args) os << " " << dump(*arg);
        os << ")";
    }
    return os.str();
}

std::string dump(const Query& q) {
    std::ostringstream os;
    if (const auto* sel = std::get_if<SelectQuery>(&q.node)) {
        os << "(select " << dump(*sel->selection);
        dump_tail(os, sel->tail);
        os << ")";
    } else if (const auto* get = std::get_if<GetQuery>(&q.node)) {
        os << "(get " << dump(*get->attribute) << " :from " << dump(*get->selection);
        dump_tail(os, get->tail);
        os << ")";
    } else {
        os << dump(*std::get<ExprPtr>(q.node));
    }
    return os.str();
}

std::string to_query_string_pexpr(const PromptExpr& p) {
    std::ostringstream os;
    if (const auto* atom = std::get_if<PromptAtom>(&p.node)) {
        os << "[" << atom->text << "]";
    } else if (const auto* neg = std::get_if<PromptNot>(&p.node)) {
        os << "(not " << to_query_string_pexpr(*neg->child) << ")";
    } else if (const auto* paren = std::get_if<PromptParen>(&p.node)) {
        // Grouping is transparent; compound children print their own parens.
        os << to_query_string_pexpr(*paren->child);
    } else {
        const auto& bin = std::get<PromptBin>(p.node);
        os << "(" << to_query_string_pexpr(*bin.lhs) << " " << prompt_op_symbol(bin.op) << " "
           << to_query_string_pexpr(*bin.rhs) << ")";
    }
    return os.str();
}

namespace {

std::string to_query_string_expr(const Expr& e) {
    std::ostringstream os;
    if (const auto* num = std::get_if<NumberLit>(&e.node)) {
        os << num->text;
    } else if (const auto* b = std::get_if<BoolLit>(&e.node)) {
        os << (b->value ? "true" : "false");
    } else if (const auto* count = std::get_if<CountExpr>(&e.node)) {
        os << "count(" << to_query_string_pexpr(*count->prompt) << ")";
    } else if (const auto* quant = std::get_if<QuantExpr>(&e.node)) {
        os << "(" << (quant->is_all ? "all" : "any") << "("
           << to_query_string_pexpr(*quant->prompt) << ")";
        tail_syntax(os, quant->tail);
        os << ")";
    } else if (const auto* un = std::get_if<UnaryExpr>(&e.node)) {
        os << "(" << (un->op == UnaryOp::Neg ? "-" : "not ") << to_query_string_expr(*un->child)
           << ")";
    } else if (const auto* bin = std::get_if<BinaryExpr>(&e.node)) {
        os << "(" << to_query_string_expr(*bin->lhs) << " " << binary_op_symbol(bin->op) << " "
           << to_query_string_expr(*bin->rhs) << ")";
    } else {
        const auto& call = std::get<CallExpr>(e.node);
        os << func_name(call.func) << "(";
        for (std::size_t i = 0; i < call.args.size(); ++i) {
            if (i) os << ", ";
            os << to_query_string_expr(*call.args[i]);
        }
        os << ")";
    }
    return os.str();
}

}  // namespace

std::string to_query_string(const Query& q) {
    std::ostringstream os;
    if (const auto* sel = std::get_if<SelectQuery>(&q.node)) {
        os << "select " << to_query_string_pexpr(*sel->selection);
        tail_syntax(os, sel->tail);
    } else if (const auto* get = std::get_if<GetQuery>(&q.node)) {
        os << "get " << to_query_string_pexpr(*get->attribute) << " from "
           << to_query_string_pexpr(*get->selection);
        tail_syntax(os, get->tail);
    } else {
        os << to_query_string_expr(*std::get<ExprPtr>(q.node));
    }
    return os.str();
}

bool equal_ignoring_parens(const PromptExpr& a_in, const PromptExpr& b_in) {
    const PromptExpr& a = strip_parens(a_in);
    const PromptExpr& b = strip_parens(b_in);
    if (a.node.index() != b.node.index()) return false;
    if (const auto* atom = std::get_if<PromptAtom>(&a.node)) {
        return atom->text == std::get<PromptAtom>(b.node).text;
    }
    if (const auto* neg = std::get_if<PromptNot>(&a.node)) {
        return equal_ignoring_parens(*neg->child, *std::get<PromptNot>(b.node).child);
    }
    const auto& ba = std::get<PromptBin>(a.node);
    const auto& bb = std::get<PromptBin>(b.node);
    return ba.op == bb.op && equal_ignoring_parens(*ba.lhs, *bb.lhs) &&
           equal_ignoring_parens(*ba.rhs, *bb.rhs);
}

bool equal_ignoring_parens(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* num = std::get_if<NumberLit>(&a.node)) {
        return num->value == std::get<NumberLit>(b.node).value;
    }
    if (const auto* lit = std::get_if<BoolLit>(&a.node)) {
        return lit->value == std::get<BoolLit>(b.node).value;
    }
    if (const auto* count = std::get_if<CountExpr>(&a.node)) {
        return equal_ignoring_parens(*count->prompt, *std::get<CountExpr>(b.node).prompt);
    }
    if (const auto* quant = std::get_if<QuantExpr>(&a.node)) {
        const auto& qb = std::get<QuantExpr>(b.node);
        return quant->is_all == qb.is_all &&
               equal_ignoring_parens(*quant->prompt, *qb.prompt) && tails_equal(quant->tail, qb.tail);
    }
    if (const auto* un = std::get_if<UnaryExpr>(&a.node)) {
        const auto& ub = std::get<UnaryExpr>(b.node);
        return un->op == ub.op && equal_ignoring_parens(*un->child, *ub.child);
    }
    if (const auto* bin = std::get_if<BinaryExpr>(&a.node)) {
        const auto& bb = std::get<BinaryExpr>(b.node);
        return bin->op == bb.op && equal_ignoring_parens(*bin->lhs, *bb.lhs) &&
               equal_ignoring_parens(*bin->rhs, *bb.rhs);
    }
    const auto& ca = std::get<CallExpr>(a.node);
    const auto& cb = std::get<CallExpr>(b.node);
    if (ca.func != cb.func || ca.args.size() != cb.args.size()) return false;
    for (std::size_t i = 0; i < ca.args.size(); ++i) {
        if (!equal_ignoring_parens(*ca.args[i], *cb.args[i])) return false;
    }
    return true;
}

bool equal_ignoring_parens(const Query& a, const Query& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* sel = std::get_if<SelectQuery>(&a.node)) {
        const auto& sb = std::get<SelectQuery>(b.node);
        return equal_ignoring_parens(*sel->selection, *sb.selection) &&
               tails_equal(sel->tail, sb.tail);
    }
    if (const auto* get = std::get_if<GetQuery>(&a.node)) {
        const auto& gb = std::get<GetQuery>(b.node);
        return equal_ignoring_parens(*get->attribute, *gb.attribute) &&
               equal_ignoring_parens(*get->selection, *gb.selection) &&
               tails_equal(get->tail, gb.tail);
    }
    return equal_ignoring_parens(*std::get<ExprPtr>(a.node), *std::get<ExprPtr>(b.node));
}

}  // namespace snel
