#include "snel/parser.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "snel/lexer.hpp"

namespace snel {

namespace {

// Unified binding powers across all operator categories; higher binds
// tighter. Arithmetic sits above comparisons, comparisons above equality,
// equality above the logical operators; each category keeps its own internal
// order. Only `^` is right-associative.
constexpr int kBpOr = 10;
constexpr int kBpXor = 20;
constexpr int kBpAnd = 30;
constexpr int kBpEquality = 40;
constexpr int kBpRelational = 50;
constexpr int kBpAdditive = 60;
constexpr int kBpMultiplicative = 70;
constexpr int kBpPower = 80;

struct BinOpInfo {
    int bp;
    bool right_assoc;
};

std::optional<BinOpInfo> expr_op_info(TokenKind k) {
    switch (k) {
        case TokenKind::Or: return BinOpInfo{kBpOr, false};
        case TokenKind::Xor: return BinOpInfo{kBpXor, false};
        case TokenKind::And: return BinOpInfo{kBpAnd, false};
        case TokenKind::Eq:
        case TokenKind::Ne: return BinOpInfo{kBpEquality, false};
        case TokenKind::Lt:
        case TokenKind::Le:
        case TokenKind::Gt:
        case TokenKind::Ge: return BinOpInfo{kBpRelational, false};
        case TokenKind::Plus:
        case TokenKind::Minus: return BinOpInfo{kBpAdditive, false};
        case TokenKind::Times:
        case TokenKind::Divide:
        case TokenKind::Modulo: return BinOpInfo{kBpMultiplicative, false};
        case TokenKind::Power: return BinOpInfo{kBpPower, true};
        default: return std::nullopt;
    }
}

// The operators admitted inside prompt expressions.
std::optional<BinOpInfo> prompt_op_info(TokenKind k) {
    switch (k) {
        case TokenKind::Or: return BinOpInfo{kBpOr, false};
        case TokenKind::Xor: return BinOpInfo{kBpXor, false};
        case TokenKind::And: return BinOpInfo{kBpAnd, false};
        case TokenKind::Eq:
        case TokenKind::Ne: return BinOpInfo{kBpEquality, false};
        case TokenKind::Plus:
        case TokenKind::Minus: return BinOpInfo{kBpAdditive, false};
        default: return std::nullopt;
    }
}

BinaryOp to_binary_op(TokenKind k) {
    switch (k) {
        case TokenKind::Plus: return BinaryOp::Add;
        case TokenKind::Minus: return BinaryOp::Sub;
        case TokenKind::Times: return BinaryOp::Mul;
        case TokenKind::Divide: return BinaryOp::Div;
        case TokenKind::Modulo: return BinaryOp::Mod;
        case TokenKind::Power: return BinaryOp::Pow;
        case TokenKind::Lt: return BinaryOp::Lt;
        case TokenKind::Le: return BinaryOp::Le;
        case TokenKind::Gt: return BinaryOp::Gt;
        case TokenKind::Ge: return BinaryOp::Ge;
        case TokenKind::Eq: return BinaryOp::Eq;
        case TokenKind::Ne: return BinaryOp::Ne;
        case TokenKind::And: return BinaryOp::And;
        case TokenKind::Or: return BinaryOp::Or;
        case TokenKind::Xor: return BinaryOp::Xor;
        default: return BinaryOp::Add;  // unreachable
    }
}

PromptOp to_prompt_op(TokenKind k) {
    switch (k) {
        case TokenKind::And: return PromptOp::And;
        case TokenKind::Or: return PromptOp::Or;
        case TokenKind::Xor: return PromptOp::Xor;
        case TokenKind::Plus: return PromptOp::Plus;
        case TokenKind::Minus: return PromptOp::Minus;
        case TokenKind::Eq: return PromptOp::Eq;
        case TokenKind::Ne: return PromptOp::Ne;
        default: return PromptOp::And;  // unreachable
    }
}

// Recursion cap for the descent; queries this deep are hostile input.
constexpr int kMaxNestingDepth = 256;

class Parser {
public:
    explicit Parser(const TokenStream& tokens) : toks_(tokens) {}

    Query parse_query() {
        Query q = [&]() -> Query {
            if (at(TokenKind::Select)) return Query{parse_select()};
            if (at(TokenKind::Get)) return Query{parse_get()};
            reject_unsupported();
            return Query{parse_expr(0)};
        }();
        if (pos_ < toks_.size()) {
            reject_unsupported();
            fail("unexpected trailing tokens after the query", {});
        }
        return q;
    }

private:
    const TokenStream& toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : parser(p) {
            if (++parser.depth_ > kMaxNestingDepth) {
                throw ParseError("expression nesting exceeds " +
                                     std::to_string(kMaxNestingDepth) + " levels",
                                 {}, std::nullopt, parser.here());
            }
        }
        ~DepthGuard() { --parser.depth_; }
        Parser& parser;
    };

    // ---- token cursor -----------------------------------------------------

    bool at(TokenKind k) const { return pos_ < toks_.size() && toks_[pos_].kind == k; }

    const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }

    const Token& advance() { return toks_[pos_++]; }

    Span here() const {
        if (pos_ < toks_.size()) return toks_[pos_].span;
        if (!toks_.empty()) {
            const Span last = toks_.back().span;
            return Span{last.end, last.end};
        }
        return Span{0, 0};
    }

    [[noreturn]] void fail(const std::string& what, std::vector<TokenKind> expected) const {
        std::ostringstream os;
        os << what;
        if (!expected.empty()) {
            os << "; expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) os << (i + 1 == expected.size() ? " or " : ", ");
                os << token_kind_name(expected[i]);
            }
        }
        std::optional<Token> found;
        if (pos_ < toks_.size()) {
            found = toks_[pos_];
            os << ", found " << token_kind_name(found->kind) << " '" << found->text << "'";
        } else {
            os << ", found end of input";
        }
        throw ParseError(os.str(), std::move(expected), std::move(found), here());
    }

    Token expect(TokenKind k, const std::string& context) {
        if (!at(k)) fail(context, {k});
        return advance();
    }

    // Dedicated diagnostics for the two token kinds the grammar never admits.
    void reject_unsupported() const {
        if (at(TokenKind::Sample)) {
            throw ParseError("SAMPLE is a reserved word with no supported clause", {},
                             toks_[pos_], toks_[pos_].span);
        }
        if (at(TokenKind::Id)) {
            throw ParseError("identifier '" + toks_[pos_].text + "' not supported", {},
                             toks_[pos_], toks_[pos_].span);
        }
    }

    // ---- prompt expressions ------------------------------------------------

    PromptExprPtr parse_pexpr(int min_bp) {
        const DepthGuard guard(*this);
        PromptExprPtr lhs = parse_pexpr_unary();
        while (const Token* tok = peek()) {
            auto info = prompt_op_info(tok->kind);
            if (!info || info->bp < min_bp) break;
            const TokenKind op = advance().kind;
            PromptExprPtr rhs = parse_pexpr(info->bp + (info->right_assoc ? 0 : 1));
            Span span{lhs->span.start, rhs->span.end};
            auto node = std::make_unique<PromptExpr>();
            node->node = PromptBin{to_prompt_op(op), std::move(lhs), std::move(rhs)};
            node->span = span;
            lhs = std::move(node);
        }
        return lhs;
    }

    PromptExprPtr parse_pexpr_unary() {
        const DepthGuard guard(*this);
        if (at(TokenKind::Not)) {
            const Span start = advance().span;
            PromptExprPtr child = parse_pexpr_unary();
            auto node = std::make_unique<PromptExpr>();
            node->span = Span{start.start, child->span.end};
            node->node = PromptNot{std::move(child)};
            return node;
        }
        return parse_pexpr_atom();
    }

    PromptExprPtr parse_pexpr_atom() {
        reject_unsupported();
        if (at(TokenKind::Prompt)) {
            const Token& tok = advance();
            auto node = std::make_unique<PromptExpr>();
            node->node = PromptAtom{tok.value};
            node->span = tok.span;
            return node;
        }
        if (at(TokenKind::LParen)) {
            const Span start = advance().span;
            PromptExprPtr inner = parse_pexpr(0);
            const Token close = expect(TokenKind::RParen, "unclosed '(' in prompt expression");
            auto node = std::make_unique<PromptExpr>();
            node->span = Span{start.start, close.span.end};
            node->node = PromptParen{std::move(inner)};
            return node;
        }
        fail("expected a prompt", {TokenKind::Prompt, TokenKind::LParen, TokenKind::Not});
    }

    // ---- numeric / boolean expressions --------------------------------------

    ExprPtr parse_expr(int min_bp) {
        const DepthGuard guard(*this);
        ExprPtr lhs = parse_expr_unary();
        while (const Token* tok = peek()) {
            auto info = expr_op_info(tok->kind);
            if (!info || info->bp < min_bp) break;
            const TokenKind op = advance().kind;
            ExprPtr rhs = parse_expr(info->bp + (info->right_assoc ? 0 : 1));
            Span span{lhs->span.start, rhs->span.end};
            auto node = std::make_unique<Expr>();
            node->node = BinaryExpr{to_binary_op(op), std::move(lhs), std::move(rhs)};
            node->span = span;
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprPtr parse_expr_unary() {
        const DepthGuard guard(*this);
        if (at(TokenKind::Minus) || at(TokenKind::Not)) {
            const Token& tok = advance();
            const UnaryOp op = tok.kind == TokenKind::Minus ? UnaryOp::Neg : UnaryOp::Not;
            ExprPtr child = parse_expr_unary();
            auto node = std::make_unique<Expr>();
            node->span = Span{tok.span.start, child->span.end};
            node->node = UnaryExpr{op, std::move(child)};
            return node;
        }
        return parse_expr_atom();
    }

    ExprPtr parse_expr_atom() {
        reject_unsupported();
        if (at(TokenKind::Number)) {
            const Token& tok = advance();
            auto node = std::make_unique<Expr>();
            double value = 0.0;
            try {
                value = std::stod(tok.text);
            } catch (const std::out_of_range&) {
                throw ParseError("number literal out of range", {}, tok, tok.span);
            }
            node->node = NumberLit{tok.text, value};
            node->span = tok.span;
            return node;
        }
        if (at(TokenKind::Boolean)) {
            const Token& tok = advance();
            auto node = std::make_unique<Expr>();
            std::string lower = tok.text;
            for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            node->node = BoolLit{lower == "true"};
            node->span = tok.span;
            return node;
        }
        if (at(TokenKind::LParen)) {
            const Span start = advance().span;
            ExprPtr inner = parse_expr(0);
            const Token close = expect(TokenKind::RParen, "unclosed '(' in expression");
            inner->span = Span{start.start, close.span.end};
            return inner;
        }
        if (at(TokenKind::Count)) return parse_count();
        if (at(TokenKind::Any) || at(TokenKind::All)) return parse_quant();
        if (at(TokenKind::FuncName)) return parse_call();
        if (at(TokenKind::Prompt)) {
            throw ParseError(
                "a bare prompt is not an expression; use select/get/count/any/all",
                {}, toks_[pos_], toks_[pos_].span);
        }
        fail("expected an expression",
             {TokenKind::Number, TokenKind::Boolean, TokenKind::Count, TokenKind::Any,
              TokenKind::All, TokenKind::FuncName, TokenKind::LParen});
    }

    // count pexpr  |  count '(' pexpr ')'
    // The parenthesized form is closed by its ')': the prompt expression does
    // not extend past it, which is what allows embedding in larger
    // expressions.
    ExprPtr parse_count() {
        const Span start = advance().span;
        PromptExprPtr prompt;
        Span end{};
        if (at(TokenKind::LParen)) {
            advance();
            prompt = parse_pexpr(0);
            end = expect(TokenKind::RParen, "unclosed '(' after count").span;
        } else {
            prompt = parse_pexpr(0);
            end = prompt->span;
        }
        auto node = std::make_unique<Expr>();
        node->span = Span{start.start, end.end};
        node->node = CountExpr{std::move(prompt)};
        return node;
    }

    ExprPtr parse_quant() {
        const Token& kw = advance();
        const bool is_all = kw.kind == TokenKind::All;
        PromptExprPtr prompt;
        if (at(TokenKind::LParen)) {
            advance();
            prompt = parse_pexpr(0);
            expect(TokenKind::RParen, std::string("unclosed '(' after ") + (is_all ? "all" : "any"));
        } else {
            prompt = parse_pexpr(0);
        }
        QueryTail tail = parse_tail();
        auto node = std::make_unique<Expr>();
        Span end = prompt->span;
        if (tail.sort) end = tail.sort->span;
        node->span = Span{kw.span.start, pos_ > 0 ? toks_[pos_ - 1].span.end : end.end};
        node->node = QuantExpr{is_all, std::move(prompt), std::move(tail)};
        return node;
    }

    ExprPtr parse_call() {
        const Token& name = advance();
        std::string lower = name.text;
        for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        const Func func = *func_from_name(lower);
        expect(TokenKind::LParen, "function call needs '('");
        std::vector<ExprPtr> args;
        if (!at(TokenKind::RParen)) {
            args.push_back(parse_expr(0));
            while (at(TokenKind::Comma)) {
                advance();
                args.push_back(parse_expr(0));
            }
        }
        const Token close = expect(TokenKind::RParen, "unclosed '(' in function call");
        auto node = std::make_unique<Expr>();
        node->span = Span{name.span.start, close.span.end};
        node->node = CallExpr{func, std::move(args)};
        return node;
    }

    // ---- clauses -------------------------------------------------------------

    SelectQuery parse_select() {
        const Span start = advance().span;
        PromptExprPtr selection = parse_pexpr(0);
        QueryTail tail = parse_tail();
        const Span end = pos_ > 0 ? toks_[pos_ - 1].span : start;
        return SelectQuery{std::move(selection), std::move(tail), Span{start.start, end.end}};
    }

    GetQuery parse_get() {
        const Span start = advance().span;
        reject_unsupported();
        if (!at(TokenKind::Prompt)) {
            fail("get takes a single attribute prompt", {TokenKind::Prompt});
        }
        const Token& attr_tok = advance();
        auto attribute = std::make_unique<PromptExpr>();
        attribute->node = PromptAtom{attr_tok.value};
        attribute->span = attr_tok.span;
        expect(TokenKind::From, "get needs a from clause");
        PromptExprPtr selection = parse_pexpr(0);
        QueryTail tail = parse_tail();
        const Span end = pos_ > 0 ? toks_[pos_ - 1].span : start;
        return GetQuery{std::move(attribute), std::move(selection), std::move(tail),
                        Span{start.start, end.end}};
    }

    // sort by / asc|desc / limit, each at most once, in any order.
    QueryTail parse_tail() {
        QueryTail tail;
        for (;;) {
            if (at(TokenKind::SortBy)) {
                const Token& tok = advance();
                if (tail.sort) {
                    throw ParseError("duplicate sort by clause", {}, tok, tok.span);
                }
                tail.sort = parse_pexpr(0);
            } else if (at(TokenKind::Asc) || at(TokenKind::Desc)) {
                const Token& tok = advance();
                if (tail.order) {
                    throw ParseError("duplicate asc/desc clause", {}, tok, tok.span);
                }
                tail.order = tok.kind == TokenKind::Asc ? SortOrder::Asc : SortOrder::Desc;
            } else if (at(TokenKind::Limit)) {
                const Token& kw = advance();
                if (tail.limit) {
                    throw ParseError("duplicate limit clause", {}, kw, kw.span);
                }
                const Token num = expect(TokenKind::Number, "limit needs a count");
                tail.limit = parse_limit_value(num);
            } else {
                break;
            }
        }
        return tail;
    }

    std::int64_t parse_limit_value(const Token& num) {
        if (num.text.find('.') != std::string::npos) {
            throw ParseError("limit must be a positive integer", {}, num, num.span);
        }
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), value);
        if (ec != std::errc() || ptr != num.text.data() + num.text.size() || value < 1) {
            throw ParseError("limit must be a positive integer", {}, num, num.span);
        }
        return value;
    }
};

}  // namespace

Query parse(const TokenStream& tokens) {
    return Parser(tokens).parse_query();
}

Query parse_query(std::string_view input) {
    return parse(tokenize(input));
}

}  // namespace snel
