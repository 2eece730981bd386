#include "snel/lexer.hpp"

#include <cctype>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "snel/error.hpp"

namespace snel {

namespace {

bool is_word_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c));
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

const std::unordered_map<std::string, TokenKind>& keyword_table() {
    static const std::unordered_map<std::string, TokenKind> table = {
        {"and", TokenKind::And},       {"or", TokenKind::Or},
        {"not", TokenKind::Not},       {"xor", TokenKind::Xor},
        {"true", TokenKind::Boolean},  {"false", TokenKind::Boolean},
        {"select", TokenKind::Select}, {"count", TokenKind::Count},
        {"get", TokenKind::Get},       {"from", TokenKind::From},
        {"any", TokenKind::Any},       {"all", TokenKind::All},
        {"sample", TokenKind::Sample}, {"asc", TokenKind::Asc},
        {"desc", TokenKind::Desc},     {"limit", TokenKind::Limit},
    };
    return table;
}

const std::unordered_set<std::string>& function_names() {
    static const std::unordered_set<std::string> names = {
        "abs", "max",  "min",  "floor", "ceil", "round", "pow",
        "sqrt", "exp", "log",  "log2",  "log10", "sin",  "cos",
        "tan",  "asin", "acos", "atan", "mean", "std",
    };
    return names;
}

class Lexer {
public:
    explicit Lexer(std::string_view input) : src_(input) {}

    TokenStream run() {
        TokenStream out;
        while (true) {
            skip_whitespace();
            if (pos_ >= src_.size()) break;
            out.push_back(next_token());
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_whitespace() {
        while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
    }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    Token make(TokenKind kind, std::size_t start, std::size_t end) {
        std::string text(src_.substr(start, end - start));
        return Token{kind, text, text, Span{start, end}};
    }

    Token next_token() {
        const std::size_t start = pos_;
        const char c = src_[pos_];

        if (c == '[') return lex_prompt();
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number();
        if (is_word_start(c)) return lex_word();

        switch (c) {
            case '+': ++pos_; return make(TokenKind::Plus, start, pos_);
            case '-': ++pos_; return make(TokenKind::Minus, start, pos_);
            case '*': ++pos_; return make(TokenKind::Times, start, pos_);
            case '/': ++pos_; return make(TokenKind::Divide, start, pos_);
            case '%': ++pos_; return make(TokenKind::Modulo, start, pos_);
            case '^': ++pos_; return make(TokenKind::Power, start, pos_);
            case '(': ++pos_; return make(TokenKind::LParen, start, pos_);
            case ')': ++pos_; return make(TokenKind::RParen, start, pos_);
            case ',': ++pos_; return make(TokenKind::Comma, start, pos_);
            case '<':
                pos_ += peek(1) == '=' ? 2 : 1;
                return make(pos_ - start == 2 ? TokenKind::Le : TokenKind::Lt, start, pos_);
            case '>':
                pos_ += peek(1) == '=' ? 2 : 1;
                return make(pos_ - start == 2 ? TokenKind::Ge : TokenKind::Gt, start, pos_);
            case '=':
                if (peek(1) == '=') {
                    pos_ += 2;
                    return make(TokenKind::Eq, start, pos_);
                }
                break;
            case '!':
                if (peek(1) == '=') {
                    pos_ += 2;
                    return make(TokenKind::Ne, start, pos_);
                }
                break;
            default:
                break;
        }

        throw LexError(LexError::Kind::UnknownCharacter, start,
                       "unknown character '" + std::string(1, c) + "' at offset " +
                           std::to_string(start),
                       Span{start, start + 1});
    }

    Token lex_prompt() {
        const std::size_t start = pos_;
        ++pos_;  // '['
        while (pos_ < src_.size() && src_[pos_] != ']') ++pos_;
        if (pos_ >= src_.size()) {
            throw LexError(LexError::Kind::UnterminatedPrompt, start,
                           "unterminated prompt starting at offset " + std::to_string(start),
                           Span{start, src_.size()});
        }
        ++pos_;  // ']'
        Token tok = make(TokenKind::Prompt, start, pos_);
        std::string_view inner = src_.substr(start + 1, pos_ - start - 2);
        while (!inner.empty() && is_space(inner.front())) inner.remove_prefix(1);
        while (!inner.empty() && is_space(inner.back())) inner.remove_suffix(1);
        tok.value = std::string(inner);
        return tok;
    }

    Token lex_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        return make(TokenKind::Number, start, pos_);
    }

    Token lex_word() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_word_char(src_[pos_])) ++pos_;
        const std::string lower = to_lower(src_.substr(start, pos_ - start));

        // `sort by` / `order by` form one SortBy token across both words.
        if (lower == "sort" || lower == "order") {
            std::size_t probe = pos_;
            while (probe < src_.size() && is_space(src_[probe])) ++probe;
            std::size_t word_end = probe;
            while (word_end < src_.size() && is_word_char(src_[word_end])) ++word_end;
            if (word_end > probe && to_lower(src_.substr(probe, word_end - probe)) == "by") {
                pos_ = word_end;
                return make(TokenKind::SortBy, start, pos_);
            }
        }

        auto kw = keyword_table().find(lower);
        if (kw != keyword_table().end()) return make(kw->second, start, pos_);
        if (function_names().count(lower)) return make(TokenKind::FuncName, start, pos_);
        return make(TokenKind::Id, start, pos_);
    }
};

}  // namespace

TokenStream tokenize(std::string_view input) {
    return Lexer(input).run();
}

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Number: return "NUMBER";
        case TokenKind::Boolean: return "BOOLEAN";
        case TokenKind::Prompt: return "PROMPT";
        case TokenKind::Id: return "ID";
        case TokenKind::Plus: return "PLUS";
        case TokenKind::Minus: return "MINUS";
        case TokenKind::Times: return "TIMES";
        case TokenKind::Divide: return "DIVIDE";
        case TokenKind::Modulo: return "MODULO";
        case TokenKind::Power: return "POWER";
        case TokenKind::Eq: return "EQ";
        case TokenKind::Ne: return "NE";
        case TokenKind::Lt: return "LT";
        case TokenKind::Le: return "LE";
        case TokenKind::Gt: return "GT";
        case TokenKind::Ge: return "GE";
        case TokenKind::And: return "AND";
        case TokenKind::Or: return "OR";
        case TokenKind::Not: return "NOT";
        case TokenKind::Xor: return "XOR";
        case TokenKind::LParen: return "LPAREN";
        case TokenKind::RParen: return "RPAREN";
        case TokenKind::Comma: return "COMMA";
        case TokenKind::Select: return "SELECT";
        case TokenKind::Count: return "COUNT";
        case TokenKind::Get: return "GET";
        case TokenKind::From: return "FROM";
        case TokenKind::Any: return "ANY";
        case TokenKind::All: return "ALL";
        case TokenKind::Sample: return "SAMPLE";
        case TokenKind::SortBy: return "SORT_BY";
        case TokenKind::Asc: return "ASC";
        case TokenKind::Desc: return "DESC";
        case TokenKind::Limit: return "LIMIT";
        case TokenKind::FuncName: return "FUNC_NAME";
    }
    return "?";
}

}  // namespace snel
