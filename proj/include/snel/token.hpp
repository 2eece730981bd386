#pragma once

#include <string>
#include <vector>

#include "snel/span.hpp"

namespace snel {

enum class TokenKind {
    Number,
    Boolean,
    Prompt,
    Id,
    Plus,
    Minus,
    Times,
    Divide,
    Modulo,
    Power,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Xor,
    LParen,
    RParen,
    Comma,
    Select,
    Count,
    Get,
    From,
    Any,
    All,
    Sample,
    SortBy,
    Asc,
    Desc,
    Limit,
    FuncName,
};

// Upper-case token category name, e.g. "SORT_BY", for diagnostics.
const char* token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind;
    // Verbatim lexeme as it appears in the source, brackets and all.
    std::string text;
    // Semantic payload: for Prompt tokens the inner text with surrounding
    // whitespace trimmed; equal to `text` for everything else.
    std::string value;
    Span span;
};

using TokenStream = std::vector<Token>;

}  // namespace snel
