#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snel/ast.hpp"
#include "snel/error.hpp"
#include "snel/token.hpp"

namespace snel {

class ParseError : public Error {
public:
    ParseError(std::string msg, std::vector<TokenKind> expected, std::optional<Token> found,
               Span span)
        : Error(std::move(msg), span), expected_(std::move(expected)), found_(std::move(found)) {}

    const std::vector<TokenKind>& expected() const { return expected_; }
    // nullopt means the parser ran out of tokens.
    const std::optional<Token>& found() const { return found_; }

private:
    std::vector<TokenKind> expected_;
    std::optional<Token> found_;
};

// Builds the query AST from a token stream, consuming it entirely.
// Throws ParseError on any grammar violation.
Query parse(const TokenStream& tokens);

// Convenience: tokenize + parse.
Query parse_query(std::string_view input);

}  // namespace snel
