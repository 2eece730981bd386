#include <doctest.h>

#include <cctype>
#include <random>
#include <string>
#include <vector>

#include "snel/error.hpp"
#include "snel/lexer.hpp"

using namespace snel;

namespace {

std::vector<TokenKind> kinds_of(const TokenStream& toks) {
    std::vector<TokenKind> out;
    out.reserve(toks.size());
    for (const Token& t : toks) out.push_back(t.kind);
    return out;
}

void check_span_invariants(const std::string& input, const TokenStream& toks) {
    std::size_t prev_end = 0;
    for (const Token& t : toks) {
        CHECK(t.span.start < t.span.end);
        CHECK(t.span.start >= prev_end);
        CHECK(t.span.end <= input.size());
        CHECK(input.substr(t.span.start, t.span.length()) == t.text);
        // Gaps between tokens hold only whitespace.
        for (std::size_t i = prev_end; i < t.span.start; ++i) {
            CHECK(std::isspace(static_cast<unsigned char>(input[i])));
        }
        prev_end = t.span.end;
    }
    for (std::size_t i = prev_end; i < input.size(); ++i) {
        CHECK(std::isspace(static_cast<unsigned char>(input[i])));
    }
}

}  // namespace

TEST_CASE("count with a prompt") {
    const TokenStream toks = tokenize("count [a dog]");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].kind == TokenKind::Count);
    CHECK(toks[1].kind == TokenKind::Prompt);
    CHECK(toks[1].value == "a dog");
    CHECK(toks[1].text == "[a dog]");
}

TEST_CASE("simple arithmetic") {
    const TokenStream toks = tokenize("1 + 2");
    REQUIRE(kinds_of(toks) ==
            std::vector<TokenKind>{TokenKind::Number, TokenKind::Plus, TokenKind::Number});
    CHECK(toks[0].text == "1");
    CHECK(toks[2].text == "2");
}

TEST_CASE("unterminated prompt reports the opening bracket offset") {
    try {
        tokenize("select [a bird");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.kind() == LexError::Kind::UnterminatedPrompt);
        CHECK(e.offset() == 7);
    }
}

TEST_CASE("any/all with parenthesized prompts") {
    const TokenStream toks = tokenize("any([a cat]) and all([a dog])");
    CHECK(kinds_of(toks) == std::vector<TokenKind>{
                                TokenKind::Any, TokenKind::LParen, TokenKind::Prompt,
                                TokenKind::RParen, TokenKind::And, TokenKind::All,
                                TokenKind::LParen, TokenKind::Prompt, TokenKind::RParen});
    CHECK(toks[2].value == "a cat");
    CHECK(toks[7].value == "a dog");
}

TEST_CASE("keywords are case-insensitive and never become identifiers") {
    const TokenStream toks = tokenize("SELECT [x] Sort   By [y] DESC Limit 2");
    CHECK(kinds_of(toks) == std::vector<TokenKind>{
                                TokenKind::Select, TokenKind::Prompt, TokenKind::SortBy,
                                TokenKind::Prompt, TokenKind::Desc, TokenKind::Limit,
                                TokenKind::Number});
    CHECK(toks[2].text == "Sort   By");
}

TEST_CASE("order by is an accepted spelling of sort by") {
    const TokenStream toks = tokenize("select [x] order by [y] desc");
    CHECK(kinds_of(toks) == std::vector<TokenKind>{TokenKind::Select, TokenKind::Prompt,
                                                   TokenKind::SortBy, TokenKind::Prompt,
                                                   TokenKind::Desc});
}

TEST_CASE("sort or order without by fall back to identifiers") {
    CHECK(kinds_of(tokenize("sort")) == std::vector<TokenKind>{TokenKind::Id});
    CHECK(kinds_of(tokenize("order [x]")) ==
          std::vector<TokenKind>{TokenKind::Id, TokenKind::Prompt});
}

TEST_CASE("keyword boundary: android is one identifier") {
    const TokenStream toks = tokenize("android");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].kind == TokenKind::Id);
    CHECK(toks[0].text == "android");
}

TEST_CASE("prompt opacity: operators inside brackets stay text") {
    const TokenStream toks = tokenize("[1 + 2 dogs]");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].kind == TokenKind::Prompt);
    CHECK(toks[0].value == "1 + 2 dogs");
}

TEST_CASE("prompt inner whitespace is trimmed, punctuation preserved") {
    const TokenStream toks = tokenize("[  sentiment: optimistic, neutral or pessimist  ]");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].value == "sentiment: optimistic, neutral or pessimist");
}

TEST_CASE("boolean literals") {
    const TokenStream toks = tokenize("true FALSE True");
    REQUIRE(toks.size() == 3);
    for (const Token& t : toks) CHECK(t.kind == TokenKind::Boolean);
    CHECK(toks[1].text == "FALSE");
}

TEST_CASE("function names lex as FUNC_NAME") {
    for (const char* name : {"abs", "max", "min", "floor", "ceil", "round", "pow", "sqrt", "exp",
                             "log", "log2", "log10", "sin", "cos", "tan", "asin", "acos", "atan",
                             "mean", "std"}) {
        const TokenStream toks = tokenize(name);
        REQUIRE(toks.size() == 1);
        CHECK(toks[0].kind == TokenKind::FuncName);
    }
}

TEST_CASE("maximal munch on comparison operators") {
    CHECK(kinds_of(tokenize("<= >= == != < >")) ==
          std::vector<TokenKind>{TokenKind::Le, TokenKind::Ge, TokenKind::Eq, TokenKind::Ne,
                                 TokenKind::Lt, TokenKind::Gt});
    CHECK(kinds_of(tokenize("1<=2")) ==
          std::vector<TokenKind>{TokenKind::Number, TokenKind::Le, TokenKind::Number});
}

TEST_CASE("numbers admit an optional decimal part only") {
    CHECK(tokenize("3.14")[0].text == "3.14");
    CHECK(tokenize("123")[0].text == "123");
    // "5." stops at the digit run; the dangling dot matches no rule.
    try {
        tokenize("5.");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.kind() == LexError::Kind::UnknownCharacter);
        CHECK(e.offset() == 1);
    }
    try {
        tokenize(".5");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.offset() == 0);
    }
}

TEST_CASE("unknown characters report their offset") {
    for (auto [input, offset] : std::vector<std::pair<std::string, std::size_t>>{
             {"1 @ 2", 2}, {"=", 0}, {"!", 0}, {"a;b", 1}}) {
        try {
            tokenize(input);
            FAIL("expected LexError for: ", input);
        } catch (const LexError& e) {
            CHECK(e.kind() == LexError::Kind::UnknownCharacter);
            CHECK(e.offset() == offset);
        }
    }
}

TEST_CASE("empty input yields no tokens") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("   \t\n").empty());
}

TEST_CASE("sample is lexed as its own reserved word") {
    CHECK(tokenize("sample")[0].kind == TokenKind::Sample);
}

TEST_CASE("spans reconstruct the input") {
    for (const char* input :
         {"select [a dog] sort by [a dark fur] desc limit 3",
          "count([a red car] and [a car in a parking lot]) / count([a car in a parking lot])",
          "100 * count [a dog] / count [an animal]", "sqrt(16) + abs(-1)",
          "not [a] and [b] or [c]", "2 ^ 3 ^ 2 <= pow(2, 9)"}) {
        const std::string s = input;
        check_span_invariants(s, tokenize(s));
    }
}

TEST_CASE("re-lexing the joined token texts preserves kinds") {
    std::mt19937 rng(20240811);
    const std::vector<std::string> pieces = {
        "select", "count", "get",  "from", "any",   "all",  "sort by", "asc",  "desc",
        "limit",  "3",     "2.5",  "true", "false", "[a dog]", "[x y]", "and", "or",
        "not",    "xor",   "+",    "-",    "*",     "/",    "%",       "^",    "<",
        "<=",     ">",     ">=",   "==",   "!=",    "(",    ")",       ",",    "mean",
        "sqrt",   "identifier_1",
    };
    for (int trial = 0; trial < 200; ++trial) {
        std::string input;
        const int len = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < len; ++i) {
            if (i) input += " ";
            input += pieces[rng() % pieces.size()];
        }
        const TokenStream first = tokenize(input);
        std::string rejoined;
        for (std::size_t i = 0; i < first.size(); ++i) {
            if (i) rejoined += " ";
            rejoined += first[i].text;
        }
        const TokenStream second = tokenize(rejoined);
        REQUIRE(kinds_of(first) == kinds_of(second));
        check_span_invariants(input, first);
    }
}
