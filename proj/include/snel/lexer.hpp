#pragma once

#include <string_view>

#include "snel/token.hpp"

namespace snel {

// Splits a query string into tokens. Keywords, operators written as words,
// boolean literals and function names are matched case-insensitively and are
// never produced as Id tokens. `sort by` (and its `order by` spelling) is a
// single SortBy token covering both words.
//
// Throws LexError on an unterminated prompt or a character that matches no
// token rule, reporting the byte offset.
TokenStream tokenize(std::string_view input);

}  // namespace snel
