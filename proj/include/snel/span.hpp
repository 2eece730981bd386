#pragma once

#include <cstddef>

namespace snel {

// Half-open byte range [start, end) into the original query string.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }

    friend bool operator==(const Span& a, const Span& b) {
        return a.start == b.start && a.end == b.end;
    }
};

}  // namespace snel
