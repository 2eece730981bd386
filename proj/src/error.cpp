#include "snel/error.hpp"

#include <algorithm>
#include <sstream>

namespace snel {

std::string render_diagnostic(std::string_view source, const Error& err) {
    std::ostringstream os;
    os << "error: " << err.what() << "\n";
    if (!err.span()) return os.str();

    Span span = *err.span();
    span.start = std::min(span.start, source.size());
    span.end = std::clamp(span.end, span.start, source.size());

    // Locate the line holding the span start.
    std::size_t line_start = source.rfind('\n', span.start == 0 ? 0 : span.start - 1);
    line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
    std::size_t line_end = source.find('\n', span.start);
    if (line_end == std::string_view::npos) line_end = source.size();

    os << "  " << source.substr(line_start, line_end - line_start) << "\n  ";
    for (std::size_t i = line_start; i < span.start; ++i) {
        os << (source[i] == '\t' ? '\t' : ' ');
    }
    const std::size_t marker_end = std::max(span.start + 1, std::min(span.end, line_end));
    os << '^';
    for (std::size_t i = span.start + 1; i < marker_end; ++i) os << '~';
    os << "\n";
    return os.str();
}

}  // namespace snel
