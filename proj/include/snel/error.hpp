#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "snel/span.hpp"

namespace snel {

// Root of the error hierarchy. Every error carries a message and, when the
// failure can be pinned to a place in the query text, a source span.
class Error : public std::runtime_error {
public:
    explicit Error(std::string msg, std::optional<Span> span = std::nullopt)
        : std::runtime_error(std::move(msg)), span_(span) {}

    const std::optional<Span>& span() const { return span_; }

private:
    std::optional<Span> span_;
};

class LexError : public Error {
public:
    enum class Kind { UnterminatedPrompt, UnknownCharacter };

    LexError(Kind kind, std::size_t offset, std::string msg, Span span)
        : Error(std::move(msg), span), kind_(kind), offset_(offset) {}

    Kind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

class TypeError : public Error {
public:
    using Error::Error;
};

// Static analysis failed before the query ran.
class EvalError : public Error {
public:
    using Error::Error;
};

class BackendError : public Error {
public:
    using Error::Error;
};

// The remote server could not be reached or answered with a failure status.
class TransportError : public BackendError {
public:
    using BackendError::BackendError;
};

// The remote server answered 200 but the body violates the wire contract.
class ProtocolError : public BackendError {
public:
    using BackendError::BackendError;
};

class FileError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

// Renders "error: <msg>" followed by the offending source line and a caret
// marker under the error span, when one is available.
std::string render_diagnostic(std::string_view source, const Error& err);

}  // namespace snel
