#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace frbpmn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed XML or JSON input. Line and column are 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) +
                ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Input uses a BPMN (or extension) element outside the supported subset.
class UnsupportedConstructError : public Error {
public:
    explicit UnsupportedConstructError(std::string element)
        : Error("unsupported construct: " + element), element_(std::move(element)) {}

    const std::string& element() const noexcept { return element_; }

private:
    std::string element_;
};

/// One or more id references do not resolve.
class ReferenceError : public Error {
public:
    explicit ReferenceError(std::vector<std::string> unresolved)
        : Error(format(unresolved)), unresolved_(std::move(unresolved)) {}

    const std::vector<std::string>& unresolved() const noexcept { return unresolved_; }

private:
    static std::string format(const std::vector<std::string>& ids) {
        std::string out = "unresolved reference(s):";
        for (const auto& id : ids) out += " " + id;
        return out;
    }

    std::vector<std::string> unresolved_;
};

/// Structurally valid input that violates the document schema
/// (unknown enum value, duplicate id, missing attribute, ...).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Trace file content error; carries the offending line (1-based).
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The operation does not support this model (e.g. cyclic flow graph).
class UnsupportedModelError : public Error {
public:
    using Error::Error;
};

/// Invalid simulation or command configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace frbpmn
