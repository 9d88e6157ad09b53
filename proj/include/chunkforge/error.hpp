#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chunkforge {

/// Base class for all data-level failures (bad input files, invalid
/// symbols, degenerate training problems).  CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure while parsing structured text; carries a 1-based position.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace chunkforge
