#pragma once

#include <stdexcept>
#include <string>

namespace covel {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation produced NaN/Inf, or a matrix turned out singular /
// too ill-conditioned to invert. Operations abort instead of letting
// NaN propagate into identity checks.
struct NumericError : Error {
    using Error::Error;
};

// A point left its chart domain, a base point mismatched, or an
// argument had the wrong dimension.
struct DomainError : Error {
    using Error::Error;
};

// Expression DSL syntax/semantic error with a 1-based source position.
struct ParseError : Error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ", col " + std::to_string(col_) + ": " + what_),
          line(line_), col(col_) {}
};

// Scenario configuration is missing keys, ill-typed, or inconsistent.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace covel
