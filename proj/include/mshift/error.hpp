#pragma once

#include <stdexcept>
#include <string>

namespace mshift {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input rejected by a parser or validator.
struct ParseError : Error {
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
    int line;
};

// A configured search budget was exhausted before the result was complete.
struct BudgetError : Error {
    explicit BudgetError(const std::string& what) : Error(what) {}
};

}  // namespace mshift
