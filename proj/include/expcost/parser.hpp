#pragma once

#include <stdexcept>
#include <string>

#include "expcost/syntax.hpp"

namespace expcost {

struct ParseError : std::runtime_error {
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line(line),
          col(col) {}
    int line;
    int col;
};

// Parses RandML concrete syntax into the core AST. Sugar (fun, let, let rec,
// sequencing, ref, flip) is expanded here; unbound variables are rejected with
// their source position.
ExprPtr parse_program(const std::string& text);

}  // namespace expcost
