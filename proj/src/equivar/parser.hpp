#pragma once

#include <string>

#include "equivar/ast.hpp"

namespace equivar {

// Parse a program in the supported JavaScript subset.
// Throws ParseError on grammar violations, UnsupportedSyntax for recognized
// constructs outside the subset, LexError from tokenization.
// Semicolons are required except immediately before `}` (no automatic
// semicolon insertion).
ProgramPtr parse(const std::string& src);

}  // namespace equivar
