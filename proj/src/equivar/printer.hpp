#pragma once

#include <string>

#include "equivar/ast.hpp"

namespace equivar {

// Emission styles. All three print the same code token stream (whitespace,
// indentation and redundant braces aside); compact additionally strips
// comments and emits a single line.
enum class PrintStyle { Beautified, Reformatted, Compact };

std::string print(const Program& prog, PrintStyle style);
std::string printExpr(const Expr& e, PrintStyle style);

PrintStyle printStyleFromName(const std::string& name);
std::string printStyleName(PrintStyle style);

}  // namespace equivar
