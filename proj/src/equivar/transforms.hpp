#pragma once

#include <string>

#include "equivar/ast.hpp"
#include "equivar/printer.hpp"
#include "equivar/rng.hpp"

namespace equivar {

// The eleven augmentation passes. All preserve operational semantics except
// LS, which drops method-body lines and is deliberately lossy. SW is a
// marker at this layer: the stochastic segmentation itself happens in the
// subword tokenizer.
enum class TransformId { R, B, C, DCE, T, CF, VR, IM, DCI, SW, LS };

bool semanticsPreserving(TransformId id);
bool transformRequiresAst(TransformId id);
TransformId transformIdFromName(const std::string& name);
std::string transformIdName(TransformId id);

// A program travels through the pass pipeline either as source text or as a
// tree; passes convert as they need to.
struct ProgramForm {
  std::string source;  // valid when !ast
  ProgramPtr ast;

  static ProgramForm fromSource(std::string s) {
    ProgramForm f;
    f.source = std::move(s);
    return f;
  }
  static ProgramForm fromAst(ProgramPtr p) {
    ProgramForm f;
    f.ast = std::move(p);
    return f;
  }
  bool isAst() const { return ast != nullptr; }

  // Parse on demand; ParseError/UnsupportedSyntax propagate.
  void raiseToAst();
  // Print on demand with the given style.
  void lowerToSource(PrintStyle style);
};

// Apply one pass. Throws TransformError when the pass cannot run (wrapping
// parse failures); rng is consumed only by the stochastic passes (VR, DCI,
// LS), so deterministic passes never perturb the stream.
ProgramForm applyTransform(TransformId id, ProgramForm p, Rng& rng);

// Individual passes, exposed for direct testing.
void passDeadCodeElimination(Program& prog);
void passTypeUpconversion(Program& prog);
void passConstantFolding(Program& prog);
void passVariableRenaming(Program& prog, Rng& rng);
void passIdentifierMangling(Program& prog);
void passDeadCodeInsertion(Program& prog, Rng& rng);
void passCompress(Program& prog);  // C's tree half: merge decls, flatten blocks, flip constants
std::string passLineSubsampling(const std::string& source, Rng& rng);

// Shared word list for generated identifiers and comments.
const std::vector<std::string>& identifierWordList();

}  // namespace equivar
