#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "equivar/ast.hpp"
#include "equivar/rng.hpp"

namespace equivar {

// Self-contained value snapshot used for interpreter inputs and outcomes.
// Closures degrade to an arity tag; cyclic structures are cut at a fixed
// depth. Equality is total: NaN equals NaN, -0 differs from +0.
struct PlainValue {
  enum class Kind { Undefined, Null, Number, Bool, String, Array, Object, ClosureTag, Truncated };
  Kind kind = Kind::Undefined;
  double num = 0.0;
  bool boolean = false;
  std::string str;
  std::vector<PlainValue> items;                               // Array
  std::vector<std::pair<std::string, PlainValue>> fields;      // Object
  int arity = 0;                                               // ClosureTag

  static PlainValue undefined() { return {}; }
  static PlainValue null() { PlainValue v; v.kind = Kind::Null; return v; }
  static PlainValue number(double d) { PlainValue v; v.kind = Kind::Number; v.num = d; return v; }
  static PlainValue boolean_(bool b) { PlainValue v; v.kind = Kind::Bool; v.boolean = b; return v; }
  static PlainValue string(std::string s) {
    PlainValue v;
    v.kind = Kind::String;
    v.str = std::move(s);
    return v;
  }
  static PlainValue array(std::vector<PlainValue> xs) {
    PlainValue v;
    v.kind = Kind::Array;
    v.items = std::move(xs);
    return v;
  }
};

bool plainValueEqual(const PlainValue& a, const PlainValue& b);
std::string plainValueToString(const PlainValue& v);

struct EvalOutcome {
  enum class Status { Returned, Threw, StepLimitExceeded };
  Status status = Status::Returned;
  PlainValue result;            // Returned
  std::string message;          // Threw
  std::vector<PlainValue> log;  // values passed to the log builtin, in order
  int64_t steps = 0;
};

bool outcomeEqual(const EvalOutcome& a, const EvalOutcome& b);
std::string outcomeToString(const EvalOutcome& o);

// Run the program: top-level statements execute in order, then the first
// FunctionDecl is called with `entryArgs` (missing arguments bind undefined).
// Deterministic; never throws for program-level failures (encoded in the
// outcome). Throws DataError if the program has no FunctionDecl.
EvalOutcome evaluate(const Program& program, const std::vector<PlainValue>& entryArgs,
                     int64_t stepLimit);

int entryArity(const Program& program);

struct EquivalenceVerdict {
  enum class Kind { Equivalent, Diverged, Inconclusive };
  Kind kind = Kind::Equivalent;
  size_t divergedInput = 0;  // index into inputs when Diverged
  EvalOutcome outcome1, outcome2;
};

// Bounded approximate equivalence: identical (result, log) on every input.
// Inconclusive when some input exhausts the step limit on both sides and no
// other input diverges.
EquivalenceVerdict checkEquivalence(const Program& p1, const Program& p2,
                                    const std::vector<std::vector<PlainValue>>& inputs,
                                    int64_t stepLimit);

// Seeded argument tuples for fuzzing: small ints, floats, short strings,
// booleans, and shallow arrays of those.
std::vector<std::vector<PlainValue>> randomInputs(int arity, int count, uint64_t seed);

// Operator evaluation on literal operands, identical to what `evaluate` does
// at runtime. Returns false when the operation would throw. Constant folding
// goes through these so folded values cannot drift from the interpreter.
bool evalLiteralBinary(BinaryOp op, const PlainValue& a, const PlainValue& b, PlainValue& out);
bool evalLiteralUnary(UnaryOp op, const PlainValue& a, PlainValue& out);
bool plainTruthy(const PlainValue& v);

}  // namespace equivar
