#pragma once

#include <memory>
#include <string>
#include <vector>

namespace equivar {

// Comment attached as leading trivia to a statement (or trailing at the end
// of a block). `text` is the interior without the comment markers.
struct Comment {
  std::string text;
  bool block = false;
};

enum class ExprKind {
  NumberLit,
  StringLit,
  BoolLit,
  NullLit,
  UndefinedLit,
  ArrayLit,
  ObjectLit,
  Identifier,
  Binary,
  Unary,
  Call,
  Member,
  Assign,
  FunctionExpr,
  Arrow,
};

enum class BinaryOp {
  Add, Sub, Mul, Div, Mod,
  Lt, Le, Gt, Ge,
  EqLoose, NeLoose, EqStrict, NeStrict,
  And, Or,
};

enum class UnaryOp { Neg, Plus, Not };

enum class AssignOp { Assign, AddAssign, SubAssign, MulAssign, DivAssign, ModAssign };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;
struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
struct Block;
using BlockPtr = std::unique_ptr<Block>;

struct ObjectField {
  std::string key;     // identifier key, or decoded string key when quoted
  std::string rawKey;  // exact key lexeme (includes quotes when quoted)
  bool quoted = false;
  ExprPtr value;
};

// Single tagged node for all expressions; only the fields relevant to `kind`
// are populated.
struct Expr {
  ExprKind kind;

  double num = 0.0;        // NumberLit value
  std::string raw;         // NumberLit / StringLit exact lexeme
  std::string str;         // StringLit decoded value
  bool boolean = false;    // BoolLit
  std::string name;        // Identifier; Member dot name; FunctionExpr name

  ExprPtr lhs;             // Binary left / Assign target / Unary operand /
                           // Member object / Call callee
  ExprPtr rhs;             // Binary right / Assign value / Member index expr
  BinaryOp binOp = BinaryOp::Add;
  UnaryOp unOp = UnaryOp::Neg;
  AssignOp assignOp = AssignOp::Assign;
  bool computed = false;   // Member: a[i] rather than a.b

  std::vector<ExprPtr> elements;      // ArrayLit elements / Call arguments
  std::vector<ObjectField> fields;    // ObjectLit

  std::vector<std::string> params;    // FunctionExpr / Arrow
  BlockPtr body;                      // FunctionExpr / Arrow block body
  ExprPtr arrowExpr;                  // Arrow concise body (exclusive with body)

  explicit Expr(ExprKind k) : kind(k) {}
};

enum class StmtKind { FunctionDecl, VarDecl, If, While, For, Return, Block, ExprStmt };

enum class DeclKind { Var, Let, Const };

struct Declarator {
  std::string name;
  ExprPtr init;  // may be null
};

struct Block {
  std::vector<StmtPtr> stmts;
  std::vector<Comment> trailing;  // comments before the closing brace
};

struct Stmt {
  StmtKind kind;
  std::vector<Comment> leading;

  std::string name;                 // FunctionDecl
  std::vector<std::string> params;  // FunctionDecl
  BlockPtr body;                    // FunctionDecl body

  DeclKind declKind = DeclKind::Var;
  std::vector<Declarator> decls;    // VarDecl

  ExprPtr cond;         // If / While / For condition (For: may be null)
  BlockPtr thenBlock;   // If
  StmtPtr elseStmt;     // If: Block stmt, or If for else-if chains; may be null
  BlockPtr loopBody;    // While / For
  StmtPtr forInit;      // For: VarDecl or ExprStmt; may be null
  ExprPtr forUpdate;    // For: may be null

  ExprPtr expr;         // Return value (may be null) / ExprStmt expression
  BlockPtr block;       // Block statement

  explicit Stmt(StmtKind k) : kind(k) {}
};

struct Program {
  std::vector<StmtPtr> stmts;
  std::vector<Comment> trailing;
};
using ProgramPtr = std::unique_ptr<Program>;

ExprPtr cloneExpr(const Expr& e);
StmtPtr cloneStmt(const Stmt& s);
BlockPtr cloneBlock(const Block& b);
ProgramPtr cloneProgram(const Program& p);

// Structural equality of code. When `compareComments` is set, leading and
// trailing trivia must match too.
bool astEqual(const Expr& a, const Expr& b);
bool astEqual(const Stmt& a, const Stmt& b, bool compareComments = false);
bool astEqual(const Block& a, const Block& b, bool compareComments = false);
bool astEqual(const Program& a, const Program& b, bool compareComments = false);

// Expression builders used by transforms and the synthetic generator.
ExprPtr makeNumber(double value);
ExprPtr makeString(const std::string& value);
ExprPtr makeBool(bool value);
ExprPtr makeIdent(const std::string& name);

}  // namespace equivar
