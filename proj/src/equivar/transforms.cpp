#include "equivar/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "equivar/error.hpp"
#include "equivar/interp.hpp"
#include "equivar/parser.hpp"
#include "equivar/scope.hpp"
#include "equivar/token.hpp"

namespace equivar {

bool semanticsPreserving(TransformId id) { return id != TransformId::LS; }

bool transformRequiresAst(TransformId id) {
  switch (id) {
    case TransformId::LS:
    case TransformId::SW:
      return false;
    default:
      return true;
  }
}

TransformId transformIdFromName(const std::string& name) {
  if (name == "R") return TransformId::R;
  if (name == "B") return TransformId::B;
  if (name == "C") return TransformId::C;
  if (name == "DCE") return TransformId::DCE;
  if (name == "T") return TransformId::T;
  if (name == "CF") return TransformId::CF;
  if (name == "VR") return TransformId::VR;
  if (name == "IM") return TransformId::IM;
  if (name == "DCI") return TransformId::DCI;
  if (name == "SW") return TransformId::SW;
  if (name == "LS") return TransformId::LS;
  throw ConfigError("unknown transform id: " + name);
}

std::string transformIdName(TransformId id) {
  switch (id) {
    case TransformId::R: return "R";
    case TransformId::B: return "B";
    case TransformId::C: return "C";
    case TransformId::DCE: return "DCE";
    case TransformId::T: return "T";
    case TransformId::CF: return "CF";
    case TransformId::VR: return "VR";
    case TransformId::IM: return "IM";
    case TransformId::DCI: return "DCI";
    case TransformId::SW: return "SW";
    case TransformId::LS: return "LS";
  }
  return "?";
}

void ProgramForm::raiseToAst() {
  if (!ast) {
    ast = parse(source);
    source.clear();
  }
}

void ProgramForm::lowerToSource(PrintStyle style) {
  if (ast) {
    source = print(*ast, style);
    ast.reset();
  }
}

// ---------------------------------------------------------------------------
// Walk helpers

namespace {

void walkExprs(Expr& e, const std::function<void(Expr&)>& post);

void walkExprsInStmt(Stmt& s, const std::function<void(Expr&)>& post) {
  switch (s.kind) {
    case StmtKind::FunctionDecl:
      for (auto& c : s.body->stmts) walkExprsInStmt(*c, post);
      break;
    case StmtKind::VarDecl:
      for (auto& d : s.decls)
        if (d.init) walkExprs(*d.init, post);
      break;
    case StmtKind::If:
      walkExprs(*s.cond, post);
      for (auto& c : s.thenBlock->stmts) walkExprsInStmt(*c, post);
      if (s.elseStmt) walkExprsInStmt(*s.elseStmt, post);
      break;
    case StmtKind::While:
      walkExprs(*s.cond, post);
      for (auto& c : s.loopBody->stmts) walkExprsInStmt(*c, post);
      break;
    case StmtKind::For:
      if (s.forInit) walkExprsInStmt(*s.forInit, post);
      if (s.cond) walkExprs(*s.cond, post);
      if (s.forUpdate) walkExprs(*s.forUpdate, post);
      for (auto& c : s.loopBody->stmts) walkExprsInStmt(*c, post);
      break;
    case StmtKind::Return:
      if (s.expr) walkExprs(*s.expr, post);
      break;
    case StmtKind::ExprStmt:
      walkExprs(*s.expr, post);
      break;
    case StmtKind::Block:
      for (auto& c : s.block->stmts) walkExprsInStmt(*c, post);
      break;
  }
}

// Post-order over an expression tree, descending into nested function bodies.
void walkExprs(Expr& e, const std::function<void(Expr&)>& post) {
  if (e.lhs) walkExprs(*e.lhs, post);
  if (e.rhs) walkExprs(*e.rhs, post);
  for (auto& el : e.elements) walkExprs(*el, post);
  for (auto& f : e.fields) walkExprs(*f.value, post);
  if (e.body)
    for (auto& s : e.body->stmts) walkExprsInStmt(*s, post);
  if (e.arrowExpr) walkExprs(*e.arrowExpr, post);
  post(e);
}

void walkExprsInProgram(Program& prog, const std::function<void(Expr&)>& post) {
  for (auto& s : prog.stmts) walkExprsInStmt(*s, post);
}

// Every statement list in the program (top level plus each block, including
// blocks of nested function expressions), in stable traversal order.
void collectListsInStmt(Stmt& s, std::vector<std::vector<StmtPtr>*>& out);

void collectListsInExpr(Expr& e, std::vector<std::vector<StmtPtr>*>& out) {
  if (e.lhs) collectListsInExpr(*e.lhs, out);
  if (e.rhs) collectListsInExpr(*e.rhs, out);
  for (auto& el : e.elements) collectListsInExpr(*el, out);
  for (auto& f : e.fields) collectListsInExpr(*f.value, out);
  if (e.body) {
    out.push_back(&e.body->stmts);
    for (auto& s : e.body->stmts) collectListsInStmt(*s, out);
  }
  if (e.arrowExpr) collectListsInExpr(*e.arrowExpr, out);
}

void collectListsInBlock(Block& b, std::vector<std::vector<StmtPtr>*>& out) {
  out.push_back(&b.stmts);
  for (auto& s : b.stmts) collectListsInStmt(*s, out);
}

void collectListsInStmt(Stmt& s, std::vector<std::vector<StmtPtr>*>& out) {
  switch (s.kind) {
    case StmtKind::FunctionDecl:
      collectListsInBlock(*s.body, out);
      break;
    case StmtKind::VarDecl:
      for (auto& d : s.decls)
        if (d.init) collectListsInExpr(*d.init, out);
      break;
    case StmtKind::If:
      collectListsInExpr(*s.cond, out);
      collectListsInBlock(*s.thenBlock, out);
      if (s.elseStmt) collectListsInStmt(*s.elseStmt, out);
      break;
    case StmtKind::While:
      collectListsInExpr(*s.cond, out);
      collectListsInBlock(*s.loopBody, out);
      break;
    case StmtKind::For:
      if (s.forInit) collectListsInStmt(*s.forInit, out);
      if (s.cond) collectListsInExpr(*s.cond, out);
      if (s.forUpdate) collectListsInExpr(*s.forUpdate, out);
      collectListsInBlock(*s.loopBody, out);
      break;
    case StmtKind::Return:
      if (s.expr) collectListsInExpr(*s.expr, out);
      break;
    case StmtKind::ExprStmt:
      collectListsInExpr(*s.expr, out);
      break;
    case StmtKind::Block:
      collectListsInBlock(*s.block, out);
      break;
  }
}

std::vector<std::vector<StmtPtr>*> allStmtLists(Program& prog) {
  std::vector<std::vector<StmtPtr>*> out;
  out.push_back(&prog.stmts);
  for (auto& s : prog.stmts) collectListsInStmt(*s, out);
  return out;
}

// Extract the value of a literal-form expression (literals and negated
// number literals).
bool literalValueOf(const Expr& e, PlainValue& out) {
  switch (e.kind) {
    case ExprKind::NumberLit: out = PlainValue::number(e.num); return true;
    case ExprKind::StringLit: out = PlainValue::string(e.str); return true;
    case ExprKind::BoolLit: out = PlainValue::boolean_(e.boolean); return true;
    case ExprKind::NullLit: out = PlainValue::null(); return true;
    case ExprKind::UndefinedLit: out = PlainValue::undefined(); return true;
    case ExprKind::Unary:
      if (e.unOp == UnaryOp::Neg && e.lhs->kind == ExprKind::NumberLit) {
        out = PlainValue::number(-e.lhs->num);
        return true;
      }
      return false;
    default:
      return false;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DCE

namespace {

// Strict purity: an expression is removable only if no evaluation path can
// throw under the interpreter's semantics. Operators on unknown operand
// types are excluded because their coercions throw on reference values.
bool isPureExpr(const Expr& e, const std::set<const std::string*>& boundIdents) {
  switch (e.kind) {
    case ExprKind::NumberLit:
    case ExprKind::StringLit:
    case ExprKind::BoolLit:
    case ExprKind::NullLit:
    case ExprKind::UndefinedLit:
    case ExprKind::FunctionExpr:
    case ExprKind::Arrow:
      return true;
    case ExprKind::Identifier:
      return boundIdents.count(&e.name) > 0;
    case ExprKind::ArrayLit: {
      for (const auto& el : e.elements)
        if (!isPureExpr(*el, boundIdents)) return false;
      return true;
    }
    case ExprKind::ObjectLit: {
      for (const auto& f : e.fields)
        if (!isPureExpr(*f.value, boundIdents)) return false;
      return true;
    }
    case ExprKind::Binary: {
      if (e.binOp == BinaryOp::And || e.binOp == BinaryOp::Or)
        return isPureExpr(*e.lhs, boundIdents) && isPureExpr(*e.rhs, boundIdents);
      PlainValue a, b, out;
      return literalValueOf(*e.lhs, a) && literalValueOf(*e.rhs, b) &&
             evalLiteralBinary(e.binOp, a, b, out);
    }
    case ExprKind::Unary: {
      PlainValue a, out;
      return literalValueOf(*e.lhs, a) && evalLiteralUnary(e.unOp, a, out);
    }
    default:
      return false;
  }
}

}  // namespace

void passDeadCodeElimination(Program& prog) {
  bool changed = true;
  while (changed) {
    changed = false;
    ScopeAnalysis sa = analyzeScopes(prog);

    std::set<const std::string*> boundIdents;
    for (const auto& d : sa.decls)
      for (const std::string* r : d.refs) boundIdents.insert(r);

    std::set<const Declarator*> removableDecls;
    std::set<const Stmt*> removableFunctions;
    const Stmt* entry = nullptr;
    for (const auto& s : prog.stmts)
      if (s->kind == StmtKind::FunctionDecl) {
        entry = s.get();
        break;
      }
    for (const auto& [declarator, idx] : sa.declaratorIndex) {
      if (sa.useCount(idx) > 0) continue;
      if (!declarator->init || isPureExpr(*declarator->init, boundIdents))
        removableDecls.insert(declarator);
    }
    for (const auto& [fn, idx] : sa.functionDeclIndex) {
      if (fn == entry) continue;
      if (sa.useCount(idx) == 0) removableFunctions.insert(fn);
    }

    for (auto* list : allStmtLists(prog)) {
      std::vector<StmtPtr> kept;
      bool editedHere = false;
      bool afterReturn = false;
      for (auto& sp : *list) {
        Stmt& s = *sp;
        if (afterReturn) {
          editedHere = true;  // unreachable: execution binds declarations in order
          continue;
        }
        if (s.kind == StmtKind::FunctionDecl && removableFunctions.count(&s)) {
          editedHere = true;
          continue;
        }
        if (s.kind == StmtKind::VarDecl) {
          auto& ds = s.decls;
          size_t before = ds.size();
          ds.erase(std::remove_if(ds.begin(), ds.end(),
                                  [&](const Declarator& d) { return removableDecls.count(&d); }),
                   ds.end());
          if (ds.size() != before) editedHere = true;
          if (ds.empty()) continue;
        }
        if (s.kind == StmtKind::ExprStmt && isPureExpr(*s.expr, boundIdents)) {
          editedHere = true;
          continue;
        }
        if (s.kind == StmtKind::Block && s.block->stmts.empty() && s.block->trailing.empty()) {
          editedHere = true;
          continue;
        }
        if (s.kind == StmtKind::Return) afterReturn = true;
        kept.push_back(std::move(sp));
      }
      *list = std::move(kept);  // statements were moved out; always restore
      if (editedHere) {
        changed = true;
        break;  // edits invalidate analysis and list pointers; restart
      }
    }
  }
}

// ---------------------------------------------------------------------------
// T: boolean literals become the equivalent `!0` / `!1` forms.

void passTypeUpconversion(Program& prog) {
  walkExprsInProgram(prog, [](Expr& e) {
    if (e.kind != ExprKind::BoolLit) return;
    bool value = e.boolean;
    e.kind = ExprKind::Unary;
    e.unOp = UnaryOp::Not;
    e.boolean = false;
    auto operand = std::make_unique<Expr>(ExprKind::NumberLit);
    operand->num = value ? 0.0 : 1.0;
    operand->raw = value ? "0" : "1";
    e.lhs = std::move(operand);
  });
}

// ---------------------------------------------------------------------------
// CF

namespace {

// Replace `e` in place with a literal node for `v`. Negative numbers become
// `-lit` so the tree reparses identically; non-finite numbers have no
// literal form and are left unfolded.
void replaceWithLiteral(Expr& e, const PlainValue& v) {
  switch (v.kind) {
    case PlainValue::Kind::Number: {
      if (!std::isfinite(v.num)) return;
      ExprPtr lit = makeNumber(std::fabs(v.num));
      if (std::signbit(v.num)) {
        Expr neg(ExprKind::Unary);
        neg.unOp = UnaryOp::Neg;
        neg.lhs = std::move(lit);
        e = std::move(neg);
      } else {
        e = std::move(*lit);
      }
      return;
    }
    case PlainValue::Kind::String:
      e = std::move(*makeString(v.str));
      return;
    case PlainValue::Kind::Bool:
      e = std::move(*makeBool(v.boolean));
      return;
    case PlainValue::Kind::Null:
      e = Expr(ExprKind::NullLit);
      return;
    case PlainValue::Kind::Undefined:
      e = Expr(ExprKind::UndefinedLit);
      return;
    default:
      return;
  }
}

}  // namespace

void passConstantFolding(Program& prog) {
  walkExprsInProgram(prog, [](Expr& e) {
    if (e.kind == ExprKind::Binary) {
      if (e.binOp == BinaryOp::And || e.binOp == BinaryOp::Or) {
        PlainValue left;
        if (!literalValueOf(*e.lhs, left)) return;
        bool takeRhs = (e.binOp == BinaryOp::And) == plainTruthy(left);
        ExprPtr replacement = takeRhs ? std::move(e.rhs) : std::move(e.lhs);
        e = std::move(*replacement);
        return;
      }
      PlainValue a, b, folded;
      if (!literalValueOf(*e.lhs, a) || !literalValueOf(*e.rhs, b)) return;
      if (!evalLiteralBinary(e.binOp, a, b, folded)) return;  // would throw: leave unfolded
      replaceWithLiteral(e, folded);
      return;
    }
    if (e.kind == ExprKind::Unary) {
      PlainValue a, folded;
      if (!literalValueOf(*e.lhs, a)) return;
      if (e.unOp == UnaryOp::Neg && e.lhs->kind == ExprKind::NumberLit)
        return;  // already canonical literal form
      if (e.unOp == UnaryOp::Plus && e.lhs->kind == ExprKind::NumberLit) {
        ExprPtr inner = std::move(e.lhs);
        e = std::move(*inner);
        return;
      }
      if (!evalLiteralUnary(e.unOp, a, folded)) return;
      replaceWithLiteral(e, folded);
      return;
    }
  });
}

// ---------------------------------------------------------------------------
// VR / IM

const std::vector<std::string>& identifierWordList() {
  static const std::vector<std::string> words = {
      "acc",    "amber",  "basin",  "batch",  "bright", "brook",  "cedar",  "chunk",
      "cliff",  "cloud",  "coral",  "crest",  "delta",  "drift",  "ember",  "fable",
      "field",  "flint",  "gleam",  "grove",  "haven",  "index",  "ivory",  "knoll",
      "lagoon", "ledger", "lumen",  "maple",  "marsh",  "meadow", "noble",  "ocean",
      "olive",  "outer",  "pearl",  "pivot",  "plume",  "prism",  "quartz", "quill",
      "raven",  "ridge",  "river",  "slate",  "spark",  "stone",  "swift",  "tally",
      "thorn",  "total",  "trace",  "tundra", "umber",  "vivid",  "wedge",  "willow",
  };
  return words;
}

namespace {

bool nameUsable(const std::string& name, const std::set<std::string>& used) {
  return !isKeyword(name) && !isUnsupportedWord(name) && !used.count(name);
}

void renameDecl(ScopeAnalysis::Decl& d, const std::string& fresh) {
  for (std::string* site : d.sites) *site = fresh;
  for (std::string* ref : d.refs) *ref = fresh;
}

std::string randomWordName(Rng& rng, const std::set<std::string>& used) {
  const auto& words = identifierWordList();
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::string a = words[rng.nextBelow(words.size())];
    std::string b = words[rng.nextBelow(words.size())];
    std::string name = a + static_cast<char>(std::toupper(b[0])) + b.substr(1);
    if (attempt >= 16) name += std::to_string(rng.nextBelow(100));
    if (nameUsable(name, used)) return name;
  }
  for (uint64_t i = 0;; ++i) {
    std::string name = "v" + std::to_string(i);
    if (nameUsable(name, used)) return name;
  }
}

}  // namespace

void passVariableRenaming(Program& prog, Rng& rng) {
  ScopeAnalysis sa = analyzeScopes(prog);
  std::set<std::string> used(sa.allNames.begin(), sa.allNames.end());
  for (auto& d : sa.decls) {
    if (d.topLevel) continue;  // method names stay stable; free call sites keep working
    std::string fresh = randomWordName(rng, used);
    used.insert(fresh);
    renameDecl(d, fresh);
  }
}

void passIdentifierMangling(Program& prog) {
  ScopeAnalysis sa = analyzeScopes(prog);
  std::set<std::string> used(sa.allNames.begin(), sa.allNames.end());
  static const std::string alphabet = "etnrlosiaucdfhpmvbgwyxkqjz";
  size_t cursor = 0;
  auto nextShortName = [&]() -> std::string {
    while (true) {
      size_t i = cursor++;
      std::string name;
      size_t len = 1, span = alphabet.size();
      while (i >= span) {  // e, t, ..., z, ee, et, ...
        i -= span;
        span *= alphabet.size();
        ++len;
      }
      for (size_t k = 0; k < len; ++k) {
        name.insert(name.begin(), alphabet[i % alphabet.size()]);
        i /= alphabet.size();
      }
      if (nameUsable(name, used)) return name;
    }
  };
  for (auto& d : sa.decls) {
    if (d.topLevel) continue;
    std::string fresh = nextShortName();
    used.insert(fresh);
    renameDecl(d, fresh);
  }
}

// ---------------------------------------------------------------------------
// DCI

void passDeadCodeInsertion(Program& prog, Rng& rng) {
  int insertions = rng.nextInt(1, 3);
  for (int i = 0; i < insertions; ++i) {
    ScopeAnalysis sa = analyzeScopes(prog);
    std::set<std::string> used(sa.allNames.begin(), sa.allNames.end());

    auto lists = allStmtLists(prog);
    auto* list = lists[rng.nextBelow(lists.size())];
    size_t pos = rng.nextBelow(list->size() + 1);

    const auto& words = identifierWordList();
    if (rng.bernoulli(0.4)) {
      Comment c;
      c.text = " " + words[rng.nextBelow(words.size())] + " " +
               words[rng.nextBelow(words.size())];
      c.block = rng.bernoulli(0.3);
      if (pos < list->size())
        (*list)[pos]->leading.push_back(c);
      else if (!list->empty())
        (*list)[list->size() - 1]->leading.push_back(c);
      continue;
    }
    // Unused declaration; the initializer is effect-free by construction so
    // DCE can prove it dead again.
    auto decl = std::make_unique<Stmt>(StmtKind::VarDecl);
    int kindPick = rng.nextInt(0, 2);
    decl->declKind = kindPick == 0 ? DeclKind::Var : kindPick == 1 ? DeclKind::Let : DeclKind::Const;
    Declarator d;
    d.name = randomWordName(rng, used);
    switch (rng.nextBelow(4)) {
      case 0: d.init = makeNumber(static_cast<double>(rng.nextInt(0, 99))); break;
      case 1: d.init = makeString(words[rng.nextBelow(words.size())]); break;
      case 2: d.init = makeBool(rng.bernoulli(0.5)); break;
      default: {
        auto bin = std::make_unique<Expr>(ExprKind::Binary);
        bin->binOp = BinaryOp::Add;
        bin->lhs = makeNumber(static_cast<double>(rng.nextInt(1, 9)));
        bin->rhs = makeNumber(static_cast<double>(rng.nextInt(1, 9)));
        d.init = std::move(bin);
        break;
      }
    }
    decl->decls.push_back(std::move(d));
    list->insert(list->begin() + pos, std::move(decl));
  }
}

// ---------------------------------------------------------------------------
// C: tree-level compression; the textual half is compact emission.

namespace {

void flipConstantComparisons(Program& prog) {
  walkExprsInProgram(prog, [](Expr& e) {
    if (e.kind != ExprKind::Binary) return;
    if (e.binOp != BinaryOp::EqLoose && e.binOp != BinaryOp::NeLoose &&
        e.binOp != BinaryOp::EqStrict && e.binOp != BinaryOp::NeStrict)
      return;
    PlainValue v;
    // Constant moves to the left; evaluating a literal first is unobservable.
    if (literalValueOf(*e.rhs, v) && !literalValueOf(*e.lhs, v)) std::swap(e.lhs, e.rhs);
  });
}

bool blockIsFlattenable(const Block& b) {
  for (const auto& s : b.stmts) {
    if (s->kind == StmtKind::FunctionDecl) return false;
    if (s->kind == StmtKind::VarDecl && s->declKind != DeclKind::Var) return false;
  }
  return true;
}

void compressStmtLists(Program& prog) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto* list : allStmtLists(prog)) {
      std::vector<StmtPtr> out;
      bool editedHere = false;
      for (auto& sp : *list) {
        if (sp->kind == StmtKind::Block && blockIsFlattenable(*sp->block)) {
          for (auto& inner : sp->block->stmts) out.push_back(std::move(inner));
          editedHere = true;
          continue;
        }
        if (sp->kind == StmtKind::VarDecl && !out.empty() &&
            out.back()->kind == StmtKind::VarDecl && out.back()->declKind == sp->declKind) {
          for (auto& d : sp->decls) out.back()->decls.push_back(std::move(d));
          editedHere = true;
          continue;
        }
        out.push_back(std::move(sp));
      }
      *list = std::move(out);  // statements were moved out; always restore
      if (editedHere) {
        changed = true;
        break;  // other list pointers may now dangle; recollect
      }
    }
  }
}

}  // namespace

void passCompress(Program& prog) {
  compressStmtLists(prog);
  flipConstantComparisons(prog);
}

// ---------------------------------------------------------------------------
// LS

std::string passLineSubsampling(const std::string& source, Rng& rng) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= source.size()) {
    size_t nl = source.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(source.substr(start));
      break;
    }
    lines.push_back(source.substr(start, nl - start));
    start = nl + 1;
  }

  // Depth profile per line: a line is a droppable candidate when it starts
  // and ends at the same bracket depth, never dips below it, contains at
  // least one token, and sits inside some braces (a method-body line).
  struct LineInfo {
    int startDepth = 0;
    int endDepth = 0;
    int minDepth = 1 << 30;
    bool hasToken = false;
  };
  std::vector<LineInfo> info(lines.size());
  std::vector<size_t> lineOffsets(lines.size());
  {
    size_t off = 0;
    for (size_t i = 0; i < lines.size(); ++i) {
      lineOffsets[i] = off;
      off += lines[i].size() + 1;
    }
  }
  std::vector<Token> toks;
  try {
    toks = lex(source);
  } catch (const Error&) {
    return source;
  }
  int depth = 0;
  size_t lineIdx = 0;
  for (const auto& t : toks) {
    if (t.kind == TokKind::Eof) break;
    while (lineIdx + 1 < lines.size() && t.begin >= lineOffsets[lineIdx + 1]) {
      info[lineIdx].endDepth = depth;
      ++lineIdx;
      info[lineIdx].startDepth = depth;
    }
    info[lineIdx].hasToken = true;
    if (t.kind == TokKind::Punct) {
      if (t.lexeme == "{" || t.lexeme == "(" || t.lexeme == "[") ++depth;
      if (t.lexeme == "}" || t.lexeme == ")" || t.lexeme == "]") --depth;
    }
    info[lineIdx].minDepth = std::min(info[lineIdx].minDepth, depth);
  }
  for (size_t i = lineIdx; i < lines.size(); ++i) info[i].endDepth = depth;

  std::string result;
  bool dropped = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    const LineInfo& li = info[i];
    bool candidate = li.hasToken && li.startDepth >= 1 && li.startDepth == li.endDepth &&
                     li.minDepth >= li.startDepth;
    bool keep = true;
    if (candidate) keep = rng.bernoulli(0.9);
    if (keep) {
      result += lines[i];
      if (i + 1 < lines.size()) result += '\n';
    } else {
      dropped = true;
    }
  }
  if (!dropped) return source;
  try {
    parse(result);
  } catch (const Error&) {
    return source;  // subsampled text no longer parses; keep the input
  }
  return result;
}

// ---------------------------------------------------------------------------

ProgramForm applyTransform(TransformId id, ProgramForm p, Rng& rng) {
  try {
    switch (id) {
      case TransformId::R:
        p.raiseToAst();
        p.lowerToSource(PrintStyle::Reformatted);
        return p;
      case TransformId::B:
        p.raiseToAst();
        p.lowerToSource(PrintStyle::Beautified);
        return p;
      case TransformId::C:
        p.raiseToAst();
        passCompress(*p.ast);
        p.lowerToSource(PrintStyle::Compact);
        return p;
      case TransformId::DCE:
        p.raiseToAst();
        passDeadCodeElimination(*p.ast);
        return p;
      case TransformId::T:
        p.raiseToAst();
        passTypeUpconversion(*p.ast);
        return p;
      case TransformId::CF:
        p.raiseToAst();
        passConstantFolding(*p.ast);
        return p;
      case TransformId::VR:
        p.raiseToAst();
        passVariableRenaming(*p.ast, rng);
        return p;
      case TransformId::IM:
        p.raiseToAst();
        passIdentifierMangling(*p.ast);
        return p;
      case TransformId::DCI:
        p.raiseToAst();
        passDeadCodeInsertion(*p.ast, rng);
        return p;
      case TransformId::SW:
        return p;  // applied later, at tokenization
      case TransformId::LS: {
        p.lowerToSource(PrintStyle::Beautified);
        p.source = passLineSubsampling(p.source, rng);
        return p;
      }
    }
  } catch (const TransformError&) {
    throw;
  } catch (const Error& e) {
    throw TransformError(transformIdName(id), e.what());
  }
  throw TransformError(transformIdName(id), "unreachable");
}

}  // namespace equivar
