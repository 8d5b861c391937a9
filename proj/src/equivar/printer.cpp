#include "equivar/printer.hpp"

#include <cassert>

#include "equivar/error.hpp"

namespace equivar {

namespace {

bool isWordChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '$';
}

struct Writer {
  explicit Writer(PrintStyle s) : style(s) {}

  PrintStyle style;
  std::string out;
  int depth = 0;
  bool atLineStart = true;

  bool multiline() const { return style != PrintStyle::Compact; }
  bool spaced() const { return style != PrintStyle::Compact; }
  int indentWidth() const { return style == PrintStyle::Reformatted ? 4 : 2; }
  bool allmanBraces() const { return style == PrintStyle::Reformatted; }

  void writeIndent() {
    if (atLineStart && multiline()) {
      out.append(static_cast<size_t>(depth * indentWidth()), ' ');
      atLineStart = false;
    }
  }

  // Raw token text. Inserts a separator when gluing the previous token to
  // this one would change the token stream (`return e`, `a- -b`).
  void tok(const std::string& s) {
    if (s.empty()) return;
    writeIndent();
    if (!out.empty() && !atLineStart) {
      char prev = out.back();
      char cur = s.front();
      bool needSep = (isWordChar(prev) && isWordChar(cur)) ||
                     (prev == '+' && cur == '+') || (prev == '-' && cur == '-');
      if (needSep) out += ' ';
    }
    out += s;
    atLineStart = false;
  }

  void space() {
    if (spaced()) {
      writeIndent();
      out += ' ';
    }
  }

  void newline() {
    if (multiline()) {
      out += '\n';
      atLineStart = true;
    }
  }

  void openBrace() {
    if (allmanBraces()) {
      newline();
      tok("{");
      newline();
    } else {
      space();
      tok("{");
      newline();
    }
    ++depth;
  }

  void closeBrace() {
    --depth;
    tok("}");
  }

  void comment(const Comment& c) {
    if (style == PrintStyle::Compact) return;
    if (c.block) {
      tok("/*" + c.text + "*/");
    } else {
      tok("//" + c.text);
    }
    newline();
  }
};

// Precedence tiers used for minimal parenthesization. Mirrors the parser.
enum Prec {
  kPrecLowest = 0,   // assignment, arrow, function expression
  kPrecOr = 1,
  kPrecAnd = 2,
  kPrecEq = 3,
  kPrecRel = 4,
  kPrecAdd = 5,
  kPrecMul = 6,
  kPrecUnary = 7,
  kPrecPostfix = 8,
  kPrecPrimary = 9,
};

int precedenceOf(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return kPrecOr;
    case BinaryOp::And: return kPrecAnd;
    case BinaryOp::EqLoose:
    case BinaryOp::NeLoose:
    case BinaryOp::EqStrict:
    case BinaryOp::NeStrict: return kPrecEq;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return kPrecRel;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kPrecAdd;
    default: return kPrecMul;
  }
}

int precedenceOf(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Assign:
    case ExprKind::Arrow:
    case ExprKind::FunctionExpr: return kPrecLowest;
    case ExprKind::Binary: return precedenceOf(e.binOp);
    case ExprKind::Unary: return kPrecUnary;
    case ExprKind::Call:
    case ExprKind::Member: return kPrecPostfix;
    default: return kPrecPrimary;
  }
}

const char* binOpText(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::EqLoose: return "==";
    case BinaryOp::NeLoose: return "!=";
    case BinaryOp::EqStrict: return "===";
    case BinaryOp::NeStrict: return "!==";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* assignOpText(AssignOp op) {
  switch (op) {
    case AssignOp::Assign: return "=";
    case AssignOp::AddAssign: return "+=";
    case AssignOp::SubAssign: return "-=";
    case AssignOp::MulAssign: return "*=";
    case AssignOp::DivAssign: return "/=";
    case AssignOp::ModAssign: return "%=";
  }
  return "?";
}

class Printer {
 public:
  explicit Printer(PrintStyle style) : w_(style) {}

  std::string run(const Program& prog) {
    for (const auto& s : prog.stmts) stmt(*s);
    for (const auto& c : prog.trailing) w_.comment(c);
    if (!w_.out.empty() && w_.out.back() == '\n') w_.out.pop_back();
    return std::move(w_.out);
  }

  std::string runExpr(const Expr& e) {
    expr(e, kPrecLowest);
    return std::move(w_.out);
  }

 private:
  Writer w_;

  bool compact() const { return w_.style == PrintStyle::Compact; }

  // A single-statement body may omit braces in compact output only when
  // reparsing restores the same canonical tree: simple statements only, and
  // never an `if` (dangling-else) or declaration.
  bool blockBracesOptional(const Block& b) const {
    if (!compact()) return false;
    if (b.stmts.size() != 1) return false;
    StmtKind k = b.stmts[0]->kind;
    return k == StmtKind::ExprStmt || k == StmtKind::Return;
  }

  void body(const Block& b) {
    if (blockBracesOptional(b)) {
      stmt(*b.stmts[0]);
      return;
    }
    blockBody(b);
  }

  void blockBody(const Block& b) {
    w_.openBrace();
    for (const auto& s : b.stmts) stmt(*s);
    for (const auto& c : b.trailing) w_.comment(c);
    w_.closeBrace();
  }

  void stmt(const Stmt& s) {
    for (const auto& c : s.leading) w_.comment(c);
    switch (s.kind) {
      case StmtKind::FunctionDecl: {
        w_.tok("function");
        w_.space();
        w_.tok(s.name);
        paramList(s.params);
        blockBody(*s.body);
        w_.newline();
        break;
      }
      case StmtKind::VarDecl: {
        varDecl(s);
        w_.tok(";");
        w_.newline();
        break;
      }
      case StmtKind::If: {
        ifStmt(s);
        w_.newline();
        break;
      }
      case StmtKind::While: {
        w_.tok("while");
        w_.space();
        w_.tok("(");
        expr(*s.cond, kPrecLowest);
        w_.tok(")");
        body(*s.loopBody);
        w_.newline();
        break;
      }
      case StmtKind::For: {
        w_.tok("for");
        w_.space();
        w_.tok("(");
        if (s.forInit) {
          if (s.forInit->kind == StmtKind::VarDecl)
            varDecl(*s.forInit);
          else
            expr(*s.forInit->expr, kPrecLowest);
        }
        w_.tok(";");
        if (s.cond) {
          w_.space();
          expr(*s.cond, kPrecLowest);
        }
        w_.tok(";");
        if (s.forUpdate) {
          w_.space();
          expr(*s.forUpdate, kPrecLowest);
        }
        w_.tok(")");
        body(*s.loopBody);
        w_.newline();
        break;
      }
      case StmtKind::Return: {
        w_.tok("return");
        if (s.expr) {
          w_.space();
          expr(*s.expr, kPrecLowest);
        }
        w_.tok(";");
        w_.newline();
        break;
      }
      case StmtKind::ExprStmt: {
        // Parenthesize leading `function`/`{` so the statement does not
        // reparse as a declaration or block.
        bool needParens = s.expr->kind == ExprKind::FunctionExpr ||
                          s.expr->kind == ExprKind::ObjectLit;
        if (needParens) w_.tok("(");
        expr(*s.expr, kPrecLowest);
        if (needParens) w_.tok(")");
        w_.tok(";");
        w_.newline();
        break;
      }
      case StmtKind::Block: {
        blockBody(*s.block);
        w_.newline();
        break;
      }
    }
  }

  void ifStmt(const Stmt& s) {
    w_.tok("if");
    w_.space();
    w_.tok("(");
    expr(*s.cond, kPrecLowest);
    w_.tok(")");
    body(*s.thenBlock);
    if (s.elseStmt) {
      if (!compact() && !w_.allmanBraces() && !w_.atLineStart) {
        w_.space();
      } else if (!compact()) {
        w_.newline();
      }
      w_.tok("else");
      if (s.elseStmt->kind == StmtKind::If) {
        w_.space();
        ifStmt(*s.elseStmt);
      } else {
        assert(s.elseStmt->kind == StmtKind::Block);
        const Block& blk = *s.elseStmt->block;
        if (blockBracesOptional(blk)) {
          w_.space();
          stmt(*blk.stmts[0]);
        } else {
          body(blk);
        }
      }
    }
  }

  void varDecl(const Stmt& s) {
    w_.tok(s.declKind == DeclKind::Var ? "var" : s.declKind == DeclKind::Let ? "let" : "const");
    w_.space();
    bool first = true;
    for (const auto& d : s.decls) {
      if (!first) {
        w_.tok(",");
        w_.space();
      }
      first = false;
      w_.tok(d.name);
      if (d.init) {
        w_.space();
        w_.tok("=");
        w_.space();
        expr(*d.init, kPrecLowest);
      }
    }
  }

  void paramList(const std::vector<std::string>& params) {
    w_.tok("(");
    bool first = true;
    for (const auto& p : params) {
      if (!first) {
        w_.tok(",");
        w_.space();
      }
      first = false;
      w_.tok(p);
    }
    w_.tok(")");
  }

  void exprList(const std::vector<ExprPtr>& list) {
    bool first = true;
    for (const auto& e : list) {
      if (!first) {
        w_.tok(",");
        w_.space();
      }
      first = false;
      expr(*e, kPrecLowest);
    }
  }

  void expr(const Expr& e, int ctxPrec) {
    int myPrec = precedenceOf(e);
    bool parens = myPrec < ctxPrec;
    if (parens) w_.tok("(");
    switch (e.kind) {
      case ExprKind::NumberLit:
        w_.tok(e.raw);
        break;
      case ExprKind::StringLit:
        w_.tok(e.raw);
        break;
      case ExprKind::BoolLit:
        w_.tok(e.boolean ? "true" : "false");
        break;
      case ExprKind::NullLit:
        w_.tok("null");
        break;
      case ExprKind::UndefinedLit:
        w_.tok("undefined");
        break;
      case ExprKind::Identifier:
        w_.tok(e.name);
        break;
      case ExprKind::ArrayLit:
        w_.tok("[");
        exprList(e.elements);
        w_.tok("]");
        break;
      case ExprKind::ObjectLit: {
        w_.tok("{");
        bool first = true;
        for (const auto& f : e.fields) {
          if (!first) {
            w_.tok(",");
            w_.space();
          }
          first = false;
          w_.tok(f.rawKey);
          w_.tok(":");
          w_.space();
          expr(*f.value, kPrecLowest);
        }
        w_.tok("}");
        break;
      }
      case ExprKind::Binary: {
        int prec = precedenceOf(e.binOp);
        expr(*e.lhs, prec);
        if (w_.spaced()) {
          w_.space();
          w_.tok(binOpText(e.binOp));
          w_.space();
        } else {
          w_.tok(binOpText(e.binOp));
        }
        expr(*e.rhs, prec + 1);  // left-assoc: parenthesize equal-prec right child
        break;
      }
      case ExprKind::Unary: {
        w_.tok(e.unOp == UnaryOp::Neg ? "-" : e.unOp == UnaryOp::Plus ? "+" : "!");
        expr(*e.lhs, kPrecUnary);
        break;
      }
      case ExprKind::Assign: {
        expr(*e.lhs, kPrecPostfix);
        if (w_.spaced()) {
          w_.space();
          w_.tok(assignOpText(e.assignOp));
          w_.space();
        } else {
          w_.tok(assignOpText(e.assignOp));
        }
        expr(*e.rhs, kPrecLowest);
        break;
      }
      case ExprKind::Member: {
        expr(*e.lhs, kPrecPostfix);
        if (e.computed) {
          w_.tok("[");
          expr(*e.rhs, kPrecLowest);
          w_.tok("]");
        } else {
          w_.tok(".");
          w_.tok(e.name);
        }
        break;
      }
      case ExprKind::Call: {
        expr(*e.lhs, kPrecPostfix);
        w_.tok("(");
        exprList(e.elements);
        w_.tok(")");
        break;
      }
      case ExprKind::FunctionExpr: {
        w_.tok("function");
        if (!e.name.empty()) {
          w_.space();
          w_.tok(e.name);
        }
        paramList(e.params);
        blockBody(*e.body);
        break;
      }
      case ExprKind::Arrow: {
        if (e.params.size() == 1) {
          w_.tok(e.params[0]);
        } else {
          paramList(e.params);
        }
        if (w_.spaced()) {
          w_.space();
          w_.tok("=>");
          w_.space();
        } else {
          w_.tok("=>");
        }
        if (e.body) {
          blockBody(*e.body);
        } else {
          // Concise object body would reparse as a block.
          bool needParens = e.arrowExpr->kind == ExprKind::ObjectLit;
          if (needParens) w_.tok("(");
          expr(*e.arrowExpr, kPrecLowest);
          if (needParens) w_.tok(")");
        }
        break;
      }
    }
    if (parens) w_.tok(")");
  }
};

}  // namespace

std::string print(const Program& prog, PrintStyle style) { return Printer(style).run(prog); }

std::string printExpr(const Expr& e, PrintStyle style) { return Printer(style).runExpr(e); }

PrintStyle printStyleFromName(const std::string& name) {
  if (name == "beautified") return PrintStyle::Beautified;
  if (name == "reformatted") return PrintStyle::Reformatted;
  if (name == "compact") return PrintStyle::Compact;
  throw ConfigError("unknown print style: " + name);
}

std::string printStyleName(PrintStyle style) {
  switch (style) {
    case PrintStyle::Beautified: return "beautified";
    case PrintStyle::Reformatted: return "reformatted";
    case PrintStyle::Compact: return "compact";
  }
  return "?";
}

}  // namespace equivar
