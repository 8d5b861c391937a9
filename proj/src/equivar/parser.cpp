#include "equivar/parser.hpp"


#include "equivar/error.hpp"
#include "equivar/token.hpp"

namespace equivar {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  ProgramPtr parseProgram() {
    auto prog = std::make_unique<Program>();
    while (!at(TokKind::Eof)) {
      prog->stmts.push_back(parseStatement());
    }
    prog->trailing = takeComments();
    return prog;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::vector<Comment> pending_;  // comments awaiting attachment

  // --- token helpers -------------------------------------------------------

  void skipComments() {
    while (toks_[pos_].kind == TokKind::Comment) {
      pending_.push_back({toks_[pos_].value, toks_[pos_].blockComment});
      ++pos_;
    }
  }

  const Token& peek(size_t ahead = 0) {
    skipComments();
    // Comments between lookahead tokens are rare; scan past them.
    size_t p = pos_;
    size_t seen = 0;
    while (true) {
      if (toks_[p].kind == TokKind::Comment) {
        ++p;
        continue;
      }
      if (seen == ahead) return toks_[p];
      ++seen;
      ++p;
    }
  }

  bool at(TokKind k) { return peek().kind == k; }
  bool atPunct(const char* p) { return peek().kind == TokKind::Punct && peek().lexeme == p; }
  bool atKeyword(const char* w) { return peek().kind == TokKind::Keyword && peek().lexeme == w; }

  Token next() {
    skipComments();
    return toks_[pos_++];
  }

  Token expectPunct(const char* p) {
    if (!atPunct(p)) throw ParseError(peek().begin, std::string("'") + p + "'");
    return next();
  }

  Token expectIdentifier() {
    if (!at(TokKind::Identifier)) throw ParseError(peek().begin, "identifier");
    Token t = next();
    checkSupported(t);
    return t;
  }

  void expectKeyword(const char* w) {
    if (!atKeyword(w)) throw ParseError(peek().begin, std::string("'") + w + "'");
    next();
  }

  void checkSupported(const Token& t) {
    if (t.kind == TokKind::Identifier && isUnsupportedWord(t.lexeme))
      throw UnsupportedSyntax(t.lexeme);
  }

  std::vector<Comment> takeComments() {
    skipComments();
    return std::exchange(pending_, {});
  }

  void statementTerminator() {
    if (atPunct(";")) {
      next();
      return;
    }
    // Semicolon may be omitted only immediately before a closing brace or EOF.
    if (atPunct("}") || at(TokKind::Eof)) return;
    throw ParseError(peek().begin, "';'");
  }

  // --- statements ----------------------------------------------------------

  StmtPtr parseStatement() {
    std::vector<Comment> leading = takeComments();
    StmtPtr s = parseStatementBare();
    s->leading = std::move(leading);
    return s;
  }

  StmtPtr parseStatementBare() {
    const Token& t = peek();
    if (t.kind == TokKind::Keyword) {
      if (t.lexeme == "function") return parseFunctionDecl();
      if (t.lexeme == "var" || t.lexeme == "let" || t.lexeme == "const") {
        auto s = parseVarDecl();
        statementTerminator();
        return s;
      }
      if (t.lexeme == "if") return parseIf();
      if (t.lexeme == "while") return parseWhile();
      if (t.lexeme == "for") return parseFor();
      if (t.lexeme == "return") {
        next();
        auto s = std::make_unique<Stmt>(StmtKind::Return);
        if (!atPunct(";") && !atPunct("}") && !at(TokKind::Eof)) s->expr = parseExpression();
        statementTerminator();
        return s;
      }
      if (t.lexeme == "else") throw ParseError(t.begin, "statement");
    }
    if (t.kind == TokKind::Identifier) checkSupported(t);
    if (atPunct("{")) {
      auto s = std::make_unique<Stmt>(StmtKind::Block);
      s->block = parseBlock();
      return s;
    }
    if (atPunct(";")) throw ParseError(t.begin, "statement");
    auto s = std::make_unique<Stmt>(StmtKind::ExprStmt);
    s->expr = parseExpression();
    statementTerminator();
    return s;
  }

  BlockPtr parseBlock() {
    expectPunct("{");
    auto b = std::make_unique<Block>();
    while (!atPunct("}")) {
      if (at(TokKind::Eof)) throw ParseError(peek().begin, "'}'");
      b->stmts.push_back(parseStatement());
    }
    b->trailing = takeComments();
    expectPunct("}");
    return b;
  }

  // An unbraced body becomes a single-statement block so that the tree is
  // canonical regardless of whether the source used braces.
  BlockPtr parseBody() {
    if (atPunct("{")) return parseBlock();
    const Token& t = peek();
    if (t.kind == TokKind::Keyword &&
        (t.lexeme == "var" || t.lexeme == "let" || t.lexeme == "const" || t.lexeme == "function"))
      throw ParseError(t.begin, "block for declaration body");
    auto b = std::make_unique<Block>();
    b->stmts.push_back(parseStatement());
    return b;
  }

  StmtPtr parseFunctionDecl() {
    expectKeyword("function");
    auto s = std::make_unique<Stmt>(StmtKind::FunctionDecl);
    s->name = expectIdentifier().lexeme;
    s->params = parseParamList();
    s->body = parseBlock();
    return s;
  }

  std::vector<std::string> parseParamList() {
    expectPunct("(");
    std::vector<std::string> params;
    if (!atPunct(")")) {
      while (true) {
        params.push_back(expectIdentifier().lexeme);
        if (atPunct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expectPunct(")");
    return params;
  }

  StmtPtr parseVarDecl() {
    Token kw = next();
    auto s = std::make_unique<Stmt>(StmtKind::VarDecl);
    s->declKind = kw.lexeme == "var" ? DeclKind::Var
                : kw.lexeme == "let" ? DeclKind::Let
                                     : DeclKind::Const;
    while (true) {
      if (atPunct("{") || atPunct("[")) throw UnsupportedSyntax("destructuring");
      Declarator d;
      d.name = expectIdentifier().lexeme;
      if (atPunct("=")) {
        next();
        d.init = parseAssignment();
      }
      s->decls.push_back(std::move(d));
      if (atPunct(",")) {
        next();
        continue;
      }
      break;
    }
    return s;
  }

  StmtPtr parseIf() {
    expectKeyword("if");
    auto s = std::make_unique<Stmt>(StmtKind::If);
    expectPunct("(");
    s->cond = parseExpression();
    expectPunct(")");
    s->thenBlock = parseBody();
    if (atKeyword("else")) {
      next();
      if (atKeyword("if")) {
        s->elseStmt = parseIf();  // else-if chain stays unwrapped
      } else if (atPunct("{")) {
        auto blk = std::make_unique<Stmt>(StmtKind::Block);
        blk->block = parseBlock();
        s->elseStmt = std::move(blk);
      } else {
        auto blk = std::make_unique<Stmt>(StmtKind::Block);
        blk->block = parseBody();
        s->elseStmt = std::move(blk);
      }
    }
    return s;
  }

  StmtPtr parseWhile() {
    expectKeyword("while");
    auto s = std::make_unique<Stmt>(StmtKind::While);
    expectPunct("(");
    s->cond = parseExpression();
    expectPunct(")");
    s->loopBody = parseBody();
    return s;
  }

  StmtPtr parseFor() {
    expectKeyword("for");
    auto s = std::make_unique<Stmt>(StmtKind::For);
    expectPunct("(");
    if (!atPunct(";")) {
      if (atKeyword("var") || atKeyword("let") || atKeyword("const")) {
        s->forInit = parseVarDecl();
      } else {
        auto es = std::make_unique<Stmt>(StmtKind::ExprStmt);
        es->expr = parseExpression();
        s->forInit = std::move(es);
      }
      if (at(TokKind::Identifier) && (peek().lexeme == "of" || peek().lexeme == "in"))
        throw UnsupportedSyntax("for-" + peek().lexeme);
    }
    expectPunct(";");
    if (!atPunct(";")) s->cond = parseExpression();
    expectPunct(";");
    if (!atPunct(")")) s->forUpdate = parseExpression();
    expectPunct(")");
    s->loopBody = parseBody();
    return s;
  }

  // --- expressions ---------------------------------------------------------

  ExprPtr parseExpression() { return parseAssignment(); }

  bool aheadIsArrow() {
    // ident => ...   or   ( params ) => ...
    const Token& t = peek();
    if (t.kind == TokKind::Identifier) {
      return peek(1).kind == TokKind::Punct && peek(1).lexeme == "=>";
    }
    if (t.kind == TokKind::Punct && t.lexeme == "(") {
      size_t depth = 0;
      size_t i = 0;
      while (true) {
        const Token& u = peek(i);
        if (u.kind == TokKind::Eof) return false;
        if (u.kind == TokKind::Punct) {
          if (u.lexeme == "(") ++depth;
          if (u.lexeme == ")") {
            --depth;
            if (depth == 0) {
              const Token& after = peek(i + 1);
              return after.kind == TokKind::Punct && after.lexeme == "=>";
            }
          }
        }
        ++i;
      }
    }
    return false;
  }

  ExprPtr parseArrow() {
    auto e = std::make_unique<Expr>(ExprKind::Arrow);
    if (at(TokKind::Identifier)) {
      e->params.push_back(expectIdentifier().lexeme);
      expectPunct("=>");
    } else {
      e->params = parseParamList();
      expectPunct("=>");
    }
    if (atPunct("{")) {
      e->body = parseBlock();
    } else {
      e->arrowExpr = parseAssignment();
    }
    return e;
  }

  ExprPtr parseAssignment() {
    if (aheadIsArrow()) return parseArrow();
    ExprPtr lhs = parseBinary(0);
    const Token& t = peek();
    if (t.kind == TokKind::Punct &&
        (t.lexeme == "=" || t.lexeme == "+=" || t.lexeme == "-=" || t.lexeme == "*=" ||
         t.lexeme == "/=" || t.lexeme == "%=")) {
      if (lhs->kind != ExprKind::Identifier && lhs->kind != ExprKind::Member)
        throw ParseError(t.begin, "assignable target");
      Token op = next();
      auto e = std::make_unique<Expr>(ExprKind::Assign);
      e->assignOp = op.lexeme == "=" ? AssignOp::Assign
                  : op.lexeme == "+=" ? AssignOp::AddAssign
                  : op.lexeme == "-=" ? AssignOp::SubAssign
                  : op.lexeme == "*=" ? AssignOp::MulAssign
                  : op.lexeme == "/=" ? AssignOp::DivAssign
                                      : AssignOp::ModAssign;
      e->lhs = std::move(lhs);
      e->rhs = parseAssignment();
      return e;
    }
    return lhs;
  }

  struct OpInfo {
    BinaryOp op;
    int prec;
  };

  bool binaryOpInfo(const Token& t, OpInfo& out) {
    if (t.kind != TokKind::Punct) return false;
    const std::string& s = t.lexeme;
    if (s == "||") out = {BinaryOp::Or, 1};
    else if (s == "&&") out = {BinaryOp::And, 2};
    else if (s == "==") out = {BinaryOp::EqLoose, 3};
    else if (s == "!=") out = {BinaryOp::NeLoose, 3};
    else if (s == "===") out = {BinaryOp::EqStrict, 3};
    else if (s == "!==") out = {BinaryOp::NeStrict, 3};
    else if (s == "<") out = {BinaryOp::Lt, 4};
    else if (s == "<=") out = {BinaryOp::Le, 4};
    else if (s == ">") out = {BinaryOp::Gt, 4};
    else if (s == ">=") out = {BinaryOp::Ge, 4};
    else if (s == "+") out = {BinaryOp::Add, 5};
    else if (s == "-") out = {BinaryOp::Sub, 5};
    else if (s == "*") out = {BinaryOp::Mul, 6};
    else if (s == "/") out = {BinaryOp::Div, 6};
    else if (s == "%") out = {BinaryOp::Mod, 6};
    else return false;
    return true;
  }

  ExprPtr parseBinary(int minPrec) {
    ExprPtr lhs = parseUnary();
    while (true) {
      OpInfo info;
      if (!binaryOpInfo(peek(), info) || info.prec < minPrec) break;
      next();
      ExprPtr rhs = parseBinary(info.prec + 1);  // all binary ops left-assoc
      auto e = std::make_unique<Expr>(ExprKind::Binary);
      e->binOp = info.op;
      e->lhs = std::move(lhs);
      e->rhs = std::move(rhs);
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parseUnary() {
    const Token& t = peek();
    if (t.kind == TokKind::Punct && (t.lexeme == "-" || t.lexeme == "+" || t.lexeme == "!")) {
      Token op = next();
      auto e = std::make_unique<Expr>(ExprKind::Unary);
      e->unOp = op.lexeme == "-" ? UnaryOp::Neg : op.lexeme == "+" ? UnaryOp::Plus : UnaryOp::Not;
      e->lhs = parseUnary();
      return e;
    }
    return parsePostfix();
  }

  ExprPtr parsePostfix() {
    ExprPtr e = parsePrimary();
    while (true) {
      if (atPunct("(")) {
        next();
        auto call = std::make_unique<Expr>(ExprKind::Call);
        call->lhs = std::move(e);
        if (!atPunct(")")) {
          while (true) {
            call->elements.push_back(parseAssignment());
            if (atPunct(",")) {
              next();
              continue;
            }
            break;
          }
        }
        expectPunct(")");
        e = std::move(call);
        continue;
      }
      if (atPunct(".")) {
        next();
        auto m = std::make_unique<Expr>(ExprKind::Member);
        m->lhs = std::move(e);
        if (!at(TokKind::Identifier) && !at(TokKind::Keyword))
          throw ParseError(peek().begin, "property name");
        m->name = next().lexeme;
        m->computed = false;
        e = std::move(m);
        continue;
      }
      if (atPunct("[")) {
        next();
        auto m = std::make_unique<Expr>(ExprKind::Member);
        m->lhs = std::move(e);
        m->rhs = parseExpression();
        m->computed = true;
        expectPunct("]");
        e = std::move(m);
        continue;
      }
      break;
    }
    return e;
  }

  ExprPtr parsePrimary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::Number: {
        Token tok = next();
        auto e = std::make_unique<Expr>(ExprKind::NumberLit);
        e->num = tok.num;
        e->raw = tok.lexeme;
        return e;
      }
      case TokKind::String: {
        Token tok = next();
        auto e = std::make_unique<Expr>(ExprKind::StringLit);
        e->str = tok.value;
        e->raw = tok.lexeme;
        return e;
      }
      case TokKind::Keyword: {
        if (t.lexeme == "true" || t.lexeme == "false") {
          Token tok = next();
          return makeBool(tok.lexeme == "true");
        }
        if (t.lexeme == "null") {
          next();
          return std::make_unique<Expr>(ExprKind::NullLit);
        }
        if (t.lexeme == "undefined") {
          next();
          return std::make_unique<Expr>(ExprKind::UndefinedLit);
        }
        if (t.lexeme == "function") {
          next();
          auto e = std::make_unique<Expr>(ExprKind::FunctionExpr);
          if (at(TokKind::Identifier)) e->name = expectIdentifier().lexeme;
          e->params = parseParamList();
          e->body = parseBlock();
          return e;
        }
        throw ParseError(t.begin, "expression");
      }
      case TokKind::Identifier: {
        checkSupported(t);
        Token tok = next();
        return makeIdent(tok.lexeme);
      }
      case TokKind::Punct: {
        if (t.lexeme == "(") {
          next();
          ExprPtr inner = parseExpression();
          expectPunct(")");
          return inner;
        }
        if (t.lexeme == "[") {
          next();
          auto e = std::make_unique<Expr>(ExprKind::ArrayLit);
          if (!atPunct("]")) {
            while (true) {
              e->elements.push_back(parseAssignment());
              if (atPunct(",")) {
                next();
                continue;
              }
              break;
            }
          }
          expectPunct("]");
          return e;
        }
        if (t.lexeme == "{") {
          next();
          auto e = std::make_unique<Expr>(ExprKind::ObjectLit);
          if (!atPunct("}")) {
            while (true) {
              ObjectField f;
              if (at(TokKind::String)) {
                Token k = next();
                f.key = k.value;
                f.rawKey = k.lexeme;
                f.quoted = true;
              } else if (at(TokKind::Identifier) || at(TokKind::Keyword)) {
                Token k = next();
                f.key = k.lexeme;
                f.rawKey = k.lexeme;
              } else {
                throw ParseError(peek().begin, "property key");
              }
              if (!atPunct(":")) throw UnsupportedSyntax("shorthand object property");
              next();
              f.value = parseAssignment();
              e->fields.push_back(std::move(f));
              if (atPunct(",")) {
                next();
                continue;
              }
              break;
            }
          }
          expectPunct("}");
          return e;
        }
        throw ParseError(t.begin, "expression");
      }
      default:
        throw ParseError(t.begin, "expression");
    }
  }
};

}  // namespace

ProgramPtr parse(const std::string& src) { return Parser(src).parseProgram(); }

}  // namespace equivar
