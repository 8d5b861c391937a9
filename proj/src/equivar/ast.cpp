#include "equivar/ast.hpp"

#include <charconv>
#include <cmath>

namespace equivar {

namespace {

template <typename T>
bool ptrEqual(const std::unique_ptr<T>& a, const std::unique_ptr<T>& b, bool cc) {
  if (!a && !b) return true;
  if (!a || !b) return false;
  if constexpr (std::is_same_v<T, Expr>) {
    (void)cc;
    return astEqual(*a, *b);
  } else {
    return astEqual(*a, *b, cc);
  }
}

bool commentsEqual(const std::vector<Comment>& a, const std::vector<Comment>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].text != b[i].text || a[i].block != b[i].block) return false;
  return true;
}

}  // namespace

ExprPtr cloneExpr(const Expr& e) {
  auto c = std::make_unique<Expr>(e.kind);
  c->num = e.num;
  c->raw = e.raw;
  c->str = e.str;
  c->boolean = e.boolean;
  c->name = e.name;
  c->binOp = e.binOp;
  c->unOp = e.unOp;
  c->assignOp = e.assignOp;
  c->computed = e.computed;
  if (e.lhs) c->lhs = cloneExpr(*e.lhs);
  if (e.rhs) c->rhs = cloneExpr(*e.rhs);
  for (const auto& el : e.elements) c->elements.push_back(el ? cloneExpr(*el) : nullptr);
  for (const auto& f : e.fields) {
    ObjectField nf;
    nf.key = f.key;
    nf.rawKey = f.rawKey;
    nf.quoted = f.quoted;
    nf.value = cloneExpr(*f.value);
    c->fields.push_back(std::move(nf));
  }
  c->params = e.params;
  if (e.body) c->body = cloneBlock(*e.body);
  if (e.arrowExpr) c->arrowExpr = cloneExpr(*e.arrowExpr);
  return c;
}

BlockPtr cloneBlock(const Block& b) {
  auto c = std::make_unique<Block>();
  for (const auto& s : b.stmts) c->stmts.push_back(cloneStmt(*s));
  c->trailing = b.trailing;
  return c;
}

StmtPtr cloneStmt(const Stmt& s) {
  auto c = std::make_unique<Stmt>(s.kind);
  c->leading = s.leading;
  c->name = s.name;
  c->params = s.params;
  if (s.body) c->body = cloneBlock(*s.body);
  c->declKind = s.declKind;
  for (const auto& d : s.decls) {
    Declarator nd;
    nd.name = d.name;
    if (d.init) nd.init = cloneExpr(*d.init);
    c->decls.push_back(std::move(nd));
  }
  if (s.cond) c->cond = cloneExpr(*s.cond);
  if (s.thenBlock) c->thenBlock = cloneBlock(*s.thenBlock);
  if (s.elseStmt) c->elseStmt = cloneStmt(*s.elseStmt);
  if (s.loopBody) c->loopBody = cloneBlock(*s.loopBody);
  if (s.forInit) c->forInit = cloneStmt(*s.forInit);
  if (s.forUpdate) c->forUpdate = cloneExpr(*s.forUpdate);
  if (s.expr) c->expr = cloneExpr(*s.expr);
  if (s.block) c->block = cloneBlock(*s.block);
  return c;
}

ProgramPtr cloneProgram(const Program& p) {
  auto c = std::make_unique<Program>();
  for (const auto& s : p.stmts) c->stmts.push_back(cloneStmt(*s));
  c->trailing = p.trailing;
  return c;
}

bool astEqual(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::NumberLit:
      return a.raw == b.raw &&
             (a.num == b.num || (std::isnan(a.num) && std::isnan(b.num)));
    case ExprKind::StringLit:
      return a.str == b.str;
    case ExprKind::BoolLit:
      return a.boolean == b.boolean;
    case ExprKind::NullLit:
    case ExprKind::UndefinedLit:
      return true;
    case ExprKind::Identifier:
      return a.name == b.name;
    case ExprKind::ArrayLit: {
      if (a.elements.size() != b.elements.size()) return false;
      for (size_t i = 0; i < a.elements.size(); ++i)
        if (!ptrEqual(a.elements[i], b.elements[i], false)) return false;
      return true;
    }
    case ExprKind::ObjectLit: {
      if (a.fields.size() != b.fields.size()) return false;
      for (size_t i = 0; i < a.fields.size(); ++i) {
        const auto& fa = a.fields[i];
        const auto& fb = b.fields[i];
        if (fa.key != fb.key || fa.quoted != fb.quoted) return false;
        if (!astEqual(*fa.value, *fb.value)) return false;
      }
      return true;
    }
    case ExprKind::Binary:
      return a.binOp == b.binOp && astEqual(*a.lhs, *b.lhs) && astEqual(*a.rhs, *b.rhs);
    case ExprKind::Unary:
      return a.unOp == b.unOp && astEqual(*a.lhs, *b.lhs);
    case ExprKind::Assign:
      return a.assignOp == b.assignOp && astEqual(*a.lhs, *b.lhs) && astEqual(*a.rhs, *b.rhs);
    case ExprKind::Member:
      if (a.computed != b.computed) return false;
      if (!astEqual(*a.lhs, *b.lhs)) return false;
      return a.computed ? astEqual(*a.rhs, *b.rhs) : a.name == b.name;
    case ExprKind::Call: {
      if (!astEqual(*a.lhs, *b.lhs)) return false;
      if (a.elements.size() != b.elements.size()) return false;
      for (size_t i = 0; i < a.elements.size(); ++i)
        if (!astEqual(*a.elements[i], *b.elements[i])) return false;
      return true;
    }
    case ExprKind::FunctionExpr:
    case ExprKind::Arrow: {
      if (a.name != b.name || a.params != b.params) return false;
      if (!ptrEqual(a.body, b.body, false)) return false;
      return ptrEqual(a.arrowExpr, b.arrowExpr, false);
    }
  }
  return false;
}

bool astEqual(const Block& a, const Block& b, bool cc) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (size_t i = 0; i < a.stmts.size(); ++i)
    if (!astEqual(*a.stmts[i], *b.stmts[i], cc)) return false;
  return !cc || commentsEqual(a.trailing, b.trailing);
}

bool astEqual(const Stmt& a, const Stmt& b, bool cc) {
  if (a.kind != b.kind) return false;
  if (cc && !commentsEqual(a.leading, b.leading)) return false;
  switch (a.kind) {
    case StmtKind::FunctionDecl:
      return a.name == b.name && a.params == b.params && astEqual(*a.body, *b.body, cc);
    case StmtKind::VarDecl: {
      if (a.declKind != b.declKind || a.decls.size() != b.decls.size()) return false;
      for (size_t i = 0; i < a.decls.size(); ++i) {
        if (a.decls[i].name != b.decls[i].name) return false;
        if (!ptrEqual(a.decls[i].init, b.decls[i].init, cc)) return false;
      }
      return true;
    }
    case StmtKind::If:
      return astEqual(*a.cond, *b.cond) && astEqual(*a.thenBlock, *b.thenBlock, cc) &&
             ptrEqual(a.elseStmt, b.elseStmt, cc);
    case StmtKind::While:
      return astEqual(*a.cond, *b.cond) && astEqual(*a.loopBody, *b.loopBody, cc);
    case StmtKind::For:
      return ptrEqual(a.forInit, b.forInit, cc) && ptrEqual(a.cond, b.cond, cc) &&
             ptrEqual(a.forUpdate, b.forUpdate, cc) && astEqual(*a.loopBody, *b.loopBody, cc);
    case StmtKind::Return:
      return ptrEqual(a.expr, b.expr, cc);
    case StmtKind::ExprStmt:
      return astEqual(*a.expr, *b.expr);
    case StmtKind::Block:
      return astEqual(*a.block, *b.block, cc);
  }
  return false;
}

bool astEqual(const Program& a, const Program& b, bool cc) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (size_t i = 0; i < a.stmts.size(); ++i)
    if (!astEqual(*a.stmts[i], *b.stmts[i], cc)) return false;
  return !cc || commentsEqual(a.trailing, b.trailing);
}

ExprPtr makeNumber(double value) {
  auto e = std::make_unique<Expr>(ExprKind::NumberLit);
  e->num = value;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  e->raw.assign(buf, res.ptr);
  return e;
}

ExprPtr makeString(const std::string& value) {
  auto e = std::make_unique<Expr>(ExprKind::StringLit);
  e->str = value;
  std::string raw = "\"";
  for (char c : value) {
    switch (c) {
      case '\n': raw += "\\n"; break;
      case '\t': raw += "\\t"; break;
      case '\r': raw += "\\r"; break;
      case '\\': raw += "\\\\"; break;
      case '"': raw += "\\\""; break;
      case '\0': raw += "\\0"; break;
      default: raw += c;
    }
  }
  raw += '"';
  e->raw = std::move(raw);
  return e;
}

ExprPtr makeBool(bool value) {
  auto e = std::make_unique<Expr>(ExprKind::BoolLit);
  e->boolean = value;
  return e;
}

ExprPtr makeIdent(const std::string& name) {
  auto e = std::make_unique<Expr>(ExprKind::Identifier);
  e->name = name;
  return e;
}

}  // namespace equivar
