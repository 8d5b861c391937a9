#include "equivar/scope.hpp"

#include <unordered_map>

namespace equivar {

namespace {

class Walker {
 public:
  explicit Walker(ScopeAnalysis& out) : out_(out) {}

  void run(Program& prog) {
    pushScope(true);
    hoistFunctionLevel(prog.stmts, /*topLevel=*/true);
    for (auto& s : prog.stmts) visitStmt(*s);
    popScope();
  }

 private:
  struct Scope {
    bool functionScope;
    std::unordered_map<std::string, int> names;
  };

  ScopeAnalysis& out_;
  std::vector<Scope> stack_;

  void pushScope(bool functionScope) { stack_.push_back({functionScope, {}}); }
  void popScope() { stack_.pop_back(); }

  int declare(const std::string& name, bool topLevel) {
    auto& names = stack_.back().names;
    auto it = names.find(name);
    if (it != names.end()) return it->second;  // redeclaration shares the binding
    int idx = static_cast<int>(out_.decls.size());
    ScopeAnalysis::Decl d;
    d.name = name;
    d.topLevel = topLevel;
    out_.decls.push_back(std::move(d));
    names.emplace(name, idx);
    out_.allNames.insert(name);
    return idx;
  }

  int nearestFunctionScopeIdx() {
    for (int i = static_cast<int>(stack_.size()) - 1; i >= 0; --i)
      if (stack_[i].functionScope) return i;
    return 0;
  }

  int declareVarHoisted(const std::string& name, bool topLevel) {
    int scopeIdx = nearestFunctionScopeIdx();
    auto& names = stack_[scopeIdx].names;
    auto it = names.find(name);
    if (it != names.end()) return it->second;
    int idx = static_cast<int>(out_.decls.size());
    ScopeAnalysis::Decl d;
    d.name = name;
    d.topLevel = topLevel;
    out_.decls.push_back(std::move(d));
    names.emplace(name, idx);
    out_.allNames.insert(name);
    return idx;
  }

  int lookup(const std::string& name) {
    for (int i = static_cast<int>(stack_.size()) - 1; i >= 0; --i) {
      auto it = stack_[i].names.find(name);
      if (it != stack_[i].names.end()) return it->second;
    }
    return -1;
  }

  // Pre-register declarations visible throughout the current function scope:
  // immediate function declarations and `var` declarators anywhere below
  // (not crossing into nested functions). Lexical declarations are
  // registered per block by hoistBlockLevel.
  void hoistFunctionLevel(const std::vector<StmtPtr>& stmts, bool topLevel) {
    hoistBlockLevel(stmts, topLevel);
    for (const auto& s : stmts) hoistVars(*s, topLevel);
  }

  void hoistBlockLevel(const std::vector<StmtPtr>& stmts, bool topLevel) {
    for (const auto& s : stmts) {
      if (s->kind == StmtKind::FunctionDecl) {
        int idx = declare(s->name, topLevel);
        out_.decls[idx].isFunctionName = true;
        out_.decls[idx].sites.push_back(&const_cast<Stmt&>(*s).name);
        out_.functionDeclIndex[s.get()] = idx;
      } else if (s->kind == StmtKind::VarDecl && s->declKind != DeclKind::Var) {
        for (const auto& d : s->decls) {
          int idx = declare(d.name, topLevel);
          out_.decls[idx].sites.push_back(&const_cast<Declarator&>(d).name);
          out_.declaratorIndex[&d] = idx;
        }
      }
    }
  }

  void hoistVars(const Stmt& s, bool topLevel) {
    switch (s.kind) {
      case StmtKind::VarDecl:
        if (s.declKind == DeclKind::Var) {
          for (const auto& d : s.decls) {
            int idx = declareVarHoisted(d.name, topLevel);
            out_.decls[idx].sites.push_back(&const_cast<Declarator&>(d).name);
            out_.declaratorIndex[&d] = idx;
          }
        }
        break;
      case StmtKind::If:
        for (const auto& c : s.thenBlock->stmts) hoistVars(*c, topLevel);
        if (s.elseStmt) hoistVars(*s.elseStmt, topLevel);
        break;
      case StmtKind::While:
        for (const auto& c : s.loopBody->stmts) hoistVars(*c, topLevel);
        break;
      case StmtKind::For:
        if (s.forInit) hoistVars(*s.forInit, topLevel);
        for (const auto& c : s.loopBody->stmts) hoistVars(*c, topLevel);
        break;
      case StmtKind::Block:
        for (const auto& c : s.block->stmts) hoistVars(*c, topLevel);
        break;
      default:
        break;
    }
  }

  void visitStmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::FunctionDecl: {
        pushScope(true);
        declareParams(s.params);
        hoistFunctionLevel(s.body->stmts, false);
        for (auto& c : s.body->stmts) visitStmt(*c);
        popScope();
        break;
      }
      case StmtKind::VarDecl: {
        for (auto& d : s.decls) {
          // `var` declarators in nested blocks were hoisted by an enclosing
          // hoistFunctionLevel call and are already indexed; lexical ones by
          // the current block's hoistBlockLevel.
          if (d.init) visitExpr(*d.init);
        }
        break;
      }
      case StmtKind::If:
        visitExpr(*s.cond);
        visitBlock(*s.thenBlock);
        if (s.elseStmt) visitStmt(*s.elseStmt);
        break;
      case StmtKind::While:
        visitExpr(*s.cond);
        visitBlock(*s.loopBody);
        break;
      case StmtKind::For: {
        pushScope(false);
        if (s.forInit) {
          if (s.forInit->kind == StmtKind::VarDecl && s.forInit->declKind != DeclKind::Var) {
            for (const auto& d : s.forInit->decls) {
              int idx = declare(d.name, false);
              out_.decls[idx].sites.push_back(&const_cast<Declarator&>(d).name);
              out_.declaratorIndex[&d] = idx;
            }
          }
          visitStmt(*s.forInit);
        }
        if (s.cond) visitExpr(*s.cond);
        visitBlock(*s.loopBody);
        if (s.forUpdate) visitExpr(*s.forUpdate);
        popScope();
        break;
      }
      case StmtKind::Return:
        if (s.expr) visitExpr(*s.expr);
        break;
      case StmtKind::ExprStmt:
        visitExpr(*s.expr);
        break;
      case StmtKind::Block:
        visitBlock(*s.block);
        break;
    }
  }

  void visitBlock(Block& b) {
    pushScope(false);
    hoistBlockLevel(b.stmts, false);
    for (auto& s : b.stmts) visitStmt(*s);
    popScope();
  }

  void declareParams(std::vector<std::string>& params) {
    for (auto& p : params) {
      int idx = declare(p, false);
      out_.decls[idx].isParam = true;
      out_.decls[idx].sites.push_back(&p);
    }
  }

  void visitExpr(Expr& e) {
    switch (e.kind) {
      case ExprKind::Identifier: {
        out_.allNames.insert(e.name);
        int idx = lookup(e.name);
        if (idx >= 0)
          out_.decls[idx].refs.push_back(&e.name);
        else
          out_.freeNames.insert(e.name);
        break;
      }
      case ExprKind::Binary:
      case ExprKind::Assign:
        visitExpr(*e.lhs);
        visitExpr(*e.rhs);
        break;
      case ExprKind::Unary:
        visitExpr(*e.lhs);
        break;
      case ExprKind::Member:
        visitExpr(*e.lhs);
        if (e.computed) visitExpr(*e.rhs);
        break;
      case ExprKind::Call:
        visitExpr(*e.lhs);
        for (auto& a : e.elements) visitExpr(*a);
        break;
      case ExprKind::ArrayLit:
        for (auto& el : e.elements) visitExpr(*el);
        break;
      case ExprKind::ObjectLit:
        for (auto& f : e.fields) visitExpr(*f.value);
        break;
      case ExprKind::FunctionExpr: {
        pushScope(true);
        if (!e.name.empty()) {
          int idx = declare(e.name, false);
          out_.decls[idx].isFunctionName = true;
          out_.decls[idx].sites.push_back(&e.name);
        }
        declareParams(e.params);
        hoistFunctionLevel(e.body->stmts, false);
        for (auto& s : e.body->stmts) visitStmt(*s);
        popScope();
        break;
      }
      case ExprKind::Arrow: {
        pushScope(true);
        declareParams(e.params);
        if (e.body) {
          hoistFunctionLevel(e.body->stmts, false);
          for (auto& s : e.body->stmts) visitStmt(*s);
        } else {
          visitExpr(*e.arrowExpr);
        }
        popScope();
        break;
      }
      default:
        break;
    }
  }
};

}  // namespace

ScopeAnalysis analyzeScopes(Program& prog) {
  ScopeAnalysis out;
  Walker(out).run(prog);
  return out;
}

}  // namespace equivar
