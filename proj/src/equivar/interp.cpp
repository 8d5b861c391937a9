#include "equivar/interp.hpp"

#include <charconv>
#include <cmath>
#include <memory>
#include <unordered_map>
#include <variant>

#include "equivar/error.hpp"

namespace equivar {

namespace {

struct ArrayObj;
struct ObjectObj;
struct ClosureObj;
struct Env;

struct Undefined {};
struct Null {};

using Value = std::variant<Undefined, Null, double, bool, std::string,
                           std::shared_ptr<ArrayObj>, std::shared_ptr<ObjectObj>,
                           std::shared_ptr<ClosureObj>>;

struct ArrayObj {
  std::vector<Value> items;
};

struct ObjectObj {
  std::vector<std::pair<std::string, Value>> fields;  // insertion order

  Value* find(const std::string& key) {
    for (auto& f : fields)
      if (f.first == key) return &f.second;
    return nullptr;
  }
};

struct ClosureObj {
  std::vector<std::string> params;
  const Block* body = nullptr;      // function/arrow block body
  const Expr* conciseBody = nullptr;  // arrow concise body
  Env* env = nullptr;
  std::string name;  // function-expression self-reference name, may be empty
};

struct Binding {
  Value value;
  bool isConst = false;
};

struct Env {
  Env* parent = nullptr;
  bool functionScope = false;  // `var` declarations land in the nearest one
  std::unordered_map<std::string, Binding> names;

  Binding* lookup(const std::string& name) {
    for (Env* e = this; e; e = e->parent) {
      auto it = e->names.find(name);
      if (it != e->names.end()) return &it->second;
    }
    return nullptr;
  }

  Env* nearestFunctionScope() {
    Env* e = this;
    while (e->parent && !e->functionScope) e = e->parent;
    return e;
  }
};

// Runtime error inside evaluated code; becomes Threw in the outcome.
// Messages never mention renameable (locally declared) identifiers so that
// renaming passes cannot change observable behavior.
struct ThrowSignal {
  std::string message;
};

struct StepLimitSignal {};

struct ReturnSignal {
  Value value;
};

constexpr int kMaxCallDepth = 200;
constexpr int kSnapshotDepth = 32;

bool numberEqual(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return a == b && std::signbit(a) == std::signbit(b);
}

std::string numberToString(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

class Interpreter {
 public:
  Interpreter(int64_t stepLimit) : stepLimit_(stepLimit) {}

  EvalOutcome run(const Program& program, const std::vector<PlainValue>& entryArgs) {
    EvalOutcome out;
    Env* global = newEnv(nullptr, true);
    const Stmt* entry = nullptr;
    try {
      for (const auto& s : program.stmts) {
        if (!entry && s->kind == StmtKind::FunctionDecl) entry = s.get();
        execStmt(*s, global);
      }
      if (!entry) throw DataError("program has no function declaration entry point");
      Binding* b = global->lookup(entry->name);
      auto closure = std::get<std::shared_ptr<ClosureObj>>(b->value);
      std::vector<Value> args;
      args.reserve(entryArgs.size());
      for (const auto& a : entryArgs) args.push_back(fromPlain(a));
      Value result = callClosure(closure, args);
      out.status = EvalOutcome::Status::Returned;
      out.result = toPlain(result, 0);
    } catch (const ThrowSignal& t) {
      out.status = EvalOutcome::Status::Threw;
      out.message = t.message;
    } catch (const StepLimitSignal&) {
      out.status = EvalOutcome::Status::StepLimitExceeded;
    } catch (const ReturnSignal&) {
      out.status = EvalOutcome::Status::Threw;
      out.message = "return outside function";
    }
    out.log = std::move(log_);
    out.steps = steps_;
    return out;
  }

 private:
  int64_t stepLimit_;
  int64_t steps_ = 0;
  int callDepth_ = 0;
  std::vector<PlainValue> log_;
  std::vector<std::unique_ptr<Env>> envs_;  // owns all environments

  Env* newEnv(Env* parent, bool functionScope) {
    envs_.push_back(std::make_unique<Env>());
    envs_.back()->parent = parent;
    envs_.back()->functionScope = functionScope;
    return envs_.back().get();
  }

  void tick() {
    if (++steps_ > stepLimit_) throw StepLimitSignal{};
  }

  // --- value conversions ---------------------------------------------------

  Value fromPlain(const PlainValue& p) {
    switch (p.kind) {
      case PlainValue::Kind::Undefined: return Undefined{};
      case PlainValue::Kind::Null: return Null{};
      case PlainValue::Kind::Number: return p.num;
      case PlainValue::Kind::Bool: return p.boolean;
      case PlainValue::Kind::String: return p.str;
      case PlainValue::Kind::Array: {
        auto arr = std::make_shared<ArrayObj>();
        for (const auto& it : p.items) arr->items.push_back(fromPlain(it));
        return arr;
      }
      case PlainValue::Kind::Object: {
        auto obj = std::make_shared<ObjectObj>();
        for (const auto& f : p.fields) obj->fields.emplace_back(f.first, fromPlain(f.second));
        return obj;
      }
      default:
        return Undefined{};
    }
  }

  PlainValue toPlain(const Value& v, int depth) {
    PlainValue p;
    if (depth > kSnapshotDepth) {
      p.kind = PlainValue::Kind::Truncated;
      return p;
    }
    if (std::holds_alternative<Undefined>(v)) return p;
    if (std::holds_alternative<Null>(v)) return PlainValue::null();
    if (auto* d = std::get_if<double>(&v)) return PlainValue::number(*d);
    if (auto* b = std::get_if<bool>(&v)) return PlainValue::boolean_(*b);
    if (auto* s = std::get_if<std::string>(&v)) return PlainValue::string(*s);
    if (auto* a = std::get_if<std::shared_ptr<ArrayObj>>(&v)) {
      p.kind = PlainValue::Kind::Array;
      for (const auto& it : (*a)->items) p.items.push_back(toPlain(it, depth + 1));
      return p;
    }
    if (auto* o = std::get_if<std::shared_ptr<ObjectObj>>(&v)) {
      p.kind = PlainValue::Kind::Object;
      for (const auto& f : (*o)->fields) p.fields.emplace_back(f.first, toPlain(f.second, depth + 1));
      return p;
    }
    auto c = std::get<std::shared_ptr<ClosureObj>>(v);
    p.kind = PlainValue::Kind::ClosureTag;
    p.arity = static_cast<int>(c->params.size());
    return p;
  }

  // --- coercions (documented reduced table) --------------------------------

  static bool truthy(const Value& v) {
    if (std::holds_alternative<Undefined>(v) || std::holds_alternative<Null>(v)) return false;
    if (auto* d = std::get_if<double>(&v)) return *d != 0.0 && !std::isnan(*d);
    if (auto* b = std::get_if<bool>(&v)) return *b;
    if (auto* s = std::get_if<std::string>(&v)) return !s->empty();
    return true;
  }

  // Numeric coercion for arithmetic: numbers pass through, booleans become
  // 0/1. Everything else is a runtime error rather than a silent NaN.
  double toNumber(const Value& v, const char* what) {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
    throw ThrowSignal{std::string("unsupported operand for ") + what};
  }

  std::string toStringValue(const Value& v) {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    if (auto* d = std::get_if<double>(&v)) return numberToString(*d);
    if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (std::holds_alternative<Null>(v)) return "null";
    if (std::holds_alternative<Undefined>(v)) return "undefined";
    throw ThrowSignal{"unsupported string coercion"};
  }

  static bool sameReference(const Value& a, const Value& b) {
    if (auto* x = std::get_if<std::shared_ptr<ArrayObj>>(&a))
      if (auto* y = std::get_if<std::shared_ptr<ArrayObj>>(&b)) return *x == *y;
    if (auto* x = std::get_if<std::shared_ptr<ObjectObj>>(&a))
      if (auto* y = std::get_if<std::shared_ptr<ObjectObj>>(&b)) return *x == *y;
    if (auto* x = std::get_if<std::shared_ptr<ClosureObj>>(&a))
      if (auto* y = std::get_if<std::shared_ptr<ClosureObj>>(&b)) return *x == *y;
    return false;
  }

  bool strictEquals(const Value& a, const Value& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<Undefined>(a) || std::holds_alternative<Null>(a)) return true;
    if (auto* x = std::get_if<double>(&a)) {
      double y = std::get<double>(b);
      return *x == y;  // IEEE: NaN !== NaN, -0 === 0
    }
    if (auto* x = std::get_if<bool>(&a)) return *x == std::get<bool>(b);
    if (auto* x = std::get_if<std::string>(&a)) return *x == std::get<std::string>(b);
    return sameReference(a, b);
  }

  // Loose equality over the reduced table: number<->string numeric coercion,
  // bool -> number, null == undefined; references compare by identity.
  bool looseEquals(const Value& a, const Value& b) {
    bool aNullish = std::holds_alternative<Undefined>(a) || std::holds_alternative<Null>(a);
    bool bNullish = std::holds_alternative<Undefined>(b) || std::holds_alternative<Null>(b);
    if (aNullish || bNullish) return aNullish && bNullish;
    if (a.index() == b.index()) return strictEquals(a, b);
    if (auto* x = std::get_if<bool>(&a)) return looseEquals(Value(*x ? 1.0 : 0.0), b);
    if (auto* y = std::get_if<bool>(&b)) return looseEquals(a, Value(*y ? 1.0 : 0.0));
    if (auto* x = std::get_if<double>(&a)) {
      if (auto* s = std::get_if<std::string>(&b)) return *x == stringToNumber(*s);
    }
    if (auto* s = std::get_if<std::string>(&a)) {
      if (auto* y = std::get_if<double>(&b)) return stringToNumber(*s) == *y;
    }
    return false;
  }

  static double stringToNumber(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\n\r");
    if (b == std::string::npos) return 0.0;  // whitespace-only -> 0
    size_t e = s.find_last_not_of(" \t\n\r") + 1;
    std::string t = s.substr(b, e - b);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    bool neg = false;
    if (first != last && (*first == '+' || *first == '-')) {
      neg = *first == '-';
      ++first;
    }
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nan("");
    return neg ? -v : v;
  }

 public:
  // Shared with constant folding so folded results match evaluation exactly.
  Value binaryOp(BinaryOp op, const Value& a, const Value& b) {
    switch (op) {
      case BinaryOp::Add: {
        if (std::holds_alternative<std::string>(a) || std::holds_alternative<std::string>(b))
          return toStringValue(a) + toStringValue(b);
        return toNumber(a, "+") + toNumber(b, "+");
      }
      case BinaryOp::Sub: return toNumber(a, "-") - toNumber(b, "-");
      case BinaryOp::Mul: return toNumber(a, "*") * toNumber(b, "*");
      case BinaryOp::Div: return toNumber(a, "/") / toNumber(b, "/");
      case BinaryOp::Mod: return std::fmod(toNumber(a, "%"), toNumber(b, "%"));
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: {
        if (std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b)) {
          int c = std::get<std::string>(a).compare(std::get<std::string>(b));
          switch (op) {
            case BinaryOp::Lt: return c < 0;
            case BinaryOp::Le: return c <= 0;
            case BinaryOp::Gt: return c > 0;
            default: return c >= 0;
          }
        }
        double x = toNumber(a, "comparison");
        double y = toNumber(b, "comparison");
        switch (op) {
          case BinaryOp::Lt: return x < y;
          case BinaryOp::Le: return x <= y;
          case BinaryOp::Gt: return x > y;
          default: return x >= y;
        }
      }
      case BinaryOp::EqLoose: return looseEquals(a, b);
      case BinaryOp::NeLoose: return !looseEquals(a, b);
      case BinaryOp::EqStrict: return strictEquals(a, b);
      case BinaryOp::NeStrict: return !strictEquals(a, b);
      default:
        throw ThrowSignal{"logical operator is not a value operator"};
    }
  }

  Value unaryOp(UnaryOp op, const Value& v) {
    switch (op) {
      case UnaryOp::Neg: return -toNumber(v, "unary -");
      case UnaryOp::Plus: return toNumber(v, "unary +");
      case UnaryOp::Not: return !truthy(v);
    }
    return Undefined{};
  }

  PlainValue literalBinary(BinaryOp op, const PlainValue& a, const PlainValue& b) {
    return toPlain(binaryOp(op, fromPlain(a), fromPlain(b)), 0);
  }

  PlainValue literalUnary(UnaryOp op, const PlainValue& a) {
    return toPlain(unaryOp(op, fromPlain(a)), 0);
  }

 private:
  // --- execution -----------------------------------------------------------

  void execStmt(const Stmt& s, Env* env) {
    tick();
    switch (s.kind) {
      case StmtKind::FunctionDecl: {
        auto closure = std::make_shared<ClosureObj>();
        closure->params = s.params;
        closure->body = s.body.get();
        closure->env = env;
        closure->name = s.name;
        env->names[s.name] = {Value(closure), false};
        break;
      }
      case StmtKind::VarDecl: {
        for (const auto& d : s.decls) {
          Value init = d.init ? evalExpr(*d.init, env) : Value(Undefined{});
          Env* target = s.declKind == DeclKind::Var ? env->nearestFunctionScope() : env;
          target->names[d.name] = {std::move(init), s.declKind == DeclKind::Const};
        }
        break;
      }
      case StmtKind::If: {
        if (truthy(evalExpr(*s.cond, env))) {
          execBlock(*s.thenBlock, env);
        } else if (s.elseStmt) {
          execStmt(*s.elseStmt, env);
        }
        break;
      }
      case StmtKind::While: {
        while (true) {
          tick();
          if (!truthy(evalExpr(*s.cond, env))) break;
          execBlock(*s.loopBody, env);
        }
        break;
      }
      case StmtKind::For: {
        Env* forEnv = newEnv(env, false);
        if (s.forInit) execStmt(*s.forInit, forEnv);
        while (true) {
          tick();
          if (s.cond && !truthy(evalExpr(*s.cond, forEnv))) break;
          execBlock(*s.loopBody, forEnv);
          if (s.forUpdate) evalExpr(*s.forUpdate, forEnv);
        }
        break;
      }
      case StmtKind::Return: {
        Value v = s.expr ? evalExpr(*s.expr, env) : Value(Undefined{});
        throw ReturnSignal{std::move(v)};
      }
      case StmtKind::ExprStmt:
        evalExpr(*s.expr, env);
        break;
      case StmtKind::Block:
        execBlock(*s.block, env);
        break;
    }
  }

  void execBlock(const Block& b, Env* parent) {
    Env* env = newEnv(parent, false);
    for (const auto& s : b.stmts) execStmt(*s, env);
  }

  Value callClosure(const std::shared_ptr<ClosureObj>& c, std::vector<Value>& args) {
    if (++callDepth_ > kMaxCallDepth) {
      --callDepth_;
      throw ThrowSignal{"call depth limit exceeded"};
    }
    Env* env = newEnv(c->env, true);
    if (!c->name.empty()) env->names[c->name] = {Value(c), false};
    for (size_t i = 0; i < c->params.size(); ++i)
      env->names[c->params[i]] = {i < args.size() ? std::move(args[i]) : Value(Undefined{}), false};
    Value result = Undefined{};
    try {
      if (c->conciseBody) {
        result = evalExpr(*c->conciseBody, env);
      } else {
        for (const auto& s : c->body->stmts) execStmt(*s, env);
      }
    } catch (ReturnSignal& r) {
      result = std::move(r.value);
    }
    --callDepth_;
    return result;
  }

  Value evalExpr(const Expr& e, Env* env) {
    tick();
    switch (e.kind) {
      case ExprKind::NumberLit: return e.num;
      case ExprKind::StringLit: return e.str;
      case ExprKind::BoolLit: return e.boolean;
      case ExprKind::NullLit: return Null{};
      case ExprKind::UndefinedLit: return Undefined{};
      case ExprKind::Identifier: {
        Binding* b = env->lookup(e.name);
        if (!b) throw ThrowSignal{"unbound identifier"};
        return b->value;
      }
      case ExprKind::ArrayLit: {
        auto arr = std::make_shared<ArrayObj>();
        for (const auto& el : e.elements) arr->items.push_back(evalExpr(*el, env));
        return arr;
      }
      case ExprKind::ObjectLit: {
        auto obj = std::make_shared<ObjectObj>();
        for (const auto& f : e.fields) {
          Value v = evalExpr(*f.value, env);
          if (Value* existing = obj->find(f.key))
            *existing = std::move(v);
          else
            obj->fields.emplace_back(f.key, std::move(v));
        }
        return obj;
      }
      case ExprKind::Binary: {
        if (e.binOp == BinaryOp::And) {
          Value left = evalExpr(*e.lhs, env);
          if (!truthy(left)) return left;
          return evalExpr(*e.rhs, env);
        }
        if (e.binOp == BinaryOp::Or) {
          Value left = evalExpr(*e.lhs, env);
          if (truthy(left)) return left;
          return evalExpr(*e.rhs, env);
        }
        Value a = evalExpr(*e.lhs, env);
        Value b = evalExpr(*e.rhs, env);
        return binaryOp(e.binOp, a, b);
      }
      case ExprKind::Unary:
        return unaryOp(e.unOp, evalExpr(*e.lhs, env));
      case ExprKind::Assign:
        return evalAssign(e, env);
      case ExprKind::Member:
        return evalMemberRead(e, env);
      case ExprKind::Call:
        return evalCall(e, env);
      case ExprKind::FunctionExpr: {
        auto c = std::make_shared<ClosureObj>();
        c->params = e.params;
        c->body = e.body.get();
        c->env = env;
        c->name = e.name;
        return c;
      }
      case ExprKind::Arrow: {
        auto c = std::make_shared<ClosureObj>();
        c->params = e.params;
        c->body = e.body.get();
        c->conciseBody = e.arrowExpr.get();
        c->env = env;
        return c;
      }
    }
    return Undefined{};
  }

  Value evalAssign(const Expr& e, Env* env) {
    auto compute = [&](const Value& oldValue) -> Value {
      Value rhs = evalExpr(*e.rhs, env);
      switch (e.assignOp) {
        case AssignOp::Assign: return rhs;
        case AssignOp::AddAssign: return binaryOp(BinaryOp::Add, oldValue, rhs);
        case AssignOp::SubAssign: return binaryOp(BinaryOp::Sub, oldValue, rhs);
        case AssignOp::MulAssign: return binaryOp(BinaryOp::Mul, oldValue, rhs);
        case AssignOp::DivAssign: return binaryOp(BinaryOp::Div, oldValue, rhs);
        case AssignOp::ModAssign: return binaryOp(BinaryOp::Mod, oldValue, rhs);
      }
      return rhs;
    };
    if (e.lhs->kind == ExprKind::Identifier) {
      Binding* b = env->lookup(e.lhs->name);
      if (!b) throw ThrowSignal{"assignment to unbound identifier"};
      if (b->isConst) throw ThrowSignal{"assignment to constant"};
      Value v = compute(b->value);
      b->value = v;
      return v;
    }
    if (e.lhs->kind != ExprKind::Member) throw ThrowSignal{"invalid assignment target"};
    const Expr& m = *e.lhs;
    Value base = evalExpr(*m.lhs, env);
    if (auto* arr = std::get_if<std::shared_ptr<ArrayObj>>(&base)) {
      if (!m.computed) throw ThrowSignal{"cannot assign array property"};
      double idx = toNumber(evalExpr(*m.rhs, env), "index");
      if (!(idx >= 0) || idx != std::floor(idx)) throw ThrowSignal{"invalid array index"};
      size_t i = static_cast<size_t>(idx);
      if (i >= (*arr)->items.size()) (*arr)->items.resize(i + 1, Value(Undefined{}));
      Value v = compute((*arr)->items[i]);
      (*arr)->items[i] = v;
      return v;
    }
    if (auto* obj = std::get_if<std::shared_ptr<ObjectObj>>(&base)) {
      std::string key = m.computed ? toStringValue(evalExpr(*m.rhs, env)) : m.name;
      Value* slot = (*obj)->find(key);
      Value v = compute(slot ? *slot : Value(Undefined{}));
      if (slot)
        *slot = v;
      else
        (*obj)->fields.emplace_back(key, v);
      return v;
    }
    throw ThrowSignal{"cannot assign member of non-object"};
  }

  Value evalMemberRead(const Expr& e, Env* env) {
    Value base = evalExpr(*e.lhs, env);
    if (auto* arr = std::get_if<std::shared_ptr<ArrayObj>>(&base)) {
      if (!e.computed && e.name == "length")
        return static_cast<double>((*arr)->items.size());
      if (e.computed) {
        double idx = toNumber(evalExpr(*e.rhs, env), "index");
        if (idx != std::floor(idx) || idx < 0 || idx >= (*arr)->items.size())
          return Undefined{};
        return (*arr)->items[static_cast<size_t>(idx)];
      }
      throw ThrowSignal{"unsupported array member"};
    }
    if (auto* s = std::get_if<std::string>(&base)) {
      if (!e.computed && e.name == "length") return static_cast<double>(s->size());
      if (e.computed) {
        double idx = toNumber(evalExpr(*e.rhs, env), "index");
        if (idx != std::floor(idx) || idx < 0 || idx >= s->size()) return Undefined{};
        return std::string(1, (*s)[static_cast<size_t>(idx)]);
      }
      throw ThrowSignal{"unsupported string member"};
    }
    if (auto* obj = std::get_if<std::shared_ptr<ObjectObj>>(&base)) {
      std::string key = e.computed ? toStringValue(evalExpr(*e.rhs, env)) : e.name;
      Value* slot = (*obj)->find(key);
      return slot ? *slot : Value(Undefined{});
    }
    throw ThrowSignal{"cannot read member of non-object"};
  }

  // slice with JavaScript clamping semantics, shared by arrays and strings.
  static void sliceRange(double startRaw, double endRaw, size_t len, size_t& begin, size_t& end) {
    auto clamp = [len](double x) -> size_t {
      if (std::isnan(x)) return 0;
      if (x < 0) x += static_cast<double>(len);
      if (x < 0) return 0;
      if (x > static_cast<double>(len)) return len;
      return static_cast<size_t>(x);
    };
    begin = clamp(startRaw);
    end = clamp(endRaw);
    if (end < begin) end = begin;
  }

  Value evalCall(const Expr& e, Env* env) {
    const Expr& callee = *e.lhs;

    // Builtin: log(...) when `log` is not user-declared.
    if (callee.kind == ExprKind::Identifier && callee.name == "log" && !env->lookup("log")) {
      for (const auto& arg : e.elements) log_.push_back(toPlain(evalExpr(*arg, env), 0));
      return Undefined{};
    }

    if (callee.kind == ExprKind::Member && !callee.computed) {
      // Builtin: Math.floor when `Math` is not user-declared.
      if (callee.lhs->kind == ExprKind::Identifier && callee.lhs->name == "Math" &&
          !env->lookup("Math")) {
        if (callee.name == "floor") {
          if (e.elements.size() != 1) throw ThrowSignal{"Math.floor expects one argument"};
          return std::floor(toNumber(evalExpr(*e.elements[0], env), "Math.floor"));
        }
        throw ThrowSignal{"unsupported Math member"};
      }
      Value base = evalExpr(*callee.lhs, env);
      if (auto* arr = std::get_if<std::shared_ptr<ArrayObj>>(&base)) {
        if (callee.name == "push") {
          for (const auto& arg : e.elements) (*arr)->items.push_back(evalExpr(*arg, env));
          return static_cast<double>((*arr)->items.size());
        }
        if (callee.name == "slice") {
          size_t len = (*arr)->items.size();
          double s0 = e.elements.size() > 0 ? toNumber(evalExpr(*e.elements[0], env), "slice") : 0;
          double s1 = e.elements.size() > 1 ? toNumber(evalExpr(*e.elements[1], env), "slice")
                                            : static_cast<double>(len);
          size_t b, f;
          sliceRange(s0, s1, len, b, f);
          auto out = std::make_shared<ArrayObj>();
          out->items.assign((*arr)->items.begin() + b, (*arr)->items.begin() + f);
          return out;
        }
        throw ThrowSignal{"unsupported array method"};
      }
      if (auto* str = std::get_if<std::string>(&base)) {
        if (callee.name == "slice") {
          size_t len = str->size();
          double s0 = e.elements.size() > 0 ? toNumber(evalExpr(*e.elements[0], env), "slice") : 0;
          double s1 = e.elements.size() > 1 ? toNumber(evalExpr(*e.elements[1], env), "slice")
                                            : static_cast<double>(len);
          size_t b, f;
          sliceRange(s0, s1, len, b, f);
          return str->substr(b, f - b);
        }
        throw ThrowSignal{"unsupported string method"};
      }
      // Fall through: closure stored in an object field, etc.
      Value fn = evalMemberOnValue(callee, base, env);
      return invoke(fn, e, env);
    }

    Value fn = evalExpr(callee, env);
    return invoke(fn, e, env);
  }

  Value evalMemberOnValue(const Expr& m, Value& base, Env* env) {
    if (auto* obj = std::get_if<std::shared_ptr<ObjectObj>>(&base)) {
      std::string key = m.computed ? toStringValue(evalExpr(*m.rhs, env)) : m.name;
      Value* slot = (*obj)->find(key);
      return slot ? *slot : Value(Undefined{});
    }
    throw ThrowSignal{"cannot read member of non-object"};
  }

  Value invoke(Value& fn, const Expr& call, Env* env) {
    auto* closure = std::get_if<std::shared_ptr<ClosureObj>>(&fn);
    if (!closure) throw ThrowSignal{"not a function"};
    std::vector<Value> args;
    args.reserve(call.elements.size());
    for (const auto& arg : call.elements) args.push_back(evalExpr(*arg, env));
    return callClosure(*closure, args);
  }
};

}  // namespace

bool plainValueEqual(const PlainValue& a, const PlainValue& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PlainValue::Kind::Undefined:
    case PlainValue::Kind::Null:
    case PlainValue::Kind::Truncated:
      return true;
    case PlainValue::Kind::Number: return numberEqual(a.num, b.num);
    case PlainValue::Kind::Bool: return a.boolean == b.boolean;
    case PlainValue::Kind::String: return a.str == b.str;
    case PlainValue::Kind::Array: {
      if (a.items.size() != b.items.size()) return false;
      for (size_t i = 0; i < a.items.size(); ++i)
        if (!plainValueEqual(a.items[i], b.items[i])) return false;
      return true;
    }
    case PlainValue::Kind::Object: {
      if (a.fields.size() != b.fields.size()) return false;
      for (size_t i = 0; i < a.fields.size(); ++i) {
        if (a.fields[i].first != b.fields[i].first) return false;
        if (!plainValueEqual(a.fields[i].second, b.fields[i].second)) return false;
      }
      return true;
    }
    case PlainValue::Kind::ClosureTag: return a.arity == b.arity;
  }
  return false;
}

std::string plainValueToString(const PlainValue& v) {
  switch (v.kind) {
    case PlainValue::Kind::Undefined: return "undefined";
    case PlainValue::Kind::Null: return "null";
    case PlainValue::Kind::Number: return numberToString(v.num);
    case PlainValue::Kind::Bool: return v.boolean ? "true" : "false";
    case PlainValue::Kind::String: {
      std::string out = "\"";
      out += v.str;
      out += '"';
      return out;
    }
    case PlainValue::Kind::Array: {
      std::string out = "[";
      for (size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ",";
        out += plainValueToString(v.items[i]);
      }
      return out + "]";
    }
    case PlainValue::Kind::Object: {
      std::string out = "{";
      for (size_t i = 0; i < v.fields.size(); ++i) {
        if (i) out += ",";
        out += v.fields[i].first + ":" + plainValueToString(v.fields[i].second);
      }
      return out + "}";
    }
    case PlainValue::Kind::ClosureTag: return "<closure/" + std::to_string(v.arity) + ">";
    case PlainValue::Kind::Truncated: return "<depth-truncated>";
  }
  return "?";
}

bool outcomeEqual(const EvalOutcome& a, const EvalOutcome& b) {
  if (a.status != b.status) return false;
  if (a.status == EvalOutcome::Status::Returned && !plainValueEqual(a.result, b.result))
    return false;
  if (a.status == EvalOutcome::Status::Threw && a.message != b.message) return false;
  if (a.log.size() != b.log.size()) return false;
  for (size_t i = 0; i < a.log.size(); ++i)
    if (!plainValueEqual(a.log[i], b.log[i])) return false;
  return true;
}

std::string outcomeToString(const EvalOutcome& o) {
  std::string s;
  switch (o.status) {
    case EvalOutcome::Status::Returned: s = "returned " + plainValueToString(o.result); break;
    case EvalOutcome::Status::Threw: s = "threw \"" + o.message + "\""; break;
    case EvalOutcome::Status::StepLimitExceeded: s = "step limit exceeded"; break;
  }
  if (!o.log.empty()) {
    s += " log=[";
    for (size_t i = 0; i < o.log.size(); ++i) {
      if (i) s += ",";
      s += plainValueToString(o.log[i]);
    }
    s += "]";
  }
  return s;
}

EvalOutcome evaluate(const Program& program, const std::vector<PlainValue>& entryArgs,
                     int64_t stepLimit) {
  return Interpreter(stepLimit).run(program, entryArgs);
}

int entryArity(const Program& program) {
  for (const auto& s : program.stmts)
    if (s->kind == StmtKind::FunctionDecl) return static_cast<int>(s->params.size());
  throw DataError("program has no function declaration entry point");
}

EquivalenceVerdict checkEquivalence(const Program& p1, const Program& p2,
                                    const std::vector<std::vector<PlainValue>>& inputs,
                                    int64_t stepLimit) {
  EquivalenceVerdict v;
  bool sawBothLimited = false;
  for (size_t i = 0; i < inputs.size(); ++i) {
    EvalOutcome o1 = evaluate(p1, inputs[i], stepLimit);
    EvalOutcome o2 = evaluate(p2, inputs[i], stepLimit);
    bool bothLimited = o1.status == EvalOutcome::Status::StepLimitExceeded &&
                       o2.status == EvalOutcome::Status::StepLimitExceeded;
    if (bothLimited) {
      sawBothLimited = true;
      continue;
    }
    if (!outcomeEqual(o1, o2)) {
      v.kind = EquivalenceVerdict::Kind::Diverged;
      v.divergedInput = i;
      v.outcome1 = std::move(o1);
      v.outcome2 = std::move(o2);
      return v;
    }
  }
  v.kind = sawBothLimited ? EquivalenceVerdict::Kind::Inconclusive
                          : EquivalenceVerdict::Kind::Equivalent;
  return v;
}

namespace {

PlainValue randomScalar(Rng& rng) {
  switch (rng.nextBelow(6)) {
    case 0: return PlainValue::number(rng.nextInt(-10, 10));
    case 1: return PlainValue::number(rng.nextDouble() * 20.0 - 10.0);
    case 2: {
      static const char* words[] = {"a", "b", "ab", "xy", "cat", "dog", "", "zz"};
      return PlainValue::string(words[rng.nextBelow(8)]);
    }
    case 3: return PlainValue::boolean_(rng.bernoulli(0.5));
    case 4: return PlainValue::number(rng.nextInt(0, 5));
    default: return PlainValue::number(rng.nextInt(-3, 3));
  }
}

}  // namespace

bool evalLiteralBinary(BinaryOp op, const PlainValue& a, const PlainValue& b, PlainValue& out) {
  if (op == BinaryOp::And || op == BinaryOp::Or) return false;  // short-circuit forms
  Interpreter interp(1000);
  try {
    out = interp.literalBinary(op, a, b);
    return true;
  } catch (...) {
    return false;
  }
}

bool evalLiteralUnary(UnaryOp op, const PlainValue& a, PlainValue& out) {
  Interpreter interp(1000);
  try {
    out = interp.literalUnary(op, a);
    return true;
  } catch (...) {
    return false;
  }
}

bool plainTruthy(const PlainValue& v) {
  switch (v.kind) {
    case PlainValue::Kind::Undefined:
    case PlainValue::Kind::Null:
      return false;
    case PlainValue::Kind::Number: return v.num != 0.0 && !std::isnan(v.num);
    case PlainValue::Kind::Bool: return v.boolean;
    case PlainValue::Kind::String: return !v.str.empty();
    default: return true;
  }
}

std::vector<std::vector<PlainValue>> randomInputs(int arity, int count, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<PlainValue>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<PlainValue> tuple;
    tuple.reserve(arity);
    for (int a = 0; a < arity; ++a) {
      if (rng.bernoulli(0.25)) {
        int n = rng.nextInt(0, 4);
        std::vector<PlainValue> items;
        items.reserve(n);
        for (int k = 0; k < n; ++k) items.push_back(randomScalar(rng));
        tuple.push_back(PlainValue::array(std::move(items)));
      } else {
        tuple.push_back(randomScalar(rng));
      }
    }
    out.push_back(std::move(tuple));
  }
  return out;
}

}  // namespace equivar
