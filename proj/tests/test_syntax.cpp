#include <doctest.h>

#include "equivar/error.hpp"
#include "equivar/generator.hpp"
#include "equivar/interp.hpp"
#include "equivar/parser.hpp"
#include "equivar/printer.hpp"
#include "equivar/token.hpp"

using namespace equivar;

TEST_CASE("lex basic statement") {
  auto toks = lexCode("var x = 1;");
  REQUIRE(toks.size() == 6);  // 5 tokens + EOF
  CHECK(toks[0].lexeme == "var");
  CHECK(toks[0].kind == TokKind::Keyword);
  CHECK(toks[1].lexeme == "x");
  CHECK(toks[2].lexeme == "=");
  CHECK(toks[3].lexeme == "1");
  CHECK(toks[4].lexeme == ";");
}

TEST_CASE("lex expression tokens") {
  auto lexemes = normalizedLexemes("W*x + b");
  CHECK(lexemes == std::vector<std::string>{"W", "*", "x", "+", "b"});
}

TEST_CASE("lex rejects illegal character with offset") {
  try {
    lex("var @");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.offset == 4);
  }
}

TEST_CASE("lex unterminated string and comment") {
  CHECK_THROWS_AS(lex("var s = \"abc"), LexError);
  CHECK_THROWS_AS(lex("/* never closed"), LexError);
}

TEST_CASE("comments are tokens, excluded from code stream") {
  auto all = lex("var x = 1; // note");
  auto code = lexCode("var x = 1; // note");
  CHECK(all.size() == code.size() + 1);
}

TEST_CASE("parse builds the expected tree for W*x + b") {
  auto prog = parse("W*x + b");
  REQUIRE(prog->stmts.size() == 1);
  REQUIRE(prog->stmts[0]->kind == StmtKind::ExprStmt);
  const Expr& add = *prog->stmts[0]->expr;
  REQUIRE(add.kind == ExprKind::Binary);
  CHECK(add.binOp == BinaryOp::Add);
  REQUIRE(add.lhs->kind == ExprKind::Binary);
  CHECK(add.lhs->binOp == BinaryOp::Mul);
  CHECK(add.lhs->lhs->name == "W");
  CHECK(add.lhs->rhs->name == "x");
  CHECK(add.rhs->name == "b");
}

TEST_CASE("parse minimal function") {
  auto prog = parse("function f(){return 1}");
  REQUIRE(prog->stmts.size() == 1);
  const Stmt& fn = *prog->stmts[0];
  REQUIRE(fn.kind == StmtKind::FunctionDecl);
  CHECK(fn.name == "f");
  CHECK(fn.params.empty());
  REQUIRE(fn.body->stmts.size() == 1);
  CHECK(fn.body->stmts[0]->kind == StmtKind::Return);
  CHECK(fn.body->stmts[0]->expr->num == 1.0);
}

TEST_CASE("unsupported constructs are flagged by name") {
  try {
    parse("class A{}");
    FAIL("expected UnsupportedSyntax");
  } catch (const UnsupportedSyntax& e) {
    CHECK(e.construct == "class");
  }
  CHECK_THROWS_AS(parse("var x = new Foo();"), UnsupportedSyntax);
  CHECK_THROWS_AS(parse("for (var x of xs) { log(x); }"), UnsupportedSyntax);
  CHECK_THROWS_AS(parse("var {a} = b;"), UnsupportedSyntax);
}

TEST_CASE("missing semicolon is a parse error except before a closing brace") {
  CHECK_THROWS_AS(parse("var x = 1 var y = 2;"), ParseError);
  CHECK_NOTHROW(parse("function f(){ return 1 }"));
}

TEST_CASE("compact print of a braced single-statement if") {
  auto ast = parse("if (x) { return 1; }");
  std::string compact = print(*ast, PrintStyle::Compact);
  CHECK(compact == "if(x)return 1;");
  CHECK(astEqual(*parse(compact), *ast));
}

TEST_CASE("printing is deterministic") {
  auto ast = parse("function f(a){ if (a > 1) { return a; } return -a; }");
  for (auto style : {PrintStyle::Beautified, PrintStyle::Reformatted, PrintStyle::Compact})
    CHECK(print(*ast, style) == print(*ast, style));
}

TEST_CASE("dangling else keeps braces in compact output") {
  auto ast = parse("if (a) { if (b) { return 1; } } else { return 2; }");
  std::string compact = print(*ast, PrintStyle::Compact);
  auto re = parse(compact);
  CHECK(astEqual(*re, *ast));
}

TEST_CASE("roundtrip property over generated corpus") {
  auto programs = generatePrograms(1000, 20260809);
  for (const auto& p : programs) {
    auto ast = parse(p.source);
    for (auto style : {PrintStyle::Beautified, PrintStyle::Reformatted, PrintStyle::Compact}) {
      std::string text = print(*ast, style);
      auto re = parse(text);
      bool equal = astEqual(*re, *ast);
      if (!equal) {
        CAPTURE(p.id);
        CAPTURE(text);
      }
      REQUIRE(equal);
    }
    // Comments survive the commented styles exactly.
    auto reB = parse(print(*ast, PrintStyle::Beautified));
    REQUIRE(astEqual(*reB, *ast, /*compareComments=*/true));
  }
}

TEST_CASE("lex idempotence through reformatting") {
  auto programs = generatePrograms(200, 77);
  for (const auto& p : programs) {
    std::string once = print(*parse(p.source), PrintStyle::Reformatted);
    CHECK(normalizedLexemes(once) == normalizedLexemes(p.source));
  }
}

TEST_CASE("all three print styles evaluate identically") {
  auto programs = generatePrograms(60, 4242);
  for (const auto& p : programs) {
    auto base = parse(p.source);
    auto inputs = randomInputs(entryArity(*base), 5, fnv1a64(p.id));
    EvalOutcome ref;
    bool first = true;
    for (auto style : {PrintStyle::Beautified, PrintStyle::Reformatted, PrintStyle::Compact}) {
      auto ast = parse(print(*base, style));
      for (size_t i = 0; i < inputs.size(); ++i) {
        EvalOutcome out = evaluate(*ast, inputs[i], 200000);
        if (first && i == 0) ref = out;
      }
      // Full cross-style check via the equivalence oracle.
      auto verdict = checkEquivalence(*base, *ast, inputs, 200000);
      CHECK(verdict.kind == EquivalenceVerdict::Kind::Equivalent);
      first = false;
    }
  }
}

TEST_CASE("string and number literal raws survive the roundtrip") {
  std::string src = "var s = 'a\\n\\'b';\nvar n = 1.50;\nvar e = 2.5e-3;";
  auto ast = parse(src);
  std::string printed = print(*ast, PrintStyle::Beautified);
  CHECK(printed.find("'a\\n\\'b'") != std::string::npos);
  CHECK(printed.find("1.50") != std::string::npos);
  CHECK(printed.find("2.5e-3") != std::string::npos);
}
