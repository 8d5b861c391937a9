#include <doctest.h>

#include <cmath>

#include "equivar/interp.hpp"
#include "equivar/parser.hpp"

using namespace equivar;

namespace {

EvalOutcome run(const std::string& src, std::vector<PlainValue> args = {},
                int64_t limit = 100000) {
  auto prog = parse(src);
  return evaluate(*prog, args, limit);
}

}  // namespace

TEST_CASE("constant expression body") {
  auto out = run("function f(){ return (2 + 3) * 4; }");
  REQUIRE(out.status == EvalOutcome::Status::Returned);
  CHECK(out.result.num == 20.0);
}

TEST_CASE("identity function") {
  auto out = run("function f(x){return x}", {PlainValue::number(7)});
  REQUIRE(out.status == EvalOutcome::Status::Returned);
  CHECK(out.result.num == 7.0);
}

TEST_CASE("step limit halts non-termination") {
  auto out = run("function f(){while(true){}}", {}, 10000);
  CHECK(out.status == EvalOutcome::Status::StepLimitExceeded);
}

TEST_CASE("missing arguments bind undefined") {
  auto out = run("function f(a, b){ if (b === undefined) { return 1; } return 2; }",
                 {PlainValue::number(0)});
  CHECK(out.result.num == 1.0);
}

TEST_CASE("log builtin records values in order") {
  auto out = run("function f(){ log(1); log('two', 3); return 0; }");
  REQUIRE(out.log.size() == 3);
  CHECK(out.log[0].num == 1.0);
  CHECK(out.log[1].str == "two");
  CHECK(out.log[2].num == 3.0);
}

TEST_CASE("free identifiers outside the builtin whitelist throw") {
  auto out = run("function f(){ return ghost; }");
  REQUIRE(out.status == EvalOutcome::Status::Threw);
  auto out2 = run("function f(){ return mystery(1); }");
  REQUIRE(out2.status == EvalOutcome::Status::Threw);
}

TEST_CASE("builtins: Math.floor, length, slice, push") {
  auto out = run("function f(xs){ var h = xs.slice(0, Math.floor(xs.length / 2));"
                 " h.push(99); return h; }",
                 {PlainValue::array({PlainValue::number(1), PlainValue::number(2),
                                     PlainValue::number(3), PlainValue::number(4)})});
  REQUIRE(out.status == EvalOutcome::Status::Returned);
  REQUIRE(out.result.items.size() == 3);
  CHECK(out.result.items[0].num == 1.0);
  CHECK(out.result.items[1].num == 2.0);
  CHECK(out.result.items[2].num == 99.0);
}

TEST_CASE("IEEE semantics: NaN inequality and fmod signs") {
  auto out = run("function f(){ var n = 0 / 0; return n === n; }");
  CHECK(out.result.kind == PlainValue::Kind::Bool);
  CHECK(out.result.boolean == false);
  auto m = run("function f(){ return -7 % 3; }");
  CHECK(m.result.num == -1.0);
  auto inf = run("function f(){ return 1 / 0; }");
  CHECK(std::isinf(inf.result.num));
}

TEST_CASE("loose equality coercions") {
  CHECK(run("function f(){ return 1 == '1'; }").result.boolean);
  CHECK(run("function f(){ return true == 1; }").result.boolean);
  CHECK(run("function f(){ return null == undefined; }").result.boolean);
  CHECK_FALSE(run("function f(){ return null == 0; }").result.boolean);
  CHECK_FALSE(run("function f(){ return 1 === '1'; }").result.boolean);
}

TEST_CASE("const reassignment throws") {
  auto out = run("function f(){ const c = 1; c = 2; return c; }");
  CHECK(out.status == EvalOutcome::Status::Threw);
}

TEST_CASE("closures capture environments") {
  auto out = run(
      "function f(){ var make = function(k){ return function(x){ return x + k; }; };"
      " var add3 = make(3); return add3(4); }");
  CHECK(out.result.num == 7.0);
}

TEST_CASE("arrow functions with concise bodies") {
  auto out = run("function f(xs){ var twice = x => x * 2; return twice(xs); }",
                 {PlainValue::number(21)});
  CHECK(out.result.num == 42.0);
}

TEST_CASE("evaluation is deterministic") {
  std::string src = "function f(xs){ var s = 0; for (var i = 0; i < xs.length; i = i + 1)"
                    " { s = s + xs[i]; log(s); } return s; }";
  auto args = std::vector<PlainValue>{
      PlainValue::array({PlainValue::number(3), PlainValue::number(4)})};
  auto a = run(src, args);
  auto b = run(src, args);
  CHECK(outcomeEqual(a, b));
}

TEST_CASE("checkEquivalence reflexivity") {
  auto p = parse("function f(x){ return x * 2; }");
  auto q = parse("function f(x){ return x * 2; }");
  auto verdict = checkEquivalence(*p, *q, randomInputs(1, 10, 5), 100000);
  CHECK(verdict.kind == EquivalenceVerdict::Kind::Equivalent);
}

TEST_CASE("checkEquivalence flags constant mismatch") {
  auto p = parse("function f(){ return 1; }");
  auto q = parse("function f(){ return 2; }");
  auto verdict = checkEquivalence(*p, *q, randomInputs(0, 3, 5), 100000);
  REQUIRE(verdict.kind == EquivalenceVerdict::Kind::Diverged);
  CHECK(verdict.outcome1.result.num == 1.0);
  CHECK(verdict.outcome2.result.num == 2.0);
}

TEST_CASE("checkEquivalence inconclusive when both sides exhaust steps") {
  auto p = parse("function f(){while(true){}}");
  auto q = parse("function f(){while(true){}}");
  auto verdict = checkEquivalence(*p, *q, randomInputs(0, 2, 5), 1000);
  CHECK(verdict.kind == EquivalenceVerdict::Kind::Inconclusive);
}

TEST_CASE("random inputs are seeded and deterministic") {
  auto a = randomInputs(3, 10, 99);
  auto b = randomInputs(3, 10, 99);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == 3);
    for (size_t k = 0; k < 3; ++k) CHECK(plainValueEqual(a[i][k], b[i][k]));
  }
}
