#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "equivar/error.hpp"
#include "equivar/generator.hpp"
#include "equivar/interp.hpp"
#include "equivar/jsonl.hpp"
#include "equivar/parser.hpp"
#include "equivar/rng.hpp"

using namespace equivar;

TEST_CASE("generator rejects non-positive counts") {
  CHECK_THROWS_AS(generatePrograms(0, 1), ConfigError);
}

TEST_CASE("generation is deterministic per seed") {
  std::string a = (std::filesystem::temp_directory_path() / "eqv_gen_a.jsonl").string();
  std::string b = (std::filesystem::temp_directory_path() / "eqv_gen_b.jsonl").string();
  generateSyntheticCorpus(50, 9, a);
  generateSyntheticCorpus(50, 9, b);
  CHECK(readFile(a) == readFile(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("500 programs cover at least 20 template families") {
  auto programs = generatePrograms(500, 123);
  std::set<std::string> families;
  for (const auto& p : programs) families.insert(p.family);
  CHECK(families.size() >= 20);
  CHECK(templateFamilyCount() >= 20);
}

TEST_CASE("every generated program parses and runs within limits") {
  auto programs = generatePrograms(120, 321);
  for (const auto& p : programs) {
    auto ast = parse(p.source);
    auto inputs = randomInputs(entryArity(*ast), 4, fnv1a64(p.id));
    for (const auto& tuple : inputs) {
      EvalOutcome out = evaluate(*ast, tuple, 100000);
      CHECK(out.status != EvalOutcome::Status::StepLimitExceeded);
    }
  }
}

TEST_CASE("corpus records match the schema") {
  std::string path = (std::filesystem::temp_directory_path() / "eqv_gen_schema.jsonl").string();
  generateSyntheticCorpus(10, 2, path);
  auto rows = readJsonlAll(path);
  REQUIRE(rows.size() == 10);
  for (const auto& r : rows) {
    CHECK(r.contains("id"));
    CHECK(r.contains("source"));
    CHECK(r.at("id").is_string());
    CHECK(r.at("source").is_string());
  }
  std::remove(path.c_str());
}
