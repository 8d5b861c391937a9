#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "equivar/augment.hpp"
#include "equivar/generator.hpp"
#include "equivar/interp.hpp"
#include "equivar/parser.hpp"
#include "equivar/token.hpp"

using namespace equivar;

namespace {

// Independent oracle: plain recursive edit distance with memoization.
size_t editOracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<size_t>> memo(a.size() + 1,
                                        std::vector<size_t>(b.size() + 1, SIZE_MAX));
  std::function<size_t(size_t, size_t)> go = [&](size_t i, size_t j) -> size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    if (memo[i][j] != SIZE_MAX) return memo[i][j];
    size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, go(i + 1, j) + 1);
    best = std::min(best, go(i, j + 1) + 1);
    return memo[i][j] = best;
  };
  return go(0, 0);
}

std::string tempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("transform dropout degenerate cases") {
  std::string x = "function f(a){ return a + 1; }";
  AugmentRequest req;
  req.seed = 9;

  SUBCASE("all probabilities zero") {
    req.specs = defaultTransformSpecs();
    for (auto& s : req.specs) s.probability = 0.0;
    req.count = 5;
    VariantSet v = transformDropout(x, req);
    REQUIRE(v.members.size() == 1);
    CHECK(v.members[0] == x);
  }
  SUBCASE("N = 1 never samples") {
    req.specs = defaultTransformSpecs();
    req.count = 1;
    VariantSet v = transformDropout(x, req);
    REQUIRE(v.members.size() == 1);
  }
}

TEST_CASE("transform dropout reaches the compressed mergeSort variant") {
  std::string x = R"(function mergeSort(arr) {
  if (arr.length === 1) {
    return arr;
  }
  const middle = Math.floor(arr.length / 2);
  const left = arr.slice(0, middle);
  const right = arr.slice(middle);
  return merge(mergeSort(left), mergeSort(right));
})";
  AugmentRequest req;
  req.specs = {{TransformId::IM, 1.0}, {TransformId::C, 1.0}};
  req.count = 2;
  req.seed = 5;
  VariantSet v = transformDropout(x, req);
  REQUIRE(v.members.size() == 2);
  CHECK(normalizedLexemes(v.members[1]) ==
        normalizedLexemes("function mergeSort(e){if(1===e.length)return e;"
                          "const t=Math.floor(e.length/2),n=e.slice(0,t),r=e.slice(t);"
                          "return merge(mergeSort(n),mergeSort(r));}"));
}

TEST_CASE("transform dropout is deterministic") {
  std::string x = "function f(a, b){ var t = a * 2; if (t > b) { return t; } return b; }";
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 12;
  req.seed = 77;
  VariantSet v1 = transformDropout(x, req);
  VariantSet v2 = transformDropout(x, req);
  CHECK(v1.members == v2.members);
  CHECK(v1.members.size() <= 12);
}

TEST_CASE("dropout members never share a token stream") {
  auto programs = generatePrograms(15, 31);
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 10;
  for (const auto& p : programs) {
    req.seed = fnv1a64(p.id);
    VariantSet v = transformDropout(p.source, req);
    for (size_t i = 0; i < v.members.size(); ++i)
      for (size_t j = i + 1; j < v.members.size(); ++j)
        CHECK(tokenDissimilarity(v.members[i], v.members[j]) > 0.0);
  }
}

TEST_CASE("dropout variants from preserving passes stay equivalent to the base") {
  auto programs = generatePrograms(12, 555);
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  for (auto& s : req.specs)
    if (s.id == TransformId::LS) s.probability = 0.0;  // isolate the preserving pipeline
  req.count = 8;
  for (const auto& p : programs) {
    req.seed = fnv1a64(p.id) ^ 0x1;
    VariantSet v = transformDropout(p.source, req);
    auto base = parse(p.source);
    auto inputs = randomInputs(entryArity(*base), 8, fnv1a64(p.id));
    for (size_t m = 1; m < v.members.size(); ++m) {
      auto variant = parse(v.members[m]);
      auto verdict = checkEquivalence(*base, *variant, inputs, 200000);
      CHECK(verdict.kind == EquivalenceVerdict::Kind::Equivalent);
    }
  }
}

TEST_CASE("token dissimilarity basics") {
  CHECK(tokenDissimilarity("var x = 1;", "var  x   = 1 ;") == 0.0);   // whitespace collapsed
  CHECK(tokenDissimilarity("var x = 1;", "// note\nvar x = 1;") == 0.0);  // comments dropped
  CHECK(tokenDissimilarity("a b c", "a x c") == doctest::Approx(1.0 / 3.0));
  CHECK(tokenDissimilarity("a b c d", "w x y z") == 1.0);
  CHECK(tokenDissimilarity("", "") == 0.0);
}

TEST_CASE("token edit distance matches a brute-force oracle") {
  Rng rng(2024);
  const std::vector<std::string> alphabet = {"a", "b", "c", "(", ")", "1"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> a, b;
    int la = rng.nextInt(0, 12), lb = rng.nextInt(0, 12);
    for (int i = 0; i < la; ++i) a.push_back(alphabet[rng.nextBelow(alphabet.size())]);
    for (int i = 0; i < lb; ++i) b.push_back(alphabet[rng.nextBelow(alphabet.size())]);
    CHECK(tokenEditDistance(a, b) == editOracle(a, b));
  }
}

TEST_CASE("token dissimilarity is symmetric") {
  auto programs = generatePrograms(10, 8);
  for (size_t i = 0; i < programs.size(); ++i)
    for (size_t j = 0; j < programs.size(); ++j)
      CHECK(tokenDissimilarity(programs[i].source, programs[j].source) ==
            tokenDissimilarity(programs[j].source, programs[i].source));
}

TEST_CASE("augmentCorpus writes deterministic records and stats") {
  std::string in = tempPath("eqv_corpus.jsonl");
  std::string out1 = tempPath("eqv_aug1.jsonl");
  std::string out2 = tempPath("eqv_aug2.jsonl");
  generateSyntheticCorpus(40, 11, in);
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 8;
  req.seed = 3;
  CorpusStats s1 = augmentCorpus(in, out1, req, 1);
  CorpusStats s2 = augmentCorpus(in, out2, req, 4);
  CHECK(readFile(out1) == readFile(out2));  // worker count cannot change bytes
  CHECK(s1.methods == 40);
  CHECK(s1.parseFailures == 0);
  int64_t totalHist = 0;
  for (auto& [size, count] : s1.histogram) totalHist += count;
  CHECK(totalHist == s1.methods);
  CHECK(s1.positives.count > 0);
  CHECK(s1.negatives.count == s1.positives.count);
  std::remove(in.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("augmentCorpus skips malformed records and counts them") {
  std::string in = tempPath("eqv_badcorpus.jsonl");
  writeFile(in, "{\"id\":\"ok\",\"source\":\"function f(){return 1;}\"}\n"
                "{\"id\":\"bad\",\"source\":\"class A{}\"}\n");
  std::string out = tempPath("eqv_badaug.jsonl");
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 3;
  req.seed = 1;
  CorpusStats s = augmentCorpus(in, out, req, 1);
  CHECK(s.methods == 1);
  CHECK(s.parseFailures == 1);
  std::remove(in.c_str());
  std::remove(out.c_str());
}

TEST_CASE("empty corpus produces empty output and histogram") {
  std::string in = tempPath("eqv_empty.jsonl");
  writeFile(in, "");
  std::string out = tempPath("eqv_emptyaug.jsonl");
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 5;
  CorpusStats s = augmentCorpus(in, out, req, 1);
  CHECK(s.methods == 0);
  CHECK(s.histogram.empty());
  CHECK(readFile(out).empty());
  std::remove(in.c_str());
  std::remove(out.c_str());
}

TEST_CASE("one-line constant methods stay unaugmented more often") {
  std::string plainIn = tempPath("eqv_gen.jsonl");
  generateSyntheticCorpus(100, 21, plainIn);

  std::string constIn = tempPath("eqv_const.jsonl");
  {
    std::vector<Json> records;
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      records.push_back(Json{{"id", "c" + std::to_string(i)},
                             {"source", "function f(){ return " +
                                            std::to_string(rng.nextInt(0, 9999)) + "; }"}});
    }
    writeJsonl(constIn, records);
  }
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 20;
  req.seed = 13;
  std::string outA = tempPath("eqv_gen_aug.jsonl");
  std::string outB = tempPath("eqv_const_aug.jsonl");
  CorpusStats general = augmentCorpus(plainIn, outA, req, 1);
  CorpusStats constants = augmentCorpus(constIn, outB, req, 1);
  auto singletonFraction = [](const CorpusStats& s) {
    int64_t ones = s.histogram.count(1) ? s.histogram.at(1) : 0;
    return static_cast<double>(ones) / static_cast<double>(s.methods);
  };
  CHECK(singletonFraction(constants) > singletonFraction(general));
  for (auto* p : {&plainIn, &constIn, &outA, &outB}) std::remove(p->c_str());
}

TEST_CASE("dissimilarity stats flag corpora without positive pairs") {
  std::vector<VariantSet> corpus;
  for (int i = 0; i < 3; ++i) {
    VariantSet vs;
    vs.base = "function f(){ return " + std::to_string(i) + "; }";
    vs.members = {vs.base};
    corpus.push_back(vs);
  }
  CorpusStats stats;
  dissimilarityStats(corpus, 1, stats);
  CHECK(stats.positives.count == 0);
  CHECK(stats.negatives.count == 0);
}
