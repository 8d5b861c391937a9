#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "equivar/cloneeval.hpp"
#include "equivar/error.hpp"
#include "equivar/generator.hpp"
#include "equivar/interp.hpp"
#include "equivar/parser.hpp"

using namespace equivar;

namespace {

std::string tempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ScoreFn editScorer() { return makeScorer(ScorerKind::EditDistance, nullptr, nullptr, Pooling::Max); }

}  // namespace

TEST_CASE("edit-distance scorer on identical and disjoint programs") {
  ScoreFn score = editScorer();
  std::string a = "function f(x){ return x + 1; }";
  CHECK(score(a, a) == 1.0);
  CHECK(score("a b c", "w x y") == 0.0);
  CHECK(score("a b c", "a x c") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("edit scorer achieves perfect AUROC on exact-copy clones") {
  std::vector<ClonePair> pairs;
  auto programs = generatePrograms(12, 5150);
  for (size_t i = 0; i < programs.size(); ++i) {
    pairs.push_back({programs[i].source, programs[i].source, 1});
    pairs.push_back({programs[i].source, programs[(i + 1) % programs.size()].source, 0});
  }
  CloneReport r = scorePairs(pairs, editScorer(), "editDistance", Pooling::Max, 0, 0, nullptr);
  CHECK(r.auroc == 1.0);
  CHECK(r.pairsUsed == static_cast<int64_t>(pairs.size()));
}

TEST_CASE("pair loading rejects unparseable programs with a count") {
  std::string path = tempPath("eqv_pairs_bad.jsonl");
  writeFile(path,
            "{\"a\":\"function f(){return 1;}\",\"b\":\"function g(){return 1;}\",\"label\":1}\n"
            "{\"a\":\"class A{}\",\"b\":\"function g(){return 1;}\",\"label\":0}\n");
  int64_t skipped = 0;
  auto pairs = loadClonePairs(path, skipped);
  CHECK(pairs.size() == 1);
  CHECK(skipped == 1);
  std::remove(path.c_str());
}

TEST_CASE("attack with an empty pool returns the program unchanged") {
  ClonePair pair{"function f(x){ return x + 1; }", "function f(x){ return x + 1; }", 1};
  AttackConfig atk;
  atk.samples = 1;
  atk.pool.clear();  // no pass can fire: candidate equals the input
  atk.seed = 4;
  ScoreFn score = editScorer();
  AttackOutcome out = adversarialAttack(score, pair, atk);
  CHECK(out.transformedB == pair.b);
  CHECK(out.worstScore == score(pair.a, pair.b));
}

TEST_CASE("attack pool excludes lossy and insertion passes") {
  AttackConfig atk;
  atk.pool.push_back(TransformId::LS);
  CHECK_THROWS_AS(atk.validate(), ConfigError);
  atk.pool.back() = TransformId::DCI;
  CHECK_THROWS_AS(atk.validate(), ConfigError);
  atk.pool.back() = TransformId::SW;
  CHECK_THROWS_AS(atk.validate(), ConfigError);
}

TEST_CASE("attack keeps ground truth: transformed program stays equivalent") {
  auto programs = generatePrograms(15, 8181);
  ScoreFn score = editScorer();
  for (const auto& p : programs) {
    ClonePair pair{p.source, p.source, 1};
    AttackConfig atk;
    atk.samples = 4;
    atk.seed = fnv1a64(p.id);
    AttackOutcome out = adversarialAttack(score, pair, atk);
    auto base = parse(p.source);
    auto attacked = parse(out.transformedB);
    auto verdict =
        checkEquivalence(*base, *attacked, randomInputs(entryArity(*base), 8, atk.seed), 200000);
    CHECK(verdict.kind == EquivalenceVerdict::Kind::Equivalent);
  }
}

TEST_CASE("attack score is monotone in the candidate count") {
  auto programs = generatePrograms(10, 616);
  ScoreFn score = editScorer();
  for (const auto& p : programs) {
    ClonePair pair{p.source, p.source, 1};
    AttackConfig a4;
    a4.samples = 4;
    a4.seed = fnv1a64(p.id);
    AttackConfig a16 = a4;
    a16.samples = 16;
    CHECK(adversarialAttack(score, pair, a16).worstScore <=
          adversarialAttack(score, pair, a4).worstScore);
  }
}

TEST_CASE("attack drives edit similarity of identical clones down") {
  auto programs = generatePrograms(10, 99);
  ScoreFn score = editScorer();
  double naturalSum = 0, attackedSum = 0;
  for (const auto& p : programs) {
    ClonePair pair{p.source, p.source, 1};
    AttackConfig atk;
    atk.samples = 8;
    atk.pool = {TransformId::IM, TransformId::C};
    atk.seed = fnv1a64(p.id);
    naturalSum += score(pair.a, pair.b);
    attackedSum += adversarialAttack(score, pair, atk).worstScore;
  }
  CHECK(attackedSum < naturalSum - 1.0);  // clearly lower on average
}

TEST_CASE("adversarial eval reports the attack strength") {
  std::vector<ClonePair> pairs;
  auto programs = generatePrograms(6, 3131);
  for (size_t i = 0; i < programs.size(); ++i) {
    pairs.push_back({programs[i].source, programs[i].source, 1});
    pairs.push_back({programs[i].source, programs[(i + 1) % programs.size()].source, 0});
  }
  AttackConfig atk;
  atk.samples = 4;
  atk.seed = 10;
  CloneReport r =
      adversarialCloneEval(pairs, editScorer(), "editDistance", Pooling::Max, atk, 0, nullptr);
  CHECK(r.attackN == 4);
  Json j = cloneReportToJson(r);
  CHECK(j.at("attack_n") == 4);
  CHECK(j.at("scorer") == "editDistance");
}

TEST_CASE("cosine and random scorers run against a tiny encoder") {
  std::vector<std::string> texts;
  for (const auto& p : generatePrograms(20, 9)) texts.push_back(p.source);
  VocabTrainConfig vcfg;
  vcfg.vocabSize = 200;
  SubwordVocab vocab = trainVocab(texts, vcfg);
  EncoderDims dims;
  dims.vocab = vocab.size();
  dims.tok = 16;
  dims.hidden = 16;
  dims.out = 8;
  EncoderParams params = initParams(dims, 2);
  ScoreFn cosineFn = makeScorer(ScorerKind::Cosine, &params, &vocab, Pooling::Mean);
  ScoreFn randomFn = makeScorer(ScorerKind::RandomInit, &params, &vocab, Pooling::Mean);
  std::string a = texts[0], b = texts[1];
  CHECK(cosineFn(a, a) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(randomFn(a, a) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cosineFn(a, b) <= 1.0);
  CHECK(cosineFn(a, b) >= -1.0);
}

TEST_CASE("embedding export emits one row per corpus member") {
  std::string corpus = tempPath("eqv_embed_corpus.jsonl");
  writeJsonl(corpus, {Json{{"id", "m0"},
                           {"source", "function f(){ return 1; }"},
                           {"variants", Json::array({"function f(){return 1;}"})},
                          },
                      Json{{"id", "m1"}, {"source", "function g(x){ return x; }"}}});
  std::vector<std::string> texts{"function f(){ return 1; }", "function g(x){ return x; }"};
  VocabTrainConfig vcfg;
  vcfg.vocabSize = 120;
  SubwordVocab vocab = trainVocab(texts, vcfg);
  EncoderDims dims;
  dims.vocab = vocab.size();
  dims.tok = 8;
  dims.hidden = 8;
  dims.out = 4;
  EncoderParams params = initParams(dims, 3);
  std::string out = tempPath("eqv_embed_out.jsonl");
  exportEmbeddings(params, vocab, corpus, Pooling::Mean, out);
  auto rows = readJsonlAll(out);
  REQUIRE(rows.size() == 3);  // 2 members + 1 member
  CHECK(rows[0].at("id") == "m0");
  CHECK(rows[0].at("variant") == 0);
  CHECK(rows[1].at("variant") == 1);
  CHECK(rows[2].at("id") == "m1");
  CHECK(rows[0].at("embedding").size() == 4);
  std::remove(corpus.c_str());
  std::remove(out.c_str());
}

TEST_CASE("variant pair benchmark is balanced") {
  std::string corpus = tempPath("eqv_pairs_corpus.jsonl");
  std::string aug = tempPath("eqv_pairs_aug.jsonl");
  generateSyntheticCorpus(30, 50, corpus);
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 6;
  req.seed = 8;
  augmentCorpus(corpus, aug, req, 1);
  std::string pairsPath = tempPath("eqv_pairs_out.jsonl");
  int64_t n = buildVariantPairs(aug, pairsPath, 4, 50);
  auto rows = readJsonlAll(pairsPath);
  REQUIRE(static_cast<int64_t>(rows.size()) == n);
  int64_t pos = 0;
  for (const auto& r : rows) pos += r.at("label").get<int>();
  CHECK(pos * 2 == n);
  for (auto* p : {&corpus, &aug, &pairsPath}) std::remove(p->c_str());
}
