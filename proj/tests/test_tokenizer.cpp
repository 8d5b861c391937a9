#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <cmath>
#include <set>

#include "equivar/error.hpp"
#include "equivar/generator.hpp"
#include "equivar/tokenizer.hpp"

using namespace equivar;

namespace {

std::vector<std::string> deskCorpus(int count = 120) {
  std::vector<std::string> texts;
  for (const auto& p : generatePrograms(count, 404)) texts.push_back(p.source);
  texts.push_back("function apply(fn, x) { return fn(x); }");
  texts.push_back("function functionTable() { return 0; }");
  return texts;
}

}  // namespace

TEST_CASE("normalizeText collapses whitespace") {
  CHECK(normalizeText("a  b\t c\n\nd ") == "a b c d");
  CHECK(normalizeText("   leading") == "leading");
  CHECK(normalizeText("") == "");
}

TEST_CASE("tiny corpus keeps single characters plus a merged piece") {
  VocabTrainConfig cfg;
  cfg.vocabSize = SubwordVocab::kReserved + 3;  // marker, 'a', one multi-char piece
  SubwordVocab vocab = trainVocab({"aaaa"}, cfg);
  bool hasSingle = false, hasMulti = false;
  for (const auto& p : vocab.pieces()) {
    if (p == "a") hasSingle = true;
    if (p.find('a') != std::string::npos && p.size() > 1) hasMulti = true;
  }
  CHECK(hasSingle);
  CHECK(hasMulti);
}

TEST_CASE("vocab size below the alphabet is rejected") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 5;
  CHECK_THROWS_AS(trainVocab(deskCorpus(20), cfg), VocabError);
}

TEST_CASE("encode/decode round trip is exact over the corpus") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 400;
  auto corpus = deskCorpus();
  SubwordVocab vocab = trainVocab(corpus, cfg);
  for (const auto& text : corpus) {
    auto ids = encode(text, vocab);
    CHECK(decode(ids, vocab) == normalizeText(text));
  }
}

TEST_CASE("frequent words segment into few pieces") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 400;
  SubwordVocab vocab = trainVocab(deskCorpus(), cfg);
  auto ids = encode("function", vocab);
  CHECK(ids.size() <= 2 + 3);  // BOS/EOS plus at most three pieces
}

TEST_CASE("empty text encodes to BOS/EOS only") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 200;
  SubwordVocab vocab = trainVocab(deskCorpus(40), cfg);
  auto ids = encode("", vocab);
  REQUIRE(ids.size() == 2);
  CHECK(ids[0] == SubwordVocab::kBos);
  CHECK(ids[1] == SubwordVocab::kEos);
  CHECK(decode(ids, vocab) == "");
}

TEST_CASE("best-mode segmentation is deterministic") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 300;
  SubwordVocab vocab = trainVocab(deskCorpus(50), cfg);
  std::string text = "function total(xs) { return xs.length; }";
  CHECK(encode(text, vocab) == encode(text, vocab));
}

TEST_CASE("sampling produces distinct lossless segmentations") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 400;
  SubwordVocab vocab = trainVocab(deskCorpus(), cfg);
  std::string text = "function accumulate(values) { return values.length + 1; }";
  std::set<std::vector<int>> distinct;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    EncodeOptions opts;
    opts.sample = true;
    opts.seed = seed;
    auto ids = encode(text, vocab, opts);
    CHECK(decode(ids, vocab) == normalizeText(text));
    distinct.insert(ids);
  }
  CHECK(distinct.size() >= 2);
}

TEST_CASE("sampled segmentations have nonzero model probability") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 300;
  SubwordVocab vocab = trainVocab(deskCorpus(60), cfg);
  std::string text = "function grove(x) { return x * 2; }";
  for (uint64_t seed = 0; seed < 20; ++seed) {
    EncodeOptions opts;
    opts.sample = true;
    opts.seed = seed;
    for (int id : encode(text, vocab, opts)) {
      if (id < SubwordVocab::kReserved) continue;
      CHECK(std::isfinite(vocab.pieceLogProb(id)));
    }
  }
}

TEST_CASE("subword sampling separates positive pairs") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 400;
  auto corpus = deskCorpus();
  SubwordVocab vocab = trainVocab(corpus, cfg);
  int differing = 0, total = 0;
  for (size_t i = 0; i < corpus.size() && total < 60; ++i) {
    if (corpus[i].size() < 20) continue;
    EncodeOptions a, b;
    a.sample = b.sample = true;
    a.seed = 2 * i;
    b.seed = 2 * i + 1;
    if (encode(corpus[i], vocab, a) != encode(corpus[i], vocab, b)) ++differing;
    ++total;
  }
  CHECK(static_cast<double>(differing) / total > 0.5);
}

TEST_CASE("decode rejects out-of-range ids") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 200;
  SubwordVocab vocab = trainVocab(deskCorpus(30), cfg);
  CHECK_THROWS_AS(decode({vocab.size()}, vocab), DecodeError);
}

TEST_CASE("unknown characters fall back to UNK per codepoint") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 200;
  SubwordVocab vocab = trainVocab({"abc abc"}, cfg);
  auto ids = encode("aZc", vocab);
  int unks = 0;
  for (int id : ids) unks += id == SubwordVocab::kUnk ? 1 : 0;
  CHECK(unks == 1);
}

TEST_CASE("vocab file round trip preserves behavior") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 300;
  auto corpus = deskCorpus(60);
  SubwordVocab vocab = trainVocab(corpus, cfg);
  std::string path = (std::filesystem::temp_directory_path() / "eqv_vocab.txt").string();
  vocab.save(path);
  SubwordVocab reloaded = SubwordVocab::load(path);
  CHECK(reloaded.size() == vocab.size());
  for (const auto& text : corpus) CHECK(encode(text, reloaded) == encode(text, vocab));
  std::remove(path.c_str());
}

TEST_CASE("training is deterministic for a fixed corpus") {
  VocabTrainConfig cfg;
  cfg.vocabSize = 250;
  auto corpus = deskCorpus(40);
  SubwordVocab a = trainVocab(corpus, cfg);
  SubwordVocab b = trainVocab(corpus, cfg);
  REQUIRE(a.pieces() == b.pieces());
  CHECK(a.logProbs() == b.logProbs());
}
