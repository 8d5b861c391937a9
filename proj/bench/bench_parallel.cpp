// Compares the serial reference paths against the OpenMP kernels and checks
// that outputs agree byte-for-byte while doing so.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "equivar/augment.hpp"
#include "equivar/generator.hpp"
#include "equivar/jsonl.hpp"
#include "equivar/tokenizer.hpp"
#include "equivar/train.hpp"

using namespace equivar;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string tempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void benchAugment(int methods, int variants, int jobs) {
  std::string corpus = tempPath("bench_corpus.jsonl");
  generateSyntheticCorpus(methods, 42, corpus);
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = variants;
  req.seed = 7;

  std::string serialOut = tempPath("bench_aug_serial.jsonl");
  auto t0 = std::chrono::steady_clock::now();
  CorpusStats serial = augmentCorpus(corpus, serialOut, req, 1);
  double tSerial = seconds(t0);

  std::string parallelOut = tempPath("bench_aug_parallel.jsonl");
  t0 = std::chrono::steady_clock::now();
  augmentCorpus(corpus, parallelOut, req, jobs);
  double tParallel = seconds(t0);

  bool identical = readFile(serialOut) == readFile(parallelOut);
  std::printf("augment    %5d methods x %2d | serial %7.2f m/s | omp(%d) %7.2f m/s | "
              "speedup %.2fx | identical %s\n",
              methods, variants, methods / tSerial, jobs, methods / tParallel,
              tSerial / tParallel, identical ? "yes" : "NO");
  if (!identical) std::exit(1);
  (void)serial;
  for (auto p : {corpus, serialOut, parallelOut}) std::remove(p.c_str());
}

void benchTrainStep(int steps, int jobs) {
  std::string corpus = tempPath("bench_train_corpus.jsonl");
  generateSyntheticCorpus(64, 11, corpus);
  std::string aug = tempPath("bench_train_aug.jsonl");
  AugmentRequest req;
  req.specs = defaultTransformSpecs();
  req.count = 8;
  req.seed = 3;
  augmentCorpus(corpus, aug, req, 1);
  std::vector<std::string> texts;
  for (const auto& vs : loadAugmentedCorpus(aug))
    for (const auto& m : vs.members) texts.push_back(m);
  VocabTrainConfig vcfg;
  vcfg.vocabSize = 600;
  SubwordVocab vocab = trainVocab(texts, vcfg);

  TrainConfig cfg;
  cfg.dims.vocab = vocab.size();
  cfg.dims.tok = 128;
  cfg.dims.hidden = 128;
  cfg.dims.out = 64;
  cfg.batchSize = 32;
  cfg.queueCapacity = 128;
  cfg.queueRefillPerBatch = 8;
  cfg.steps = steps;

  auto makeBatch = [&](int64_t step) {
    Rng rng(deriveSeed(1, "bench", static_cast<uint64_t>(step)));
    std::vector<TokenPair> batch;
    auto corpusSets = loadAugmentedCorpus(aug);
    for (int i = 0; i < cfg.batchSize; ++i) {
      const auto& m = corpusSets[rng.nextBelow(corpusSets.size())].members;
      EncodeOptions a, b;
      a.sample = b.sample = true;
      a.seed = step * 131 + i;
      b.seed = step * 131 + i + 7;
      batch.emplace_back(encode(m[0], vocab, a), encode(m.back(), vocab, b));
    }
    return batch;
  };

  auto run = [&](int workers) {
    TrainState state = initTrainState(cfg);
    auto t0 = std::chrono::steady_clock::now();
    StepReport report;
    for (int64_t s = 0; s < steps; ++s) report = trainStep(state, makeBatch(s), cfg, workers);
    double dt = seconds(t0);
    return std::make_tuple(dt, state.query.w2, report.loss);
  };

  auto [tSerial, pSerial, lossSerial] = run(1);
  auto [tParallel, pParallel, lossParallel] = run(jobs);
  bool identical = pSerial == pParallel && lossSerial == lossParallel;
  std::printf("trainStep  %5d steps  (B=32)  | serial %7.2f st/s | omp(%d) %7.2f st/s | "
              "speedup %.2fx | identical %s\n",
              steps, steps / tSerial, jobs, steps / tParallel, tSerial / tParallel,
              identical ? "yes" : "NO");
  if (!identical) std::exit(1);
  for (auto p : {corpus, aug}) std::remove(p.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  int jobs = argc > 1 ? std::atoi(argv[1]) : 4;
  std::printf("serial reference vs OpenMP kernels (jobs=%d)\n", jobs);
  benchAugment(400, 10, jobs);
  benchAugment(1000, 20, jobs);
  benchTrainStep(40, jobs);
  return 0;
}
