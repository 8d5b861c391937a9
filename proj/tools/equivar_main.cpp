// equivar: generate program variants via compiler transforms, pre-train a
// contrastive program encoder, and probe it with zero-shot clone detection.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "equivar/augment.hpp"
#include "equivar/cloneeval.hpp"
#include "equivar/error.hpp"
#include "equivar/generator.hpp"
#include "equivar/jsonl.hpp"
#include "equivar/manifest.hpp"
#include "equivar/train.hpp"

namespace {

using namespace equivar;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

Json loadConfigFile(const std::string& path) {
  if (path.empty()) return Json::object();
  Json cfg = Json::parse(readFile(path), nullptr, false);
  if (cfg.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
  return cfg;
}

// Flag value unless the user left it at its default and the config file has
// an override.
template <typename T>
void applyConfig(const CLI::Option* opt, const Json& cfg, const char* key, T& value) {
  if (opt->count() > 0) return;
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

std::vector<TransformSpec> parseTransformSpecs(const std::string& text) {
  std::vector<TransformSpec> specs;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    std::string item =
        comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    size_t colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("transform spec needs ID:probability: " + item);
    TransformSpec spec;
    spec.id = transformIdFromName(item.substr(0, colon));
    spec.probability = std::stod(item.substr(colon + 1));
    if (spec.probability < 0.0 || spec.probability > 1.0)
      throw ConfigError("transform probability outside [0,1]: " + item);
    specs.push_back(spec);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (specs.empty()) throw ConfigError("empty transform spec list");
  return specs;
}

std::string transformSpecsToText(const std::vector<TransformSpec>& specs) {
  std::string out;
  for (const auto& s : specs) {
    if (!out.empty()) out += ',';
    out += transformIdName(s.id) + ":" + std::to_string(s.probability);
  }
  return out;
}

Json transformSpecsToJson(const std::vector<TransformSpec>& specs) {
  Json arr = Json::array();
  for (const auto& s : specs)
    arr.push_back(Json{{"id", transformIdName(s.id)}, {"p", s.probability}});
  return arr;
}

std::vector<std::string> corpusTexts(const std::string& path) {
  std::vector<std::string> texts;
  for (const auto& vs : loadAugmentedCorpus(path))
    for (const auto& m : vs.members) texts.push_back(m);
  return texts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compiler-transform augmentation and contrastive program encoder toolkit"};
  app.require_subcommand(1);

  std::string configPath;
  app.add_option("--config", configPath, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);

  // --- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a synthetic program corpus");
  int genCount = 0;
  uint64_t genSeed = 1;
  std::string genOut;
  gen->add_option("--count", genCount, "number of programs")->required();
  auto* genSeedOpt = gen->add_option("--seed", genSeed, "generator seed");
  gen->add_option("--out", genOut, "output corpus JSONL")->required();

  // --- augment ---------------------------------------------------------------
  auto* aug = app.add_subcommand("augment", "generate variant sets via transform dropout");
  std::string augIn, augOut, augStats, augTransforms;
  int augN = 20;
  uint64_t augSeed = 1;
  int augJobs = 1;
  aug->add_option("--in", augIn, "input corpus JSONL")->required()->check(CLI::ExistingFile);
  aug->add_option("--out", augOut, "output augmented JSONL")->required();
  auto* augNOpt = aug->add_option("--n", augN, "variants per method (incl. base)");
  auto* augSeedOpt = aug->add_option("--seed", augSeed, "augmentation seed");
  auto* augTOpt = aug->add_option("--transforms", augTransforms,
                                  "comma list ID:prob, e.g. CF:0.5,DCE:0.5");
  aug->add_option("--jobs", augJobs, "worker threads (results independent of this)");
  aug->add_option("--stats", augStats, "also write a stats JSON report here");

  // --- stats -----------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "diversity and dissimilarity report");
  std::string statsIn, statsOut;
  uint64_t statsSeed = 1;
  stats->add_option("--in", statsIn, "augmented JSONL")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", statsOut, "report JSON path (stdout if omitted)");
  stats->add_option("--seed", statsSeed, "pair-sampling seed");

  // --- train-vocab -------------------------------------------------------------
  auto* tv = app.add_subcommand("train-vocab", "train the subword vocabulary");
  std::string tvIn, tvOut;
  int tvSize = 8000;
  tv->add_option("--in", tvIn, "corpus JSONL (plain or augmented)")
      ->required()
      ->check(CLI::ExistingFile);
  tv->add_option("--out", tvOut, "vocabulary file")->required();
  auto* tvSizeOpt = tv->add_option("--vocab-size", tvSize, "vocabulary size cap");

  // --- pretrain ---------------------------------------------------------------
  auto* pre = app.add_subcommand("pretrain", "contrastive pre-training");
  std::string preIn, preVocab, preOut, preMetrics, preResume;
  TrainConfig trainCfg;
  int preJobs = 1;
  pre->add_option("--in", preIn, "augmented JSONL")->required()->check(CLI::ExistingFile);
  pre->add_option("--vocab", preVocab, "vocabulary file")->required()->check(CLI::ExistingFile);
  pre->add_option("--out", preOut, "checkpoint directory")->required();
  pre->add_option("--metrics", preMetrics, "metrics JSONL path")->required();
  pre->add_option("--resume", preResume, "resume from checkpoint")->check(CLI::ExistingFile);
  auto* oSteps = pre->add_option("--steps", trainCfg.steps, "training steps");
  auto* oBatch = pre->add_option("--batch-size", trainCfg.batchSize, "positive pairs per step");
  auto* oQueue = pre->add_option("--queue", trainCfg.queueCapacity, "negative queue capacity");
  auto* oRefill = pre->add_option("--refill", trainCfg.queueRefillPerBatch,
                                  "keys enqueued per step");
  auto* oTemp = pre->add_option("--temperature", trainCfg.temperature, "InfoNCE temperature");
  auto* oEma = pre->add_option("--ema", trainCfg.emaMomentum, "key-encoder EMA momentum");
  auto* oLr = pre->add_option("--lr", trainCfg.learningRate, "SGD learning rate");
  auto* oWarm = pre->add_option("--warmup", trainCfg.warmupSteps, "linear warmup steps");
  auto* oSeed = pre->add_option("--seed", trainCfg.seed, "training seed");
  auto* oAlpha = pre->add_option("--sw-alpha", trainCfg.swAlpha, "subword sampling temperature");
  auto* oCkpt = pre->add_option("--checkpoint-interval", trainCfg.checkpointInterval,
                                "steps between checkpoints");
  auto* oDTok = pre->add_option("--dim-tok", trainCfg.dims.tok, "token embedding width");
  auto* oDHid = pre->add_option("--dim-hidden", trainCfg.dims.hidden, "MLP hidden width");
  auto* oDOut = pre->add_option("--dim-out", trainCfg.dims.out, "program embedding width");
  std::string prePool = "mean";
  auto* oPool = pre->add_option("--pool", prePool, "pooling: mean|max");
  pre->add_option("--jobs", preJobs, "worker threads (results independent of this)");

  // --- eval-clones --------------------------------------------------------------
  auto* ev = app.add_subcommand("eval-clones", "zero-shot / adversarial clone detection");
  std::string evCkpt, evVocab, evPairs, evScorer = "cosine", evPool = "max", evReport, evScores;
  int evAttackN = 0;
  uint64_t evSeed = 1;
  int evJobs = 1;
  ev->add_option("--checkpoint", evCkpt, "trained checkpoint (cosine scorer)")
      ->check(CLI::ExistingFile);
  ev->add_option("--vocab", evVocab, "vocabulary file")->check(CLI::ExistingFile);
  ev->add_option("--pairs", evPairs, "pairs JSONL {a,b,label}")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--scorer", evScorer, "cosine|edit|random");
  ev->add_option("--pool", evPool, "pooling: mean|max");
  ev->add_option("--attack-n", evAttackN, "adversarial samples per clone pair (0 = natural)");
  ev->add_option("--seed", evSeed, "attack seed");
  ev->add_option("--report", evReport, "report JSON path (stdout if omitted)");
  ev->add_option("--scores", evScores, "per-pair score dump JSONL");
  ev->add_option("--jobs", evJobs, "worker threads (results independent of this)");

  // --- embed ---------------------------------------------------------------------
  auto* em = app.add_subcommand("embed", "export program embeddings");
  std::string emCkpt, emVocab, emIn, emOut, emPool = "max";
  em->add_option("--checkpoint", emCkpt, "trained checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  em->add_option("--vocab", emVocab, "vocabulary file")->required()->check(CLI::ExistingFile);
  em->add_option("--in", emIn, "corpus JSONL (plain or augmented)")
      ->required()
      ->check(CLI::ExistingFile);
  em->add_option("--out", emOut, "embedding dump JSONL")->required();
  em->add_option("--pool", emPool, "pooling: mean|max");

  // --- make-pairs -------------------------------------------------------------------
  auto* mp = app.add_subcommand("make-pairs", "build a balanced clone-pair benchmark");
  std::string mpIn, mpOut;
  uint64_t mpSeed = 1;
  int64_t mpMax = 1000;
  mp->add_option("--in", mpIn, "augmented JSONL")->required()->check(CLI::ExistingFile);
  mp->add_option("--out", mpOut, "pairs JSONL")->required();
  mp->add_option("--seed", mpSeed, "pair-sampling seed");
  mp->add_option("--max", mpMax, "max pairs per class");

  try {
    app.parse(argc, argv);

    Json cfgFile = loadConfigFile(configPath);
    Timer timer;

    if (*gen) {
      applyConfig(genSeedOpt, cfgFile, "seed", genSeed);
      if (genCount < 1) throw ConfigError("--count must be >= 1");
      generateSyntheticCorpus(genCount, genSeed, genOut);
      writeManifest(genOut, "gen",
                    Json{{"count", genCount}, {"seed", genSeed}}, genSeed, {}, {genOut},
                    timer.seconds());
      std::cout << genOut << "\n";
      return 0;
    }

    if (*aug) {
      applyConfig(augSeedOpt, cfgFile, "seed", augSeed);
      applyConfig(augNOpt, cfgFile, "augment_n", augN);
      std::string cfgTransforms;
      if (cfgFile.contains("transforms") && augTOpt->count() == 0)
        cfgTransforms = cfgFile.at("transforms").get<std::string>();
      AugmentRequest req;
      req.count = augN;
      req.seed = augSeed;
      req.specs = augTransforms.empty()
                      ? (cfgTransforms.empty() ? defaultTransformSpecs()
                                               : parseTransformSpecs(cfgTransforms))
                      : parseTransformSpecs(augTransforms);
      if (req.count < 1) throw ConfigError("--n must be >= 1");
      CorpusStats cs = augmentCorpus(augIn, augOut, req, augJobs);
      Json echo{{"n", req.count},
                {"seed", req.seed},
                {"jobs", augJobs},
                {"transforms", transformSpecsToJson(req.specs)}};
      writeManifest(augOut, "augment", echo, augSeed, {augIn}, {augOut}, timer.seconds());
      Json report = corpusStatsToJson(cs);
      if (!augStats.empty()) writeFile(augStats, report.dump(2) + "\n");
      std::cout << report.dump(2) << "\n";
      return 0;
    }

    if (*stats) {
      auto corpus = loadAugmentedCorpus(statsIn);
      CorpusStats cs;
      Timer statsTimer;
      for (const auto& vs : corpus) {
        cs.histogram[static_cast<int>(vs.members.size())] += 1;
        ++cs.methods;
      }
      dissimilarityStats(corpus, statsSeed, cs);
      cs.throughputMethodsPerSec =
          statsTimer.seconds() > 0
              ? static_cast<double>(corpus.size()) / statsTimer.seconds()
              : 0.0;
      Json report = corpusStatsToJson(cs);
      if (!statsOut.empty()) {
        writeFile(statsOut, report.dump(2) + "\n");
        writeManifest(statsOut, "stats", Json{{"seed", statsSeed}}, statsSeed, {statsIn},
                      {statsOut}, timer.seconds());
      }
      std::cout << report.dump(2) << "\n";
      return 0;
    }

    if (*tv) {
      applyConfig(tvSizeOpt, cfgFile, "vocab_size", tvSize);
      VocabTrainConfig vcfg;
      vcfg.vocabSize = tvSize;
      SubwordVocab vocab = trainVocab(corpusTexts(tvIn), vcfg);
      vocab.save(tvOut);
      writeManifest(tvOut, "train-vocab", Json{{"vocab_size", tvSize}}, 0, {tvIn}, {tvOut},
                    timer.seconds());
      std::cout << tvOut << " (size " << vocab.size() << ")\n";
      return 0;
    }

    if (*pre) {
      applyConfig(oSteps, cfgFile, "steps", trainCfg.steps);
      applyConfig(oBatch, cfgFile, "batch_size", trainCfg.batchSize);
      applyConfig(oQueue, cfgFile, "queue_capacity", trainCfg.queueCapacity);
      applyConfig(oRefill, cfgFile, "queue_refill", trainCfg.queueRefillPerBatch);
      applyConfig(oTemp, cfgFile, "temperature", trainCfg.temperature);
      applyConfig(oEma, cfgFile, "ema_momentum", trainCfg.emaMomentum);
      applyConfig(oLr, cfgFile, "learning_rate", trainCfg.learningRate);
      applyConfig(oWarm, cfgFile, "warmup_steps", trainCfg.warmupSteps);
      applyConfig(oSeed, cfgFile, "seed", trainCfg.seed);
      applyConfig(oAlpha, cfgFile, "sw_alpha", trainCfg.swAlpha);
      applyConfig(oCkpt, cfgFile, "checkpoint_interval", trainCfg.checkpointInterval);
      applyConfig(oDTok, cfgFile, "dim_tok", trainCfg.dims.tok);
      applyConfig(oDHid, cfgFile, "dim_hidden", trainCfg.dims.hidden);
      applyConfig(oDOut, cfgFile, "dim_out", trainCfg.dims.out);
      applyConfig(oPool, cfgFile, "pooling", prePool);
      trainCfg.pooling = poolingFromName(prePool);
      PretrainResult result =
          pretrain(preIn, preVocab, trainCfg, preOut, preMetrics, preResume, preJobs);
      Json echo{{"steps", trainCfg.steps},
                {"batch_size", trainCfg.batchSize},
                {"queue", trainCfg.queueCapacity},
                {"refill", trainCfg.queueRefillPerBatch},
                {"seed", trainCfg.seed},
                {"pooling", prePool}};
      writeManifest(result.finalCheckpoint, "pretrain", echo, trainCfg.seed, {preIn, preVocab},
                    {result.finalCheckpoint, preMetrics}, timer.seconds());
      std::cout << result.finalCheckpoint << " loss=" << result.lastReport.loss
                << " acc=" << result.lastReport.accuracy << "\n";
      return 0;
    }

    if (*ev) {
      ScorerKind kind = scorerFromName(evScorer);
      Pooling pooling = poolingFromName(evPool);
      SubwordVocab vocab;
      EncoderParams queryParams;
      const EncoderParams* paramsPtr = nullptr;
      const SubwordVocab* vocabPtr = nullptr;
      if (kind != ScorerKind::EditDistance) {
        if (evVocab.empty()) throw ConfigError("--vocab required for " + evScorer);
        vocab = SubwordVocab::load(evVocab);
        vocabPtr = &vocab;
        if (kind == ScorerKind::Cosine) {
          if (evCkpt.empty()) throw ConfigError("--checkpoint required for cosine scorer");
          TrainState state = loadCheckpoint(evCkpt);
          queryParams = std::move(state.query);
          paramsPtr = &queryParams;
        } else {
          EncoderDims dims;
          dims.vocab = vocab.size();
          queryParams = initParams(dims, 12345);
          paramsPtr = &queryParams;
        }
      }
      ScoreFn score = makeScorer(kind, paramsPtr, vocabPtr, pooling);
      int64_t skipped = 0;
      auto pairs = loadClonePairs(evPairs, skipped);
      std::vector<Json> dump;
      std::vector<Json>* dumpPtr = evScores.empty() ? nullptr : &dump;
      CloneReport report;
      if (evAttackN > 0) {
        AttackConfig atk;
        atk.samples = evAttackN;
        atk.seed = evSeed;
        report = adversarialCloneEval(pairs, score, scorerName(kind), pooling, atk, skipped,
                                      dumpPtr, evJobs);
      } else {
        report = scorePairs(pairs, score, scorerName(kind), pooling, 0, skipped, dumpPtr, evJobs);
      }
      Json rj = cloneReportToJson(report);
      if (!evScores.empty()) writeJsonl(evScores, dump);
      if (!evReport.empty()) {
        writeFile(evReport, rj.dump(2) + "\n");
        std::vector<std::string> inputs{evPairs};
        if (!evCkpt.empty()) inputs.push_back(evCkpt);
        writeManifest(evReport, "eval-clones",
                      Json{{"scorer", evScorer},
                           {"pool", evPool},
                           {"attack_n", evAttackN},
                           {"seed", evSeed}},
                      evSeed, inputs, {evReport}, timer.seconds());
      }
      std::cout << rj.dump(2) << "\n";
      return 0;
    }

    if (*em) {
      TrainState state = loadCheckpoint(emCkpt);
      SubwordVocab vocab = SubwordVocab::load(emVocab);
      exportEmbeddings(state.query, vocab, emIn, poolingFromName(emPool), emOut);
      writeManifest(emOut, "embed", Json{{"pool", emPool}}, 0, {emCkpt, emVocab, emIn}, {emOut},
                    timer.seconds());
      std::cout << emOut << "\n";
      return 0;
    }

    if (*mp) {
      int64_t n = buildVariantPairs(mpIn, mpOut, mpSeed, mpMax);
      writeManifest(mpOut, "make-pairs", Json{{"seed", mpSeed}, {"max", mpMax}}, mpSeed, {mpIn},
                    {mpOut}, timer.seconds());
      std::cout << mpOut << " (" << n << " pairs)\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors -> 2, --help -> 0
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
