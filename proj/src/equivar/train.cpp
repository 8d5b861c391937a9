#include "equivar/train.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "equivar/augment.hpp"
#include "equivar/error.hpp"
#include "equivar/jsonl.hpp"
#include "equivar/rng.hpp"
#include "equivar/tokenizer.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes little-endian doubles");

namespace equivar {

InfoNceResult infoNCE(const std::vector<double>& q, const std::vector<double>& kPlus,
                      const std::deque<std::vector<double>>& negatives, double temperature) {
  if (temperature <= 0.0) throw ConfigError("temperature must be positive");
  const size_t d = q.size();
  if (kPlus.size() != d) throw DimensionMismatch("q and k+ sizes differ");
  for (const auto& n : negatives)
    if (n.size() != d) throw DimensionMismatch("negative key size differs from q");

  auto dot = [d](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < d; ++i) acc += a[i] * b[i];
    return acc;
  };

  std::vector<double> logits;
  logits.reserve(1 + negatives.size());
  logits.push_back(dot(q, kPlus) / temperature);
  for (const auto& n : negatives) logits.push_back(dot(q, n) / temperature);

  double hi = *std::max_element(logits.begin(), logits.end());
  double sumExp = 0.0;
  for (double l : logits) sumExp += std::exp(l - hi);
  double logZ = hi + std::log(sumExp);

  InfoNceResult r;
  r.loss = logZ - logits[0];

  // dloss/dlogit_j = softmax_j - [j == 0]
  std::vector<double> p(logits.size());
  for (size_t j = 0; j < logits.size(); ++j) p[j] = std::exp(logits[j] - logZ);

  r.dq.assign(d, 0.0);
  r.dkPlus.assign(d, 0.0);
  double c0 = (p[0] - 1.0) / temperature;
  for (size_t i = 0; i < d; ++i) {
    r.dq[i] += c0 * kPlus[i];
    r.dkPlus[i] = c0 * q[i];
  }
  size_t j = 1;
  for (const auto& n : negatives) {
    double cj = p[j] / temperature;
    for (size_t i = 0; i < d; ++i) r.dq[i] += cj * n[i];
    ++j;
  }
  return r;
}

void emaUpdate(EncoderParams& thetaK, const EncoderParams& thetaQ, double momentum) {
  auto blend = [momentum](std::vector<double>& k, const std::vector<double>& q) {
    if (k.size() != q.size()) throw DimensionMismatch("EMA parameter shapes differ");
    for (size_t i = 0; i < k.size(); ++i) k[i] = momentum * k[i] + (1.0 - momentum) * q[i];
  };
  blend(thetaK.embedding, thetaQ.embedding);
  blend(thetaK.w1, thetaQ.w1);
  blend(thetaK.b1, thetaQ.b1);
  blend(thetaK.w2, thetaQ.w2);
  blend(thetaK.b2, thetaQ.b2);
}

void TrainConfig::validate() const {
  if (temperature <= 0.0) throw ConfigError("temperature must be > 0");
  if (emaMomentum < 0.0 || emaMomentum >= 1.0) throw ConfigError("ema momentum must be in [0,1)");
  if (batchSize < 1) throw ConfigError("batch size must be >= 1");
  if (queueRefillPerBatch < 1 || queueRefillPerBatch > batchSize)
    throw ConfigError("queue refill must be in [1, batch size]");
  if (queueCapacity < batchSize) throw ConfigError("queue capacity must be >= batch size");
  if (steps < 0) throw ConfigError("steps must be >= 0");
}

TrainState initTrainState(const TrainConfig& cfg) {
  cfg.validate();
  TrainState s;
  s.query = initParams(cfg.dims, cfg.seed);
  s.key = s.query;  // theta_k starts equal to theta_q
  s.queue = NegativeQueue(cfg.queueCapacity);
  s.opt.vEmbedding.assign(s.query.embedding.size(), 0.0);
  s.opt.vW1.assign(s.query.w1.size(), 0.0);
  s.opt.vB1.assign(s.query.b1.size(), 0.0);
  s.opt.vW2.assign(s.query.w2.size(), 0.0);
  s.opt.vB2.assign(s.query.b2.size(), 0.0);
  return s;
}

namespace {

void sgdApply(std::vector<double>& theta, std::vector<double>& velocity,
              const std::vector<double>& grad, double momentum, double lr) {
  for (size_t i = 0; i < theta.size(); ++i) {
    velocity[i] = momentum * velocity[i] + grad[i];
    theta[i] -= lr * velocity[i];
  }
}

}  // namespace

StepReport trainStep(TrainState& state, const std::vector<TokenPair>& batch,
                     const TrainConfig& cfg, int jobs) {
  cfg.validate();
  if (batch.empty()) throw ConfigError("empty batch");
  const size_t b = batch.size();
  const auto negatives = state.queue.contents();  // snapshot shared across the batch

  std::vector<std::vector<double>> queries(b), keys(b);
  std::vector<InfoNceResult> nce(b);
  std::vector<EncoderGrads> grads(b);

  auto encodeOne = [&](size_t i) {
    queries[i] =
        encodeProgram(state.query, batch[i].first, cfg.pooling, cfg.normalizeEmbeddings);
    keys[i] = encodeProgram(state.key, batch[i].second, cfg.pooling, cfg.normalizeEmbeddings);
    nce[i] = infoNCE(queries[i], keys[i], negatives, cfg.temperature);
    std::vector<double> upstream(nce[i].dq.size());
    double scale = 1.0 / static_cast<double>(b);
    for (size_t k = 0; k < upstream.size(); ++k) upstream[k] = nce[i].dq[k] * scale;
    grads[i] =
        encodeBackward(state.query, batch[i].first, cfg.pooling, cfg.normalizeEmbeddings, upstream);
  };

#ifdef _OPENMP
  if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(b); ++i) encodeOne(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < b; ++i) encodeOne(i);
  }
#else
  (void)jobs;
  for (size_t i = 0; i < b; ++i) encodeOne(i);
#endif

  // Reduce in fixed batch order so results do not depend on the worker count.
  EncoderGrads total;
  total.w1.assign(state.query.w1.size(), 0.0);
  total.b1.assign(state.query.b1.size(), 0.0);
  total.w2.assign(state.query.w2.size(), 0.0);
  total.b2.assign(state.query.b2.size(), 0.0);
  double lossSum = 0.0;
  int correct = 0;
  for (size_t i = 0; i < b; ++i) {
    lossSum += nce[i].loss;
    for (size_t k = 0; k < total.w1.size(); ++k) total.w1[k] += grads[i].w1[k];
    for (size_t k = 0; k < total.b1.size(); ++k) total.b1[k] += grads[i].b1[k];
    for (size_t k = 0; k < total.w2.size(); ++k) total.w2[k] += grads[i].w2[k];
    for (size_t k = 0; k < total.b2.size(); ++k) total.b2[k] += grads[i].b2[k];
    for (auto& [row, g] : grads[i].embedding) {
      auto [it, inserted] = total.embedding.try_emplace(row);
      if (inserted) it->second.assign(g.size(), 0.0);
      for (size_t k = 0; k < g.size(); ++k) it->second[k] += g[k];
    }
    // Retrieval accuracy against the queue; no distractors counts as a hit.
    double pos = 0.0;
    for (size_t k = 0; k < queries[i].size(); ++k) pos += queries[i][k] * keys[i][k];
    bool hit = true;
    for (const auto& n : negatives) {
      double s = 0.0;
      for (size_t k = 0; k < n.size(); ++k) s += queries[i][k] * n[k];
      if (s >= pos) {
        hit = false;
        break;
      }
    }
    correct += hit ? 1 : 0;
  }

  double lr = cfg.learningRate;
  if (cfg.warmupSteps > 0 && state.step < cfg.warmupSteps)
    lr *= static_cast<double>(state.step + 1) / static_cast<double>(cfg.warmupSteps);

  // Dense blocks.
  sgdApply(state.query.w1, state.opt.vW1, total.w1, cfg.sgdMomentum, lr);
  sgdApply(state.query.b1, state.opt.vB1, total.b1, cfg.sgdMomentum, lr);
  sgdApply(state.query.w2, state.opt.vW2, total.w2, cfg.sgdMomentum, lr);
  sgdApply(state.query.b2, state.opt.vB2, total.b2, cfg.sgdMomentum, lr);
  // Embedding: decay every velocity, add this step's sparse gradients, apply.
  const int tok = state.query.dims.tok;
  for (double& v : state.opt.vEmbedding) v *= cfg.sgdMomentum;
  for (auto& [row, g] : total.embedding) {
    double* v = &state.opt.vEmbedding[static_cast<size_t>(row) * tok];
    for (int k = 0; k < tok; ++k) v[k] += g[k];
  }
  for (size_t i = 0; i < state.query.embedding.size(); ++i)
    state.query.embedding[i] -= lr * state.opt.vEmbedding[i];

  emaUpdate(state.key, state.query, cfg.emaMomentum);

  for (int i = 0; i < cfg.queueRefillPerBatch && i < static_cast<int>(b); ++i)
    state.queue.push(keys[i]);

  state.step += 1;
  StepReport report;
  report.loss = lossSum / static_cast<double>(b);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(b);
  report.queueFill = state.queue.fill();
  return report;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr char kMagic[9] = "EQVRCKP1";

void writeBlock(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void readBlock(std::ifstream& in, std::vector<double>& v, size_t count) {
  v.resize(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
}

Json dimsToJson(const EncoderDims& d) {
  return Json{{"vocab", d.vocab}, {"tok", d.tok}, {"hidden", d.hidden}, {"out", d.out}};
}

EncoderDims dimsFromJson(const Json& j) {
  EncoderDims d;
  d.vocab = j.at("vocab").get<int>();
  d.tok = j.at("tok").get<int>();
  d.hidden = j.at("hidden").get<int>();
  d.out = j.at("out").get<int>();
  return d;
}

Json configToJson(const TrainConfig& c) {
  return Json{{"temperature", c.temperature},
              {"ema_momentum", c.emaMomentum},
              {"batch_size", c.batchSize},
              {"queue_capacity", c.queueCapacity},
              {"queue_refill_per_batch", c.queueRefillPerBatch},
              {"steps", c.steps},
              {"learning_rate", c.learningRate},
              {"sgd_momentum", c.sgdMomentum},
              {"warmup_steps", c.warmupSteps},
              {"checkpoint_interval", c.checkpointInterval},
              {"sw_alpha", c.swAlpha},
              {"pooling", poolingName(c.pooling)},
              {"normalize_embeddings", c.normalizeEmbeddings},
              {"seed", c.seed},
              {"dims", dimsToJson(c.dims)}};
}

TrainConfig configFromJson(const Json& j) {
  TrainConfig c;
  c.temperature = j.at("temperature").get<double>();
  c.emaMomentum = j.at("ema_momentum").get<double>();
  c.batchSize = j.at("batch_size").get<int>();
  c.queueCapacity = j.at("queue_capacity").get<int>();
  c.queueRefillPerBatch = j.at("queue_refill_per_batch").get<int>();
  c.steps = j.at("steps").get<int64_t>();
  c.learningRate = j.at("learning_rate").get<double>();
  c.sgdMomentum = j.at("sgd_momentum").get<double>();
  c.warmupSteps = j.at("warmup_steps").get<int64_t>();
  c.checkpointInterval = j.at("checkpoint_interval").get<int64_t>();
  c.swAlpha = j.at("sw_alpha").get<double>();
  c.pooling = poolingFromName(j.at("pooling").get<std::string>());
  c.normalizeEmbeddings = j.at("normalize_embeddings").get<bool>();
  c.seed = j.at("seed").get<uint64_t>();
  c.dims = dimsFromJson(j.at("dims"));
  return c;
}

void writeParams(std::ofstream& out, const EncoderParams& p) {
  writeBlock(out, p.embedding);
  writeBlock(out, p.w1);
  writeBlock(out, p.b1);
  writeBlock(out, p.w2);
  writeBlock(out, p.b2);
}

void readParams(std::ifstream& in, EncoderParams& p, const EncoderDims& d) {
  p.dims = d;
  readBlock(in, p.embedding, static_cast<size_t>(d.vocab) * d.tok);
  readBlock(in, p.w1, static_cast<size_t>(d.tok) * d.hidden);
  readBlock(in, p.b1, static_cast<size_t>(d.hidden));
  readBlock(in, p.w2, static_cast<size_t>(d.hidden) * d.out);
  readBlock(in, p.b2, static_cast<size_t>(d.out));
}

}  // namespace

void saveCheckpoint(const std::string& path, const TrainState& state, const TrainConfig& cfg) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  Json header{{"schema_version", 1},
              {"step", state.step},
              {"dims", dimsToJson(state.query.dims)},
              {"queue_capacity", state.queue.capacity()},
              {"queue_fill", state.queue.fill()},
              {"config", configToJson(cfg)}};
  std::string headerText = header.dump();
  uint64_t headerLen = headerText.size();
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&headerLen), sizeof(headerLen));
  out.write(headerText.data(), static_cast<std::streamsize>(headerText.size()));
  writeParams(out, state.query);
  writeParams(out, state.key);
  writeBlock(out, state.opt.vEmbedding);
  writeBlock(out, state.opt.vW1);
  writeBlock(out, state.opt.vB1);
  writeBlock(out, state.opt.vW2);
  writeBlock(out, state.opt.vB2);
  for (const auto& entry : state.queue.contents()) writeBlock(out, entry);
  if (!out) throw IoError("write failed: " + path);
}

TrainState loadCheckpoint(const std::string& path, TrainConfig* cfgOut) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw DataError(path + ": not an equivar checkpoint");
  uint64_t headerLen = 0;
  in.read(reinterpret_cast<char*>(&headerLen), sizeof(headerLen));
  std::string headerText(headerLen, '\0');
  in.read(headerText.data(), static_cast<std::streamsize>(headerLen));
  Json header = Json::parse(headerText);
  EncoderDims dims = dimsFromJson(header.at("dims"));

  TrainState s;
  readParams(in, s.query, dims);
  readParams(in, s.key, dims);
  readBlock(in, s.opt.vEmbedding, s.query.embedding.size());
  readBlock(in, s.opt.vW1, s.query.w1.size());
  readBlock(in, s.opt.vB1, s.query.b1.size());
  readBlock(in, s.opt.vW2, s.query.w2.size());
  readBlock(in, s.opt.vB2, s.query.b2.size());
  s.queue = NegativeQueue(header.at("queue_capacity").get<int>());
  int fill = header.at("queue_fill").get<int>();
  for (int i = 0; i < fill; ++i) {
    std::vector<double> entry;
    readBlock(in, entry, static_cast<size_t>(dims.out));
    s.queue.push(std::move(entry));
  }
  s.step = header.at("step").get<int64_t>();
  if (!in) throw DataError(path + ": truncated checkpoint");
  if (cfgOut) *cfgOut = configFromJson(header.at("config"));
  return s;
}

// ---------------------------------------------------------------------------
// Pre-training loop

PretrainResult pretrain(const std::string& corpusPath, const std::string& vocabPath,
                        TrainConfig cfg, const std::string& checkpointDir,
                        const std::string& metricsPath, const std::string& resumeFrom, int jobs) {
  SubwordVocab vocab = SubwordVocab::load(vocabPath);
  cfg.dims.vocab = vocab.size();
  cfg.validate();

  std::vector<VariantSet> corpus = loadAugmentedCorpus(corpusPath);
  if (corpus.empty()) throw DataError("no trainable pairs in " + corpusPath);

  std::filesystem::create_directories(checkpointDir);

  TrainState state;
  if (!resumeFrom.empty()) {
    state = loadCheckpoint(resumeFrom);
    if (state.query.dims.vocab != cfg.dims.vocab)
      throw ConfigError("checkpoint vocab differs from " + vocabPath);
  } else {
    state = initTrainState(cfg);
  }

  std::ofstream metrics(metricsPath,
                        resumeFrom.empty() ? std::ios::trunc : std::ios::app);
  if (!metrics) throw IoError("cannot write " + metricsPath);

  PretrainResult result;
  result.finalCheckpoint = checkpointDir + "/final.ckpt";

  while (state.step < cfg.steps) {
    int64_t step = state.step;
    Rng rng(deriveSeed(cfg.seed, "train-step", static_cast<uint64_t>(step)));

    // Sample methods: without replacement when the corpus is large enough.
    std::vector<size_t> chosen;
    if (corpus.size() >= static_cast<size_t>(cfg.batchSize)) {
      std::vector<size_t> idx(corpus.size());
      for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      for (int i = 0; i < cfg.batchSize; ++i) {
        size_t j = i + rng.nextBelow(idx.size() - i);
        std::swap(idx[i], idx[j]);
        chosen.push_back(idx[i]);
      }
    } else {
      for (int i = 0; i < cfg.batchSize; ++i) chosen.push_back(rng.nextBelow(corpus.size()));
    }

    std::vector<TokenPair> batch;
    batch.reserve(chosen.size());
    for (size_t bi = 0; bi < chosen.size(); ++bi) {
      const auto& members = corpus[chosen[bi]].members;
      size_t a = 0, k = 0;
      if (members.size() >= 2) {
        a = rng.nextBelow(members.size());
        k = rng.nextBelow(members.size() - 1);
        if (k >= a) ++k;
      }
      // Subword sampling gives the pair distinct tokenizations even when the
      // two variants are the same text.
      EncodeOptions qo, ko;
      qo.sample = ko.sample = true;
      qo.alpha = ko.alpha = cfg.swAlpha;
      qo.seed = deriveSeed(cfg.seed, "sw-q", static_cast<uint64_t>(step) * 1000003ULL + bi);
      ko.seed = deriveSeed(cfg.seed, "sw-k", static_cast<uint64_t>(step) * 1000003ULL + bi);
      batch.emplace_back(encode(members[a], vocab, qo), encode(members[k], vocab, ko));
    }

    StepReport report = trainStep(state, batch, cfg, jobs);
    result.lastReport = report;

    Json line{{"step", state.step},
              {"loss", report.loss},
              {"acc", report.accuracy},
              {"queue_fill", report.queueFill}};
    metrics << line.dump() << "\n";

    if (cfg.checkpointInterval > 0 && state.step % cfg.checkpointInterval == 0 &&
        state.step < cfg.steps) {
      saveCheckpoint(checkpointDir + "/ckpt_" + std::to_string(state.step) + ".ckpt", state, cfg);
    }
  }
  metrics.flush();
  if (!metrics) throw IoError("write failed: " + metricsPath);
  saveCheckpoint(result.finalCheckpoint, state, cfg);
  return result;
}

}  // namespace equivar
