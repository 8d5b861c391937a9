#pragma once

#include <deque>
#include <string>
#include <vector>

#include "equivar/encoder.hpp"

namespace equivar {

// FIFO cache of key embeddings from past batches, used as shared negatives.
class NegativeQueue {
 public:
  NegativeQueue() = default;
  explicit NegativeQueue(int capacity) : capacity_(capacity) {}

  void push(std::vector<double> key) {
    buffer_.push_back(std::move(key));
    if (static_cast<int>(buffer_.size()) > capacity_) buffer_.pop_front();
  }
  int fill() const { return static_cast<int>(buffer_.size()); }
  int capacity() const { return capacity_; }
  const std::deque<std::vector<double>>& contents() const { return buffer_; }

 private:
  int capacity_ = 0;
  std::deque<std::vector<double>> buffer_;
};

struct InfoNceResult {
  double loss = 0.0;
  std::vector<double> dq;      // d loss / d q
  std::vector<double> dkPlus;  // d loss / d k+
};

// InfoNCE over one query: cross-entropy of the (1 + #negatives)-way softmax
// of similarities at temperature t, target = the positive key. Negatives are
// constants (queue entries) and receive no gradient. Numerically stable via
// max subtraction.
InfoNceResult infoNCE(const std::vector<double>& q, const std::vector<double>& kPlus,
                      const std::deque<std::vector<double>>& negatives, double temperature);

// theta_k <- m * theta_k + (1 - m) * theta_q, elementwise.
void emaUpdate(EncoderParams& thetaK, const EncoderParams& thetaQ, double momentum);

struct TrainConfig {
  double temperature = 0.07;
  double emaMomentum = 0.999;
  int batchSize = 32;
  int queueCapacity = 512;
  int queueRefillPerBatch = 8;  // keys enqueued per step
  int64_t steps = 2000;
  double learningRate = 0.05;
  double sgdMomentum = 0.9;
  int64_t warmupSteps = 100;
  int64_t checkpointInterval = 500;
  double swAlpha = 0.1;          // subword-sampling temperature for pair tokenization
  Pooling pooling = Pooling::Mean;
  bool normalizeEmbeddings = true;
  uint64_t seed = 1;
  EncoderDims dims;  // vocab filled from the loaded vocabulary

  void validate() const;  // throws ConfigError
};

struct OptimizerState {
  std::vector<double> vEmbedding, vW1, vB1, vW2, vB2;
};

struct TrainState {
  EncoderParams query;  // trained by SGD
  EncoderParams key;    // trained by EMA of query
  NegativeQueue queue;
  int64_t step = 0;
  OptimizerState opt;
};

TrainState initTrainState(const TrainConfig& cfg);

struct StepReport {
  double loss = 0.0;
  double accuracy = 0.0;  // fraction of batch with q.k+ above every queue negative
  int queueFill = 0;
};

using TokenPair = std::pair<std::vector<int>, std::vector<int>>;  // (query ids, key ids)

// One training step over a batch of positive pairs: encode queries with the
// query encoder and keys with the key encoder (no gradient), average the
// InfoNCE loss against the current queue, SGD-with-momentum update, EMA
// update, then enqueue the first `queueRefillPerBatch` keys.
StepReport trainStep(TrainState& state, const std::vector<TokenPair>& batch,
                     const TrainConfig& cfg, int jobs = 1);

// Checkpoint: binary container with a JSON header (dims, step, config echo)
// followed by raw parameter blocks and the queue snapshot; load(save(s))
// restores state bit-exactly.
void saveCheckpoint(const std::string& path, const TrainState& state, const TrainConfig& cfg);
TrainState loadCheckpoint(const std::string& path, TrainConfig* cfgOut = nullptr);

struct PretrainResult {
  std::string finalCheckpoint;
  StepReport lastReport;
};

// Full pre-training loop over an augmented corpus. Each step samples methods,
// draws two variants per method (subword-sampled tokenizations; same text
// twice when a method has a single member), and runs trainStep. Metrics are
// appended to `metricsPath` as one JSON line per step. Resumable from a
// checkpoint; per-step seeding makes resumption bit-exact.
PretrainResult pretrain(const std::string& corpusPath, const std::string& vocabPath,
                        TrainConfig cfg, const std::string& checkpointDir,
                        const std::string& metricsPath, const std::string& resumeFrom = "",
                        int jobs = 1);

}  // namespace equivar
