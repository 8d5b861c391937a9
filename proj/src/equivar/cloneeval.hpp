#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "equivar/augment.hpp"
#include "equivar/encoder.hpp"
#include "equivar/metrics.hpp"
#include "equivar/tokenizer.hpp"
#include "equivar/train.hpp"

namespace equivar {

struct ClonePair {
  std::string a, b;
  int label = 0;  // 1 = clone
};

enum class ScorerKind { Cosine, EditDistance, RandomInit };

ScorerKind scorerFromName(const std::string& name);
std::string scorerName(ScorerKind s);

// Pair scorer normalized to "higher = more clone-like" for every kind.
using ScoreFn = std::function<double(const std::string&, const std::string&)>;

// Build a scorer. Cosine uses the checkpoint's query encoder; RandomInit
// uses freshly initialized parameters of the same shape; EditDistance is
// 1 - tokenDissimilarity and ignores the encoder entirely.
ScoreFn makeScorer(ScorerKind kind, const EncoderParams* queryParams, const SubwordVocab* vocab,
                   Pooling pooling, uint64_t randomInitSeed = 12345);

struct CloneReport {
  std::string scorer;
  std::string pooling;
  int attackN = 0;  // 0 = natural
  double auroc = 0.0;
  double aurocStdErr = 0.0;
  double averagePrecision = 0.0;
  int64_t pairsUsed = 0;
  int64_t pairsSkipped = 0;
};

Json cloneReportToJson(const CloneReport& r);

// Load {"a","b","label"} JSONL; pairs whose programs do not parse are
// counted and excluded.
std::vector<ClonePair> loadClonePairs(const std::string& path, int64_t& skipped);

// Score every pair and report AUROC (with Wilcoxon standard error) and AP.
// When `scoreDump` is non-null, per-pair scores are appended to it as
// {"index","score","label"} rows.
CloneReport scorePairs(const std::vector<ClonePair>& pairs, const ScoreFn& score,
                       const std::string& scorerLabel, Pooling pooling, int attackN,
                       int64_t alreadySkipped, std::vector<Json>* scoreDump, int jobs = 1);

struct AttackConfig {
  int samples = 4;
  std::vector<TransformId> pool = {TransformId::R,   TransformId::B,  TransformId::C,
                                   TransformId::DCE, TransformId::T,  TransformId::CF,
                                   TransformId::VR,  TransformId::IM};
  uint64_t seed = 0;

  void validate() const;  // pool must stay label-preserving (no LS/DCI/SW)
};

struct AttackOutcome {
  std::string transformedB;
  double worstScore = 0.0;
};

// Draw `samples` candidate variants of pair.b (each pool pass applied with
// probability 0.5, candidates sequential off one seeded stream so candidate
// sets nest across N) and keep the extremal one: minimum score for clone
// pairs, maximum for non-clones. Failed candidates are skipped; if all fail
// the original program is returned.
AttackOutcome adversarialAttack(const ScoreFn& score, const ClonePair& pair,
                                const AttackConfig& atk);

// Attack one side of every clone pair, then rescore everything.
CloneReport adversarialCloneEval(const std::vector<ClonePair>& pairs, const ScoreFn& score,
                                 const std::string& scorerLabel, Pooling pooling,
                                 const AttackConfig& atk, int64_t alreadySkipped,
                                 std::vector<Json>* scoreDump, int jobs = 1);

// One {"id","variant","embedding"} row per corpus member, query encoder,
// deterministic tokenization.
void exportEmbeddings(const EncoderParams& queryParams, const SubwordVocab& vocab,
                      const std::string& corpusPath, Pooling pooling, const std::string& outPath);

// Balanced clone/non-clone pairs from an augmented corpus: clones are two
// distinct members of one method, non-clones are members of different
// methods. Writes {"a","b","label"} JSONL and returns the pair count.
int64_t buildVariantPairs(const std::string& augmentedPath, const std::string& outPath,
                          uint64_t seed, int64_t maxPairsPerClass);

}  // namespace equivar
