#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "equivar/jsonl.hpp"
#include "equivar/transforms.hpp"

namespace equivar {

struct TransformSpec {
  TransformId id;
  double probability;  // in [0, 1]
};

// Default pipeline: analyses before obfuscation, lossy and formatting passes
// last, SW deferred to tokenization.
std::vector<TransformSpec> defaultTransformSpecs();

struct AugmentRequest {
  std::vector<TransformSpec> specs;
  int count = 20;  // N: base plus N-1 sampled variants, pre-dedup
  uint64_t seed = 0;
};

struct VariantSet {
  std::string base;
  std::vector<std::string> members;  // deduplicated; members[0] == base
  int skippedPasses = 0;             // passes skipped due to TransformError
};

// Transform dropout: for each of N-1 samples walk the spec list in order,
// apply pass t when a Bernoulli(p_t) draw fires (converting between source
// and tree form as the pass requires), lower to source, and union into the
// set. Members are deduplicated by compact-print token stream.
VariantSet transformDropout(const std::string& source, const AugmentRequest& req);

// Dedup key: compact print of the parsed program, so formatting-only
// variants collapse. Falls back to the normalized lexeme stream for text
// that no longer parses (possible after LS).
std::string variantDedupKey(const std::string& source);

// Token-level dissimilarity D(a,b)/max(|a|,|b|) over normalized token
// streams (comments stripped, whitespace collapsed). Range [0,1]; 0 iff the
// token streams are identical. Throws LexError.
double tokenDissimilarity(const std::string& a, const std::string& b);

// Levenshtein distance over token lexemes; exposed for the metric tests.
size_t tokenEditDistance(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct DissimilaritySummary {
  double mean = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0;
  size_t count = 0;
};

struct CorpusStats {
  std::map<int, int64_t> histogram;  // |variant set| -> method count
  DissimilaritySummary positives;    // sampled same-base pairs
  DissimilaritySummary negatives;    // sampled cross-base pairs
  double throughputMethodsPerSec = 0.0;
  int64_t methods = 0;
  int64_t parseFailures = 0;
};

// Augment a corpus file ({"id","source"} JSONL) into variant-set records
// ({"id","source","variants":[...]}). Per-record seed is derived from
// (req.seed, id) so output is byte-identical for any worker count.
// `jobs` <= 1 runs the serial reference path.
CorpusStats augmentCorpus(const std::string& inPath, const std::string& outPath,
                          const AugmentRequest& req, int jobs = 1);

// Positive/negative dissimilarity sample over augmented records (as read
// from the augmented JSONL). One positive pair per method with >= 2 members
// and an equal number of negative pairs.
void dissimilarityStats(const std::vector<VariantSet>& corpus, uint64_t sampleSeed,
                        CorpusStats& stats);

std::vector<VariantSet> loadAugmentedCorpus(const std::string& path);

Json corpusStatsToJson(const CorpusStats& stats);

}  // namespace equivar
