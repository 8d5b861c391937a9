#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace equivar {

// Unigram-LM subword vocabulary. Pieces never span word boundaries; the
// word-start marker U+2581 replaces spaces after whitespace normalization.
// Ids 0..3 are reserved (PAD, UNK, BOS, EOS); piece ids follow.
class SubwordVocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kReserved = 4;

  SubwordVocab() = default;
  SubwordVocab(std::vector<std::string> pieces, std::vector<double> logProbs);

  int size() const { return static_cast<int>(pieces_.size()) + kReserved; }
  const std::vector<std::string>& pieces() const { return pieces_; }
  const std::vector<double>& logProbs() const { return logProbs_; }
  int pieceId(const std::string& piece) const;  // -1 when absent
  const std::string& pieceText(int id) const;   // id >= kReserved
  double pieceLogProb(int id) const;
  size_t maxPieceLen() const { return maxPieceLen_; }

  void save(const std::string& path) const;
  static SubwordVocab load(const std::string& path);

 private:
  std::vector<std::string> pieces_;
  std::vector<double> logProbs_;
  std::unordered_map<std::string, int> index_;
  size_t maxPieceLen_ = 0;
};

// Collapse whitespace runs to single spaces and trim; the text every
// encode/decode round trip reproduces.
std::string normalizeText(const std::string& text);

struct VocabTrainConfig {
  int vocabSize = 8000;       // cap including reserved ids
  size_t maxPieceLen = 16;    // bytes
  int emIterations = 2;       // EM steps between prune rounds
  double pruneFraction = 0.2; // share of prunable pieces dropped per round
  size_t seedPieceLimit = 1000000;
};

// Train by EM over the segmentation lattice of word units, pruning the
// lowest-expected-count pieces until the target size is reached. All single
// codepoints seen in training stay in the vocabulary so coverage is total.
// Throws VocabError when vocabSize cannot accommodate the alphabet.
SubwordVocab trainVocab(const std::vector<std::string>& corpus, const VocabTrainConfig& cfg);

struct EncodeOptions {
  bool sample = false;     // false: Viterbi best path
  double alpha = 0.1;      // sampling temperature on piece log-probs
  uint64_t seed = 0;
};

// Lossless segmentation to ids, wrapped in BOS/EOS. Characters outside the
// vocabulary fall back to one UNK per codepoint.
std::vector<int> encode(const std::string& text, const SubwordVocab& vocab,
                        const EncodeOptions& opts = {});

// Inverse of encode on covered text: reserved ids are skipped, UNK decodes
// to U+FFFD. Throws DecodeError on out-of-range ids.
std::string decode(const std::vector<int>& ids, const SubwordVocab& vocab);

}  // namespace equivar
