#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace equivar {

enum class Pooling { Mean, Max };

Pooling poolingFromName(const std::string& name);
std::string poolingName(Pooling p);

struct EncoderDims {
  int vocab = 0;
  int tok = 512;   // token embedding width
  int hidden = 512;
  int out = 128;
};

// Bag-of-subwords reference encoder: embedding lookup, mean/max pooling over
// the sequence, then a two-layer MLP with ReLU producing the out-dim program
// embedding. The contrastive trainer touches it only through encodeProgram /
// encodeBackward, so a sequence-aware encoder can slot in behind the same
// signatures.
struct EncoderParams {
  EncoderDims dims;
  std::vector<double> embedding;  // vocab x tok, row-major
  std::vector<double> w1;         // tok x hidden
  std::vector<double> b1;         // hidden
  std::vector<double> w2;         // hidden x out
  std::vector<double> b2;         // out

  size_t parameterCount() const {
    return embedding.size() + w1.size() + b1.size() + w2.size() + b2.size();
  }
};

// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) entries, deterministic per seed.
EncoderParams initParams(const EncoderDims& dims, uint64_t seed);

// Forward pass. PAD ids are ignored; throws EmptySequence if nothing
// remains. When `normalize` is set the output is L2-normalized.
std::vector<double> encodeProgram(const EncoderParams& params, const std::vector<int>& ids,
                                  Pooling pooling, bool normalize);

struct EncoderGrads {
  std::map<int, std::vector<double>> embedding;  // touched rows only
  std::vector<double> w1, b1, w2, b2;
};

// Exact reverse-mode gradients of encodeProgram (including through the
// normalization when enabled) contracted with `upstream`.
EncoderGrads encodeBackward(const EncoderParams& params, const std::vector<int>& ids,
                            Pooling pooling, bool normalize,
                            const std::vector<double>& upstream);

}  // namespace equivar
