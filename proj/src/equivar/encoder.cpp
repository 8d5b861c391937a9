#include "equivar/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "equivar/error.hpp"
#include "equivar/rng.hpp"
#include "equivar/tokenizer.hpp"

namespace equivar {

Pooling poolingFromName(const std::string& name) {
  if (name == "mean") return Pooling::Mean;
  if (name == "max") return Pooling::Max;
  throw ConfigError("unknown pooling: " + name);
}

std::string poolingName(Pooling p) { return p == Pooling::Mean ? "mean" : "max"; }

namespace {

void fillUniform(std::vector<double>& v, double bound, Rng& rng) {
  for (double& x : v) x = (rng.nextDouble() * 2.0 - 1.0) * bound;
}

std::vector<int> nonPadIds(const std::vector<int>& ids, int vocab) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (int id : ids) {
    if (id == SubwordVocab::kPad) continue;
    if (id < 0 || id >= vocab)
      throw DimensionMismatch("token id " + std::to_string(id) + " outside vocab " +
                              std::to_string(vocab));
    out.push_back(id);
  }
  if (out.empty()) throw EmptySequence();
  return out;
}

struct Forward {
  std::vector<int> ids;        // PAD-stripped
  std::vector<double> pooled;  // tok
  std::vector<int> argmax;     // Max pooling: winning sequence position per dim
  std::vector<double> h;       // hidden, post-ReLU
  std::vector<double> y;       // out, pre-normalization
  double norm = 0.0;
};

Forward forwardPass(const EncoderParams& p, const std::vector<int>& rawIds, Pooling pooling) {
  const auto& d = p.dims;
  Forward f;
  f.ids = nonPadIds(rawIds, d.vocab);
  const size_t n = f.ids.size();

  f.pooled.assign(d.tok, 0.0);
  if (pooling == Pooling::Mean) {
    for (int id : f.ids) {
      const double* row = &p.embedding[static_cast<size_t>(id) * d.tok];
      for (int k = 0; k < d.tok; ++k) f.pooled[k] += row[k];
    }
    for (int k = 0; k < d.tok; ++k) f.pooled[k] /= static_cast<double>(n);
  } else {
    f.argmax.assign(d.tok, 0);
    for (size_t pos = 0; pos < n; ++pos) {
      const double* row = &p.embedding[static_cast<size_t>(f.ids[pos]) * d.tok];
      for (int k = 0; k < d.tok; ++k) {
        if (pos == 0 || row[k] > f.pooled[k]) {
          f.pooled[k] = row[k];
          f.argmax[k] = static_cast<int>(pos);
        }
      }
    }
  }

  f.h.assign(d.hidden, 0.0);
  for (int j = 0; j < d.hidden; ++j) {
    double acc = p.b1[j];
    for (int k = 0; k < d.tok; ++k) acc += f.pooled[k] * p.w1[static_cast<size_t>(k) * d.hidden + j];
    f.h[j] = acc > 0.0 ? acc : 0.0;
  }
  f.y.assign(d.out, 0.0);
  for (int o = 0; o < d.out; ++o) {
    double acc = p.b2[o];
    for (int j = 0; j < d.hidden; ++j) acc += f.h[j] * p.w2[static_cast<size_t>(j) * d.out + o];
    f.y[o] = acc;
  }
  double sq = 0.0;
  for (double v : f.y) sq += v * v;
  f.norm = std::sqrt(sq);
  return f;
}

}  // namespace

EncoderParams initParams(const EncoderDims& dims, uint64_t seed) {
  if (dims.vocab <= 0 || dims.tok <= 0 || dims.hidden <= 0 || dims.out <= 0)
    throw ConfigError("encoder dimensions must be positive");
  EncoderParams p;
  p.dims = dims;
  p.embedding.resize(static_cast<size_t>(dims.vocab) * dims.tok);
  p.w1.resize(static_cast<size_t>(dims.tok) * dims.hidden);
  p.b1.resize(dims.hidden);
  p.w2.resize(static_cast<size_t>(dims.hidden) * dims.out);
  p.b2.resize(dims.out);
  Rng rng(seed);
  fillUniform(p.embedding, 1.0 / std::sqrt(static_cast<double>(dims.tok)), rng);
  fillUniform(p.w1, 1.0 / std::sqrt(static_cast<double>(dims.tok)), rng);
  fillUniform(p.b1, 1.0 / std::sqrt(static_cast<double>(dims.tok)), rng);
  fillUniform(p.w2, 1.0 / std::sqrt(static_cast<double>(dims.hidden)), rng);
  fillUniform(p.b2, 1.0 / std::sqrt(static_cast<double>(dims.hidden)), rng);
  return p;
}

std::vector<double> encodeProgram(const EncoderParams& params, const std::vector<int>& ids,
                                  Pooling pooling, bool normalize) {
  Forward f = forwardPass(params, ids, pooling);
  if (!normalize) return f.y;
  if (f.norm < 1e-12) throw ZeroNorm();
  std::vector<double> out(f.y.size());
  for (size_t i = 0; i < f.y.size(); ++i) out[i] = f.y[i] / f.norm;
  return out;
}

EncoderGrads encodeBackward(const EncoderParams& params, const std::vector<int>& ids,
                            Pooling pooling, bool normalize,
                            const std::vector<double>& upstream) {
  const auto& d = params.dims;
  if (upstream.size() != static_cast<size_t>(d.out))
    throw DimensionMismatch("upstream gradient size");
  Forward f = forwardPass(params, ids, pooling);

  // dL/dy, through q = y / ||y|| when normalizing:
  // dq/dy = (I - q q^T) / ||y||.
  std::vector<double> dy(d.out);
  if (normalize) {
    if (f.norm < 1e-12) throw ZeroNorm();
    double dot = 0.0;
    std::vector<double> q(d.out);
    for (int o = 0; o < d.out; ++o) {
      q[o] = f.y[o] / f.norm;
      dot += upstream[o] * q[o];
    }
    for (int o = 0; o < d.out; ++o) dy[o] = (upstream[o] - dot * q[o]) / f.norm;
  } else {
    dy = upstream;
  }

  EncoderGrads g;
  g.w1.assign(params.w1.size(), 0.0);
  g.b1.assign(params.b1.size(), 0.0);
  g.w2.assign(params.w2.size(), 0.0);
  g.b2.assign(params.b2.size(), 0.0);

  // Output layer.
  std::vector<double> dh(d.hidden, 0.0);
  for (int o = 0; o < d.out; ++o) g.b2[o] = dy[o];
  for (int j = 0; j < d.hidden; ++j) {
    const double* w2row = &params.w2[static_cast<size_t>(j) * d.out];
    double acc = 0.0;
    for (int o = 0; o < d.out; ++o) {
      g.w2[static_cast<size_t>(j) * d.out + o] = f.h[j] * dy[o];
      acc += w2row[o] * dy[o];
    }
    dh[j] = f.h[j] > 0.0 ? acc : 0.0;  // ReLU gate
  }

  // Hidden layer.
  std::vector<double> dpooled(d.tok, 0.0);
  for (int j = 0; j < d.hidden; ++j) g.b1[j] = dh[j];
  for (int k = 0; k < d.tok; ++k) {
    const double* w1row = &params.w1[static_cast<size_t>(k) * d.hidden];
    double acc = 0.0;
    for (int j = 0; j < d.hidden; ++j) {
      g.w1[static_cast<size_t>(k) * d.hidden + j] = f.pooled[k] * dh[j];
      acc += w1row[j] * dh[j];
    }
    dpooled[k] = acc;
  }

  // Pooling back to the touched embedding rows.
  const size_t n = f.ids.size();
  auto rowGrad = [&g, &d](int id) -> std::vector<double>& {
    auto [it, inserted] = g.embedding.try_emplace(id);
    if (inserted) it->second.assign(d.tok, 0.0);
    return it->second;
  };
  if (pooling == Pooling::Mean) {
    double inv = 1.0 / static_cast<double>(n);
    for (int id : f.ids) {
      auto& row = rowGrad(id);
      for (int k = 0; k < d.tok; ++k) row[k] += dpooled[k] * inv;
    }
  } else {
    for (int k = 0; k < d.tok; ++k) {
      int id = f.ids[static_cast<size_t>(f.argmax[k])];
      rowGrad(id)[k] += dpooled[k];
    }
  }
  return g;
}

}  // namespace equivar
