#include <doctest.h>

#include <cmath>

#include "equivar/encoder.hpp"
#include "equivar/error.hpp"
#include "equivar/rng.hpp"

using namespace equivar;

namespace {

EncoderDims smallDims() {
  EncoderDims d;
  d.vocab = 30;
  d.tok = 12;
  d.hidden = 10;
  d.out = 7;
  return d;
}

double lossOf(const EncoderParams& p, const std::vector<int>& ids, Pooling pooling,
              bool normalize, const std::vector<double>& upstream) {
  auto out = encodeProgram(p, ids, pooling, normalize);
  double acc = 0.0;
  for (size_t i = 0; i < out.size(); ++i) acc += out[i] * upstream[i];
  return acc;
}

// Central finite differences; `slot` must point into `p`.
double numericGrad(EncoderParams& p, double* slot, const std::vector<int>& ids, Pooling pooling,
                   bool normalize, const std::vector<double>& upstream) {
  const double h = 1e-5;
  double saved = *slot;
  *slot = saved + h;
  double up = lossOf(p, ids, pooling, normalize, upstream);
  *slot = saved - h;
  double down = lossOf(p, ids, pooling, normalize, upstream);
  *slot = saved;
  return (up - down) / (2.0 * h);
}

bool relClose(double a, double b, double tol) {
  double denom = std::max({std::fabs(a), std::fabs(b), 1e-8});
  return std::fabs(a - b) / denom <= tol;
}

}  // namespace

TEST_CASE("initParams is deterministic and seed-sensitive") {
  auto d = smallDims();
  EncoderParams a = initParams(d, 7);
  EncoderParams b = initParams(d, 7);
  EncoderParams c = initParams(d, 8);
  CHECK(a.embedding == b.embedding);
  CHECK(a.w1 == b.w1);
  CHECK(a.embedding != c.embedding);
  // Entries respect the fan-in bound.
  double bound = 1.0 / std::sqrt(static_cast<double>(d.tok));
  for (double v : a.embedding) CHECK(std::fabs(v) <= bound);
}

TEST_CASE("default output dimensionality is 128") {
  EncoderDims d;
  CHECK(d.out == 128);
  CHECK(d.tok == 512);
  CHECK(d.hidden == 512);
}

TEST_CASE("single-token mean pooling equals the embedding through the head") {
  auto d = smallDims();
  EncoderParams p = initParams(d, 3);
  auto one = encodeProgram(p, {5}, Pooling::Mean, false);
  // Manual forward for token 5.
  std::vector<double> pooled(p.embedding.begin() + 5 * d.tok,
                             p.embedding.begin() + 6 * d.tok);
  std::vector<double> h(d.hidden);
  for (int j = 0; j < d.hidden; ++j) {
    double acc = p.b1[j];
    for (int k = 0; k < d.tok; ++k) acc += pooled[k] * p.w1[k * d.hidden + j];
    h[j] = acc > 0 ? acc : 0;
  }
  for (int o = 0; o < d.out; ++o) {
    double acc = p.b2[o];
    for (int j = 0; j < d.hidden; ++j) acc += h[j] * p.w2[j * d.out + o];
    CHECK(one[o] == doctest::Approx(acc).epsilon(1e-12));
  }
}

TEST_CASE("mean pooling is order invariant") {
  auto d = smallDims();
  EncoderParams p = initParams(d, 4);
  auto a = encodeProgram(p, {2, 9, 17, 9}, Pooling::Mean, true);
  auto b = encodeProgram(p, {9, 17, 9, 2}, Pooling::Mean, true);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("normalized outputs are unit length") {
  auto d = smallDims();
  EncoderParams p = initParams(d, 5);
  auto q = encodeProgram(p, {1, 2, 3}, Pooling::Max, true);
  double norm = 0.0;
  for (double v : q) norm += v * v;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("PAD-only sequences are rejected") {
  auto d = smallDims();
  EncoderParams p = initParams(d, 6);
  CHECK_THROWS_AS(encodeProgram(p, {0, 0}, Pooling::Mean, true), EmptySequence);
  CHECK_THROWS_AS(encodeProgram(p, {}, Pooling::Mean, true), EmptySequence);
}

TEST_CASE("zero upstream gradient yields zero parameter gradients") {
  auto d = smallDims();
  EncoderParams p = initParams(d, 6);
  std::vector<double> zero(d.out, 0.0);
  EncoderGrads g = encodeBackward(p, {4, 8}, Pooling::Mean, true, zero);
  for (double v : g.w1) CHECK(v == 0.0);
  for (double v : g.w2) CHECK(v == 0.0);
  for (auto& [row, grad] : g.embedding)
    for (double v : grad) CHECK(v == 0.0);
}

TEST_CASE("untouched vocabulary rows receive no gradient") {
  auto d = smallDims();
  EncoderParams p = initParams(d, 6);
  std::vector<double> upstream(d.out, 0.5);
  EncoderGrads g = encodeBackward(p, {4, 8, 4}, Pooling::Mean, false, upstream);
  CHECK(g.embedding.size() == 2);
  CHECK(g.embedding.count(4) == 1);
  CHECK(g.embedding.count(8) == 1);
}

TEST_CASE("analytic gradients match central finite differences") {
  auto d = smallDims();
  for (int instance = 0; instance < 5; ++instance) {
    EncoderParams p = initParams(d, 100 + instance);
    Rng rng(900 + instance);
    std::vector<int> ids;
    for (int i = 0; i < 10; ++i) ids.push_back(1 + static_cast<int>(rng.nextBelow(d.vocab - 1)));
    std::vector<double> upstream(d.out);
    for (double& u : upstream) u = rng.nextDouble() * 2.0 - 1.0;

    for (Pooling pooling : {Pooling::Mean, Pooling::Max}) {
      for (bool normalize : {false, true}) {
        EncoderGrads g = encodeBackward(p, ids, pooling, normalize, upstream);
        // Spot-check a handful of coordinates in every parameter block.
        for (int probe = 0; probe < 6; ++probe) {
          size_t i1 = rng.nextBelow(p.w1.size());
          CHECK(relClose(g.w1[i1],
                         numericGrad(p, &p.w1[i1], ids, pooling, normalize, upstream), 1e-4));
          size_t i2 = rng.nextBelow(p.w2.size());
          CHECK(relClose(g.w2[i2],
                         numericGrad(p, &p.w2[i2], ids, pooling, normalize, upstream), 1e-4));
          size_t ib = rng.nextBelow(p.b1.size());
          CHECK(relClose(g.b1[ib],
                         numericGrad(p, &p.b1[ib], ids, pooling, normalize, upstream), 1e-4));
          size_t ob = rng.nextBelow(p.b2.size());
          CHECK(relClose(g.b2[ob],
                         numericGrad(p, &p.b2[ob], ids, pooling, normalize, upstream), 1e-4));
          int row = ids[rng.nextBelow(ids.size())];
          size_t col = rng.nextBelow(static_cast<size_t>(d.tok));
          double analytic = g.embedding.count(row) ? g.embedding.at(row)[col] : 0.0;
          CHECK(relClose(analytic,
                         numericGrad(p, &p.embedding[static_cast<size_t>(row) * d.tok + col],
                                     ids, pooling, normalize, upstream),
                         1e-4));
        }
      }
    }
  }
}

TEST_CASE("outputs stay finite for finite inputs") {
  auto d = smallDims();
  EncoderParams p = initParams(d, 11);
  auto out = encodeProgram(p, {1, 2, 3, 4, 5, 6, 7, 8, 9}, Pooling::Max, false);
  for (double v : out) CHECK(std::isfinite(v));
}
