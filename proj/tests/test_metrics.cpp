#include <doctest.h>

#include <cmath>

#include "equivar/error.hpp"
#include "equivar/metrics.hpp"
#include "equivar/rng.hpp"

using namespace equivar;

namespace {

// Brute-force oracle: pairwise concordance with half credit for ties.
double aurocOracle(const std::vector<ScoredPair>& pairs) {
  double concordant = 0.0;
  int64_t comparisons = 0;
  for (const auto& p : pairs) {
    if (!p.label) continue;
    for (const auto& n : pairs) {
      if (n.label) continue;
      ++comparisons;
      if (p.score > n.score) concordant += 1.0;
      else if (p.score == n.score) concordant += 0.5;
    }
  }
  return concordant / static_cast<double>(comparisons);
}

// Exhaustive threshold enumeration for average precision.
double apOracle(std::vector<ScoredPair> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const ScoredPair& a, const ScoredPair& b) { return a.score > b.score; });
  int64_t nPos = 0;
  for (const auto& p : pairs) nPos += p.label;
  double ap = 0.0;
  int64_t tp = 0, seen = 0;
  size_t i = 0;
  while (i < pairs.size()) {
    size_t j = i;
    int64_t gtp = 0;
    while (j < pairs.size() && pairs[j].score == pairs[i].score) {
      gtp += pairs[j].label;
      ++j;
    }
    double r0 = static_cast<double>(tp) / nPos;
    tp += gtp;
    seen += static_cast<int64_t>(j - i);
    double r1 = static_cast<double>(tp) / nPos;
    double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (r1 - r0) * precision;
    i = j;
  }
  return ap;
}

}  // namespace

TEST_CASE("auroc on the spec examples") {
  CHECK(auroc({{0.9, 1}, {0.8, 1}, {0.7, 0}, {0.1, 0}}).auroc == 1.0);
  CHECK(auroc({{0.9, 1}, {0.4, 1}, {0.6, 0}, {0.1, 0}}).auroc == 0.75);
  CHECK(auroc({{0.5, 1}, {0.5, 0}, {0.5, 1}, {0.5, 0}}).auroc == 0.5);
}

TEST_CASE("average precision on the spec examples") {
  CHECK(averagePrecision({{0.9, 1}, {0.8, 1}, {0.7, 0}, {0.1, 0}}) == 1.0);
  CHECK(averagePrecision({{0.9, 1}, {0.7, 0}, {0.5, 1}, {0.3, 0}}) ==
        doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)).epsilon(1e-12));
  // Single positive ranked last of four.
  CHECK(averagePrecision({{0.9, 0}, {0.8, 0}, {0.7, 0}, {0.1, 1}}) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("metrics match brute-force oracles on random score sets") {
  Rng rng(20250809);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.nextInt(2, 100);
    std::vector<ScoredPair> pairs;
    bool anyPos = false, anyNeg = false;
    for (int i = 0; i < n; ++i) {
      // Coarse grid so ties actually occur.
      double score = static_cast<double>(rng.nextInt(0, 10)) / 10.0;
      int label = rng.bernoulli(0.4) ? 1 : 0;
      pairs.push_back({score, label});
      (label ? anyPos : anyNeg) = true;
    }
    if (!anyPos) pairs.push_back({0.3, 1});
    if (!anyNeg) pairs.push_back({0.6, 0});
    AurocResult a = auroc(pairs);
    CHECK(std::fabs(a.auroc - aurocOracle(pairs)) <= 1e-12);
    CHECK(std::fabs(averagePrecision(pairs) - apOracle(pairs)) <= 1e-12);

    // Hanley-McNeil closed form recomputed independently.
    int64_t np = 0, nn = 0;
    for (const auto& p : pairs) (p.label ? np : nn) += 1;
    double A = a.auroc;
    double q1 = A / (2 - A), q2 = 2 * A * A / (1 + A);
    double se = std::sqrt((A * (1 - A) + (np - 1) * (q1 - A * A) + (nn - 1) * (q2 - A * A)) /
                          (static_cast<double>(np) * static_cast<double>(nn)));
    CHECK(std::fabs(a.stdErr - se) <= 1e-12);
  }
}

TEST_CASE("auroc is invariant under monotone score transforms") {
  Rng rng(7);
  std::vector<ScoredPair> pairs;
  for (int i = 0; i < 50; ++i)
    pairs.push_back({rng.nextDouble(), rng.bernoulli(0.5) ? 1 : 0});
  pairs.push_back({0.5, 1});
  pairs.push_back({0.4, 0});
  double base = auroc(pairs).auroc;
  std::vector<ScoredPair> squashed = pairs;
  for (auto& p : squashed) p.score = std::exp(3.0 * p.score) + 7.0;
  CHECK(auroc(squashed).auroc == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("degenerate label sets are rejected") {
  CHECK_THROWS_AS(auroc({{0.5, 1}, {0.4, 1}}), DegenerateLabels);
  CHECK_THROWS_AS(auroc({{0.5, 0}}), DegenerateLabels);
  CHECK_THROWS_AS(averagePrecision({{0.5, 0}, {0.4, 0}}), DegenerateLabels);
}

TEST_CASE("cosine similarity on the spec examples") {
  CHECK(cosineSimilarity({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosineSimilarity({1, 0}, {0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cosineSimilarity({1, 0}, {1, 1}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(cosineSimilarity({0, 0}, {1, 1}), ZeroNorm);
  CHECK_THROWS_AS(cosineSimilarity({1, 0}, {1, 0, 0}), DimensionMismatch);
}
