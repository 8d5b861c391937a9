#include "equivar/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "equivar/error.hpp"

namespace equivar {

AurocResult auroc(const std::vector<ScoredPair>& pairs) {
  size_t nPos = 0, nNeg = 0;
  for (const auto& p : pairs) (p.label ? nPos : nNeg) += 1;
  if (nPos == 0 || nNeg == 0) throw DegenerateLabels("AUROC needs both classes");

  // Midrank formulation of the Mann-Whitney statistic.
  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&pairs](size_t a, size_t b) { return pairs[a].score < pairs[b].score; });
  double posRankSum = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j < order.size() && pairs[order[j]].score == pairs[order[i]].score) ++j;
    double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (size_t k = i; k < j; ++k)
      if (pairs[order[k]].label) posRankSum += midrank;
    i = j;
  }
  double a = (posRankSum - static_cast<double>(nPos) * (static_cast<double>(nPos) + 1.0) / 2.0) /
             (static_cast<double>(nPos) * static_cast<double>(nNeg));

  double q1 = a / (2.0 - a);
  double q2 = 2.0 * a * a / (1.0 + a);
  double np = static_cast<double>(nPos), nn = static_cast<double>(nNeg);
  double var =
      (a * (1.0 - a) + (np - 1.0) * (q1 - a * a) + (nn - 1.0) * (q2 - a * a)) / (np * nn);
  return {a, std::sqrt(std::max(0.0, var))};
}

double averagePrecision(const std::vector<ScoredPair>& pairs) {
  size_t nPos = 0;
  for (const auto& p : pairs) nPos += p.label ? 1 : 0;
  if (nPos == 0) throw DegenerateLabels("AP needs at least one positive");

  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&pairs](size_t a, size_t b) { return pairs[a].score > pairs[b].score; });

  double ap = 0.0;
  size_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    size_t groupTp = 0, groupFp = 0;
    while (j < order.size() && pairs[order[j]].score == pairs[order[i]].score) {
      (pairs[order[j]].label ? groupTp : groupFp) += 1;
      ++j;
    }
    double prevRecall = static_cast<double>(tp) / static_cast<double>(nPos);
    tp += groupTp;
    fp += groupFp;
    double recall = static_cast<double>(tp) / static_cast<double>(nPos);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prevRecall) * precision;
    i = j;
  }
  return ap;
}

double cosineSimilarity(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw DimensionMismatch("cosine operands differ in size");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) throw ZeroNorm();
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace equivar
