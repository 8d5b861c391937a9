#pragma once

#include <vector>

namespace equivar {

struct ScoredPair {
  double score;
  int label;  // 1 = clone, 0 = not clone
};

struct AurocResult {
  double auroc;
  double stdErr;  // Hanley-McNeil / Wilcoxon standard error
};

// AUROC = P(score+ > score-) + 0.5 P(tie), computed from midranks. Standard
// error uses Q1 = A/(2-A), Q2 = 2A^2/(1+A). Throws DegenerateLabels unless
// both classes are present.
AurocResult auroc(const std::vector<ScoredPair>& pairs);

// Area under the precision-recall curve by descending-score threshold sweep,
// tie groups handled atomically. Throws DegenerateLabels without positives.
double averagePrecision(const std::vector<ScoredPair>& pairs);

double cosineSimilarity(const std::vector<double>& u, const std::vector<double>& v);

}  // namespace equivar
