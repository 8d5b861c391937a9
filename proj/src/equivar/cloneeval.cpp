#include "equivar/cloneeval.hpp"

#include <algorithm>

#include "equivar/error.hpp"
#include "equivar/parser.hpp"

namespace equivar {

ScorerKind scorerFromName(const std::string& name) {
  if (name == "cosine") return ScorerKind::Cosine;
  if (name == "edit") return ScorerKind::EditDistance;
  if (name == "random") return ScorerKind::RandomInit;
  throw ConfigError("unknown scorer: " + name + " (expected cosine|edit|random)");
}

std::string scorerName(ScorerKind s) {
  switch (s) {
    case ScorerKind::Cosine: return "cosine";
    case ScorerKind::EditDistance: return "editDistance";
    case ScorerKind::RandomInit: return "randomInit";
  }
  return "?";
}

ScoreFn makeScorer(ScorerKind kind, const EncoderParams* queryParams, const SubwordVocab* vocab,
                   Pooling pooling, uint64_t randomInitSeed) {
  if (kind == ScorerKind::EditDistance) {
    return [](const std::string& a, const std::string& b) {
      return 1.0 - tokenDissimilarity(a, b);
    };
  }
  if (!vocab) throw ConfigError("embedding scorers need a vocabulary");
  std::shared_ptr<EncoderParams> params;
  if (kind == ScorerKind::Cosine) {
    if (!queryParams) throw ConfigError("cosine scorer needs a checkpoint");
    params = std::make_shared<EncoderParams>(*queryParams);
  } else {
    EncoderDims dims = queryParams ? queryParams->dims : EncoderDims{};
    dims.vocab = vocab->size();
    params = std::make_shared<EncoderParams>(initParams(dims, randomInitSeed));
  }
  const SubwordVocab* v = vocab;
  return [params, v, pooling](const std::string& a, const std::string& b) {
    std::vector<double> ea = encodeProgram(*params, encode(a, *v), pooling, true);
    std::vector<double> eb = encodeProgram(*params, encode(b, *v), pooling, true);
    return cosineSimilarity(ea, eb);
  };
}

Json cloneReportToJson(const CloneReport& r) {
  return Json{{"schema_version", 1},
              {"scorer", r.scorer},
              {"pooling", r.pooling},
              {"attack_n", r.attackN},
              {"auroc", r.auroc},
              {"auroc_se", r.aurocStdErr},
              {"ap", r.averagePrecision},
              {"pairs_used", r.pairsUsed},
              {"pairs_skipped", r.pairsSkipped}};
}

std::vector<ClonePair> loadClonePairs(const std::string& path, int64_t& skipped) {
  std::vector<ClonePair> pairs;
  skipped = 0;
  readJsonl(path, [&](size_t, const Json& j) {
    ClonePair p;
    p.a = j.at("a").get<std::string>();
    p.b = j.at("b").get<std::string>();
    p.label = j.at("label").get<int>();
    try {
      parse(p.a);
      parse(p.b);
    } catch (const Error&) {
      ++skipped;
      return;
    }
    pairs.push_back(std::move(p));
  });
  return pairs;
}

namespace {

CloneReport reportFromScores(const std::vector<ScoredPair>& scored, const std::string& scorerLabel,
                             Pooling pooling, int attackN, int64_t skipped) {
  CloneReport r;
  r.scorer = scorerLabel;
  r.pooling = poolingName(pooling);
  r.attackN = attackN;
  AurocResult a = auroc(scored);
  r.auroc = a.auroc;
  r.aurocStdErr = a.stdErr;
  r.averagePrecision = averagePrecision(scored);
  r.pairsUsed = static_cast<int64_t>(scored.size());
  r.pairsSkipped = skipped;
  return r;
}

std::vector<double> scoreAll(const std::vector<ClonePair>& pairs, const ScoreFn& score,
                             int jobs) {
  std::vector<double> out(pairs.size());
  auto one = [&](size_t i) { out[i] = score(pairs[i].a, pairs[i].b); };
#ifdef _OPENMP
  if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(pairs.size()); ++i)
      one(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < pairs.size(); ++i) one(i);
  }
#else
  (void)jobs;
  for (size_t i = 0; i < pairs.size(); ++i) one(i);
#endif
  return out;
}

}  // namespace

CloneReport scorePairs(const std::vector<ClonePair>& pairs, const ScoreFn& score,
                       const std::string& scorerLabel, Pooling pooling, int attackN,
                       int64_t alreadySkipped, std::vector<Json>* scoreDump, int jobs) {
  std::vector<double> scores = scoreAll(pairs, score, jobs);
  std::vector<ScoredPair> scored(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) scored[i] = {scores[i], pairs[i].label};
  if (scoreDump)
    for (size_t i = 0; i < pairs.size(); ++i)
      scoreDump->push_back(
          Json{{"index", i}, {"score", scores[i]}, {"label", pairs[i].label}});
  return reportFromScores(scored, scorerLabel, pooling, attackN, alreadySkipped);
}

void AttackConfig::validate() const {
  if (samples < 1) throw ConfigError("attack sample count must be >= 1");
  for (TransformId id : pool) {
    if (id == TransformId::LS || id == TransformId::DCI || id == TransformId::SW)
      throw ConfigError("attack pool must be label-preserving; " + transformIdName(id) +
                        " is excluded");
  }
}

AttackOutcome adversarialAttack(const ScoreFn& score, const ClonePair& pair,
                                const AttackConfig& atk) {
  atk.validate();
  Rng rng(atk.seed);
  bool minimize = pair.label == 1;  // lower true-clone similarity; raise non-clone
  AttackOutcome best;
  bool haveCandidate = false;
  for (int s = 0; s < atk.samples; ++s) {
    ProgramForm cur = ProgramForm::fromSource(pair.b);
    bool broken = false;
    for (TransformId id : atk.pool) {
      bool fire = rng.bernoulli(0.5);
      if (!fire) continue;
      try {
        cur = applyTransform(id, std::move(cur), rng);
      } catch (const Error&) {
        broken = true;
        break;
      }
    }
    if (broken) continue;
    try {
      cur.lowerToSource(PrintStyle::Beautified);
      double s1 = score(pair.a, cur.source);
      if (!haveCandidate || (minimize ? s1 < best.worstScore : s1 > best.worstScore)) {
        best.worstScore = s1;
        best.transformedB = cur.source;
        haveCandidate = true;
      }
    } catch (const Error&) {
      continue;
    }
  }
  if (!haveCandidate) {
    best.transformedB = pair.b;
    best.worstScore = score(pair.a, pair.b);
  }
  return best;
}

CloneReport adversarialCloneEval(const std::vector<ClonePair>& pairs, const ScoreFn& score,
                                 const std::string& scorerLabel, Pooling pooling,
                                 const AttackConfig& atk, int64_t alreadySkipped,
                                 std::vector<Json>* scoreDump, int jobs) {
  atk.validate();
  std::vector<double> scores(pairs.size());
  auto one = [&](size_t i) {
    if (pairs[i].label == 1) {
      AttackConfig perPair = atk;
      perPair.seed = deriveSeed(atk.seed, "attack-pair", static_cast<uint64_t>(i));
      scores[i] = adversarialAttack(score, pairs[i], perPair).worstScore;
    } else {
      scores[i] = score(pairs[i].a, pairs[i].b);
    }
  };
#ifdef _OPENMP
  if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(pairs.size()); ++i)
      one(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < pairs.size(); ++i) one(i);
  }
#else
  (void)jobs;
  for (size_t i = 0; i < pairs.size(); ++i) one(i);
#endif
  std::vector<ScoredPair> scored(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) scored[i] = {scores[i], pairs[i].label};
  if (scoreDump)
    for (size_t i = 0; i < pairs.size(); ++i)
      scoreDump->push_back(
          Json{{"index", i}, {"score", scores[i]}, {"label", pairs[i].label}});
  return reportFromScores(scored, scorerLabel, pooling, atk.samples, alreadySkipped);
}

void exportEmbeddings(const EncoderParams& queryParams, const SubwordVocab& vocab,
                      const std::string& corpusPath, Pooling pooling, const std::string& outPath) {
  std::vector<Json> rows;
  readJsonl(corpusPath, [&](size_t, const Json& j) {
    std::vector<std::string> members;
    members.push_back(j.at("source").get<std::string>());
    if (j.contains("variants"))
      for (const auto& v : j.at("variants")) members.push_back(v.get<std::string>());
    std::string id = j.at("id").get<std::string>();
    for (size_t m = 0; m < members.size(); ++m) {
      std::vector<double> emb =
          encodeProgram(queryParams, encode(members[m], vocab), pooling, true);
      rows.push_back(Json{{"id", id}, {"variant", m}, {"embedding", emb}});
    }
  });
  writeJsonl(outPath, rows);
}

int64_t buildVariantPairs(const std::string& augmentedPath, const std::string& outPath,
                          uint64_t seed, int64_t maxPairsPerClass) {
  std::vector<VariantSet> corpus = loadAugmentedCorpus(augmentedPath);
  std::vector<size_t> eligible;
  for (size_t i = 0; i < corpus.size(); ++i)
    if (corpus[i].members.size() >= 2) eligible.push_back(i);
  if (eligible.empty() || corpus.size() < 2)
    throw DataError("corpus cannot supply both clone and non-clone pairs");

  Rng rng(deriveSeed(seed, "pairs"));
  int64_t perClass = std::min<int64_t>(maxPairsPerClass, static_cast<int64_t>(eligible.size()));
  std::vector<Json> records;
  records.reserve(static_cast<size_t>(perClass) * 2);
  for (int64_t k = 0; k < perClass; ++k) {
    const auto& members = corpus[eligible[static_cast<size_t>(k) % eligible.size()]].members;
    size_t a = rng.nextBelow(members.size());
    size_t b = rng.nextBelow(members.size() - 1);
    if (b >= a) ++b;
    records.push_back(Json{{"a", members[a]}, {"b", members[b]}, {"label", 1}});
  }
  for (int64_t k = 0; k < perClass; ++k) {
    size_t i = rng.nextBelow(corpus.size());
    size_t j = rng.nextBelow(corpus.size() - 1);
    if (j >= i) ++j;
    const auto& mi = corpus[i].members;
    const auto& mj = corpus[j].members;
    records.push_back(Json{{"a", mi[rng.nextBelow(mi.size())]},
                           {"b", mj[rng.nextBelow(mj.size())]},
                           {"label", 0}});
  }
  writeJsonl(outPath, records);
  return perClass * 2;
}

}  // namespace equivar
