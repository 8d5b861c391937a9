#include "equivar/augment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "equivar/error.hpp"
#include "equivar/parser.hpp"
#include "equivar/printer.hpp"
#include "equivar/token.hpp"

namespace equivar {

std::vector<TransformSpec> defaultTransformSpecs() {
  return {
      {TransformId::CF, 0.5},  {TransformId::DCE, 0.5}, {TransformId::T, 0.5},
      {TransformId::VR, 0.5},  {TransformId::IM, 0.5},  {TransformId::DCI, 0.5},
      {TransformId::LS, 0.25}, {TransformId::C, 0.5},   {TransformId::B, 0.5},
      {TransformId::R, 0.5},
  };
}

std::string variantDedupKey(const std::string& source) {
  try {
    return print(*parse(source), PrintStyle::Compact);
  } catch (const Error&) {
  }
  try {
    std::string key;
    for (const auto& lexeme : normalizedLexemes(source)) {
      key += lexeme;
      key += '\x1f';
    }
    return key;
  } catch (const Error&) {
    return source;
  }
}

VariantSet transformDropout(const std::string& source, const AugmentRequest& req) {
  parse(source);  // reject unparseable bases up front

  VariantSet out;
  out.base = source;
  out.members.push_back(source);
  std::unordered_set<std::string> keys{variantDedupKey(source)};

  Rng rng(req.seed);
  for (int i = 1; i < req.count; ++i) {
    ProgramForm cur = ProgramForm::fromSource(source);
    for (const auto& spec : req.specs) {
      bool fire = rng.bernoulli(spec.probability);
      if (!fire) continue;
      try {
        cur = applyTransform(spec.id, std::move(cur), rng);
      } catch (const Error&) {
        ++out.skippedPasses;  // pass skipped for this sample; sample continues
      }
    }
    try {
      cur.lowerToSource(PrintStyle::Beautified);
    } catch (const Error&) {
      ++out.skippedPasses;
      continue;
    }
    if (keys.insert(variantDedupKey(cur.source)).second) out.members.push_back(cur.source);
  }
  return out;
}

size_t tokenEditDistance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const size_t n = b.size();
  std::vector<size_t> row(n + 1);
  for (size_t j = 0; j <= n; ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= n; ++j) {
      size_t old = row[j];
      size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
      diag = old;
    }
  }
  return row[n];
}

double tokenDissimilarity(const std::string& a, const std::string& b) {
  std::vector<std::string> ta = normalizedLexemes(a);
  std::vector<std::string> tb = normalizedLexemes(b);
  size_t longest = std::max(ta.size(), tb.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(tokenEditDistance(ta, tb)) / static_cast<double>(longest);
}

namespace {

DissimilaritySummary summarize(std::vector<double> values) {
  DissimilaritySummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  auto quantile = [&values](double q) {
    double pos = q * static_cast<double>(values.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  s.p25 = quantile(0.25);
  s.p50 = quantile(0.50);
  s.p75 = quantile(0.75);
  return s;
}

}  // namespace

void dissimilarityStats(const std::vector<VariantSet>& corpus, uint64_t sampleSeed,
                        CorpusStats& stats) {
  Rng rng(deriveSeed(sampleSeed, "dissim"));
  std::vector<double> positives;
  std::vector<size_t> multiMember;
  for (size_t i = 0; i < corpus.size(); ++i)
    if (corpus[i].members.size() >= 2) multiMember.push_back(i);

  for (size_t idx : multiMember) {
    const auto& members = corpus[idx].members;
    size_t a = rng.nextBelow(members.size());
    size_t b = rng.nextBelow(members.size() - 1);
    if (b >= a) ++b;
    try {
      positives.push_back(tokenDissimilarity(members[a], members[b]));
    } catch (const Error&) {
    }
  }

  std::vector<double> negatives;
  if (corpus.size() >= 2) {
    while (negatives.size() < positives.size()) {
      size_t i = rng.nextBelow(corpus.size());
      size_t j = rng.nextBelow(corpus.size() - 1);
      if (j >= i) ++j;
      const auto& mi = corpus[i].members;
      const auto& mj = corpus[j].members;
      try {
        negatives.push_back(
            tokenDissimilarity(mi[rng.nextBelow(mi.size())], mj[rng.nextBelow(mj.size())]));
      } catch (const Error&) {
      }
    }
  }

  stats.positives = summarize(std::move(positives));
  stats.negatives = summarize(std::move(negatives));
}

std::vector<VariantSet> loadAugmentedCorpus(const std::string& path) {
  std::vector<VariantSet> corpus;
  readJsonl(path, [&corpus](size_t, const Json& j) {
    VariantSet vs;
    vs.base = j.at("source").get<std::string>();
    vs.members.push_back(vs.base);
    if (j.contains("variants"))
      for (const auto& v : j.at("variants")) vs.members.push_back(v.get<std::string>());
    corpus.push_back(std::move(vs));
  });
  return corpus;
}

CorpusStats augmentCorpus(const std::string& inPath, const std::string& outPath,
                          const AugmentRequest& req, int jobs) {
  struct Record {
    std::string id;
    std::string source;
  };
  std::vector<Record> records;
  readJsonl(inPath, [&records](size_t, const Json& j) {
    records.push_back({j.at("id").get<std::string>(), j.at("source").get<std::string>()});
  });

  CorpusStats stats;
  std::vector<VariantSet> results(records.size());
  std::vector<char> failed(records.size(), 0);

  auto processOne = [&](size_t i) {
    AugmentRequest r = req;
    r.seed = mix64(req.seed ^ fnv1a64(records[i].id));
    try {
      results[i] = transformDropout(records[i].source, r);
    } catch (const Error&) {
      failed[i] = 1;
    }
  };

  auto t0 = std::chrono::steady_clock::now();
  if (jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(records.size()); ++i)
      processOne(static_cast<size_t>(i));
#else
    for (size_t i = 0; i < records.size(); ++i) processOne(i);
#endif
  } else {
    // Serial reference path; must produce byte-identical output.
    for (size_t i = 0; i < records.size(); ++i) processOne(i);
  }
  auto t1 = std::chrono::steady_clock::now();

  std::vector<Json> outRecords;
  outRecords.reserve(records.size());
  std::vector<VariantSet> kept;
  for (size_t i = 0; i < records.size(); ++i) {
    if (failed[i]) {
      ++stats.parseFailures;
      continue;
    }
    const VariantSet& vs = results[i];
    Json j;
    j["id"] = records[i].id;
    j["source"] = vs.base;
    Json variants = Json::array();
    for (size_t m = 1; m < vs.members.size(); ++m) variants.push_back(vs.members[m]);
    j["variants"] = std::move(variants);
    outRecords.push_back(std::move(j));
    stats.histogram[static_cast<int>(vs.members.size())] += 1;
    ++stats.methods;
    kept.push_back(vs);
  }
  writeJsonl(outPath, outRecords);

  double seconds = std::chrono::duration<double>(t1 - t0).count();
  stats.throughputMethodsPerSec =
      seconds > 0 ? static_cast<double>(records.size()) / seconds : 0.0;

  dissimilarityStats(kept, req.seed, stats);
  return stats;
}

Json corpusStatsToJson(const CorpusStats& stats) {
  Json histogram = Json::object();
  for (const auto& [size, count] : stats.histogram) histogram[std::to_string(size)] = count;
  auto summary = [](const DissimilaritySummary& s) {
    return Json{{"mean", s.mean}, {"p25", s.p25}, {"p50", s.p50}, {"p75", s.p75},
                {"pairs", s.count}};
  };
  return Json{{"schema_version", 1},
              {"histogram", std::move(histogram)},
              {"positives", summary(stats.positives)},
              {"negatives", summary(stats.negatives)},
              {"throughput_methods_per_sec", stats.throughputMethodsPerSec},
              {"methods", stats.methods},
              {"parse_failures", stats.parseFailures}};
}

}  // namespace equivar
