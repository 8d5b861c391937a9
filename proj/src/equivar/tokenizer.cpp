#include "equivar/tokenizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "equivar/error.hpp"
#include "equivar/rng.hpp"

namespace equivar {

namespace {

const char* kWordMarker = "\xe2\x96\x81";  // U+2581, replaces spaces
const char* kUnkText = "\xef\xbf\xbd";     // U+FFFD
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kUnkPenalty = 10.0;

double logSumExp(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  double hi = std::max(x, y);
  return hi + std::log(std::exp(x - hi) + std::exp(y - hi));
}

bool isUtf8Start(unsigned char c) { return (c & 0xC0) != 0x80; }

size_t codepointLen(const std::string& s, size_t pos) {
  size_t n = 1;
  while (pos + n < s.size() && !isUtf8Start(static_cast<unsigned char>(s[pos + n]))) ++n;
  return n;
}

// Word units of the marker form: "▁word" per whitespace-separated word.
std::vector<std::string> wordUnits(const std::string& normalized) {
  std::vector<std::string> units;
  size_t pos = 0;
  while (pos < normalized.size()) {
    size_t space = normalized.find(' ', pos);
    std::string word =
        space == std::string::npos ? normalized.substr(pos) : normalized.substr(pos, space - pos);
    if (!word.empty()) units.push_back(kWordMarker + word);
    if (space == std::string::npos) break;
    pos = space + 1;
  }
  return units;
}

}  // namespace

std::string normalizeText(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pendingSpace = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pendingSpace = !out.empty();
      continue;
    }
    if (pendingSpace) {
      out += ' ';
      pendingSpace = false;
    }
    out += c;
  }
  return out;
}

SubwordVocab::SubwordVocab(std::vector<std::string> pieces, std::vector<double> logProbs)
    : pieces_(std::move(pieces)), logProbs_(std::move(logProbs)) {
  for (size_t i = 0; i < pieces_.size(); ++i) {
    index_.emplace(pieces_[i], static_cast<int>(i) + kReserved);
    maxPieceLen_ = std::max(maxPieceLen_, pieces_[i].size());
  }
}

int SubwordVocab::pieceId(const std::string& piece) const {
  auto it = index_.find(piece);
  return it == index_.end() ? -1 : it->second;
}

const std::string& SubwordVocab::pieceText(int id) const { return pieces_.at(id - kReserved); }

double SubwordVocab::pieceLogProb(int id) const { return logProbs_.at(id - kReserved); }

void SubwordVocab::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "equivar.vocab.v1\tpieces=" << pieces_.size() << "\treserved=PAD,UNK,BOS,EOS\n";
  char buf[64];
  for (size_t i = 0; i < pieces_.size(); ++i) {
    auto res = std::to_chars(buf, buf + sizeof(buf), logProbs_[i]);
    out << pieces_[i] << '\t' << std::string_view(buf, res.ptr - buf) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

SubwordVocab SubwordVocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("equivar.vocab.v1\t", 0) != 0)
    throw DataError(path + ": not an equivar.vocab.v1 file");
  std::vector<std::string> pieces;
  std::vector<double> logProbs;
  std::string line;
  size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos)
      throw DataError(path + ":" + std::to_string(lineNo) + ": missing tab");
    double lp = 0.0;
    auto res = std::from_chars(line.data() + tab + 1, line.data() + line.size(), lp);
    if (res.ec != std::errc() || !std::isfinite(lp))
      throw DataError(path + ":" + std::to_string(lineNo) + ": bad log-probability");
    pieces.push_back(line.substr(0, tab));
    logProbs.push_back(lp);
  }
  return SubwordVocab(std::move(pieces), std::move(logProbs));
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct UnitCorpus {
  std::vector<std::pair<std::string, int64_t>> units;  // sorted unique units
};

UnitCorpus collectUnits(const std::vector<std::string>& corpus) {
  std::map<std::string, int64_t> freq;
  for (const auto& text : corpus)
    for (auto& u : wordUnits(normalizeText(text))) freq[u] += 1;
  UnitCorpus out;
  out.units.assign(freq.begin(), freq.end());
  return out;
}

struct PieceSet {
  std::vector<std::string> pieces;
  std::vector<double> logProbs;
  std::vector<bool> required;  // single codepoints never pruned
  std::unordered_map<std::string, int> index;
  size_t maxLen = 0;

  void rebuildIndex() {
    index.clear();
    maxLen = 0;
    for (size_t i = 0; i < pieces.size(); ++i) {
      index.emplace(pieces[i], static_cast<int>(i));
      maxLen = std::max(maxLen, pieces[i].size());
    }
  }
};

// Expected piece counts for one unit via forward-backward on the
// segmentation lattice. Returns the unit log-likelihood.
double accumulateCounts(const std::string& unit, int64_t freq, const PieceSet& ps,
                        std::vector<double>& counts) {
  const size_t n = unit.size();
  std::vector<double> fwd(n + 1, kNegInf), bwd(n + 1, kNegInf);
  fwd[0] = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (fwd[i] == kNegInf || !isUtf8Start(static_cast<unsigned char>(unit[i]))) continue;
    size_t maxLen = std::min(ps.maxLen, n - i);
    for (size_t len = 1; len <= maxLen; ++len) {
      if (i + len < n && !isUtf8Start(static_cast<unsigned char>(unit[i + len]))) continue;
      auto it = ps.index.find(unit.substr(i, len));
      if (it == ps.index.end()) continue;
      fwd[i + len] = logSumExp(fwd[i + len], fwd[i] + ps.logProbs[it->second]);
    }
  }
  if (fwd[n] == kNegInf) return 0.0;  // uncovered unit; skip (cannot happen after seeding)
  bwd[n] = 0.0;
  for (size_t i = n; i-- > 0;) {
    if (!isUtf8Start(static_cast<unsigned char>(unit[i]))) continue;
    size_t maxLen = std::min(ps.maxLen, n - i);
    for (size_t len = 1; len <= maxLen; ++len) {
      if (i + len < n && !isUtf8Start(static_cast<unsigned char>(unit[i + len]))) continue;
      auto it = ps.index.find(unit.substr(i, len));
      if (it == ps.index.end()) continue;
      if (bwd[i + len] == kNegInf) continue;
      bwd[i] = logSumExp(bwd[i], ps.logProbs[it->second] + bwd[i + len]);
    }
  }
  const double z = fwd[n];
  for (size_t i = 0; i < n; ++i) {
    if (fwd[i] == kNegInf || !isUtf8Start(static_cast<unsigned char>(unit[i]))) continue;
    size_t maxLen = std::min(ps.maxLen, n - i);
    for (size_t len = 1; len <= maxLen; ++len) {
      if (i + len < n && !isUtf8Start(static_cast<unsigned char>(unit[i + len]))) continue;
      auto it = ps.index.find(unit.substr(i, len));
      if (it == ps.index.end()) continue;
      if (bwd[i + len] == kNegInf) continue;
      double post = std::exp(fwd[i] + ps.logProbs[it->second] + bwd[i + len] - z);
      counts[it->second] += static_cast<double>(freq) * post;
    }
  }
  return static_cast<double>(freq) * z;
}

void emIteration(const UnitCorpus& corpus, PieceSet& ps) {
  std::vector<double> counts(ps.pieces.size(), 0.0);
  for (const auto& [unit, freq] : corpus.units) accumulateCounts(unit, freq, ps, counts);
  double total = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (ps.required[i]) counts[i] = std::max(counts[i], 1e-6);  // keep coverage pieces alive
    total += counts[i];
  }
  for (size_t i = 0; i < counts.size(); ++i)
    ps.logProbs[i] = counts[i] > 0 ? std::log(counts[i]) - std::log(total) : kNegInf;
  // Drop pieces that received no mass at all.
  PieceSet next;
  for (size_t i = 0; i < ps.pieces.size(); ++i) {
    if (ps.logProbs[i] == kNegInf && !ps.required[i]) continue;
    next.pieces.push_back(std::move(ps.pieces[i]));
    next.logProbs.push_back(ps.logProbs[i]);
    next.required.push_back(ps.required[i]);
  }
  next.rebuildIndex();
  ps = std::move(next);
}

// Prune the lowest-probability prunable pieces, keeping at least `target`
// total and every required piece.
void prune(PieceSet& ps, size_t target, double fraction) {
  if (ps.pieces.size() <= target) return;
  std::vector<size_t> prunable;
  for (size_t i = 0; i < ps.pieces.size(); ++i)
    if (!ps.required[i]) prunable.push_back(i);
  std::sort(prunable.begin(), prunable.end(), [&ps](size_t a, size_t b) {
    if (ps.logProbs[a] != ps.logProbs[b]) return ps.logProbs[a] < ps.logProbs[b];
    return ps.pieces[a] > ps.pieces[b];  // stable: drop longer-sorted names first
  });
  size_t excess = ps.pieces.size() - target;
  size_t dropCount = std::min(prunable.size(),
                              std::max<size_t>(1, std::min(excess, static_cast<size_t>(
                                  static_cast<double>(prunable.size()) * fraction))));
  std::vector<bool> drop(ps.pieces.size(), false);
  for (size_t k = 0; k < dropCount; ++k) drop[prunable[k]] = true;
  PieceSet next;
  for (size_t i = 0; i < ps.pieces.size(); ++i) {
    if (drop[i]) continue;
    next.pieces.push_back(std::move(ps.pieces[i]));
    next.logProbs.push_back(ps.logProbs[i]);
    next.required.push_back(ps.required[i]);
  }
  next.rebuildIndex();
  ps = std::move(next);
}

}  // namespace

SubwordVocab trainVocab(const std::vector<std::string>& corpus, const VocabTrainConfig& cfg) {
  if (corpus.empty()) throw VocabError("empty corpus");
  UnitCorpus units = collectUnits(corpus);
  if (units.units.empty()) throw VocabError("corpus has no content after normalization");

  // Seed: every substring at codepoint boundaries up to maxPieceLen bytes.
  std::map<std::string, int64_t> seedFreq;
  std::map<std::string, int64_t> charFreq;
  for (const auto& [unit, freq] : units.units) {
    for (size_t i = 0; i < unit.size(); ++i) {
      if (!isUtf8Start(static_cast<unsigned char>(unit[i]))) continue;
      size_t cpLen = codepointLen(unit, i);
      charFreq[unit.substr(i, cpLen)] += freq;
      size_t maxLen = std::min(cfg.maxPieceLen, unit.size() - i);
      for (size_t len = cpLen; len <= maxLen; ++len) {
        if (i + len < unit.size() && !isUtf8Start(static_cast<unsigned char>(unit[i + len])))
          continue;
        seedFreq[unit.substr(i, len)] += freq;
      }
    }
  }
  size_t alphabet = charFreq.size();
  if (static_cast<size_t>(cfg.vocabSize) < alphabet + SubwordVocab::kReserved)
    throw VocabError("vocab size " + std::to_string(cfg.vocabSize) +
                     " below alphabet size " + std::to_string(alphabet) + " + reserved");
  size_t targetPieces = static_cast<size_t>(cfg.vocabSize) - SubwordVocab::kReserved;

  PieceSet ps;
  {
    // Required single codepoints first, then multi-char seeds by frequency.
    std::vector<std::pair<std::string, int64_t>> multi;
    for (const auto& [piece, freq] : seedFreq)
      if (!charFreq.count(piece)) multi.emplace_back(piece, freq);
    std::sort(multi.begin(), multi.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (multi.size() > cfg.seedPieceLimit) multi.resize(cfg.seedPieceLimit);

    double total = 0.0;
    for (const auto& [piece, freq] : charFreq) total += static_cast<double>(freq);
    for (const auto& [piece, freq] : multi) total += static_cast<double>(freq);
    for (const auto& [piece, freq] : charFreq) {
      ps.pieces.push_back(piece);
      ps.logProbs.push_back(std::log(static_cast<double>(freq)) - std::log(total));
      ps.required.push_back(true);
    }
    for (const auto& [piece, freq] : multi) {
      ps.pieces.push_back(piece);
      ps.logProbs.push_back(std::log(static_cast<double>(freq)) - std::log(total));
      ps.required.push_back(false);
    }
    ps.rebuildIndex();
  }

  while (true) {
    for (int it = 0; it < cfg.emIterations; ++it) emIteration(units, ps);
    if (ps.pieces.size() <= targetPieces) break;
    prune(ps, targetPieces, cfg.pruneFraction);
  }
  emIteration(units, ps);

  // Stable output order: by descending probability, then piece text.
  std::vector<size_t> order(ps.pieces.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&ps](size_t a, size_t b) {
    if (ps.logProbs[a] != ps.logProbs[b]) return ps.logProbs[a] > ps.logProbs[b];
    return ps.pieces[a] < ps.pieces[b];
  });
  std::vector<std::string> pieces;
  std::vector<double> logProbs;
  pieces.reserve(order.size());
  for (size_t i : order) {
    pieces.push_back(ps.pieces[i]);
    logProbs.push_back(ps.logProbs[i]);
  }
  return SubwordVocab(std::move(pieces), std::move(logProbs));
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

struct Arc {
  size_t from;
  size_t to;
  int id;        // vocab id (>= kReserved) or kUnk
  double logp;
};

// Lattice over one word unit. UNK arcs are added only where the vocabulary
// cannot continue, so sampled segmentations stay lossless on covered text.
std::vector<Arc> buildLattice(const std::string& unit, const SubwordVocab& vocab) {
  const size_t n = unit.size();
  std::vector<Arc> arcs;
  double unkLogp = -kUnkPenalty;
  for (double lp : vocab.logProbs()) unkLogp = std::min(unkLogp, lp);
  unkLogp -= kUnkPenalty;

  std::vector<bool> reachable(n + 1, false);
  reachable[0] = true;
  for (size_t i = 0; i < n; ++i) {
    if (!reachable[i] || !isUtf8Start(static_cast<unsigned char>(unit[i]))) continue;
    bool any = false;
    size_t maxLen = std::min(vocab.maxPieceLen(), n - i);
    for (size_t len = 1; len <= maxLen; ++len) {
      if (i + len < n && !isUtf8Start(static_cast<unsigned char>(unit[i + len]))) continue;
      int id = vocab.pieceId(unit.substr(i, len));
      if (id < 0) continue;
      arcs.push_back({i, i + len, id, vocab.pieceLogProb(id)});
      reachable[i + len] = true;
      any = true;
    }
    if (!any) {
      size_t len = codepointLen(unit, i);
      arcs.push_back({i, i + len, SubwordVocab::kUnk, unkLogp});
      reachable[i + len] = true;
    }
  }
  return arcs;
}

void encodeUnitBest(const std::string& unit, const SubwordVocab& vocab, std::vector<int>& out) {
  const size_t n = unit.size();
  auto arcs = buildLattice(unit, vocab);
  std::vector<double> best(n + 1, kNegInf);
  std::vector<int> bestArc(n + 1, -1);
  best[0] = 0.0;
  for (size_t a = 0; a < arcs.size(); ++a) {
    const Arc& arc = arcs[a];  // arcs are sorted by `from`
    if (best[arc.from] == kNegInf) continue;
    double cand = best[arc.from] + arc.logp;
    size_t len = arc.to - arc.from;
    if (cand > best[arc.to] ||
        (cand == best[arc.to] && bestArc[arc.to] >= 0 &&
         len > arcs[bestArc[arc.to]].to - arcs[bestArc[arc.to]].from)) {
      best[arc.to] = cand;
      bestArc[arc.to] = static_cast<int>(a);
    }
  }
  std::vector<int> rev;
  size_t pos = n;
  while (pos > 0) {
    const Arc& arc = arcs[bestArc[pos]];
    rev.push_back(arc.id);
    pos = arc.from;
  }
  out.insert(out.end(), rev.rbegin(), rev.rend());
}

void encodeUnitSample(const std::string& unit, const SubwordVocab& vocab, double alpha, Rng& rng,
                      std::vector<int>& out) {
  const size_t n = unit.size();
  auto arcs = buildLattice(unit, vocab);
  // Forward filtering with tempered weights, then backward sampling.
  std::vector<double> fwd(n + 1, kNegInf);
  fwd[0] = 0.0;
  for (const Arc& arc : arcs) {
    if (fwd[arc.from] == kNegInf) continue;
    fwd[arc.to] = logSumExp(fwd[arc.to], fwd[arc.from] + alpha * arc.logp);
  }
  std::vector<std::vector<size_t>> arcsByEnd(n + 1);
  for (size_t a = 0; a < arcs.size(); ++a) arcsByEnd[arcs[a].to].push_back(a);

  std::vector<int> rev;
  size_t pos = n;
  while (pos > 0) {
    const auto& incoming = arcsByEnd[pos];
    double u = rng.nextDouble();
    double cum = 0.0;
    size_t chosen = incoming.back();
    for (size_t a : incoming) {
      const Arc& arc = arcs[a];
      if (fwd[arc.from] == kNegInf) continue;
      double p = std::exp(fwd[arc.from] + alpha * arc.logp - fwd[pos]);
      cum += p;
      if (u < cum) {
        chosen = a;
        break;
      }
    }
    rev.push_back(arcs[chosen].id);
    pos = arcs[chosen].from;
  }
  out.insert(out.end(), rev.rbegin(), rev.rend());
}

}  // namespace

std::vector<int> encode(const std::string& text, const SubwordVocab& vocab,
                        const EncodeOptions& opts) {
  std::vector<int> ids;
  ids.push_back(SubwordVocab::kBos);
  Rng rng(opts.seed);
  for (const auto& unit : wordUnits(normalizeText(text))) {
    if (opts.sample)
      encodeUnitSample(unit, vocab, opts.alpha, rng, ids);
    else
      encodeUnitBest(unit, vocab, ids);
  }
  ids.push_back(SubwordVocab::kEos);
  return ids;
}

std::string decode(const std::vector<int>& ids, const SubwordVocab& vocab) {
  std::string text;
  for (int id : ids) {
    if (id < 0 || id >= vocab.size())
      throw DecodeError("id " + std::to_string(id) + " out of range for vocab of size " +
                        std::to_string(vocab.size()));
    if (id == SubwordVocab::kPad || id == SubwordVocab::kBos || id == SubwordVocab::kEos) continue;
    if (id == SubwordVocab::kUnk) {
      text += kUnkText;
      continue;
    }
    text += vocab.pieceText(id);
  }
  // Word markers back to spaces; drop the leading one.
  std::string out;
  size_t i = 0;
  const std::string marker = kWordMarker;
  while (i < text.size()) {
    if (text.compare(i, marker.size(), marker) == 0) {
      if (!out.empty()) out += ' ';
      i += marker.size();
    } else {
      out += text[i];
      ++i;
    }
  }
  return out;
}

}  // namespace equivar
