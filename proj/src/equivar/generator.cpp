#include "equivar/generator.hpp"

#include <functional>

#include "equivar/error.hpp"
#include "equivar/jsonl.hpp"
#include "equivar/parser.hpp"
#include "equivar/rng.hpp"
#include "equivar/transforms.hpp"

namespace equivar {

namespace {

struct NamePool {
  Rng& rng;
  std::vector<std::string> taken;

  explicit NamePool(Rng& r) : rng(r) {}

  std::string fresh() {
    const auto& words = identifierWordList();
    while (true) {
      std::string a = words[rng.nextBelow(words.size())];
      std::string b = words[rng.nextBelow(words.size())];
      std::string name = a + static_cast<char>(std::toupper(b[0])) + b.substr(1);
      bool clash = false;
      for (const auto& t : taken)
        if (t == name) clash = true;
      if (!clash) {
        taken.push_back(name);
        return name;
      }
    }
  }
};

std::string num(Rng& rng, int lo, int hi) { return std::to_string(rng.nextInt(lo, hi)); }

std::string word(Rng& rng) {
  const auto& words = identifierWordList();
  return words[rng.nextBelow(words.size())];
}

// Optional texture so transform passes have material to work on: an unused
// declaration for DCE, a foldable constant for CF, a comment, a boolean.
std::string decoration(Rng& rng, NamePool& names) {
  switch (rng.nextBelow(5)) {
    case 0: return "  var " + names.fresh() + " = " + num(rng, 0, 99) + ";\n";
    case 1:
      return "  var " + names.fresh() + " = (" + num(rng, 1, 9) + " + " + num(rng, 1, 9) +
             ") * " + num(rng, 1, 9) + ";\n";
    case 2: return "  // " + word(rng) + " " + word(rng) + "\n";
    case 3: return "  var " + names.fresh() + " = " + (rng.bernoulli(0.5) ? "true" : "false") + ";\n";
    default: return "  let " + names.fresh() + " = \"" + word(rng) + "\";\n";
  }
}

struct Family {
  const char* name;
  std::function<std::string(Rng&, NamePool&)> emit;
};

const std::vector<Family>& families() {
  static const std::vector<Family> fams = {
      {"sumLoop",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), acc = n.fresh(), i = n.fresh();
         return "function " + f + "(" + xs + ") {\n  var " + acc + " = " + num(rng, 0, 3) +
                ";\n  for (var " + i + " = 0; " + i + " < " + xs + ".length; " + i + " = " + i +
                " + 1) {\n    " + acc + " = " + acc + " + " + xs + "[" + i + "];\n  }\n  return " +
                acc + ";\n}";
       }},
      {"productWhile",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), acc = n.fresh(), i = n.fresh();
         return "function " + f + "(" + xs + ") {\n  var " + acc + " = 1;\n  var " + i +
                " = 0;\n  while (" + i + " < " + xs + ".length) {\n    " + acc + " = " + acc +
                " * " + xs + "[" + i + "];\n    " + i + " = " + i + " + " + num(rng, 1, 1) +
                ";\n  }\n  return " + acc + ";\n}";
       }},
      {"arrayMax",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), best = n.fresh(), i = n.fresh();
         return "function " + f + "(" + xs + ") {\n  if (" + xs +
                ".length === 0) {\n    return null;\n  }\n  var " + best + " = " + xs +
                "[0];\n  for (var " + i + " = 1; " + i + " < " + xs + ".length; " + i + " = " + i +
                " + 1) {\n    if (" + xs + "[" + i + "] > " + best + ") {\n      " + best +
                " = " + xs + "[" + i + "];\n    }\n  }\n  return " + best + ";\n}";
       }},
      {"arrayMin",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), best = n.fresh(), i = n.fresh();
         return "function " + f + "(" + xs + ") {\n  if (" + xs +
                ".length === 0) {\n    return null;\n  }\n  var " + best + " = " + xs +
                "[0];\n  for (var " + i + " = 1; " + i + " < " + xs + ".length; " + i + " = " + i +
                " + 1) {\n    if (" + xs + "[" + i + "] < " + best + ") {\n      " + best +
                " = " + xs + "[" + i + "];\n    }\n  }\n  return " + best + ";\n}";
       }},
      {"countMatches",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), c = n.fresh(), i = n.fresh();
         std::string target = num(rng, 0, 5);
         return "function " + f + "(" + xs + ") {\n  var " + c + " = 0;\n  for (var " + i +
                " = 0; " + i + " < " + xs + ".length; " + i + " = " + i + " + 1) {\n    if (" +
                xs + "[" + i + "] === " + target + ") {\n      " + c + " = " + c +
                " + 1;\n    }\n  }\n  return " + c + ";\n}";
       }},
      {"filterGreater",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), out = n.fresh(), i = n.fresh();
         std::string bound = num(rng, 0, 6);
         return "function " + f + "(" + xs + ") {\n  var " + out + " = [];\n  for (var " + i +
                " = 0; " + i + " < " + xs + ".length; " + i + " = " + i + " + 1) {\n    if (" +
                xs + "[" + i + "] > " + bound + ") {\n      " + out + ".push(" + xs + "[" + i +
                "]);\n    }\n  }\n  return " + out + ";\n}";
       }},
      {"mapScale",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), out = n.fresh(), i = n.fresh();
         std::string k = num(rng, 2, 9);
         return "function " + f + "(" + xs + ") {\n  var " + out + " = [];\n  for (var " + i +
                " = 0; " + i + " < " + xs + ".length; " + i + " = " + i + " + 1) {\n    " + out +
                ".push(" + xs + "[" + i + "] * " + k + ");\n  }\n  return " + out + ";\n}";
       }},
      {"reverseString",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), s = n.fresh(), out = n.fresh(), i = n.fresh();
         return "function " + f + "(" + s + ") {\n  var " + out + " = \"\";\n  var " + i + " = " +
                s + ".length - 1;\n  while (" + i + " >= 0) {\n    " + out + " = " + out + " + " +
                s + "[" + i + "];\n    " + i + " = " + i + " - 1;\n  }\n  return " + out + ";\n}";
       }},
      {"repeatString",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), count = n.fresh(), out = n.fresh();
         std::string piece = word(rng);
         return "function " + f + "(" + count + ") {\n  var " + out + " = \"\";\n  var " +
                n.fresh() + " = 0;\n  while (" + count + " > 0) {\n    " + out + " = " + out +
                " + \"" + piece + "\";\n    " + count + " = " + count +
                " - 1;\n  }\n  return " + out + ";\n}";
       }},
      {"joinValues",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), out = n.fresh(), i = n.fresh();
         return "function " + f + "(" + xs + ") {\n  var " + out + " = \"\";\n  for (var " + i +
                " = 0; " + i + " < " + xs + ".length; " + i + " = " + i + " + 1) {\n    if (" + i +
                " > 0) {\n      " + out + " = " + out + " + \",\";\n    }\n    " + out + " = " +
                out + " + " + xs + "[" + i + "];\n  }\n  return " + out + ";\n}";
       }},
      {"clampValue",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), x = n.fresh();
         std::string lo = num(rng, -9, 0), hi = num(rng, 1, 9);
         return "function " + f + "(" + x + ") {\n  if (" + x + " < " + lo +
                ") {\n    return " + lo + ";\n  } else if (" + x + " > " + hi +
                ") {\n    return " + hi + ";\n  } else {\n    return " + x + ";\n  }\n}";
       }},
      {"absDelta",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), a = n.fresh(), b = n.fresh();
         return "function " + f + "(" + a + ", " + b + ") {\n  if (" + a + " > " + b +
                ") {\n    return " + a + " - " + b + ";\n  }\n  return " + b + " - " + a +
                ";\n}";
       }},
      {"polyEval",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), x = n.fresh();
         return "function " + f + "(" + x + ") {\n  var " + n.fresh() + " = " + num(rng, 1, 4) +
                ";\n  return " + num(rng, 1, 5) + " * " + x + " * " + x + " + " + num(rng, 1, 9) +
                " * " + x + " + (" + num(rng, 1, 5) + " + " + num(rng, 1, 5) + ");\n}";
       }},
      {"fibLoop",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), count = n.fresh(), a = n.fresh(), b = n.fresh(),
                     t = n.fresh(), i = n.fresh();
         return "function " + f + "(" + count + ") {\n  var " + a + " = 0;\n  var " + b +
                " = 1;\n  for (var " + i + " = 0; " + i + " < " + count + "; " + i + " = " + i +
                " + 1) {\n    var " + t + " = " + a + " + " + b + ";\n    " + a + " = " + b +
                ";\n    " + b + " = " + t + ";\n  }\n  return " + a + ";\n}";
       }},
      {"factorialRec",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), x = n.fresh();
         return "function " + f + "(" + x + ") {\n  if (" + x + " <= 1) {\n    return 1;\n  }\n" +
                "  return " + x + " * " + f + "(" + x + " - 1);\n}";
       }},
      {"gcdRec",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), a = n.fresh(), b = n.fresh();
         return "function " + f + "(" + a + ", " + b + ") {\n  " + a + " = Math.floor(" + a +
                ");\n  " + b + " = Math.floor(" + b + ");\n  if (" + b +
                " === 0) {\n    return " + a + ";\n  }\n  return " + f + "(" + b + ", " + a +
                " % " + b + ");\n}";
       }},
      {"powerLoop",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), base = n.fresh(), acc = n.fresh(), i = n.fresh();
         std::string exp = num(rng, 2, 5);
         return "function " + f + "(" + base + ") {\n  var " + acc + " = 1;\n  for (var " + i +
                " = 0; " + i + " < " + exp + "; " + i + " = " + i + " + 1) {\n    " + acc +
                " = " + acc + " * " + base + ";\n  }\n  return " + acc + ";\n}";
       }},
      {"parityCheck",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), x = n.fresh();
         return "function " + f + "(" + x + ") {\n  if (" + x +
                " % 2 === 0) {\n    return true;\n  }\n  return false;\n}";
       }},
      {"indexOfLoop",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), i = n.fresh();
         std::string target = num(rng, 0, 5);
         return "function " + f + "(" + xs + ") {\n  for (var " + i + " = 0; " + i + " < " + xs +
                ".length; " + i + " = " + i + " + 1) {\n    if (" + xs + "[" + i + "] === " +
                target + ") {\n      return " + i + ";\n    }\n  }\n  return -1;\n}";
       }},
      {"containsFlag",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), flag = n.fresh(), i = n.fresh();
         std::string target = num(rng, 0, 4);
         return "function " + f + "(" + xs + ") {\n  var " + flag + " = false;\n  for (var " + i +
                " = 0; " + i + " < " + xs + ".length; " + i + " = " + i + " + 1) {\n    if (" +
                xs + "[" + i + "] === " + target + ") {\n      " + flag +
                " = true;\n    }\n  }\n  return " + flag + ";\n}";
       }},
      {"averageArr",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), acc = n.fresh(), i = n.fresh();
         return "function " + f + "(" + xs + ") {\n  if (" + xs +
                ".length === 0) {\n    return 0;\n  }\n  var " + acc + " = 0;\n  for (var " + i +
                " = 0; " + i + " < " + xs + ".length; " + i + " = " + i + " + 1) {\n    " + acc +
                " = " + acc + " + " + xs + "[" + i + "];\n  }\n  return " + acc + " / " + xs +
                ".length;\n}";
       }},
      {"minOfThree",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), a = n.fresh(), b = n.fresh(), c = n.fresh(), m = n.fresh();
         return "function " + f + "(" + a + ", " + b + ", " + c + ") {\n  var " + m + " = " + a +
                ";\n  if (" + b + " < " + m + ") {\n    " + m + " = " + b + ";\n  }\n  if (" + c +
                " < " + m + ") {\n    " + m + " = " + c + ";\n  }\n  return " + m + ";\n}";
       }},
      {"triangularRec",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), x = n.fresh();
         return "function " + f + "(" + x + ") {\n  " + x + " = Math.floor(" + x + ");\n  if (" +
                x + " <= 0) {\n    return 0;\n  }\n  return " + x + " + " + f + "(" + x +
                " - 1);\n}";
       }},
      {"helperCombo",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), helper = n.fresh(), a = n.fresh(), b = n.fresh();
         std::string k = num(rng, 2, 6);
         return "function " + f + "(" + a + ", " + b + ") {\n  return " + helper + "(" + a +
                ") + " + helper + "(" + b + ");\n}\nfunction " + helper + "(" + a +
                ") {\n  return " + a + " * " + k + ";\n}";
       }},
      {"loggedSum",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), acc = n.fresh(), i = n.fresh();
         return "function " + f + "(" + xs + ") {\n  var " + acc + " = 0;\n  for (var " + i +
                " = 0; " + i + " < " + xs + ".length; " + i + " = " + i + " + 1) {\n    " + acc +
                " = " + acc + " + " + xs + "[" + i + "];\n    log(" + acc + ");\n  }\n  return " +
                acc + ";\n}";
       }},
      {"sliceHalves",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), xs = n.fresh(), mid = n.fresh(), head = n.fresh(),
                     tail = n.fresh();
         return "function " + f + "(" + xs + ") {\n  var " + mid + " = Math.floor(" + xs +
                ".length / 2);\n  var " + head + " = " + xs + ".slice(0, " + mid +
                ");\n  var " + tail + " = " + xs + ".slice(" + mid + ");\n  return " + tail +
                ".length - " + head + ".length;\n}";
       }},
      {"digitsSum",
       [](Rng&, NamePool& n) {
         std::string f = n.fresh(), x = n.fresh(), acc = n.fresh();
         return "function " + f + "(" + x + ") {\n  " + x + " = Math.floor(" + x +
                ");\n  var " + acc + " = 0;\n  while (" + x + " > 0) {\n    " + acc + " = " +
                acc + " + " + x + " % 10;\n    " + x + " = Math.floor(" + x +
                " / 10);\n  }\n  return " + acc + ";\n}";
       }},
      {"countdownLog",
       [](Rng& rng, NamePool& n) {
         std::string f = n.fresh(), x = n.fresh();
         std::string floorCap = num(rng, 0, 2);
         return "function " + f + "(" + x + ") {\n  while (" + x + " > " + floorCap +
                ") {\n    log(" + x + ");\n    " + x + " = " + x + " - 1;\n  }\n  return " + x +
                ";\n}";
       }},
  };
  return fams;
}

}  // namespace

size_t templateFamilyCount() { return families().size(); }

std::vector<GeneratedProgram> generatePrograms(int count, uint64_t seed) {
  if (count < 1) throw ConfigError("count must be >= 1");
  const auto& fams = families();
  std::vector<GeneratedProgram> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng(deriveSeed(seed, "gen", static_cast<uint64_t>(i)));
    const Family& fam = fams[static_cast<size_t>(i) % fams.size()];
    NamePool names(rng);
    std::string source = fam.emit(rng, names);
    // Sprinkle decorations inside the entry body so every pass has material.
    if (rng.bernoulli(0.6)) {
      size_t brace = source.find('{');
      if (brace != std::string::npos) {
        std::string extra = "\n" + decoration(rng, names);
        source.insert(brace + 1, extra);
      }
    }
    parse(source);  // template sanity; throws on generator bugs
    GeneratedProgram g;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "%06d", i);
    g.id = std::string(idbuf) + "-" + fam.name;
    g.family = fam.name;
    g.source = std::move(source);
    out.push_back(std::move(g));
  }
  return out;
}

void generateSyntheticCorpus(int count, uint64_t seed, const std::string& outPath) {
  auto programs = generatePrograms(count, seed);
  std::vector<Json> records;
  records.reserve(programs.size());
  for (const auto& p : programs) records.push_back(Json{{"id", p.id}, {"source", p.source}});
  writeJsonl(outPath, records);
}

}  // namespace equivar
