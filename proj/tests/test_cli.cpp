#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "equivar/jsonl.hpp"

using namespace equivar;

namespace {

std::string binPath() { return EQUIVAR_BIN; }

int runCli(const std::string& args) {
  std::string cmd = binPath() + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string tempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("gen is byte-deterministic and validates its schema") {
  std::string a = tempPath("eqv_cli_gen_a.jsonl");
  std::string b = tempPath("eqv_cli_gen_b.jsonl");
  REQUIRE(runCli("gen --count 10 --seed 1 --out " + a) == 0);
  REQUIRE(runCli("gen --count 10 --seed 1 --out " + b) == 0);
  CHECK(readFile(a) == readFile(b));
  auto rows = readJsonlAll(a);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].contains("id"));
  CHECK(rows[0].contains("source"));
  // Manifest written alongside.
  CHECK(std::filesystem::exists(a + ".manifest.json"));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("gen rejects a zero count with usage exit code") {
  CHECK(runCli("gen --count 0 --seed 1 --out /tmp/eqv_cli_zero.jsonl") == 2);
}

TEST_CASE("missing input files exit with a usage error") {
  CHECK(runCli("augment --in /nonexistent.jsonl --out /tmp/x.jsonl") == 2);
}

TEST_CASE("augment stages rerun byte-identically across job counts") {
  std::string corpus = tempPath("eqv_cli_corpus.jsonl");
  REQUIRE(runCli("gen --count 25 --seed 7 --out " + corpus) == 0);
  std::string aug1 = tempPath("eqv_cli_aug1.jsonl");
  std::string aug2 = tempPath("eqv_cli_aug2.jsonl");
  REQUIRE(runCli("augment --in " + corpus + " --out " + aug1 + " --n 6 --seed 3 --jobs 1") == 0);
  REQUIRE(runCli("augment --in " + corpus + " --out " + aug2 + " --n 6 --seed 3 --jobs 8") == 0);
  CHECK(readFile(aug1) == readFile(aug2));

  std::string statsOut = tempPath("eqv_cli_stats.json");
  REQUIRE(runCli("stats --in " + aug1 + " --out " + statsOut) == 0);
  Json stats = Json::parse(readFile(statsOut));
  CHECK(stats.contains("histogram"));
  CHECK(stats.contains("positives"));
  CHECK(stats.contains("negatives"));
  CHECK(stats.contains("throughput_methods_per_sec"));

  std::string pairs = tempPath("eqv_cli_pairs.jsonl");
  REQUIRE(runCli("make-pairs --in " + aug1 + " --out " + pairs + " --seed 2 --max 20") == 0);

  // Edit-distance scorer needs no checkpoint; attack echoes its strength.
  std::string report = tempPath("eqv_cli_report.json");
  REQUIRE(runCli("eval-clones --pairs " + pairs + " --scorer edit --attack-n 4 --seed 5 --report " +
                 report) == 0);
  Json rj = Json::parse(readFile(report));
  CHECK(rj.at("attack_n") == 4);
  CHECK(rj.at("scorer") == "editDistance");
  CHECK(rj.at("pairs_used").get<int>() > 0);

  for (auto p : {corpus, aug1, aug2, statsOut, pairs, report}) std::remove(p.c_str());
}

TEST_CASE("train-vocab then a minimal pretrain and embed cycle") {
  std::string corpus = tempPath("eqv_cli_tv_corpus.jsonl");
  REQUIRE(runCli("gen --count 12 --seed 4 --out " + corpus) == 0);
  std::string aug = tempPath("eqv_cli_tv_aug.jsonl");
  REQUIRE(runCli("augment --in " + corpus + " --out " + aug + " --n 4 --seed 4") == 0);
  std::string vocab = tempPath("eqv_cli_tv_vocab.txt");
  REQUIRE(runCli("train-vocab --in " + aug + " --out " + vocab + " --vocab-size 300") == 0);

  std::string ckptDir = tempPath("eqv_cli_tv_ckpt");
  std::string metrics = tempPath("eqv_cli_tv_metrics.jsonl");
  REQUIRE(runCli("pretrain --in " + aug + " --vocab " + vocab + " --out " + ckptDir +
                 " --metrics " + metrics +
                 " --steps 3 --batch-size 4 --queue 8 --refill 2 --dim-tok 16 --dim-hidden 16"
                 " --dim-out 8 --seed 5") == 0);
  auto lines = readJsonlAll(metrics);
  REQUIRE(lines.size() == 3);
  CHECK(lines[2].contains("queue_fill"));

  std::string emb = tempPath("eqv_cli_tv_emb.jsonl");
  REQUIRE(runCli("embed --checkpoint " + ckptDir + "/final.ckpt --vocab " + vocab + " --in " +
                 aug + " --out " + emb) == 0);
  auto rows = readJsonlAll(emb);
  auto corpusRows = readJsonlAll(aug);
  size_t expected = 0;
  for (const auto& r : corpusRows) expected += 1 + r.at("variants").size();
  CHECK(rows.size() == expected);

  std::filesystem::remove_all(ckptDir);
  for (auto p : {corpus, aug, vocab, metrics, emb}) std::remove(p.c_str());
}
