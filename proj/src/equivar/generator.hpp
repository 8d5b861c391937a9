#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace equivar {

// Seeded generator for desk-scale corpora: parameterized template families
// (loop reducers, string builders, array filters, recursive helpers) with
// randomized identifiers, constants, and small structural choices. Every
// emitted program parses and terminates within fuzzing step limits.
struct GeneratedProgram {
  std::string id;      // "<index>-<family>"
  std::string family;
  std::string source;
};

std::vector<GeneratedProgram> generatePrograms(int count, uint64_t seed);

// Writes {"id","source"} JSONL. Throws ConfigError for count < 1.
void generateSyntheticCorpus(int count, uint64_t seed, const std::string& outPath);

size_t templateFamilyCount();

}  // namespace equivar
