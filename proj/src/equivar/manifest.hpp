#pragma once

#include <string>
#include <vector>

#include "equivar/jsonl.hpp"

namespace equivar {

// Content hash tag ("fnv64:<hex>") for reproducibility audits.
std::string contentHash(const std::string& path);

// Run manifest written next to each primary output as
// `<output>.manifest.json`: command, config echo, seed, input hashes, and
// wall time. The manifest is metadata; the output file itself stays
// byte-deterministic.
void writeManifest(const std::string& primaryOutput, const std::string& command,
                   const Json& configEcho, uint64_t seed,
                   const std::vector<std::string>& inputPaths,
                   const std::vector<std::string>& outputPaths, double wallTimeSec);

}  // namespace equivar
