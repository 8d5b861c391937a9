#include "equivar/manifest.hpp"

#include <cstdio>

#include "equivar/rng.hpp"

namespace equivar {

std::string contentHash(const std::string& path) {
  std::string data = readFile(path);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv64:%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

void writeManifest(const std::string& primaryOutput, const std::string& command,
                   const Json& configEcho, uint64_t seed,
                   const std::vector<std::string>& inputPaths,
                   const std::vector<std::string>& outputPaths, double wallTimeSec) {
  Json inputs = Json::object();
  for (const auto& p : inputPaths) inputs[p] = contentHash(p);
  Json outputs = Json::array();
  for (const auto& p : outputPaths) outputs.push_back(p);
  Json manifest{{"schema_version", 1}, {"command", command},      {"config", configEcho},
                {"seed", seed},        {"inputs", inputs},        {"outputs", outputs},
                {"wall_time_sec", wallTimeSec}};
  writeFile(primaryOutput + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace equivar
