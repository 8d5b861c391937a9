#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace equivar {

using Json = nlohmann::json;

// Read a JSONL file, calling `fn(lineIndex, record)` per non-empty line.
// Throws IoError on missing file, DataError on malformed JSON.
void readJsonl(const std::string& path, const std::function<void(size_t, const Json&)>& fn);

std::vector<Json> readJsonlAll(const std::string& path);

// Serialize one record per line. Overwrites.
void writeJsonl(const std::string& path, const std::vector<Json>& records);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& contents);

}  // namespace equivar
