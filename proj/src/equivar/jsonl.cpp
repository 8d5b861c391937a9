#include "equivar/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "equivar/error.hpp"

namespace equivar {

void readJsonl(const std::string& path, const std::function<void(size_t, const Json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  size_t idx = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw DataError(path + ":" + std::to_string(idx + 1) + ": malformed JSON");
    fn(idx, j);
    ++idx;
  }
}

std::vector<Json> readJsonlAll(const std::string& path) {
  std::vector<Json> out;
  readJsonl(path, [&out](size_t, const Json& j) { out.push_back(j); });
  return out;
}

void writeJsonl(const std::string& path, const std::vector<Json>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& r : records) out << r.dump() << "\n";
  if (!out) throw IoError("write failed: " + path);
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace equivar
