#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace equivar {

// Base class for all toolkit errors. Subclasses carry enough context to
// report a useful message; CLI maps them to exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct LexError : Error {
  size_t offset;
  LexError(size_t off, const std::string& what)
      : Error("lex error at offset " + std::to_string(off) + ": " + what), offset(off) {}
};

struct ParseError : Error {
  size_t offset;
  std::string expected;
  ParseError(size_t off, const std::string& exp)
      : Error("parse error at offset " + std::to_string(off) + ": expected " + exp),
        offset(off),
        expected(exp) {}
};

struct UnsupportedSyntax : Error {
  std::string construct;
  explicit UnsupportedSyntax(const std::string& c)
      : Error("unsupported syntax: " + c), construct(c) {}
};

struct TransformError : Error {
  std::string transformId;
  std::string reason;
  TransformError(const std::string& id, const std::string& r)
      : Error("transform " + id + " failed: " + r), transformId(id), reason(r) {}
};

struct VocabError : Error {
  explicit VocabError(const std::string& msg) : Error("vocab error: " + msg) {}
};

struct DecodeError : Error {
  explicit DecodeError(const std::string& msg) : Error("decode error: " + msg) {}
};

struct EmptySequence : Error {
  EmptySequence() : Error("empty token sequence") {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

struct ZeroNorm : Error {
  ZeroNorm() : Error("zero-norm vector") {}
};

struct DegenerateLabels : Error {
  explicit DegenerateLabels(const std::string& msg) : Error("degenerate labels: " + msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

struct DataError : Error {
  explicit DataError(const std::string& msg) : Error("data error: " + msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("io error: " + msg) {}
};

}  // namespace equivar
