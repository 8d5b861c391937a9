#include "equivar/token.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <unordered_set>

#include "equivar/error.hpp"

namespace equivar {

namespace {

const std::unordered_set<std::string>& keywordSet() {
  static const std::unordered_set<std::string> kw = {
      "var",  "let",   "const", "function",  "if",       "else", "while",
      "for",  "return", "true", "false",     "null",     "undefined",
  };
  return kw;
}

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool isIdentPart(char c) { return isIdentStart(c) || std::isdigit(static_cast<unsigned char>(c)); }
bool isDigit(char c) { return c >= '0' && c <= '9'; }

// Punctuators, longest first within each leading character.
const std::array<const char*, 29> kPuncts = {
    "===", "!==", "==", "!=", "<=", ">=", "&&", "||", "=>", "+=", "-=", "*=", "/=", "%=",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "+", "-", "*", "/", "%",
    ":",
};

}  // namespace

bool isKeyword(const std::string& word) { return keywordSet().count(word) > 0; }

bool isUnsupportedWord(const std::string& word) {
  static const std::unordered_set<std::string> words = {
      "class",  "new",    "this",   "typeof",  "do",     "switch",   "case",
      "try",    "catch",  "finally", "throw",  "async",  "await",    "delete",
      "instanceof", "void", "yield", "import", "export", "super",    "break",
      "continue", "with",  "debugger", "in",   "of",
  };
  return words.count(word) > 0;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = src.size();
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    Token t;
    t.begin = i;
    if (isIdentStart(c)) {
      size_t j = i + 1;
      while (j < n && isIdentPart(src[j])) ++j;
      t.lexeme = src.substr(i, j - i);
      t.kind = isKeyword(t.lexeme) ? TokKind::Keyword : TokKind::Identifier;
      t.end = j;
      i = j;
      out.push_back(std::move(t));
      continue;
    }
    if (isDigit(c) || (c == '.' && i + 1 < n && isDigit(src[i + 1]))) {
      size_t j = i;
      while (j < n && isDigit(src[j])) ++j;
      if (j < n && src[j] == '.') {
        ++j;
        while (j < n && isDigit(src[j])) ++j;
      }
      if (j < n && (src[j] == 'e' || src[j] == 'E')) {
        size_t k = j + 1;
        if (k < n && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < n && isDigit(src[k])) {
          j = k;
          while (j < n && isDigit(src[j])) ++j;
        } else {
          throw LexError(j, "malformed exponent");
        }
      }
      t.lexeme = src.substr(i, j - i);
      t.kind = TokKind::Number;
      double v = 0.0;
      auto res = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
      if (res.ec != std::errc()) throw LexError(i, "malformed number");
      t.num = v;
      t.end = j;
      i = j;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      size_t j = i + 1;
      std::string value;
      while (true) {
        if (j >= n || src[j] == '\n') throw LexError(i, "unterminated string");
        char d = src[j];
        if (d == quote) break;
        if (d == '\\') {
          if (j + 1 >= n) throw LexError(i, "unterminated string");
          char e = src[j + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case 'r': value += '\r'; break;
            case '\\': value += '\\'; break;
            case '\'': value += '\''; break;
            case '"': value += '"'; break;
            case '0': value += '\0'; break;
            default: throw LexError(j, "unsupported escape");
          }
          j += 2;
        } else {
          value += d;
          ++j;
        }
      }
      t.lexeme = src.substr(i, j + 1 - i);
      t.kind = TokKind::String;
      t.value = std::move(value);
      t.end = j + 1;
      i = j + 1;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      size_t j = i + 2;
      while (j < n && src[j] != '\n') ++j;
      t.kind = TokKind::Comment;
      t.lexeme = src.substr(i, j - i);
      t.value = src.substr(i + 2, j - (i + 2));
      t.blockComment = false;
      t.end = j;
      i = j;
      out.push_back(std::move(t));
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      size_t j = i + 2;
      while (true) {
        if (j + 1 >= n) throw LexError(i, "unterminated comment");
        if (src[j] == '*' && src[j + 1] == '/') break;
        ++j;
      }
      t.kind = TokKind::Comment;
      t.lexeme = src.substr(i, j + 2 - i);
      t.value = src.substr(i + 2, j - (i + 2));
      t.blockComment = true;
      t.end = j + 2;
      i = j + 2;
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      size_t len = std::char_traits<char>::length(p);
      if (src.compare(i, len, p) == 0) {
        t.kind = TokKind::Punct;
        t.lexeme = p;
        t.end = i + len;
        i += len;
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (matched) continue;
    // Lone <, >, = and ! are valid after longer forms failed to match.
    if (c == '<' || c == '>' || c == '=' || c == '!') {
      t.kind = TokKind::Punct;
      t.lexeme = std::string(1, c);
      t.end = i + 1;
      ++i;
      out.push_back(std::move(t));
      continue;
    }
    throw LexError(i, std::string("illegal character '") + c + "'");
  }
  Token eof;
  eof.kind = TokKind::Eof;
  eof.begin = eof.end = n;
  out.push_back(std::move(eof));
  return out;
}

std::vector<Token> lexCode(const std::string& src) {
  std::vector<Token> all = lex(src);
  std::vector<Token> out;
  out.reserve(all.size());
  for (auto& t : all)
    if (t.kind != TokKind::Comment) out.push_back(std::move(t));
  return out;
}

std::vector<std::string> normalizedLexemes(const std::string& src) {
  std::vector<std::string> out;
  for (auto& t : lexCode(src)) {
    if (t.kind == TokKind::Eof) break;
    out.push_back(t.lexeme);
  }
  return out;
}

}  // namespace equivar
