#pragma once

#include <string>
#include <vector>

namespace equivar {

enum class TokKind { Identifier, Number, String, Punct, Keyword, Comment, Eof };

struct Token {
  TokKind kind = TokKind::Eof;
  std::string lexeme;     // exact source slice
  size_t begin = 0;       // byte offsets into the source
  size_t end = 0;
  double num = 0.0;       // Number: parsed value
  std::string value;      // String: decoded contents; Comment: interior text
  bool blockComment = false;
};

// Tokenize; comments appear as Comment tokens, whitespace is skipped.
// Throws LexError on illegal characters or unterminated strings/comments.
std::vector<Token> lex(const std::string& src);

// Token stream with comments removed, for token-level comparisons.
std::vector<Token> lexCode(const std::string& src);

// Lexemes of the comment-free stream; the normalization used by the
// dissimilarity metric (whitespace and comments do not contribute).
std::vector<std::string> normalizedLexemes(const std::string& src);

bool isKeyword(const std::string& word);

// Words recognized as introducing constructs outside the subset (class,
// new, this, ...). The parser rejects them with UnsupportedSyntax; renaming
// passes must not generate them either.
bool isUnsupportedWord(const std::string& word);

}  // namespace equivar
