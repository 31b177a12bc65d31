#pragma once

#include "soldiff/parser.hpp"

#include <string_view>
#include <vector>

namespace soldiff::detail {

enum class TokenKind {
  Identifier,
  Number,
  String,
  HexString,
  UnicodeString,
  Punct,
  Eof,
};

struct Token {
  TokenKind kind;
  std::string_view text;
  SourceSpan span;
};

struct LexedSource {
  std::vector<Token> tokens; // always terminated by an Eof token
  std::vector<SourceSpan> comments;
};

/// Throws ParseError on unterminated strings/comments and stray bytes.
LexedSource lexSolidity(std::string_view source);

/// Line and column (both 1-based) of a byte offset.
std::pair<std::uint32_t, std::uint32_t> lineColumn(std::string_view source,
                                                   std::int64_t offset);

[[noreturn]] void throwParseError(std::string_view source, std::int64_t offset,
                                  const std::string &message);

} // namespace soldiff::detail
