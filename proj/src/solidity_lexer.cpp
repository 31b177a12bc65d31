#include "solidity_lexer.hpp"

#include <array>
#include <cctype>

namespace soldiff {

ParseError::ParseError(std::int64_t position, std::uint32_t line,
                       std::uint32_t column, const std::string &message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      position_(position), line_(line), column_(column), detail_(message) {}

namespace detail {

namespace {

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool isIdentPart(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool isDigit(char c) { return c >= '0' && c <= '9'; }

// Longest operators first.
constexpr std::array<std::string_view, 26> kMultiCharPunct = {
    ">>>=", "<<=", ">>=", ">>>", "**", "=>", "==", "!=", "<=", ">=",
    "&&",   "||",  "++",  "--",  "+=", "-=", "*=", "/=", "%=", "|=",
    "&=",   "^=",  "<<",  ">>",  "->", ":="};

constexpr std::string_view kSingleCharPunct = "()[]{};,.?:=+-*/%!~<>&|^@";

} // namespace

std::pair<std::uint32_t, std::uint32_t> lineColumn(std::string_view source,
                                                   std::int64_t offset) {
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  const auto limit = std::min<std::int64_t>(offset, static_cast<std::int64_t>(source.size()));
  for (std::int64_t i = 0; i < limit; ++i) {
    if (source[static_cast<std::size_t>(i)] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void throwParseError(std::string_view source, std::int64_t offset,
                     const std::string &message) {
  auto [line, column] = lineColumn(source, offset);
  throw ParseError(offset, line, column, message);
}

LexedSource lexSolidity(std::string_view src) {
  LexedSource out;
  const std::size_t n = src.size();
  std::size_t i = 0;

  auto push = [&](TokenKind kind, std::size_t start, std::size_t end) {
    out.tokens.push_back(Token{kind, src.substr(start, end - start),
                               SourceSpan{static_cast<std::int64_t>(start),
                                          static_cast<std::int64_t>(end)}});
  };

  auto lexQuoted = [&](std::size_t start, std::size_t quotePos) {
    const char quote = src[quotePos];
    std::size_t j = quotePos + 1;
    while (j < n && src[j] != quote) {
      if (src[j] == '\n')
        throwParseError(src, static_cast<std::int64_t>(start), "unterminated string literal");
      if (src[j] == '\\')
        ++j;
      ++j;
    }
    if (j >= n)
      throwParseError(src, static_cast<std::int64_t>(start), "unterminated string literal");
    return j + 1;
  };

  while (i < n) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      std::size_t j = i;
      while (j < n && src[j] != '\n')
        ++j;
      // Keep a trailing \r out of the comment so CRLF files match LF ones.
      std::size_t end = j;
      if (end > i && src[end - 1] == '\r')
        --end;
      out.comments.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(end)});
      i = j;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      const auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos)
        throwParseError(src, static_cast<std::int64_t>(i), "unterminated block comment");
      out.comments.push_back(
          {static_cast<std::int64_t>(i), static_cast<std::int64_t>(close + 2)});
      i = close + 2;
      continue;
    }
    if (isIdentStart(c)) {
      std::size_t j = i + 1;
      while (j < n && isIdentPart(src[j]))
        ++j;
      const auto word = src.substr(i, j - i);
      if ((word == "hex" || word == "unicode") && j < n && (src[j] == '"' || src[j] == '\'')) {
        const auto end = lexQuoted(i, j);
        push(word == "hex" ? TokenKind::HexString : TokenKind::UnicodeString, i, end);
        i = end;
        continue;
      }
      push(TokenKind::Identifier, i, j);
      i = j;
      continue;
    }
    if (isDigit(c) || (c == '.' && i + 1 < n && isDigit(src[i + 1]))) {
      std::size_t j = i;
      if (c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
        j = i + 2;
        while (j < n && (std::isxdigit(static_cast<unsigned char>(src[j])) || src[j] == '_'))
          ++j;
      } else {
        while (j < n && (isDigit(src[j]) || src[j] == '_'))
          ++j;
        if (j + 1 < n && src[j] == '.' && isDigit(src[j + 1])) {
          ++j;
          while (j < n && (isDigit(src[j]) || src[j] == '_'))
            ++j;
        } else if (j < n && src[j] == '.' && j == i) {
          ++j;
          while (j < n && (isDigit(src[j]) || src[j] == '_'))
            ++j;
        }
        if (j < n && (src[j] == 'e' || src[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < n && src[k] == '-')
            ++k;
          if (k < n && isDigit(src[k])) {
            j = k;
            while (j < n && (isDigit(src[j]) || src[j] == '_'))
              ++j;
          }
        }
      }
      if (j < n && isIdentStart(src[j]))
        throwParseError(src, static_cast<std::int64_t>(j), "invalid character in number literal");
      push(TokenKind::Number, i, j);
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      const auto end = lexQuoted(i, i);
      push(TokenKind::String, i, end);
      i = end;
      continue;
    }
    bool matched = false;
    for (std::string_view op : kMultiCharPunct) {
      if (src.substr(i, op.size()) == op) {
        push(TokenKind::Punct, i, i + op.size());
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    if (kSingleCharPunct.find(c) != std::string_view::npos) {
      push(TokenKind::Punct, i, i + 1);
      ++i;
      continue;
    }
    throwParseError(src, static_cast<std::int64_t>(i),
                    std::string("unexpected character '") + c + "'");
  }
  out.tokens.push_back(Token{TokenKind::Eof, src.substr(n, 0),
                             SourceSpan{static_cast<std::int64_t>(n), static_cast<std::int64_t>(n)}});
  return out;
}

} // namespace detail
} // namespace soldiff
