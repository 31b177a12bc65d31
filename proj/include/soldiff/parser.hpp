#pragma once

#include "soldiff/tree.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace soldiff {

/// Identifier of the grammar implemented by SolidityParser.
inline constexpr std::string_view kGrammarVersion = "solidity-0.8.x/soldiff-rd-1";

class ParseError : public std::runtime_error {
public:
  ParseError(std::int64_t position, std::uint32_t line, std::uint32_t column,
             const std::string &message);

  std::int64_t position() const { return position_; }
  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  const std::string &detail() const { return detail_; }

private:
  std::int64_t position_;
  std::uint32_t line_;
  std::uint32_t column_;
  std::string detail_;
};

/// Source text to concrete syntax tree. Implementations are not required
/// to be thread-safe; give every worker its own instance.
class ParserAdapter {
public:
  virtual ~ParserAdapter() = default;

  /// Throws ParseError on the first syntax error.
  virtual SyntaxTree parse(std::string source) = 0;
  virtual std::string_view grammarVersion() const = 0;
};

/// Hand-written recursive-descent parser for Solidity 0.8.x. Every token
/// (including punctuation and comments) appears in the resulting tree.
class SolidityParser final : public ParserAdapter {
public:
  SyntaxTree parse(std::string source) override;
  std::string_view grammarVersion() const override { return kGrammarVersion; }
};

std::unique_ptr<ParserAdapter> makeDefaultParser();

SyntaxTree parseSolidity(std::string source);

} // namespace soldiff
