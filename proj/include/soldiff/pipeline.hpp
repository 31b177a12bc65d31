#pragma once

#include "soldiff/edit_script.hpp"
#include "soldiff/matcher.hpp"
#include "soldiff/parser.hpp"
#include "soldiff/transform.hpp"

#include <string>

namespace soldiff {

enum class PairSide { Before, After };

/// A ParseError tagged with the side of the pair it came from.
class PairParseError : public ParseError {
public:
  PairParseError(PairSide side, const ParseError &e)
      : ParseError(e.position(), e.line(), e.column(), e.detail()), side_(side) {}
  PairSide side() const { return side_; }

private:
  PairSide side_;
};

struct DiffOptions {
  TransformRuleSet rules = defaultSolidityRules();
  MatcherConfig matcher;
};

struct DiffOutcome {
  SyntaxTree before;
  SyntaxTree after;
  MappingStore mapping;
  EditScript script;
};

/// parse -> transform -> match -> edit script. Stateless between calls and
/// safe to share across threads (each call uses its own parser).
class DiffEngine {
public:
  explicit DiffEngine(DiffOptions options = {});

  const DiffOptions &options() const { return options_; }

  /// Pruned AST of one source file. Throws ParseError.
  SyntaxTree buildAst(std::string source) const;

  /// Throws PairParseError.
  DiffOutcome diff(std::string before, std::string after) const;

private:
  DiffOptions options_;
};

} // namespace soldiff
