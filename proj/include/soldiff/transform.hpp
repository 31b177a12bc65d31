#pragma once

#include "soldiff/tree.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace soldiff {

/// Declarative CST-to-AST rules.
///
/// - flatten: the node becomes a leaf labelled with the source text of its span.
/// - alias:   the node type is renamed (`source -> target`).
/// - ignore:  the node and its whole subtree are dropped.
///
/// Rules are matched against both the original and the aliased node type.
struct TransformRuleSet {
  std::set<std::string> flattenTypes;
  std::map<std::string, std::string> aliasMap;
  std::set<std::string> ignoreTypes;

  friend bool operator==(const TransformRuleSet &, const TransformRuleSet &) = default;
};

class RuleFileError : public std::runtime_error {
public:
  RuleFileError(std::uint32_t line, const std::string &message);
  std::uint32_t line() const { return line_; }

private:
  std::uint32_t line_;
};

/// Throws RuleFileError (line 0) if the collections overlap or aliases chain.
void validateRules(const TransformRuleSet &rules);

SyntaxTree applyTransforms(const SyntaxTree &cst, const TransformRuleSet &rules);

TransformRuleSet defaultSolidityRules();

/// Rule file grammar:
///
///     # comment
///     flatten:
///       number_literal
///     alias:
///       constructor_definition -> function_definition
///     ignore:
///       comment
///
/// Entries may also be written inline: `flatten: [a, b]`.
TransformRuleSet parseRules(const std::string &text);
TransformRuleSet loadRules(const std::string &path);
std::string formatRules(const TransformRuleSet &rules);

} // namespace soldiff
