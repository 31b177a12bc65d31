#pragma once

// Reference implementations used only as test oracles. They are written
// independently of the library code paths they check.

#include "soldiff/matcher.hpp"
#include "soldiff/tree.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracles {

/// Random ordered tree with 1..maxNodes nodes; types and labels are drawn
/// from the given alphabets.
soldiff::SyntaxTree randomTree(std::mt19937 &rng, std::size_t maxNodes,
                               const std::vector<std::string> &types,
                               const std::vector<std::string> &labels);

/// Number of actions a Chawathe-style script needs for mapping `m`:
/// inserts of maximal unmapped destination subtrees (one action each) and
/// of unmapped nodes above mapped ones, deletes of maximal unmapped source
/// subtrees, label updates, parent-changing moves and the children that
/// fall outside a longest order-preserving alignment among siblings.
std::size_t chawatheCost(const soldiff::SyntaxTree &src, const soldiff::SyntaxTree &dst,
                         const soldiff::MappingStore &m);

struct BruteForceResult {
  std::size_t bestCost = 0;
  soldiff::MappingStore bestMapping;
  std::size_t mappingsTried = 0;
};

/// Minimum chawatheCost over every type-consistent partial injection.
/// Returns nullopt if more than `budget` mappings would be enumerated.
std::optional<BruteForceResult> bruteForceMinimum(const soldiff::SyntaxTree &src,
                                                  const soldiff::SyntaxTree &dst,
                                                  std::size_t budget = 5'000'000);

/// Quadratic dynamic-programming LCS length.
std::size_t lcsLength(const std::vector<std::string> &a, const std::vector<std::string> &b);

/// Splits on '\n', keeping terminators (same convention as the baseline).
std::vector<std::string> lines(const std::string &text);

/// Random text of 0..maxLines lines over a small vocabulary, so that lines
/// repeat and alignments are ambiguous.
std::string randomText(std::mt19937 &rng, std::size_t maxLines, std::size_t vocabulary);

} // namespace oracles
