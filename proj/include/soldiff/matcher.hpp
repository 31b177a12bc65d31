#pragma once

#include "soldiff/tree.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace soldiff {

class InvalidMapping : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Bijective correspondence between the nodes of a source and a
/// destination tree.
class MappingStore {
public:
  MappingStore() = default;
  MappingStore(std::size_t srcSize, std::size_t dstSize)
      : srcToDst_(srcSize, kNoNode), dstToSrc_(dstSize, kNoNode) {}

  /// Throws InvalidMapping if either id is out of range or already mapped.
  void link(NodeId src, NodeId dst);

  bool hasSrc(NodeId src) const { return srcToDst_[src] != kNoNode; }
  bool hasDst(NodeId dst) const { return dstToSrc_[dst] != kNoNode; }
  bool has(NodeId src, NodeId dst) const { return srcToDst_[src] == dst && dst != kNoNode; }
  NodeId dstOf(NodeId src) const { return srcToDst_[src]; }
  NodeId srcOf(NodeId dst) const { return dstToSrc_[dst]; }

  std::size_t size() const { return count_; }
  std::size_t srcSize() const { return srcToDst_.size(); }
  std::size_t dstSize() const { return dstToSrc_.size(); }

  /// Pairs ordered by source id.
  std::vector<std::pair<NodeId, NodeId>> pairs() const;

  friend bool operator==(const MappingStore &a, const MappingStore &b) {
    return a.srcToDst_ == b.srcToDst_ && a.dstToSrc_ == b.dstToSrc_;
  }

private:
  std::vector<NodeId> srcToDst_;
  std::vector<NodeId> dstToSrc_;
  std::size_t count_ = 0;
};

/// Throws InvalidMapping unless `m` was sized for these trees and every
/// pair joins nodes of equal type.
void checkMapping(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m);

struct MatcherConfig {
  /// Smallest subtree height anchored by the top-down phase.
  std::uint32_t minHeight = 2;
  /// Container similarity needed by the bottom-up phase.
  double minDice = 0.5;
  /// Largest combined subtree size aligned with exact tree edit distance;
  /// bigger containers fall back to a children LCS.
  std::size_t maxRecoverySize = 100;
  /// When both trees together have at most this many nodes, the bottom-up
  /// phase completes the anchors with a minimum-cost exhaustive search.
  std::size_t exhaustiveLimit = 16;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

MappingStore matchTopDown(const SyntaxTree &src, const SyntaxTree &dst,
                          const MatcherConfig &cfg);

MappingStore matchBottomUp(const SyntaxTree &src, const SyntaxTree &dst,
                           const MappingStore &anchors, const MatcherConfig &cfg);

/// 2 * |mapped descendant pairs| / (|desc(a)| + |desc(b)|); 1 when both
/// nodes are leaves.
double diceSimilarity(const SyntaxTree &src, NodeId a, const SyntaxTree &dst, NodeId b,
                      const MappingStore &m);

MappingStore matchTrees(const SyntaxTree &src, const SyntaxTree &dst,
                        const MatcherConfig &cfg = {});

/// Adds every pair of an optimal ordered tree edit distance alignment of
/// the subtrees rooted at `a` and `b` whose nodes are still unmapped and
/// of equal type.
void addZhangShashaMapping(const SyntaxTree &src, NodeId a, const SyntaxTree &dst, NodeId b,
                           MappingStore &m);

} // namespace soldiff
