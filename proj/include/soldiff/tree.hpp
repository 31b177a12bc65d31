#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace soldiff {

/// Half-open byte range `[start, end)` into the UTF-8 source text.
/// Nodes that do not originate from a source file (e.g. nodes created
/// while applying an edit script) carry the synthetic span `[-1,-1]`.
struct SourceSpan {
  std::int64_t start = -1;
  std::int64_t end = -1;

  static constexpr SourceSpan synthetic() { return {-1, -1}; }

  bool isSynthetic() const { return start < 0; }
  std::int64_t length() const { return isSynthetic() ? 0 : end - start; }
  bool contains(const SourceSpan &other) const {
    return !isSynthetic() && !other.isSynthetic() && start <= other.start &&
           other.end <= end;
  }

  friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Mutable tree used while a tree is being produced (parser, transforms,
/// edit-script application). Freeze it into a SyntaxTree once complete.
struct DraftNode {
  std::string type;
  std::string label;
  SourceSpan span;
  std::vector<DraftNode> children;
};

struct SyntaxNode {
  std::string type;
  std::string label;
  SourceSpan span;
  NodeId id = kNoNode;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;

  bool isLeaf() const { return children.empty(); }
};

/// Immutable ordered labeled tree. Node ids are assigned in preorder, so
/// the root is always id 0 and the strict descendants of node `n` are the
/// ids in `(n, n + subtreeSize(n))`.
class SyntaxTree {
public:
  SyntaxTree() = default;
  SyntaxTree(const DraftNode &root, std::string sourceText);

  NodeId root() const { return 0; }
  const SyntaxNode &node(NodeId id) const { return nodes_[id]; }
  const std::vector<SyntaxNode> &nodes() const { return nodes_; }
  std::size_t nodeCount() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::string &sourceText() const { return source_; }

  std::uint32_t height(NodeId id) const { return heights_[id]; }
  std::uint64_t hash(NodeId id) const { return hashes_[id]; }
  std::uint32_t subtreeSize(NodeId id) const { return sizes_[id]; }
  std::uint32_t depth(NodeId id) const { return depths_[id]; }

  bool isDescendant(NodeId candidate, NodeId ancestor) const {
    return candidate > ancestor && candidate < ancestor + sizes_[ancestor];
  }

  /// Ids in postorder (children before parents).
  const std::vector<NodeId> &postorder() const { return postorder_; }

  DraftNode toDraft(NodeId id) const;
  DraftNode toDraft() const { return toDraft(root()); }

private:
  NodeId append(const DraftNode &draft, NodeId parent, std::uint32_t depth);

  std::vector<SyntaxNode> nodes_;
  std::string source_;
  std::vector<std::uint32_t> heights_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> sizes_;
  std::vector<std::uint32_t> depths_;
  std::vector<NodeId> postorder_;
};

// Seed and FNV-1a parameters of the structural hash. Changing any of them
// changes every persisted hash value.
inline constexpr std::uint64_t kHashSeed = 0x5D1FF5EEDULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

std::uint32_t height(const SyntaxTree &tree, NodeId id);

/// Depends only on node types, labels and child order; spans and ids are
/// not hashed. Equal subtrees hash equal; the converse needs isomorphic().
std::uint64_t structuralHash(const SyntaxTree &tree, NodeId id);

bool isomorphic(const SyntaxTree &a, NodeId aId, const SyntaxTree &b,
                NodeId bId);
inline bool isomorphic(const SyntaxTree &a, const SyntaxTree &b) {
  if (a.empty() || b.empty())
    return a.empty() && b.empty();
  return isomorphic(a, a.root(), b, b.root());
}

/// Strict descendants in preorder.
std::vector<NodeId> descendants(const SyntaxTree &tree, NodeId id);

/// `nodeType: label [start,end]`, or `nodeType [start,end]` for nodes
/// without a label.
std::string describe(std::string_view type, std::string_view label,
                     SourceSpan span);
std::string describe(const SyntaxTree &tree, NodeId id);

/// One node per line, two spaces of indentation per depth level.
std::string dumpTree(const SyntaxTree &tree);

} // namespace soldiff
