#pragma once

#include "soldiff/matcher.hpp"
#include "soldiff/tree.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace soldiff {

enum class EditKind { Insert, Delete, Update, Move };

std::string_view toString(EditKind kind);

/// A node as seen by an action. `handle` addresses the node in the working
/// tree that the script is replayed on: source nodes keep their source id,
/// `src.nodeCount()` is the virtual parent of the root, and inserted nodes
/// get consecutive handles after it in insertion (preorder) order.
struct NodeRef {
  NodeId handle = kNoNode;
  std::string type;
  std::string label;
  SourceSpan span;
};

struct EditAction {
  EditKind kind = EditKind::Update;
  NodeRef node;
  /// Insert and move: the new parent and child index (counted after the
  /// node has been detached from its old position).
  NodeRef parent;
  std::size_t position = 0;
  /// Update only.
  std::string newLabel;
  /// Insert only: the inserted node, with its children when a whole new
  /// subtree is inserted at once.
  DraftNode subtree;
};

struct EditScript {
  std::vector<EditAction> actions;
  std::string sourceTreeId;
  std::string destTreeId;

  bool empty() const { return actions.empty(); }
  std::size_t size() const { return actions.size(); }
};

struct ActionCounts {
  std::size_t inserts = 0;
  std::size_t deletes = 0;
  std::size_t updates = 0;
  std::size_t moves = 0;

  std::size_t total() const { return inserts + deletes + updates + moves; }
  friend bool operator==(const ActionCounts &, const ActionCounts &) = default;
};

class ApplyError : public std::runtime_error {
public:
  ApplyError(std::size_t actionIndex, const std::string &reason);
  std::size_t actionIndex() const { return actionIndex_; }
  const std::string &reason() const { return reason_; }

private:
  std::size_t actionIndex_;
  std::string reason_;
};

/// Throws InvalidMapping if `m` does not satisfy the mapping invariants for
/// these trees.
///
/// Counting rules:
///  - an unmapped destination subtree without mapped nodes is one insert;
///  - an unmapped source node whose parent is mapped is one delete (its
///    whole remaining subtree goes with it);
///  - update and move on the same node are two actions.
EditScript generateEditScript(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m);

/// Number of actions generateEditScript(src, dst, m) would produce,
/// computed directly from the mapping.
std::size_t scriptCost(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m);

/// Replays the script on `src`. Inserted nodes carry synthetic spans.
SyntaxTree applyEditScript(const SyntaxTree &src, const EditScript &script);

std::size_t editDistance(const EditScript &script);
ActionCounts countActions(const EditScript &script);

enum class ScriptFormat { Xml, Json, Text };

std::string serialize(const EditScript &script, ScriptFormat format);

} // namespace soldiff
