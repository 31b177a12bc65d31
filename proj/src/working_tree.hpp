#pragma once

// Mutable tree shared by script generation and replay. Handle layout:
// source ids first, then the virtual root, then inserted nodes.

#include "soldiff/tree.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace soldiff::detail {

struct WorkNode {
  std::string type;
  std::string label;
  SourceSpan span;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  bool alive = true;
};

class WorkingTree {
public:
  explicit WorkingTree(const SyntaxTree &src) : virtualRoot_(static_cast<NodeId>(src.nodeCount())) {
    nodes_.reserve(src.nodeCount() + 1);
    for (const SyntaxNode &n : src.nodes()) {
      WorkNode w{n.type, n.label, n.span, n.parent, n.children, true};
      if (w.parent == kNoNode)
        w.parent = virtualRoot_;
      nodes_.push_back(std::move(w));
    }
    WorkNode root{"virtual-root", "", SourceSpan::synthetic(), kNoNode, {}, true};
    if (!src.empty())
      root.children.push_back(src.root());
    nodes_.push_back(std::move(root));
  }

  NodeId virtualRoot() const { return virtualRoot_; }
  NodeId nextHandle() const { return static_cast<NodeId>(nodes_.size()); }
  std::size_t handleCount() const { return nodes_.size(); }

  bool alive(NodeId h) const { return h < nodes_.size() && nodes_[h].alive; }
  WorkNode &at(NodeId h) { return nodes_[h]; }
  const WorkNode &at(NodeId h) const { return nodes_[h]; }

  std::size_t indexOf(NodeId h) const {
    const auto &siblings = nodes_[nodes_[h].parent].children;
    return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), h) - siblings.begin());
  }

  bool isAncestorOrSelf(NodeId anc, NodeId h) const {
    for (NodeId p = h; p != kNoNode; p = nodes_[p].parent)
      if (p == anc)
        return true;
    return false;
  }

  /// Allocates handles for the whole draft in preorder; returns the root's.
  NodeId insert(const DraftNode &draft, NodeId parent, std::size_t pos) {
    const NodeId h = allocate(draft, parent);
    attach(h, parent, pos);
    return h;
  }

  void detach(NodeId h) {
    auto &siblings = nodes_[nodes_[h].parent].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), h));
    nodes_[h].parent = kNoNode;
  }

  void attach(NodeId h, NodeId parent, std::size_t pos) {
    auto &siblings = nodes_[parent].children;
    siblings.insert(siblings.begin() + static_cast<std::ptrdiff_t>(pos), h);
    nodes_[h].parent = parent;
  }

  void remove(NodeId h) {
    detach(h);
    std::vector<NodeId> stack{h};
    while (!stack.empty()) {
      const NodeId n = stack.back();
      stack.pop_back();
      nodes_[n].alive = false;
      for (NodeId c : nodes_[n].children)
        stack.push_back(c);
    }
  }

  DraftNode toDraft(NodeId h) const {
    const WorkNode &n = nodes_[h];
    DraftNode d{n.type, n.label, n.span, {}};
    d.children.reserve(n.children.size());
    for (NodeId c : n.children)
      d.children.push_back(toDraft(c));
    return d;
  }

private:
  NodeId allocate(const DraftNode &draft, NodeId parent) {
    const NodeId h = nextHandle();
    nodes_.push_back(WorkNode{draft.type, draft.label, SourceSpan::synthetic(), parent, {}, true});
    std::vector<NodeId> kids;
    kids.reserve(draft.children.size());
    for (const DraftNode &c : draft.children)
      kids.push_back(allocate(c, h));
    nodes_[h].children = std::move(kids);
    return h;
  }

  NodeId virtualRoot_;
  std::vector<WorkNode> nodes_;
};

} // namespace soldiff::detail
