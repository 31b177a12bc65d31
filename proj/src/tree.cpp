#include "soldiff/tree.hpp"

#include <algorithm>
#include <sstream>

namespace soldiff {

namespace {

std::uint64_t fnvMix(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnvMix(std::uint64_t h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xFF;
    h *= kFnvPrime;
  }
  return h;
}

} // namespace

SyntaxTree::SyntaxTree(const DraftNode &root, std::string sourceText)
    : source_(std::move(sourceText)) {
  append(root, kNoNode, 0);
  const auto n = nodes_.size();
  heights_.assign(n, 1);
  hashes_.assign(n, 0);
  sizes_.assign(n, 1);
  postorder_.reserve(n);

  // Children always carry larger ids than their parent, so a reverse sweep
  // visits every child before its parent.
  for (NodeId id = static_cast<NodeId>(n); id-- > 0;) {
    const SyntaxNode &node = nodes_[id];
    std::uint64_t h = fnvMix(kHashSeed, node.type);
    h = fnvMix(h, std::string_view("\x1f", 1));
    h = fnvMix(h, node.label);
    h = fnvMix(h, static_cast<std::uint64_t>(node.children.size()));
    std::uint32_t maxChild = 0;
    for (NodeId c : node.children) {
      h = fnvMix(h, hashes_[c]);
      maxChild = std::max(maxChild, heights_[c]);
      sizes_[id] += sizes_[c];
    }
    hashes_[id] = h;
    heights_[id] = maxChild + 1;
  }

  // Iterative postorder; recursion depth would track source nesting.
  std::vector<std::pair<NodeId, std::size_t>> stack;
  if (n > 0)
    stack.emplace_back(0, 0);
  while (!stack.empty()) {
    auto &[id, next] = stack.back();
    if (next < nodes_[id].children.size()) {
      NodeId child = nodes_[id].children[next++];
      stack.emplace_back(child, 0);
    } else {
      postorder_.push_back(id);
      stack.pop_back();
    }
  }
}

NodeId SyntaxTree::append(const DraftNode &draft, NodeId parent,
                          std::uint32_t depth) {
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(SyntaxNode{draft.type, draft.label, draft.span, id, parent, {}});
  depths_.push_back(depth);
  std::vector<NodeId> children;
  children.reserve(draft.children.size());
  for (const DraftNode &child : draft.children)
    children.push_back(append(child, id, depth + 1));
  nodes_[id].children = std::move(children);
  return id;
}

DraftNode SyntaxTree::toDraft(NodeId id) const {
  const SyntaxNode &n = nodes_[id];
  DraftNode out{n.type, n.label, n.span, {}};
  out.children.reserve(n.children.size());
  for (NodeId c : n.children)
    out.children.push_back(toDraft(c));
  return out;
}

std::uint32_t height(const SyntaxTree &tree, NodeId id) { return tree.height(id); }

std::uint64_t structuralHash(const SyntaxTree &tree, NodeId id) {
  return tree.hash(id);
}

bool isomorphic(const SyntaxTree &a, NodeId aId, const SyntaxTree &b,
                NodeId bId) {
  if (a.hash(aId) != b.hash(bId) || a.subtreeSize(aId) != b.subtreeSize(bId))
    return false;
  // Equal-size subtrees laid out in preorder compare position by position.
  const std::uint32_t size = a.subtreeSize(aId);
  for (std::uint32_t k = 0; k < size; ++k) {
    const SyntaxNode &x = a.node(aId + k);
    const SyntaxNode &y = b.node(bId + k);
    if (x.type != y.type || x.label != y.label ||
        x.children.size() != y.children.size())
      return false;
  }
  return true;
}

std::vector<NodeId> descendants(const SyntaxTree &tree, NodeId id) {
  std::vector<NodeId> out;
  const std::uint32_t size = tree.subtreeSize(id);
  out.reserve(size - 1);
  for (NodeId k = id + 1; k < id + size; ++k)
    out.push_back(k);
  return out;
}

std::string describe(std::string_view type, std::string_view label,
                     SourceSpan span) {
  std::string out(type);
  if (!label.empty()) {
    out += ": ";
    out += label;
  }
  out += " [";
  out += std::to_string(span.start);
  out += ',';
  out += std::to_string(span.end);
  out += ']';
  return out;
}

std::string describe(const SyntaxTree &tree, NodeId id) {
  const SyntaxNode &n = tree.node(id);
  return describe(n.type, n.label, n.span);
}

std::string dumpTree(const SyntaxTree &tree) {
  std::ostringstream out;
  for (const SyntaxNode &n : tree.nodes()) {
    out << std::string(2 * tree.depth(n.id), ' ') << describe(n.type, n.label, n.span)
        << '\n';
  }
  return out.str();
}

} // namespace soldiff
