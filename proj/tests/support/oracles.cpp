#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace oracles {

using soldiff::DraftNode;
using soldiff::kNoNode;
using soldiff::MappingStore;
using soldiff::NodeId;
using soldiff::SyntaxTree;

SyntaxTree randomTree(std::mt19937 &rng, std::size_t maxNodes, const std::vector<std::string> &types,
                      const std::vector<std::string> &labels) {
  const std::size_t n = 1 + rng() % maxNodes;
  std::vector<std::size_t> parent(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t k = 1; k < n; ++k) {
    parent[k] = rng() % k;
    auto &siblings = children[parent[k]];
    siblings.insert(siblings.begin() + static_cast<std::ptrdiff_t>(rng() % (siblings.size() + 1)), k);
  }
  std::vector<std::string> type(n), label(n);
  for (std::size_t k = 0; k < n; ++k) {
    type[k] = types[rng() % types.size()];
    label[k] = labels[rng() % labels.size()];
  }
  std::function<DraftNode(std::size_t)> build = [&](std::size_t k) {
    DraftNode d{type[k], label[k], soldiff::SourceSpan::synthetic(), {}};
    for (std::size_t c : children[k])
      d.children.push_back(build(c));
    return d;
  };
  return SyntaxTree(build(0), "");
}

namespace {

std::size_t lcsOf(const std::vector<NodeId> &a, const std::vector<NodeId> &b,
                  const std::function<bool(NodeId, NodeId)> &eq) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = eq(a[i - 1], b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool anyMappedBelow(const SyntaxTree &t, NodeId id, const std::function<bool(NodeId)> &mapped) {
  if (mapped(id))
    return true;
  for (NodeId c : t.node(id).children)
    if (anyMappedBelow(t, c, mapped))
      return true;
  return false;
}

} // namespace

std::size_t chawatheCost(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m) {
  std::size_t cost = 0;
  const auto dstMapped = [&](NodeId y) { return m.hasDst(y); };

  // Inserts: walk the destination; a wholly unmapped subtree costs one.
  std::function<void(NodeId)> walkDst = [&](NodeId y) {
    if (!m.hasDst(y)) {
      ++cost;
      if (!anyMappedBelow(dst, y, dstMapped))
        return;
    }
    for (NodeId c : dst.node(y).children)
      walkDst(c);
  };
  walkDst(dst.root());

  // Deletes: a maximal unmapped source region hanging off a mapped node
  // (or the root) costs one.
  std::function<void(NodeId, bool)> walkSrc = [&](NodeId x, bool parentMapped) {
    if (!m.hasSrc(x) && parentMapped)
      ++cost;
    for (NodeId c : src.node(x).children)
      walkSrc(c, m.hasSrc(x));
  };
  walkSrc(src.root(), true);

  for (NodeId x = 0; x < src.nodeCount(); ++x) {
    if (!m.hasSrc(x))
      continue;
    const NodeId y = m.dstOf(x);
    if (src.node(x).label != dst.node(y).label)
      ++cost;
    const NodeId px = src.node(x).parent, py = dst.node(y).parent;
    const bool rootPair = px == kNoNode && py == kNoNode;
    if (!rootPair && (px == kNoNode || py == kNoNode || m.dstOf(px) != py))
      ++cost;
    std::vector<NodeId> a, b;
    for (NodeId c : src.node(x).children)
      if (m.hasSrc(c) && dst.node(m.dstOf(c)).parent == y)
        a.push_back(c);
    for (NodeId c : dst.node(y).children)
      if (m.hasDst(c) && src.node(m.srcOf(c)).parent == x)
        b.push_back(c);
    cost += a.size() - lcsOf(a, b, [&](NodeId u, NodeId v) { return m.dstOf(u) == v; });
  }
  return cost;
}

std::optional<BruteForceResult> bruteForceMinimum(const SyntaxTree &src, const SyntaxTree &dst,
                                                  std::size_t budget) {
  BruteForceResult best;
  best.bestCost = static_cast<std::size_t>(-1);
  MappingStore current(src.nodeCount(), dst.nodeCount());
  std::vector<std::pair<NodeId, NodeId>> chosen;
  std::vector<bool> used(dst.nodeCount(), false);
  bool exceeded = false;

  std::function<void(NodeId)> recurse = [&](NodeId x) {
    if (exceeded)
      return;
    if (x == src.nodeCount()) {
      if (++best.mappingsTried > budget) {
        exceeded = true;
        return;
      }
      MappingStore m(src.nodeCount(), dst.nodeCount());
      for (auto [a, b] : chosen)
        m.link(a, b);
      const std::size_t c = chawatheCost(src, dst, m);
      if (c < best.bestCost) {
        best.bestCost = c;
        best.bestMapping = m;
      }
      return;
    }
    recurse(x + 1);
    for (NodeId y = 0; y < dst.nodeCount(); ++y) {
      if (used[y] || src.node(x).type != dst.node(y).type)
        continue;
      used[y] = true;
      chosen.emplace_back(x, y);
      recurse(x + 1);
      chosen.pop_back();
      used[y] = false;
    }
  };
  recurse(0);
  if (exceeded)
    return std::nullopt;
  return best;
}

std::size_t lcsLength(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
  return t[a.size()][b.size()];
}

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    cur += c;
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

std::string randomText(std::mt19937 &rng, std::size_t maxLines, std::size_t vocabulary) {
  const std::size_t n = rng() % (maxLines + 1);
  std::string out;
  for (std::size_t k = 0; k < n; ++k) {
    out += "line " + std::to_string(rng() % vocabulary);
    if (k + 1 < n || rng() % 4 != 0)
      out += '\n';
  }
  return out;
}

} // namespace oracles
