#include "soldiff/matcher.hpp"

#include "soldiff/edit_script.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace soldiff {

void MappingStore::link(NodeId src, NodeId dst) {
  if (src >= srcToDst_.size() || dst >= dstToSrc_.size())
    throw InvalidMapping("mapping pair (" + std::to_string(src) + ", " + std::to_string(dst) +
                         ") is out of range");
  if (srcToDst_[src] != kNoNode || dstToSrc_[dst] != kNoNode)
    throw InvalidMapping("node already mapped in pair (" + std::to_string(src) + ", " +
                         std::to_string(dst) + ")");
  srcToDst_[src] = dst;
  dstToSrc_[dst] = src;
  ++count_;
}

std::vector<std::pair<NodeId, NodeId>> MappingStore::pairs() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(count_);
  for (NodeId s = 0; s < srcToDst_.size(); ++s)
    if (srcToDst_[s] != kNoNode)
      out.emplace_back(s, srcToDst_[s]);
  return out;
}

void checkMapping(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m) {
  if (m.srcSize() != src.nodeCount() || m.dstSize() != dst.nodeCount())
    throw InvalidMapping("mapping was built for trees of a different size");
  for (auto [s, d] : m.pairs()) {
    if (m.srcOf(d) != s)
      throw InvalidMapping("mapping is not bijective");
    if (src.node(s).type != dst.node(d).type)
      throw InvalidMapping("mapped nodes " + describe(src, s) + " and " + describe(dst, d) +
                           " have different types");
  }
}

void MatcherConfig::validate() const {
  if (minHeight < 1)
    throw std::invalid_argument("minHeight must be at least 1");
  if (!(minDice >= 0.0 && minDice <= 1.0))
    throw std::invalid_argument("minDice must lie in [0, 1]");
}

double diceSimilarity(const SyntaxTree &src, NodeId a, const SyntaxTree &dst, NodeId b,
                      const MappingStore &m) {
  const std::size_t descA = src.subtreeSize(a) - 1;
  const std::size_t descB = dst.subtreeSize(b) - 1;
  if (descA + descB == 0)
    return 1.0;
  std::size_t common = 0;
  for (NodeId x = a + 1; x < a + src.subtreeSize(a); ++x) {
    const NodeId y = m.dstOf(x);
    if (y != kNoNode && dst.isDescendant(y, b))
      ++common;
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(descA + descB);
}

namespace {

void linkSubtrees(const SyntaxTree &src, NodeId a, const SyntaxTree &, NodeId b,
                  MappingStore &m) {
  // Isomorphic subtrees have identical preorder layouts.
  const std::uint32_t size = src.subtreeSize(a);
  for (std::uint32_t k = 0; k < size; ++k)
    if (!m.hasSrc(a + k) && !m.hasDst(b + k))
      m.link(a + k, b + k);
}

/// Height-ordered worklist of subtree roots.
class HeightQueue {
public:
  HeightQueue(const SyntaxTree &tree, std::uint32_t minHeight) : tree_(tree), minHeight_(minHeight) {
    push(tree.root());
  }

  bool empty() const { return queue_.empty(); }
  std::uint32_t peekHeight() const { return queue_.top().first; }

  std::vector<NodeId> popAll() {
    std::vector<NodeId> out;
    const auto h = peekHeight();
    while (!queue_.empty() && queue_.top().first == h) {
      out.push_back(queue_.top().second);
      queue_.pop();
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void open(NodeId id) {
    for (NodeId c : tree_.node(id).children)
      push(c);
  }

private:
  void push(NodeId id) {
    if (tree_.height(id) >= minHeight_)
      queue_.emplace(tree_.height(id), id);
  }

  const SyntaxTree &tree_;
  std::uint32_t minHeight_;
  // Max-heap on height; among equal heights the smallest id surfaces first.
  struct Order {
    bool operator()(const std::pair<std::uint32_t, NodeId> &a,
                    const std::pair<std::uint32_t, NodeId> &b) const {
      return a.first != b.first ? a.first < b.first : a.second > b.second;
    }
  };
  std::priority_queue<std::pair<std::uint32_t, NodeId>,
                      std::vector<std::pair<std::uint32_t, NodeId>>, Order>
      queue_;
};

} // namespace

MappingStore matchTopDown(const SyntaxTree &src, const SyntaxTree &dst, const MatcherConfig &cfg) {
  cfg.validate();
  MappingStore m(src.nodeCount(), dst.nodeCount());
  if (src.empty() || dst.empty())
    return m;

  HeightQueue srcQueue(src, cfg.minHeight);
  HeightQueue dstQueue(dst, cfg.minHeight);
  std::vector<std::pair<NodeId, NodeId>> candidates;

  while (!srcQueue.empty() && !dstQueue.empty()) {
    const auto hs = srcQueue.peekHeight();
    const auto hd = dstQueue.peekHeight();
    if (hs > hd) {
      for (NodeId t : srcQueue.popAll())
        srcQueue.open(t);
      continue;
    }
    if (hd > hs) {
      for (NodeId t : dstQueue.popAll())
        dstQueue.open(t);
      continue;
    }
    const auto srcLevel = srcQueue.popAll();
    const auto dstLevel = dstQueue.popAll();
    std::unordered_map<std::uint64_t, std::vector<NodeId>> dstByHash;
    for (NodeId t : dstLevel)
      dstByHash[dst.hash(t)].push_back(t);
    std::unordered_set<NodeId> dstMatched;
    for (NodeId t1 : srcLevel) {
      bool matched = false;
      auto it = dstByHash.find(src.hash(t1));
      if (it != dstByHash.end()) {
        for (NodeId t2 : it->second) {
          if (isomorphic(src, t1, dst, t2)) {
            candidates.emplace_back(t1, t2);
            dstMatched.insert(t2);
            matched = true;
          }
        }
      }
      if (!matched)
        srcQueue.open(t1);
    }
    for (NodeId t2 : dstLevel)
      if (!dstMatched.contains(t2))
        dstQueue.open(t2);
  }

  // Unique pairs first, then ambiguous ones by parent similarity.
  std::unordered_map<NodeId, std::size_t> srcDegree;
  std::unordered_map<NodeId, std::size_t> dstDegree;
  for (auto [s, d] : candidates) {
    ++srcDegree[s];
    ++dstDegree[d];
  }
  std::vector<std::pair<NodeId, NodeId>> ambiguous;
  for (auto [s, d] : candidates) {
    if (srcDegree[s] == 1 && dstDegree[d] == 1)
      linkSubtrees(src, s, dst, d, m);
    else
      ambiguous.emplace_back(s, d);
  }
  if (!ambiguous.empty()) {
    std::vector<std::pair<double, std::pair<NodeId, NodeId>>> scored;
    scored.reserve(ambiguous.size());
    for (auto [s, d] : ambiguous) {
      const NodeId ps = src.node(s).parent;
      const NodeId pd = dst.node(d).parent;
      const double dice = ps == kNoNode || pd == kNoNode ? 0.0 : diceSimilarity(src, ps, dst, pd, m);
      scored.push_back({dice, {s, d}});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto &a, const auto &b) {
      if (a.first != b.first)
        return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto &[dice, pair] : scored) {
      auto [s, d] = pair;
      if (!m.hasSrc(s) && !m.hasDst(d))
        linkSubtrees(src, s, dst, d, m);
    }
  }
  return m;
}

namespace {

class BottomUpMatcher {
public:
  BottomUpMatcher(const SyntaxTree &src, const SyntaxTree &dst, const MatcherConfig &cfg,
                  MappingStore &m)
      : src_(src), dst_(dst), cfg_(cfg), m_(m) {}

  void run() {
    for (NodeId t1 : src_.postorder()) {
      if (m_.hasSrc(t1))
        continue;
      if (t1 == src_.root()) {
        const NodeId t2 = dst_.root();
        if (!m_.hasDst(t2) && src_.node(t1).type == dst_.node(t2).type) {
          m_.link(t1, t2);
          recover(t1, t2);
        }
        continue;
      }
      if (src_.node(t1).isLeaf())
        continue;
      const NodeId best = bestCandidate(t1);
      if (best != kNoNode) {
        m_.link(t1, best);
        recover(t1, best);
      }
    }
  }

private:
  NodeId bestCandidate(NodeId t1) const {
    std::unordered_set<NodeId> seen;
    NodeId best = kNoNode;
    double bestDice = -1.0;
    const std::string &type = src_.node(t1).type;
    for (NodeId x = t1 + 1; x < t1 + src_.subtreeSize(t1); ++x) {
      const NodeId y = m_.dstOf(x);
      if (y == kNoNode)
        continue;
      for (NodeId p = dst_.node(y).parent; p != kNoNode; p = dst_.node(p).parent) {
        if (!seen.insert(p).second)
          break;
        if (p == dst_.root() || m_.hasDst(p) || dst_.node(p).type != type)
          continue;
        const double dice = diceSimilarity(src_, t1, dst_, p, m_);
        if (dice > bestDice || (dice == bestDice && p < best)) {
          bestDice = dice;
          best = p;
        }
      }
    }
    return bestDice >= cfg_.minDice ? best : kNoNode;
  }

  void recover(NodeId a, NodeId b) {
    if (src_.subtreeSize(a) + dst_.subtreeSize(b) <= cfg_.maxRecoverySize) {
      addZhangShashaMapping(src_, a, dst_, b, m_);
      return;
    }
    lcsRecover(a, b);
  }

  template <typename Equal>
  std::vector<std::pair<NodeId, NodeId>> lcs(const std::vector<NodeId> &xs,
                                             const std::vector<NodeId> &ys, Equal eq) const {
    const std::size_t n = xs.size(), k = ys.size();
    std::vector<std::vector<std::uint32_t>> table(n + 1, std::vector<std::uint32_t>(k + 1, 0));
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t j = k; j-- > 0;)
        table[i][j] = eq(xs[i], ys[j]) ? table[i + 1][j + 1] + 1
                                       : std::max(table[i + 1][j], table[i][j + 1]);
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::size_t i = 0, j = 0; i < n && j < k;) {
      if (eq(xs[i], ys[j])) {
        out.emplace_back(xs[i++], ys[j++]);
      } else if (table[i + 1][j] >= table[i][j + 1]) {
        ++i;
      } else {
        ++j;
      }
    }
    return out;
  }

  std::vector<NodeId> unmappedChildren(const SyntaxTree &tree, NodeId id, bool isSrc) const {
    std::vector<NodeId> out;
    for (NodeId c : tree.node(id).children)
      if (isSrc ? !m_.hasSrc(c) : !m_.hasDst(c))
        out.push_back(c);
    return out;
  }

  void lcsRecover(NodeId a, NodeId b) {
    auto xs = unmappedChildren(src_, a, true);
    auto ys = unmappedChildren(dst_, b, false);
    for (auto [x, y] : lcs(xs, ys, [&](NodeId x, NodeId y) { return isomorphic(src_, x, dst_, y); }))
      linkSubtrees(src_, x, dst_, y, m_);

    xs = unmappedChildren(src_, a, true);
    ys = unmappedChildren(dst_, b, false);
    for (auto [x, y] : lcs(xs, ys, [&](NodeId x, NodeId y) {
           return src_.node(x).type == dst_.node(y).type;
         })) {
      m_.link(x, y);
      recover(x, y);
    }
  }

  const SyntaxTree &src_;
  const SyntaxTree &dst_;
  const MatcherConfig &cfg_;
  MappingStore &m_;
};

// Largest number of candidate mappings the exhaustive tier enumerates.
constexpr std::size_t kExhaustiveBudget = 1'000'000;

/// Minimum-cost extension of `base` over tiny trees.
class ExhaustiveCompletion {
public:
  ExhaustiveCompletion(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &base)
      : src_(src), dst_(dst), base_(base), best_(base) {
    for (NodeId s = 0; s < src.nodeCount(); ++s)
      if (!base.hasSrc(s))
        freeSrc_.push_back(s);
    for (NodeId d = 0; d < dst.nodeCount(); ++d)
      if (!base.hasDst(d))
        freeDst_.push_back(d);
  }

  /// Type-consistent partial injections between the free nodes, saturated
  /// just above the budget.
  std::size_t candidateCount() const {
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> perType;
    for (NodeId s : freeSrc_)
      ++perType[src_.node(s).type].first;
    for (NodeId d : freeDst_)
      ++perType[dst_.node(d).type].second;
    std::size_t total = 1;
    for (const auto &[type, counts] : perType) {
      const auto [a, b] = counts;
      // sum_k C(a,k) * C(b,k) * k!
      std::size_t sum = 0;
      std::size_t term = 1;
      for (std::size_t k = 0; k <= std::min(a, b); ++k) {
        sum += term;
        term = term * (a - k) * (b - k) / (k + 1);
        if (sum > kExhaustiveBudget)
          return kExhaustiveBudget + 1;
      }
      total *= sum;
      if (total > kExhaustiveBudget)
        return kExhaustiveBudget + 1;
    }
    return total;
  }

  MappingStore run() {
    bestCost_ = scriptCost(src_, dst_, base_);
    std::vector<std::pair<NodeId, NodeId>> chosen;
    std::vector<bool> used(freeDst_.size(), false);
    search(0, chosen, used);
    return best_;
  }

private:
  void search(std::size_t index, std::vector<std::pair<NodeId, NodeId>> &chosen,
              std::vector<bool> &used) {
    if (index == freeSrc_.size()) {
      MappingStore candidate = base_;
      for (auto [s, d] : chosen)
        candidate.link(s, d);
      const std::size_t cost = scriptCost(src_, dst_, candidate);
      if (cost < bestCost_) {
        bestCost_ = cost;
        best_ = std::move(candidate);
      }
      return;
    }
    const NodeId s = freeSrc_[index];
    for (std::size_t k = 0; k < freeDst_.size(); ++k) {
      if (used[k] || src_.node(s).type != dst_.node(freeDst_[k]).type)
        continue;
      used[k] = true;
      chosen.emplace_back(s, freeDst_[k]);
      search(index + 1, chosen, used);
      chosen.pop_back();
      used[k] = false;
    }
    search(index + 1, chosen, used);
  }

  const SyntaxTree &src_;
  const SyntaxTree &dst_;
  const MappingStore &base_;
  MappingStore best_;
  std::size_t bestCost_ = std::numeric_limits<std::size_t>::max();
  std::vector<NodeId> freeSrc_;
  std::vector<NodeId> freeDst_;
};

} // namespace

MappingStore matchBottomUp(const SyntaxTree &src, const SyntaxTree &dst,
                           const MappingStore &anchors, const MatcherConfig &cfg) {
  cfg.validate();
  checkMapping(src, dst, anchors);
  MappingStore m = anchors;
  if (src.empty() || dst.empty())
    return m;
  if (src.nodeCount() + dst.nodeCount() <= cfg.exhaustiveLimit) {
    // Anchors are not necessarily part of an optimal mapping, so search
    // from scratch when that stays within budget, else extend the anchors.
    const MappingStore empty(src.nodeCount(), dst.nodeCount());
    ExhaustiveCompletion scratch(src, dst, empty);
    if (scratch.candidateCount() <= kExhaustiveBudget)
      return scratch.run();
    ExhaustiveCompletion completion(src, dst, m);
    if (completion.candidateCount() <= kExhaustiveBudget)
      return completion.run();
  }
  BottomUpMatcher(src, dst, cfg, m).run();
  return m;
}

MappingStore matchTrees(const SyntaxTree &src, const SyntaxTree &dst, const MatcherConfig &cfg) {
  return matchBottomUp(src, dst, matchTopDown(src, dst, cfg), cfg);
}

} // namespace soldiff
