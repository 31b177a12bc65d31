#include "soldiff/matcher.hpp"

#include <algorithm>
#include <limits>

namespace soldiff {

namespace {

// Costs are doubled so that a relabel (1) is cheaper than deleting (2) or
// inserting (2) a node; nodes of different types are never relabelled.
constexpr int kDeleteCost = 2;
constexpr int kInsertCost = 2;
constexpr int kRelabelCost = 1;
constexpr int kForbidden = std::numeric_limits<int>::max() / 4;

/// Postorder view of one subtree, 1-based as in the original formulation.
struct ZsTree {
  std::vector<NodeId> nodes;      // postorder index -> node id
  std::vector<int> leftmost;      // postorder index -> postorder index of leftmost leaf
  std::vector<int> keyroots;

  ZsTree(const SyntaxTree &tree, NodeId root) {
    const int n = static_cast<int>(tree.subtreeSize(root));
    nodes.assign(n + 1, kNoNode);
    leftmost.assign(n + 1, 0);
    // Postorder within the subtree, iteratively.
    std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
    std::vector<int> indexOf(n, 0); // offset from root -> postorder index
    int next = 0;
    while (!stack.empty()) {
      auto &[id, child] = stack.back();
      const auto &children = tree.node(id).children;
      if (child < children.size()) {
        NodeId c = children[child++];
        stack.emplace_back(c, 0);
        continue;
      }
      ++next;
      nodes[next] = id;
      indexOf[id - root] = next;
      leftmost[next] = children.empty() ? next : leftmost[indexOf[children.front() - root]];
      stack.pop_back();
    }
    std::vector<bool> seen(n + 1, false);
    for (int i = n; i >= 1; --i) {
      if (!seen[leftmost[i]]) {
        keyroots.push_back(i);
        seen[leftmost[i]] = true;
      }
    }
    std::sort(keyroots.begin(), keyroots.end());
  }

  int size() const { return static_cast<int>(nodes.size()) - 1; }
};

class ZhangShasha {
public:
  ZhangShasha(const SyntaxTree &src, NodeId a, const SyntaxTree &dst, NodeId b)
      : src_(src), dst_(dst), t1_(src, a), t2_(dst, b),
        treeDist_(t1_.size() + 1, std::vector<int>(t2_.size() + 1, 0)),
        forestDist_(t1_.size() + 1, std::vector<int>(t2_.size() + 1, 0)) {}

  std::vector<std::pair<NodeId, NodeId>> alignment() {
    for (int i : t1_.keyroots)
      for (int j : t2_.keyroots)
        computeForestDist(i, j);

    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::vector<std::pair<int, int>> treePairs{{t1_.size(), t2_.size()}};
    bool rootPair = true;
    while (!treePairs.empty()) {
      auto [lastRow, lastCol] = treePairs.back();
      treePairs.pop_back();
      if (!rootPair)
        computeForestDist(lastRow, lastCol);
      rootPair = false;
      const int firstRow = t1_.leftmost[lastRow] - 1;
      const int firstCol = t2_.leftmost[lastCol] - 1;
      int row = lastRow;
      int col = lastCol;
      while (row > firstRow || col > firstCol) {
        if (row > firstRow && forestDist_[row - 1][col] + kDeleteCost == forestDist_[row][col]) {
          --row;
        } else if (col > firstCol &&
                   forestDist_[row][col - 1] + kInsertCost == forestDist_[row][col]) {
          --col;
        } else if (t1_.leftmost[row] - 1 == t1_.leftmost[lastRow] - 1 &&
                   t2_.leftmost[col] - 1 == t2_.leftmost[lastCol] - 1) {
          pairs.emplace_back(t1_.nodes[row], t2_.nodes[col]);
          --row;
          --col;
        } else {
          treePairs.emplace_back(row, col);
          row = t1_.leftmost[row] - 1;
          col = t2_.leftmost[col] - 1;
        }
      }
    }
    return pairs;
  }

private:
  int relabelCost(int i, int j) const {
    const SyntaxNode &x = src_.node(t1_.nodes[i]);
    const SyntaxNode &y = dst_.node(t2_.nodes[j]);
    if (x.type != y.type)
      return kForbidden;
    return x.label == y.label ? 0 : kRelabelCost;
  }

  void computeForestDist(int i, int j) {
    const int li = t1_.leftmost[i];
    const int lj = t2_.leftmost[j];
    forestDist_[li - 1][lj - 1] = 0;
    for (int dj = lj; dj <= j; ++dj)
      forestDist_[li - 1][dj] = forestDist_[li - 1][dj - 1] + kInsertCost;
    for (int di = li; di <= i; ++di) {
      forestDist_[di][lj - 1] = forestDist_[di - 1][lj - 1] + kDeleteCost;
      for (int dj = lj; dj <= j; ++dj) {
        const int viaDelete = forestDist_[di - 1][dj] + kDeleteCost;
        const int viaInsert = forestDist_[di][dj - 1] + kInsertCost;
        if (t1_.leftmost[di] == li && t2_.leftmost[dj] == lj) {
          const int viaRelabel = forestDist_[di - 1][dj - 1] + relabelCost(di, dj);
          forestDist_[di][dj] = std::min({viaDelete, viaInsert, viaRelabel});
          treeDist_[di][dj] = forestDist_[di][dj];
        } else {
          const int viaTree =
              forestDist_[t1_.leftmost[di] - 1][t2_.leftmost[dj] - 1] + treeDist_[di][dj];
          forestDist_[di][dj] = std::min({viaDelete, viaInsert, viaTree});
        }
      }
    }
  }

  const SyntaxTree &src_;
  const SyntaxTree &dst_;
  ZsTree t1_;
  ZsTree t2_;
  std::vector<std::vector<int>> treeDist_;
  std::vector<std::vector<int>> forestDist_;
};

} // namespace

void addZhangShashaMapping(const SyntaxTree &src, NodeId a, const SyntaxTree &dst, NodeId b,
                           MappingStore &m) {
  ZhangShasha zs(src, a, dst, b);
  for (auto [x, y] : zs.alignment()) {
    if (!m.hasSrc(x) && !m.hasDst(y) && src.node(x).type == dst.node(y).type)
      m.link(x, y);
  }
}

} // namespace soldiff
