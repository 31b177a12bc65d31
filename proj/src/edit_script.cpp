#include "soldiff/edit_script.hpp"

#include "working_tree.hpp"

#include "json.hpp"

#include <sstream>

namespace soldiff {

std::string_view toString(EditKind kind) {
  switch (kind) {
  case EditKind::Insert:
    return "insert";
  case EditKind::Delete:
    return "delete";
  case EditKind::Update:
    return "update";
  case EditKind::Move:
    return "move";
  }
  return "unknown";
}

ApplyError::ApplyError(std::size_t actionIndex, const std::string &reason)
    : std::runtime_error("action " + std::to_string(actionIndex) + ": " + reason),
      actionIndex_(actionIndex), reason_(reason) {}

namespace {

// Longest common subsequence of two id sequences under `eq`, as index pairs.
template <typename Equal>
std::vector<std::pair<std::size_t, std::size_t>> lcsIndices(const std::vector<NodeId> &xs,
                                                            const std::vector<NodeId> &ys,
                                                            Equal eq) {
  const std::size_t n = xs.size(), k = ys.size();
  std::vector<std::vector<std::uint32_t>> table(n + 1, std::vector<std::uint32_t>(k + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = k; j-- > 0;)
      table[i][j] = eq(xs[i], ys[j]) ? table[i + 1][j + 1] + 1
                                     : std::max(table[i + 1][j], table[i][j + 1]);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0, j = 0; i < n && j < k;) {
    if (eq(xs[i], ys[j])) {
      out.emplace_back(i++, j++);
    } else if (table[i + 1][j] >= table[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

// Per destination node: does its subtree contain no mapped node?
std::vector<bool> fullyUnmapped(const SyntaxTree &dst, const MappingStore &m) {
  std::vector<bool> out(dst.nodeCount(), true);
  for (NodeId id = static_cast<NodeId>(dst.nodeCount()); id-- > 0;) {
    if (m.hasDst(id))
      out[id] = false;
    if (!out[id] && dst.node(id).parent != kNoNode)
      out[dst.node(id).parent] = false;
  }
  return out;
}

class ScriptGenerator {
public:
  ScriptGenerator(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m)
      : src_(src), dst_(dst), m_(m), work_(src), dstToWork_(dst.nodeCount(), kNoNode),
        workToDst_(work_.handleCount(), kNoNode), dstInOrder_(dst.nodeCount(), false),
        workInOrder_(work_.handleCount(), false), fullyUnmapped_(fullyUnmapped(dst, m)) {
    for (auto [s, d] : m.pairs()) {
      dstToWork_[d] = s;
      workToDst_[s] = d;
    }
  }

  EditScript run() {
    for (NodeId x = 0; x < dst_.nodeCount(); ++x) {
      const NodeId z = partnerOfParent(x);
      NodeId w = dstToWork_[x];
      if (w == kNoNode) {
        const std::size_t k = findPos(x);
        if (fullyUnmapped_[x])
          w = insertSubtree(x, z, k);
        else
          w = insertNode(x, z, k);
      } else {
        const SyntaxNode &xn = dst_.node(x);
        if (work_.at(w).label != xn.label) {
          EditAction a;
          a.kind = EditKind::Update;
          a.node = ref(w);
          a.newLabel = xn.label;
          script_.actions.push_back(std::move(a));
          work_.at(w).label = xn.label;
        }
        if (work_.at(w).parent != z)
          move(w, x, z);
      }
      workInOrder_[w] = true;
      dstInOrder_[x] = true;
      alignChildren(w, x);
    }
    for (NodeId s : src_.postorder()) {
      if (m_.hasSrc(s))
        continue;
      const NodeId p = src_.node(s).parent;
      if (p != kNoNode && !m_.hasSrc(p))
        continue;
      EditAction a;
      a.kind = EditKind::Delete;
      a.node = ref(s);
      script_.actions.push_back(std::move(a));
      work_.remove(s);
    }
    return std::move(script_);
  }

private:
  NodeRef ref(NodeId h) const {
    const detail::WorkNode &n = work_.at(h);
    return NodeRef{h, n.type, n.label, n.span};
  }

  NodeId partnerOfParent(NodeId x) const {
    const NodeId y = dst_.node(x).parent;
    return y == kNoNode ? work_.virtualRoot() : dstToWork_[y];
  }

  std::size_t findPos(NodeId x) const {
    const NodeId y = dst_.node(x).parent;
    if (y == kNoNode)
      return 0;
    NodeId v = kNoNode;
    for (NodeId c : dst_.node(y).children) {
      if (c == x)
        break;
      if (dstInOrder_[c])
        v = c;
    }
    if (v == kNoNode)
      return 0;
    return work_.indexOf(dstToWork_[v]) + 1;
  }

  void link(NodeId w, NodeId x) {
    if (workToDst_.size() <= w) {
      workToDst_.resize(w + 1, kNoNode);
      workInOrder_.resize(w + 1, false);
    }
    workToDst_[w] = x;
    dstToWork_[x] = w;
  }

  NodeId insertSubtree(NodeId x, NodeId parent, std::size_t pos) {
    DraftNode subtree = dst_.toDraft(x);
    const NodeId h = work_.insert(subtree, parent, pos);
    const std::uint32_t size = dst_.subtreeSize(x);
    for (std::uint32_t k = 0; k < size; ++k) {
      link(h + k, x + k);
      // Descendants arrive complete; nothing can be out of order below x.
      workInOrder_[h + k] = true;
      dstInOrder_[x + k] = true;
    }
    pushInsert(h, parent, pos, std::move(subtree));
    return h;
  }

  NodeId insertNode(NodeId x, NodeId parent, std::size_t pos) {
    const SyntaxNode &xn = dst_.node(x);
    DraftNode bare{xn.type, xn.label, xn.span, {}};
    const NodeId h = work_.insert(bare, parent, pos);
    link(h, x);
    pushInsert(h, parent, pos, std::move(bare));
    return h;
  }

  void pushInsert(NodeId h, NodeId parent, std::size_t pos, DraftNode subtree) {
    EditAction a;
    a.kind = EditKind::Insert;
    a.node = ref(h);
    a.parent = ref(parent);
    a.position = pos;
    a.subtree = std::move(subtree);
    script_.actions.push_back(std::move(a));
  }

  void move(NodeId w, NodeId x, NodeId parent) {
    const NodeId oldParent = work_.at(w).parent;
    const std::size_t oldIndex = work_.indexOf(w);
    work_.detach(w);
    const std::size_t k = findPos(x);
    work_.attach(w, parent, k);
    if (oldParent == parent && oldIndex == k)
      return;
    EditAction a;
    a.kind = EditKind::Move;
    a.node = ref(w);
    a.parent = ref(parent);
    a.position = k;
    script_.actions.push_back(std::move(a));
  }

  void alignChildren(NodeId w, NodeId x) {
    for (NodeId c : work_.at(w).children)
      workInOrder_[c] = false;
    for (NodeId c : dst_.node(x).children)
      dstInOrder_[c] = false;

    std::vector<NodeId> s1;
    for (NodeId c : work_.at(w).children) {
      const NodeId p = workToDst_[c];
      if (p != kNoNode && dst_.node(p).parent == x)
        s1.push_back(c);
    }
    std::vector<NodeId> s2;
    for (NodeId c : dst_.node(x).children) {
      const NodeId p = dstToWork_[c];
      if (p != kNoNode && work_.at(p).parent == w)
        s2.push_back(c);
    }
    const auto common =
        lcsIndices(s1, s2, [&](NodeId a, NodeId b) { return workToDst_[a] == b; });
    std::vector<bool> inLcs(s1.size(), false);
    for (auto [i, j] : common) {
      inLcs[i] = true;
      workInOrder_[s1[i]] = true;
      dstInOrder_[s2[j]] = true;
    }
    for (std::size_t i = 0; i < s1.size(); ++i) {
      if (inLcs[i])
        continue;
      const NodeId a = s1[i];
      const NodeId b = workToDst_[a];
      move(a, b, w);
      workInOrder_[a] = true;
      dstInOrder_[b] = true;
    }
  }

  const SyntaxTree &src_;
  const SyntaxTree &dst_;
  const MappingStore &m_;
  detail::WorkingTree work_;
  std::vector<NodeId> dstToWork_;
  std::vector<NodeId> workToDst_;
  std::vector<bool> dstInOrder_;
  std::vector<bool> workInOrder_;
  std::vector<bool> fullyUnmapped_;
  EditScript script_;
};

} // namespace

EditScript generateEditScript(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m) {
  checkMapping(src, dst, m);
  return ScriptGenerator(src, dst, m).run();
}

std::size_t scriptCost(const SyntaxTree &src, const SyntaxTree &dst, const MappingStore &m) {
  checkMapping(src, dst, m);
  const auto unmappedBelow = fullyUnmapped(dst, m);
  std::size_t cost = 0;

  for (NodeId y = 0; y < dst.nodeCount(); ++y) {
    if (m.hasDst(y))
      continue;
    const NodeId p = dst.node(y).parent;
    if (p == kNoNode || !unmappedBelow[p])
      ++cost; // insert
  }
  for (NodeId x = 0; x < src.nodeCount(); ++x) {
    if (m.hasSrc(x))
      continue;
    const NodeId p = src.node(x).parent;
    if (p == kNoNode || m.hasSrc(p))
      ++cost; // delete
  }
  for (auto [s, d] : m.pairs()) {
    if (src.node(s).label != dst.node(d).label)
      ++cost; // update
    const NodeId ps = src.node(s).parent;
    const NodeId pd = dst.node(d).parent;
    const bool sameParent = ps == kNoNode ? pd == kNoNode : pd != kNoNode && m.dstOf(ps) == pd;
    if (!sameParent)
      ++cost; // move to a new parent

    // Reordering among children that keep their parent.
    std::vector<NodeId> s1;
    for (NodeId c : src.node(s).children)
      if (m.hasSrc(c) && dst.node(m.dstOf(c)).parent == d)
        s1.push_back(c);
    if (s1.size() < 2)
      continue;
    std::vector<NodeId> s2;
    for (NodeId c : dst.node(d).children)
      if (m.hasDst(c) && src.node(m.srcOf(c)).parent == s)
        s2.push_back(c);
    const auto common = lcsIndices(s1, s2, [&](NodeId a, NodeId b) { return m.dstOf(a) == b; });
    cost += s1.size() - common.size();
  }
  return cost;
}

SyntaxTree applyEditScript(const SyntaxTree &src, const EditScript &script) {
  detail::WorkingTree work(src);
  const NodeId virtualRoot = work.virtualRoot();
  for (std::size_t i = 0; i < script.actions.size(); ++i) {
    const EditAction &a = script.actions[i];
    const NodeId h = a.node.handle;
    const auto requireNode = [&](NodeId id, const char *what) {
      if (!work.alive(id) || id == virtualRoot)
        throw ApplyError(i, std::string(what) + " " + std::to_string(id) + " is absent");
    };
    switch (a.kind) {
    case EditKind::Insert: {
      if (!work.alive(a.parent.handle))
        throw ApplyError(i, "parent " + std::to_string(a.parent.handle) + " is absent");
      if (a.position > work.at(a.parent.handle).children.size())
        throw ApplyError(i, "position " + std::to_string(a.position) + " is out of range");
      if (h != work.nextHandle())
        throw ApplyError(i, "inserted node handle " + std::to_string(h) + " does not follow " +
                                std::to_string(work.nextHandle() - 1));
      const DraftNode subtree = a.subtree.type.empty()
                                    ? DraftNode{a.node.type, a.node.label, {}, {}}
                                    : a.subtree;
      work.insert(subtree, a.parent.handle, a.position);
      break;
    }
    case EditKind::Delete:
      requireNode(h, "node");
      work.remove(h);
      break;
    case EditKind::Update:
      requireNode(h, "node");
      work.at(h).label = a.newLabel;
      break;
    case EditKind::Move: {
      requireNode(h, "node");
      if (!work.alive(a.parent.handle))
        throw ApplyError(i, "parent " + std::to_string(a.parent.handle) + " is absent");
      if (work.isAncestorOrSelf(h, a.parent.handle))
        throw ApplyError(i, "cannot move a node below itself");
      const NodeId oldParent = work.at(h).parent;
      const std::size_t oldIndex = work.indexOf(h);
      work.detach(h);
      if (a.position > work.at(a.parent.handle).children.size()) {
        work.attach(h, oldParent, oldIndex);
        throw ApplyError(i, "position " + std::to_string(a.position) + " is out of range");
      }
      work.attach(h, a.parent.handle, a.position);
      break;
    }
    }
  }
  const auto &roots = work.at(virtualRoot).children;
  if (roots.empty())
    return SyntaxTree();
  if (roots.size() > 1)
    throw ApplyError(script.actions.size(), "result has " + std::to_string(roots.size()) +
                                                " root nodes");
  return SyntaxTree(work.toDraft(roots.front()), "");
}

std::size_t editDistance(const EditScript &script) { return script.actions.size(); }

ActionCounts countActions(const EditScript &script) {
  ActionCounts c;
  for (const EditAction &a : script.actions) {
    switch (a.kind) {
    case EditKind::Insert:
      ++c.inserts;
      break;
    case EditKind::Delete:
      ++c.deletes;
      break;
    case EditKind::Update:
      ++c.updates;
      break;
    case EditKind::Move:
      ++c.moves;
      break;
    }
  }
  return c;
}

namespace {

std::string describe(const NodeRef &r) { return soldiff::describe(r.type, r.label, r.span); }

std::string xmlEscape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    case '\n':
      out += "&#10;";
      break;
    case '\r':
      out += "&#13;";
      break;
    case '\t':
      out += "&#9;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

std::string toXml(const EditScript &script) {
  std::ostringstream out;
  for (const EditAction &a : script.actions) {
    out << '<' << toString(a.kind) << "-node tree=\"" << xmlEscape(describe(a.node)) << '"';
    if (a.kind == EditKind::Update)
      out << " label=\"" << xmlEscape(a.newLabel) << '"';
    if (a.kind == EditKind::Insert || a.kind == EditKind::Move)
      out << " parent=\"" << xmlEscape(describe(a.parent)) << "\" at=\"" << a.position << '"';
    out << "/>\n";
  }
  return out.str();
}

std::string toJson(const EditScript &script) {
  auto arr = nlohmann::ordered_json::array();
  for (const EditAction &a : script.actions) {
    nlohmann::ordered_json j;
    j["kind"] = toString(a.kind);
    j["nodeType"] = a.node.type;
    j["oldLabel"] = a.node.label;
    j["span"] = {a.node.span.start, a.node.span.end};
    j["newLabel"] = a.kind == EditKind::Update ? nlohmann::ordered_json(a.newLabel) : nullptr;
    const bool placed = a.kind == EditKind::Insert || a.kind == EditKind::Move;
    j["parent"] = placed ? nlohmann::ordered_json(describe(a.parent)) : nullptr;
    j["position"] = placed ? nlohmann::ordered_json(a.position) : nullptr;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string toText(const EditScript &script) {
  std::ostringstream out;
  for (const EditAction &a : script.actions) {
    out << toString(a.kind) << ' ' << describe(a.node);
    switch (a.kind) {
    case EditKind::Update:
      out << " -> " << a.newLabel;
      break;
    case EditKind::Insert:
    case EditKind::Move:
      out << " into " << describe(a.parent) << " at " << a.position;
      break;
    case EditKind::Delete:
      break;
    }
    out << '\n';
  }
  return out.str();
}

} // namespace

std::string serialize(const EditScript &script, ScriptFormat format) {
  switch (format) {
  case ScriptFormat::Xml:
    return toXml(script);
  case ScriptFormat::Json:
    return toJson(script);
  case ScriptFormat::Text:
    return toText(script);
  }
  return {};
}

} // namespace soldiff
