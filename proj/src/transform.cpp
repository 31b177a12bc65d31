#include "soldiff/transform.hpp"

#include <fstream>
#include <sstream>

namespace soldiff {

RuleFileError::RuleFileError(std::uint32_t line, const std::string &message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

void validateRules(const TransformRuleSet &rules) {
  auto clash = [](const std::string &type, const char *a, const char *b) {
    throw RuleFileError(0, "node type '" + type + "' appears in both " + a + " and " + b);
  };
  for (const auto &t : rules.flattenTypes) {
    if (rules.ignoreTypes.contains(t))
      clash(t, "flatten", "ignore");
    if (rules.aliasMap.contains(t))
      clash(t, "flatten", "alias");
  }
  for (const auto &t : rules.ignoreTypes)
    if (rules.aliasMap.contains(t))
      clash(t, "ignore", "alias");
  for (const auto &[from, to] : rules.aliasMap) {
    if (rules.aliasMap.contains(to))
      throw RuleFileError(0, "alias chain: '" + from + "' -> '" + to + "' -> '" +
                                 rules.aliasMap.at(to) + "'");
  }
}

namespace {

// Returns false when the node is dropped.
bool transformInto(const SyntaxTree &cst, NodeId id, const TransformRuleSet &rules,
                   DraftNode &out) {
  const SyntaxNode &node = cst.node(id);
  const auto alias = rules.aliasMap.find(node.type);
  const std::string &type = alias == rules.aliasMap.end() ? node.type : alias->second;
  if (rules.ignoreTypes.contains(node.type) || rules.ignoreTypes.contains(type))
    return false;
  out.type = type;
  out.span = node.span;
  if (rules.flattenTypes.contains(node.type) || rules.flattenTypes.contains(type)) {
    if (node.span.isSynthetic())
      out.label = node.label;
    else
      out.label = cst.sourceText().substr(static_cast<std::size_t>(node.span.start),
                                          static_cast<std::size_t>(node.span.length()));
    return true;
  }
  out.label = node.label;
  out.children.reserve(node.children.size());
  for (NodeId c : node.children) {
    DraftNode child;
    if (transformInto(cst, c, rules, child))
      out.children.push_back(std::move(child));
  }
  return true;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

SyntaxTree applyTransforms(const SyntaxTree &cst, const TransformRuleSet &rules) {
  if (cst.empty())
    return cst;
  DraftNode root;
  if (!transformInto(cst, cst.root(), rules, root)) {
    // An ignored root leaves an empty tree of the same type.
    root = DraftNode{cst.node(cst.root()).type, "", cst.node(cst.root()).span, {}};
  }
  return SyntaxTree(root, cst.sourceText());
}

TransformRuleSet defaultSolidityRules() {
  TransformRuleSet rules;
  rules.flattenTypes = {"number_literal", "string_literal",   "hex_literal",
                        "boolean_literal", "primitive_type",  "pragma_value",
                        "visibility",      "state_mutability", "storage_location"};
  rules.aliasMap = {
      {"constructor_definition", "function_definition"},
      {"fallback_receive_definition", "function_definition"},
      {"augmented_assignment_expression", "assignment_expression"},
      {"unchecked_block", "block_statement"},
  };
  rules.ignoreTypes = {"comment", ";", ",", "{", "}", "(", ")"};
  return rules;
}

TransformRuleSet parseRules(const std::string &text) {
  TransformRuleSet rules;
  enum class Section { None, Flatten, Alias, Ignore } section = Section::None;
  std::istringstream in(text);
  std::string raw;
  std::uint32_t lineNo = 0;

  auto addEntry = [&](const std::string &entry) {
    if (entry.empty())
      return;
    switch (section) {
    case Section::None:
      throw RuleFileError(lineNo, "entry '" + entry + "' outside of a section");
    case Section::Flatten:
      rules.flattenTypes.insert(entry);
      break;
    case Section::Ignore:
      rules.ignoreTypes.insert(entry);
      break;
    case Section::Alias: {
      const auto arrow = entry.find("->");
      if (arrow == std::string::npos)
        throw RuleFileError(lineNo, "alias entry must be 'source -> target'");
      auto from = trim(entry.substr(0, arrow));
      auto to = trim(entry.substr(arrow + 2));
      if (from.empty() || to.empty())
        throw RuleFileError(lineNo, "alias entry must be 'source -> target'");
      if (rules.aliasMap.contains(from))
        throw RuleFileError(lineNo, "duplicate alias for '" + from + "'");
      rules.aliasMap.emplace(std::move(from), std::move(to));
      break;
    }
    }
  };

  while (std::getline(in, raw)) {
    ++lineNo;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty())
      continue;
    if (line.rfind("- ", 0) == 0)
      line = trim(line.substr(2));
    const auto colon = line.find(':');
    const std::string head = colon == std::string::npos ? "" : trim(line.substr(0, colon));
    if (head == "flatten" || head == "alias" || head == "ignore") {
      section = head == "flatten" ? Section::Flatten
                : head == "alias" ? Section::Alias
                                  : Section::Ignore;
      std::string rest = trim(line.substr(colon + 1));
      if (rest.empty())
        continue;
      if (rest.front() != '[' || rest.back() != ']')
        throw RuleFileError(lineNo, "inline entries must be written as [a, b, ...]");
      std::istringstream items(rest.substr(1, rest.size() - 2));
      std::string item;
      while (std::getline(items, item, ','))
        addEntry(trim(item));
      continue;
    }
    if (!head.empty()) {
      const std::string rest = trim(line.substr(colon + 1));
      if (rest.empty() || rest.front() == '[')
        throw RuleFileError(lineNo, "unknown section '" + head + "'");
    }
    addEntry(line);
  }

  try {
    validateRules(rules);
  } catch (const RuleFileError &e) {
    throw RuleFileError(lineNo, e.what());
  }
  return rules;
}

TransformRuleSet loadRules(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw RuleFileError(0, "cannot open rule file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parseRules(buffer.str());
}

std::string formatRules(const TransformRuleSet &rules) {
  std::ostringstream out;
  out << "flatten:\n";
  for (const auto &t : rules.flattenTypes)
    out << "  " << t << '\n';
  out << "alias:\n";
  for (const auto &[from, to] : rules.aliasMap)
    out << "  " << from << " -> " << to << '\n';
  out << "ignore:\n";
  for (const auto &t : rules.ignoreTypes)
    out << "  " << t << '\n';
  return out.str();
}

} // namespace soldiff
