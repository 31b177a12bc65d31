#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace fs = std::filesystem;

namespace fixtures {

std::string fixtureDir() { return SOLDIFF_FIXTURE_DIR; }

std::string readText(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void writeText(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<BaseContract> baseContracts() {
  std::vector<BaseContract> out;
  for (const auto &entry : fs::directory_iterator(fixtureDir() + "/contracts"))
    if (entry.path().extension() == ".sol")
      out.push_back({entry.path().stem().string(), readText(entry.path().string())});
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.name < b.name; });
  return out;
}

std::string goldenBefore() { return readText(fixtureDir() + "/golden/simple_storage_before.sol"); }
std::string goldenAfter() { return readText(fixtureDir() + "/golden/simple_storage_after.sol"); }
std::string figureBefore() {
  return readText(fixtureDir() + "/golden/simple_storage_figure_before.sol");
}

namespace {

bool identChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool wordAt(const std::string &src, std::size_t i, const std::string &word) {
  if (src.compare(i, word.size(), word) != 0)
    return false;
  if (i > 0 && identChar(src[i - 1]))
    return false;
  const std::size_t e = i + word.size();
  return e >= src.size() || !identChar(src[e]);
}

std::vector<std::size_t> lineStarts(const std::string &src) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < src.size(); ++i)
    if (src[i] == '\n' && i + 1 < src.size())
      starts.push_back(i + 1);
  return starts;
}

std::string lineAt(const std::string &src, std::size_t start) {
  const auto nl = src.find('\n', start);
  return src.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
}

bool isPragmaLine(const std::string &src, std::size_t pos) {
  const auto start = src.rfind('\n', pos == 0 ? 0 : pos - 1);
  const std::size_t b = start == std::string::npos ? 0 : start + 1;
  return src.compare(b, 6, "pragma") == 0;
}

const std::vector<std::pair<std::string, std::string>> kOperatorSwaps = {
    {" >= ", " <= "}, {" <= ", " >= "}, {" == ", " != "}, {" != ", " == "}, {" + ", " - "},
    {" - ", " + "},   {" * ", " / "},   {" / ", " * "},   {" < ", " > "},   {" > ", " < "},
};

template <typename Fn> void forEachOperator(const std::string &src, Fn fn) {
  const auto mask = maskStringsAndComments(src);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (mask[i])
      continue;
    for (const auto &[from, to] : kOperatorSwaps) {
      if (src.compare(i, from.size(), from) == 0) {
        if (fn(i, from, to))
          return;
        break;
      }
    }
  }
}

template <typename Fn> void forEachLiteral(const std::string &src, Fn fn) {
  const auto mask = maskStringsAndComments(src);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (mask[i] || !std::isdigit(static_cast<unsigned char>(src[i])))
      continue;
    if (i > 0 && (identChar(src[i - 1]) || src[i - 1] == '.'))
      continue;
    std::size_t e = i;
    while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e])))
      ++e;
    const bool bounded = e >= src.size() || (!identChar(src[e]) && src[e] != '.');
    if (bounded && !isPragmaLine(src, i))
      if (fn(i, e))
        return;
    i = e;
  }
}

const std::set<std::string> kKeywords = {
    "indexed", "memory",  "storage",   "calldata", "public",   "private", "internal",
    "external", "payable", "constant", "immutable", "override", "virtual", "returns",
    "view",    "pure",    "msg",       "block",    "this",     "value",   "sender"};

} // namespace

std::vector<bool> maskStringsAndComments(const std::string &src) {
  std::vector<bool> mask(src.size(), false);
  std::size_t i = 0;
  while (i < src.size()) {
    std::size_t end = i;
    if (src.compare(i, 2, "//") == 0) {
      end = src.find('\n', i);
      if (end == std::string::npos)
        end = src.size();
    } else if (src.compare(i, 2, "/*") == 0) {
      end = src.find("*/", i + 2);
      end = end == std::string::npos ? src.size() : end + 2;
    } else if (src[i] == '"' || src[i] == '\'') {
      const char q = src[i];
      end = i + 1;
      while (end < src.size() && src[end] != q) {
        if (src[end] == '\\')
          ++end;
        ++end;
      }
      end = std::min(src.size(), end + 1);
    } else {
      ++i;
      continue;
    }
    for (std::size_t k = i; k < end; ++k)
      mask[k] = true;
    i = end;
  }
  return mask;
}

std::size_t countIdentifier(const std::string &src, const std::string &name) {
  const auto mask = maskStringsAndComments(src);
  std::size_t n = 0;
  for (std::size_t i = 0; i < src.size(); ++i)
    if (!mask[i] && wordAt(src, i, name))
      ++n;
  return n;
}

std::size_t renameIdentifier(std::string &src, const std::string &from, const std::string &to) {
  const auto mask = maskStringsAndComments(src);
  std::string out;
  out.reserve(src.size());
  std::size_t n = 0;
  for (std::size_t i = 0; i < src.size();) {
    if (!mask[i] && wordAt(src, i, from)) {
      out += to;
      i += from.size();
      ++n;
    } else {
      out += src[i++];
    }
  }
  src = std::move(out);
  return n;
}

std::vector<FunctionBlock> functionBlocks(const std::string &src) {
  std::vector<FunctionBlock> blocks;
  std::size_t container = 0;
  bool seenContainer = false;
  const auto starts = lineStarts(src);
  for (std::size_t l = 0; l < starts.size(); ++l) {
    const std::string line = lineAt(src, starts[l]);
    static const std::regex containerRe(R"(^(abstract\s+)?(contract|library|interface)\s)");
    if (std::regex_search(line, containerRe)) {
      container += seenContainer ? 1 : 0;
      seenContainer = true;
      continue;
    }
    if (line.rfind("    function ", 0) != 0)
      continue;
    auto trimmed = line;
    while (!trimmed.empty() && trimmed.back() == ' ')
      trimmed.pop_back();
    if (trimmed.empty() || trimmed.back() != '{')
      continue;
    for (std::size_t k = l + 1; k < starts.size(); ++k) {
      if (lineAt(src, starts[k]) == "    }") {
        FunctionBlock b;
        b.begin = starts[l];
        const auto nl = src.find('\n', starts[k]);
        b.end = nl == std::string::npos ? src.size() : nl + 1;
        b.lines = k - l + 1;
        b.container = container;
        const auto open = line.find('(');
        b.name = line.substr(13, open - 13);
        blocks.push_back(b);
        l = k;
        break;
      }
    }
  }
  return blocks;
}

bool moveFunctionAfter(std::string &src, std::size_t from, std::size_t after) {
  const auto blocks = functionBlocks(src);
  if (after >= blocks.size() || after <= from || blocks[after].container != blocks[from].container)
    return false;
  const FunctionBlock &b = blocks[from];
  const std::string text = src.substr(b.begin, b.end - b.begin);
  src.insert(blocks[after].end, "\n" + text);
  const bool blankAfter = b.end < src.size() && src[b.end] == '\n';
  src.erase(b.begin, b.end - b.begin + (blankAfter ? 1 : 0));
  return true;
}

bool moveFunctionToEnd(std::string &src, std::size_t from) {
  const auto blocks = functionBlocks(src);
  if (from >= blocks.size())
    return false;
  std::size_t last = from;
  for (std::size_t k = from + 1; k < blocks.size(); ++k)
    if (blocks[k].container == blocks[from].container)
      last = k;
  return moveFunctionAfter(src, from, last);
}

bool deleteFunction(std::string &src, std::size_t index) {
  const auto blocks = functionBlocks(src);
  if (index >= blocks.size())
    return false;
  const FunctionBlock &b = blocks[index];
  std::size_t begin = b.begin, end = b.end;
  if (end < src.size() && src[end] == '\n')
    ++end;
  else if (begin >= 2 && src[begin - 1] == '\n' && src[begin - 2] == '\n')
    --begin;
  src.erase(begin, end - begin);
  return true;
}

bool insertFunctionAfter(std::string &src, std::size_t afterBlock, const std::string &name) {
  const auto blocks = functionBlocks(src);
  if (afterBlock >= blocks.size())
    return false;
  const std::string fn = "\n    function " + name +
                         "(uint256 input) public pure returns (uint256) {\n"
                         "        uint256 doubled = input * 2;\n"
                         "        return doubled + 1;\n"
                         "    }\n";
  src.insert(blocks[afterBlock].end, fn);
  return true;
}

std::size_t countLiterals(const std::string &src) {
  std::size_t n = 0;
  forEachLiteral(src, [&](std::size_t, std::size_t) {
    ++n;
    return false;
  });
  return n;
}

bool changeLiteral(std::string &src, std::size_t n) {
  bool done = false;
  std::size_t seen = 0;
  forEachLiteral(src, [&](std::size_t, std::size_t e) {
    if (seen++ != n)
      return false;
    char &d = src[e - 1];
    d = d == '9' ? '8' : static_cast<char>(d + 1);
    done = true;
    return true;
  });
  return done;
}

std::size_t countOperators(const std::string &src) {
  std::size_t n = 0;
  forEachOperator(src, [&](std::size_t, const std::string &, const std::string &) {
    ++n;
    return false;
  });
  return n;
}

bool swapOperator(std::string &src, std::size_t n) {
  std::size_t seen = 0;
  std::size_t at = std::string::npos;
  std::string from, to;
  forEachOperator(src, [&](std::size_t i, const std::string &f, const std::string &t) {
    if (seen++ != n)
      return false;
    at = i;
    from = f;
    to = t;
    return true;
  });
  if (at == std::string::npos)
    return false;
  src.replace(at, from.size(), to);
  return true;
}

std::string breakSyntax(const std::string &src, std::size_t variant) {
  std::string out = src;
  const auto blocks = functionBlocks(src);
  const std::size_t body = blocks.empty() ? 0 : blocks.front().begin;
  switch (variant % 5) {
  case 0: { // drop a statement terminator
    const auto semi = out.find(";\n", out.find('{', body));
    out.erase(semi, 1);
    break;
  }
  case 1: // unbalanced braces
    out.erase(out.rfind('}'), 1);
    break;
  case 2: // stray token
    out.insert(out.find('{', body) + 1, " @@ ");
    break;
  case 3: { // doubled assignment operator
    const auto mask = maskStringsAndComments(out);
    auto eq = out.find(" = ", body);
    while (mask[eq + 1])
      eq = out.find(" = ", eq + 1);
    out.insert(eq + 2, " =");
    break;
  }
  default: // truncated declaration
    out.insert(body, "    function broken(uint256 \n");
    break;
  }
  return out;
}

std::vector<FixturePair> renameFixtures() {
  static const std::vector<std::pair<std::string, std::string>> targets = {
      {"Assembly", "blob"},          {"Assembly", "acc"},
      {"Auction", "pendingReturns"}, {"Auction", "biddingTime"},
      {"Crowdfund", "pledgedAmount"}, {"Crowdfund", "bal"},
      {"Exchange", "amountInWithFee"}, {"Exchange", "factory"},
      {"Game", "REVEAL_TIMEOUT"},    {"Game", "pot"},
      {"MathLib", "WAD"},            {"MathLib", "result"},
      {"MultiSig", "numConfirmationsRequired"}, {"MultiSig", "txIndex"},
      {"Registry", "keys"},          {"Registry", "fee"},
      {"Staking", "finishAt"},       {"Staking", "rewardPerTokenStored"},
      {"Token", "senderBalance"},    {"Token", "allowed"},
      {"Vault", "locked"},           {"Vault", "totalShares"},
      {"Voting", "chairperson"},     {"Voting", "winningVoteCount"},
  };
  std::vector<FixturePair> out;
  const auto bases = baseContracts();
  for (const auto &[contract, ident] : targets) {
    const auto it = std::find_if(bases.begin(), bases.end(),
                                 [&](const auto &b) { return b.name == contract; });
    if (it == bases.end())
      throw std::runtime_error("missing fixture contract " + contract);
    FixturePair p;
    p.id = "rename-" + contract + "-" + ident;
    p.category = "rename";
    p.before = it->text;
    p.after = it->text;
    p.detail = renameIdentifier(p.after, ident, ident + "Renamed");
    if (p.detail < 2)
      throw std::runtime_error("rename target " + ident + " has no references");
    p.expectedDistance = p.detail;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<FixturePair> moveFixtures() {
  std::vector<FixturePair> out;
  for (const auto &base : baseContracts()) {
    const auto blocks = functionBlocks(base.text);
    std::size_t taken = 0;
    for (std::size_t i = 0; i < blocks.size() && taken < 3; ++i) {
      if (blocks[i].lines < 3)
        continue;
      // Relocate past the shortest run of following functions that is at
      // least as long as the moved one, so the line baseline cannot do
      // better by moving the jumped-over code instead.
      std::size_t jumped = 0;
      std::size_t after = i;
      for (std::size_t k = i + 1; k < blocks.size() && blocks[k].container == blocks[i].container;
           ++k) {
        jumped += blocks[k].lines;
        if (jumped >= blocks[i].lines) {
          after = k;
          break;
        }
      }
      if (after == i)
        continue;
      FixturePair p;
      p.id = "move-" + base.name + "-" + blocks[i].name;
      p.category = "move_function";
      p.before = base.text;
      p.after = base.text;
      moveFunctionAfter(p.after, i, after);
      p.expectedDistance = 1;
      p.detail = blocks[i].lines;
      out.push_back(std::move(p));
      ++taken;
      i = after; // spread picks over the contract
    }
  }
  return out;
}

namespace {

std::vector<std::string> renameCandidates(const std::string &src) {
  static const std::regex declRe(
      R"(\b(?:uint256|uint|uint8|uint32|uint64|int256|address|bool|bytes32|string)\s+(?:(?:public|private|internal|memory|storage|calldata|constant|immutable|payable)\s+)*([A-Za-z_][A-Za-z0-9_]*))");
  const auto mask = maskStringsAndComments(src);
  std::set<std::string> names;
  for (auto it = std::sregex_iterator(src.begin(), src.end(), declRe); it != std::sregex_iterator();
       ++it) {
    const auto pos = static_cast<std::size_t>(it->position(1));
    const std::string name = (*it)[1];
    if (!mask[pos] && !kKeywords.contains(name) && countIdentifier(src, name) >= 2)
      names.insert(name);
  }
  return {names.begin(), names.end()};
}

} // namespace

std::string mutateRandomly(std::mt19937 &rng, const std::string &src, int count) {
  std::string out = src;
  for (int m = 0; m < count; ++m) {
    bool applied = false;
    for (int attempt = 0; attempt < 8 && !applied; ++attempt) {
      switch (rng() % 4) {
      case 0:
        if (const auto n = countLiterals(out))
          applied = changeLiteral(out, rng() % n);
        break;
      case 1:
        if (const auto n = countOperators(out))
          applied = swapOperator(out, rng() % n);
        break;
      case 2: {
        const auto names = renameCandidates(out);
        if (!names.empty()) {
          const auto &name = names[rng() % names.size()];
          applied = renameIdentifier(out, name, name + "M" + std::to_string(m)) > 0;
        }
        break;
      }
      default: {
        const auto blocks = functionBlocks(out);
        if (!blocks.empty())
          applied = moveFunctionToEnd(out, rng() % blocks.size());
        break;
      }
      }
    }
  }
  return out;
}

std::vector<FixturePair> mutationCorpus() {
  std::vector<FixturePair> out;
  const auto bases = baseContracts();
  for (std::size_t c = 0; c < bases.size(); ++c) {
    const auto &base = bases[c];
    auto add = [&](const std::string &category, const std::string &tag, std::string after,
                   std::optional<std::size_t> expected, int mutations = 1) {
      FixturePair p;
      p.id = category + "-" + base.name + "-" + tag;
      p.category = category;
      p.mutationCount = mutations;
      p.before = base.text;
      p.after = std::move(after);
      p.expectedDistance = expected;
      out.push_back(std::move(p));
    };

    const std::size_t literals = countLiterals(base.text);
    for (std::size_t k = 0; k < std::min<std::size_t>(4, literals); ++k) {
      std::string after = base.text;
      const std::size_t n = k * literals / std::min<std::size_t>(4, literals);
      changeLiteral(after, n);
      add("literal", std::to_string(n), after, 1);
    }
    const std::size_t operators = countOperators(base.text);
    for (std::size_t k = 0; k < std::min<std::size_t>(4, operators); ++k) {
      std::string after = base.text;
      const std::size_t n = k * operators / std::min<std::size_t>(4, operators);
      swapOperator(after, n);
      add("operator", std::to_string(n), after, 1);
    }
    const auto blocks = functionBlocks(base.text);
    if (!blocks.empty()) {
      for (std::size_t at : {std::size_t{0}, blocks.size() - 1}) {
        std::string after = base.text;
        insertFunctionAfter(after, at, "inserted" + std::to_string(at));
        add("insert_function", std::to_string(at), after, 1);
      }
      for (std::size_t at : {std::size_t{0}, blocks.size() - 1}) {
        std::string after = base.text;
        deleteFunction(after, at);
        add("delete_function", std::to_string(at), after, 1);
      }
    }
    std::mt19937 rng(static_cast<unsigned>(0xC0FFEE + c));
    for (int k = 2; k <= 4; ++k)
      add("stacked", std::to_string(k), mutateRandomly(rng, base.text, k), std::nullopt, k);
  }
  for (auto &p : renameFixtures())
    out.push_back(std::move(p));
  for (auto &p : moveFixtures())
    out.push_back(std::move(p));
  return out;
}

std::string synthesizeContract(std::mt19937 &rng, std::size_t lines) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::ostringstream out;
  const std::size_t vars = 6 + pick(6);
  out << "// SPDX-License-Identifier: MIT\npragma solidity ^0.8.20;\n\n";
  out << "contract Synth" << pick(100000) << " {\n";
  out << "    mapping(address => uint256) public balances;\n";
  out << "    event Updated(address indexed who, uint256 value);\n";
  for (std::size_t v = 0; v < vars; ++v)
    out << "    uint256 public slot" << v << " = " << pick(1000) << ";\n";
  std::size_t written = 6 + vars;
  std::size_t fn = 0;
  auto var = [&] { return "slot" + std::to_string(pick(vars)); };
  const char *ops[] = {"+", "-", "*", "/"};
  const char *cmps[] = {"<", ">", "<=", ">=", "==", "!="};
  while (written + 4 < lines) {
    out << "\n    function step" << fn++ << "(uint256 a, uint256 b) public returns (uint256) {\n";
    out << "        uint256 acc = a " << ops[pick(3)] << " " << pick(50) + 1 << ";\n";
    written += 3;
    const std::size_t statements = 3 + pick(6);
    for (std::size_t s = 0; s < statements && written + 6 < lines; ++s) {
      switch (pick(5)) {
      case 0:
        out << "        acc = acc " << ops[pick(4)] << " " << var() << ";\n";
        written += 1;
        break;
      case 1:
        out << "        if (acc " << cmps[pick(6)] << " b) {\n            " << var()
            << " = acc " << ops[pick(3)] << " " << pick(90) + 1 << ";\n        } else {\n"
            << "            acc += " << pick(10) + 1 << ";\n        }\n";
        written += 5;
        break;
      case 2:
        out << "        for (uint256 i = 0; i < " << pick(8) + 2 << "; i++) {\n"
            << "            acc += i " << ops[pick(3)] << " " << var() << ";\n        }\n";
        written += 3;
        break;
      case 3:
        out << "        balances[msg.sender] += acc " << ops[pick(2)] << " " << pick(7) << ";\n";
        written += 1;
        break;
      default:
        out << "        require(acc " << cmps[pick(6)] << " " << pick(1000)
            << ", \"bound " << pick(100) << "\");\n";
        written += 1;
        break;
      }
    }
    out << "        emit Updated(msg.sender, acc);\n        return acc;\n    }\n";
    written += 4;
  }
  out << "}\n";
  return out.str();
}

std::string writeCorpus(const std::string &dir, const std::vector<FixturePair> &pairs) {
  fs::create_directories(fs::path(dir) / "pairs");
  std::ostringstream manifest;
  manifest << "pairId,before,after,category,mutationCount\n";
  for (const auto &p : pairs) {
    const std::string a = "pairs/" + p.id + ".before.sol";
    const std::string b = "pairs/" + p.id + ".after.sol";
    writeText((fs::path(dir) / a).string(), p.before);
    writeText((fs::path(dir) / b).string(), p.after);
    manifest << p.id << ',' << a << ',' << b << ',' << p.category << ',' << p.mutationCount << '\n';
  }
  const std::string path = (fs::path(dir) / "manifest.csv").string();
  writeText(path, manifest.str());
  return path;
}

std::string scratchDir(const std::string &tag) {
  const fs::path dir = fs::temp_directory_path() /
                       ("soldiff-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

} // namespace fixtures
