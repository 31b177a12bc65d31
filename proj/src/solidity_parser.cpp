#include "soldiff/parser.hpp"

#include "solidity_lexer.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

namespace soldiff {

namespace {

using detail::Token;
using detail::TokenKind;

const std::unordered_set<std::string_view> kReserved = {
    "abstract", "anonymous", "as",        "assembly",  "break",     "calldata",
    "catch",    "constant",  "constructor", "continue", "contract", "delete",
    "do",       "else",      "emit",      "enum",      "event",     "external",
    "false",    "for",       "function",  "if",        "immutable", "import",
    "indexed",  "interface", "internal",  "is",        "library",   "mapping",
    "memory",   "modifier",  "new",       "override",  "payable",   "pragma",
    "private",  "public",    "pure",      "return",    "returns",   "storage",
    "struct",   "true",      "try",       "type",      "unchecked", "using",
    "view",     "virtual",   "while"};

const std::unordered_set<std::string_view> kVisibility = {"public", "private", "internal",
                                                          "external"};
const std::unordered_set<std::string_view> kMutability = {"pure", "view", "payable",
                                                          "nonpayable"};
const std::unordered_set<std::string_view> kStorageLocation = {"memory", "storage", "calldata"};
const std::unordered_set<std::string_view> kNumberUnits = {
    "wei", "gwei", "ether", "szabo", "finney", "seconds", "minutes", "hours", "days", "weeks", "years"};
const std::unordered_set<std::string_view> kAssignmentOps = {
    "=", "|=", "^=", "&=", "<<=", ">>=", ">>>=", "+=", "-=", "*=", "/=", "%="};

bool allDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool isElementaryType(std::string_view t) {
  if (t == "address" || t == "bool" || t == "string" || t == "bytes" || t == "byte" ||
      t == "int" || t == "uint" || t == "fixed" || t == "ufixed")
    return true;
  auto sized = [&](std::string_view prefix) {
    return t.size() > prefix.size() && t.substr(0, prefix.size()) == prefix &&
           allDigits(t.substr(prefix.size()));
  };
  if (sized("uint") || sized("int") || sized("bytes"))
    return true;
  for (std::string_view prefix : {std::string_view("ufixed"), std::string_view("fixed")}) {
    if (t.size() > prefix.size() && t.substr(0, prefix.size()) == prefix) {
      const auto rest = t.substr(prefix.size());
      const auto x = rest.find('x');
      if (x != std::string_view::npos && allDigits(rest.substr(0, x)) && allDigits(rest.substr(x + 1)))
        return true;
    }
  }
  return false;
}

int binaryPrecedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "|") return 5;
  if (op == "^") return 6;
  if (op == "&") return 7;
  if (op == "<<" || op == ">>" || op == ">>>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  if (op == "**") return 11;
  return 0;
}

void finish(DraftNode &node) {
  if (!node.children.empty())
    node.span = {node.children.front().span.start, node.children.back().span.end};
}

class Parser {
public:
  Parser(std::string_view source, std::vector<Token> tokens)
      : src_(source), toks_(std::move(tokens)) {}

  DraftNode parseSourceUnit() {
    DraftNode unit{"source_file", "", {}, {}};
    while (!atEof())
      unit.children.push_back(parseSourceUnitItem());
    unit.span = {0, static_cast<std::int64_t>(src_.size())};
    return unit;
  }

private:
  // ---- token helpers -------------------------------------------------------

  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool atEof() const { return peek().kind == TokenKind::Eof; }
  bool at(std::string_view text, std::size_t k = 0) const {
    const Token &t = peek(k);
    return (t.kind == TokenKind::Punct || t.kind == TokenKind::Identifier) && t.text == text;
  }
  bool atIdentifier(std::size_t k = 0) const {
    const Token &t = peek(k);
    return t.kind == TokenKind::Identifier && !kReserved.contains(t.text);
  }

  [[noreturn]] void fail(const std::string &expected) const {
    const Token &t = peek();
    const std::string found = t.kind == TokenKind::Eof ? "end of input" : "'" + std::string(t.text) + "'";
    detail::throwParseError(src_, t.span.start, "expected " + expected + ", found " + found);
  }

  DraftNode leafFrom(const Token &t, std::string type, bool keepLabel) {
    return DraftNode{std::move(type), keepLabel ? std::string(t.text) : std::string(), t.span, {}};
  }

  /// Consumes the current token as a keyword/punctuation leaf.
  DraftNode token() {
    const Token &t = peek();
    ++pos_;
    return leafFrom(t, std::string(t.text), false);
  }

  DraftNode expect(std::string_view text) {
    if (!at(text))
      fail("'" + std::string(text) + "'");
    return token();
  }

  void expectInto(DraftNode &parent, std::string_view text) {
    parent.children.push_back(expect(text));
  }

  DraftNode identifier() {
    if (!atIdentifier())
      fail("identifier");
    const Token &t = peek();
    ++pos_;
    return leafFrom(t, "identifier", true);
  }

  /// Any word token in a position where keywords are permitted as names
  /// (member access, function names such as `receive`).
  DraftNode nameToken() {
    if (peek().kind != TokenKind::Identifier)
      fail("identifier");
    const Token &t = peek();
    ++pos_;
    return leafFrom(t, "identifier", true);
  }

  DraftNode operatorToken() {
    const Token &t = peek();
    ++pos_;
    return leafFrom(t, "operator", true);
  }

  DraftNode wrapToken(std::string type) {
    DraftNode n{std::move(type), "", {}, {}};
    n.children.push_back(token());
    finish(n);
    return n;
  }

  // ---- lookahead (no node construction) -----------------------------------

  std::optional<std::size_t> skipBalanced(std::size_t p, std::string_view open,
                                          std::string_view close) const {
    if (!(toks_[p].text == open && toks_[p].kind == TokenKind::Punct))
      return std::nullopt;
    int depth = 0;
    for (; p < toks_.size() && toks_[p].kind != TokenKind::Eof; ++p) {
      if (toks_[p].kind != TokenKind::Punct)
        continue;
      if (toks_[p].text == open)
        ++depth;
      else if (toks_[p].text == close && --depth == 0)
        return p + 1;
    }
    return std::nullopt;
  }

  bool tokIs(std::size_t p, std::string_view text) const {
    return p < toks_.size() && (toks_[p].kind == TokenKind::Punct || toks_[p].kind == TokenKind::Identifier) &&
           toks_[p].text == text;
  }
  bool tokIsIdentifier(std::size_t p) const {
    return p < toks_.size() && toks_[p].kind == TokenKind::Identifier && !kReserved.contains(toks_[p].text);
  }

  std::optional<std::size_t> scanTypeName(std::size_t p) const {
    const Token &t = toks_[p];
    if (t.kind != TokenKind::Identifier)
      return std::nullopt;
    if (isElementaryType(t.text)) {
      ++p;
      if (t.text == "address" && tokIs(p, "payable"))
        ++p;
    } else if (t.text == "mapping") {
      auto end = skipBalanced(p + 1, "(", ")");
      if (!end)
        return std::nullopt;
      p = *end;
    } else if (t.text == "function") {
      auto end = skipBalanced(p + 1, "(", ")");
      if (!end)
        return std::nullopt;
      p = *end;
      while (p < toks_.size() && (kVisibility.contains(toks_[p].text) || kMutability.contains(toks_[p].text)))
        ++p;
      if (tokIs(p, "returns")) {
        auto r = skipBalanced(p + 1, "(", ")");
        if (!r)
          return std::nullopt;
        p = *r;
      }
    } else if (tokIsIdentifier(p)) {
      ++p;
      while (tokIs(p, ".") && tokIsIdentifier(p + 1))
        p += 2;
    } else {
      return std::nullopt;
    }
    while (tokIs(p, "[")) {
      auto end = skipBalanced(p, "[", "]");
      if (!end)
        return std::nullopt;
      p = *end;
    }
    return p;
  }

  /// `Type [location] name` followed by one of `terminators`.
  bool declarationAt(std::size_t p, std::initializer_list<std::string_view> terminators) const {
    auto after = scanTypeName(p);
    if (!after)
      return false;
    p = *after;
    if (p < toks_.size() && kStorageLocation.contains(toks_[p].text))
      ++p;
    if (!tokIsIdentifier(p))
      return false;
    for (auto term : terminators)
      if (tokIs(p + 1, term))
        return true;
    return false;
  }

  bool variableDeclarationAhead() const { return declarationAt(pos_, {"=", ";"}); }

  bool tupleDeclarationAhead() const {
    if (!at("("))
      return false;
    std::size_t p = pos_ + 1;
    while (tokIs(p, ","))
      ++p;
    return declarationAt(p, {",", ")"});
  }

  // ---- source unit ---------------------------------------------------------

  DraftNode parseSourceUnitItem() {
    if (at("pragma"))
      return parsePragma();
    if (at("import"))
      return parseImport();
    if (at("contract") || at("abstract") || at("interface") || at("library"))
      return parseContractLike();
    if (at("function"))
      return parseFunction();
    if (at("struct"))
      return parseStruct();
    if (at("enum"))
      return parseEnum();
    if (at("event"))
      return parseEvent();
    if (at("error") && atIdentifier(1) && at("(", 2))
      return parseErrorDeclaration();
    if (at("using"))
      return parseUsing();
    if (at("type") && atIdentifier(1) && at("is", 2))
      return parseUserDefinedType();
    if (scanTypeName(pos_))
      return parseStateVariable();
    fail("source unit item");
  }

  DraftNode parsePragma() {
    DraftNode n{"pragma_directive", "", {}, {}};
    expectInto(n, "pragma");
    n.children.push_back(nameToken());
    DraftNode value{"pragma_value", "", {}, {}};
    while (!at(";")) {
      if (atEof())
        fail("';'");
      const Token &t = peek();
      ++pos_;
      value.children.push_back(leafFrom(t, "pragma_token", true));
    }
    if (!value.children.empty()) {
      finish(value);
      n.children.push_back(std::move(value));
    }
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode stringLiteral() {
    DraftNode n{"string_literal", "", {}, {}};
    if (peek().kind != TokenKind::String && peek().kind != TokenKind::UnicodeString)
      fail("string literal");
    while (peek().kind == TokenKind::String || peek().kind == TokenKind::UnicodeString) {
      const Token &t = peek();
      ++pos_;
      n.children.push_back(leafFrom(t, "string", true));
    }
    finish(n);
    return n;
  }

  DraftNode parseImport() {
    DraftNode n{"import_directive", "", {}, {}};
    expectInto(n, "import");
    if (at("*")) {
      n.children.push_back(token());
      expectInto(n, "as");
      n.children.push_back(identifier());
      expectInto(n, "from");
      n.children.push_back(stringLiteral());
    } else if (at("{")) {
      n.children.push_back(token());
      while (!at("}")) {
        DraftNode decl{"import_declaration", "", {}, {}};
        decl.children.push_back(identifier());
        if (at("as")) {
          decl.children.push_back(token());
          decl.children.push_back(identifier());
        }
        finish(decl);
        n.children.push_back(std::move(decl));
        if (!at(","))
          break;
        n.children.push_back(token());
      }
      expectInto(n, "}");
      expectInto(n, "from");
      n.children.push_back(stringLiteral());
    } else {
      n.children.push_back(stringLiteral());
      if (at("as")) {
        n.children.push_back(token());
        n.children.push_back(identifier());
      }
    }
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode parseContractLike() {
    std::string type = "contract_declaration";
    DraftNode n{"", "", {}, {}};
    if (at("abstract"))
      n.children.push_back(token());
    if (at("interface"))
      type = "interface_declaration";
    else if (at("library"))
      type = "library_declaration";
    else if (!at("contract"))
      fail("'contract'");
    n.type = type;
    n.children.push_back(token());
    n.children.push_back(identifier());
    if (at("is")) {
      n.children.push_back(token());
      for (;;) {
        DraftNode spec{"inheritance_specifier", "", {}, {}};
        spec.children.push_back(parseUserDefinedTypeName());
        if (at("("))
          parseCallArguments(spec);
        finish(spec);
        n.children.push_back(std::move(spec));
        if (!at(","))
          break;
        n.children.push_back(token());
      }
    }
    n.children.push_back(parseContractBody());
    finish(n);
    return n;
  }

  DraftNode parseContractBody() {
    DraftNode body{"contract_body", "", {}, {}};
    expectInto(body, "{");
    while (!at("}")) {
      if (atEof())
        fail("'}'");
      body.children.push_back(parseContractMember());
    }
    expectInto(body, "}");
    finish(body);
    return body;
  }

  DraftNode parseContractMember() {
    if (at("function"))
      return parseFunction();
    if (at("constructor"))
      return parseConstructor();
    if ((at("fallback") || at("receive")) && at("(", 1))
      return parseFallbackReceive();
    if (at("modifier"))
      return parseModifierDefinition();
    if (at("event"))
      return parseEvent();
    if (at("error") && atIdentifier(1) && at("(", 2))
      return parseErrorDeclaration();
    if (at("struct"))
      return parseStruct();
    if (at("enum"))
      return parseEnum();
    if (at("using"))
      return parseUsing();
    if (at("type") && atIdentifier(1) && at("is", 2))
      return parseUserDefinedType();
    if (scanTypeName(pos_))
      return parseStateVariable();
    fail("contract member");
  }

  // ---- declarations --------------------------------------------------------

  void parseParameterList(DraftNode &owner, const char *paramType = "parameter") {
    expectInto(owner, "(");
    if (!at(")")) {
      for (;;) {
        owner.children.push_back(parseParameter(paramType));
        if (!at(","))
          break;
        owner.children.push_back(token());
      }
    }
    expectInto(owner, ")");
  }

  DraftNode parseParameter(const char *type) {
    DraftNode p{type, "", {}, {}};
    p.children.push_back(parseTypeName());
    if (kStorageLocation.contains(peek().text) && peek().kind == TokenKind::Identifier)
      p.children.push_back(wrapToken("storage_location"));
    if (std::string_view(type) == "event_parameter" && at("indexed"))
      p.children.push_back(token());
    if (atIdentifier())
      p.children.push_back(identifier());
    finish(p);
    return p;
  }

  DraftNode parseOverrideSpecifier() {
    DraftNode n{"override_specifier", "", {}, {}};
    expectInto(n, "override");
    if (at("(")) {
      n.children.push_back(token());
      for (;;) {
        n.children.push_back(parseUserDefinedTypeName());
        if (!at(","))
          break;
        n.children.push_back(token());
      }
      expectInto(n, ")");
    }
    finish(n);
    return n;
  }

  DraftNode parseModifierInvocation() {
    DraftNode n{"modifier_invocation", "", {}, {}};
    n.children.push_back(identifier());
    while (at(".")) {
      n.children.push_back(token());
      n.children.push_back(nameToken());
    }
    if (at("("))
      parseCallArguments(n);
    finish(n);
    return n;
  }

  /// Visibility, mutability, virtual/override and modifier invocations in
  /// any order, followed by an optional return declaration.
  void parseFunctionModifiers(DraftNode &owner) {
    for (;;) {
      const std::string_view t = peek().text;
      if (peek().kind != TokenKind::Identifier)
        break;
      if (kVisibility.contains(t)) {
        owner.children.push_back(wrapToken("visibility"));
      } else if (kMutability.contains(t) || t == "constant") {
        owner.children.push_back(wrapToken("state_mutability"));
      } else if (t == "virtual") {
        owner.children.push_back(token());
      } else if (t == "override") {
        owner.children.push_back(parseOverrideSpecifier());
      } else if (t == "returns") {
        DraftNode ret{"return_type_definition", "", {}, {}};
        ret.children.push_back(token());
        parseParameterList(ret);
        finish(ret);
        owner.children.push_back(std::move(ret));
      } else if (atIdentifier()) {
        owner.children.push_back(parseModifierInvocation());
      } else {
        break;
      }
    }
  }

  void parseBodyOrSemicolon(DraftNode &owner) {
    if (at(";"))
      owner.children.push_back(token());
    else if (at("{"))
      owner.children.push_back(parseBlock("function_body"));
    else
      fail("'{' or ';'");
  }

  DraftNode parseFunction() {
    DraftNode n{"function_definition", "", {}, {}};
    expectInto(n, "function");
    n.children.push_back(nameToken());
    parseParameterList(n);
    parseFunctionModifiers(n);
    parseBodyOrSemicolon(n);
    finish(n);
    return n;
  }

  DraftNode parseConstructor() {
    DraftNode n{"constructor_definition", "", {}, {}};
    expectInto(n, "constructor");
    parseParameterList(n);
    parseFunctionModifiers(n);
    if (!at("{"))
      fail("'{'");
    n.children.push_back(parseBlock("function_body"));
    finish(n);
    return n;
  }

  DraftNode parseFallbackReceive() {
    DraftNode n{"fallback_receive_definition", "", {}, {}};
    n.children.push_back(token());
    parseParameterList(n);
    parseFunctionModifiers(n);
    parseBodyOrSemicolon(n);
    finish(n);
    return n;
  }

  DraftNode parseModifierDefinition() {
    DraftNode n{"modifier_definition", "", {}, {}};
    expectInto(n, "modifier");
    n.children.push_back(identifier());
    if (at("("))
      parseParameterList(n);
    for (;;) {
      if (at("virtual"))
        n.children.push_back(token());
      else if (at("override"))
        n.children.push_back(parseOverrideSpecifier());
      else
        break;
    }
    parseBodyOrSemicolon(n);
    finish(n);
    return n;
  }

  DraftNode parseEvent() {
    DraftNode n{"event_definition", "", {}, {}};
    expectInto(n, "event");
    n.children.push_back(identifier());
    parseParameterList(n, "event_parameter");
    if (at("anonymous"))
      n.children.push_back(token());
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode parseErrorDeclaration() {
    DraftNode n{"error_declaration", "", {}, {}};
    n.children.push_back(token());
    n.children.push_back(identifier());
    parseParameterList(n);
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode parseStruct() {
    DraftNode n{"struct_declaration", "", {}, {}};
    expectInto(n, "struct");
    n.children.push_back(identifier());
    expectInto(n, "{");
    while (!at("}")) {
      if (atEof())
        fail("'}'");
      DraftNode member{"struct_member", "", {}, {}};
      member.children.push_back(parseTypeName());
      member.children.push_back(identifier());
      expectInto(member, ";");
      finish(member);
      n.children.push_back(std::move(member));
    }
    expectInto(n, "}");
    finish(n);
    return n;
  }

  DraftNode parseEnum() {
    DraftNode n{"enum_declaration", "", {}, {}};
    expectInto(n, "enum");
    n.children.push_back(identifier());
    expectInto(n, "{");
    while (!at("}")) {
      DraftNode value = identifier();
      value.type = "enum_value";
      n.children.push_back(std::move(value));
      if (!at(","))
        break;
      n.children.push_back(token());
    }
    expectInto(n, "}");
    finish(n);
    return n;
  }

  DraftNode parseUsing() {
    DraftNode n{"using_directive", "", {}, {}};
    expectInto(n, "using");
    if (at("{")) {
      n.children.push_back(token());
      for (;;) {
        DraftNode item{"using_alias", "", {}, {}};
        item.children.push_back(parseUserDefinedTypeName());
        if (at("as")) {
          item.children.push_back(token());
          item.children.push_back(operatorToken());
        }
        finish(item);
        n.children.push_back(std::move(item));
        if (!at(","))
          break;
        n.children.push_back(token());
      }
      expectInto(n, "}");
    } else {
      n.children.push_back(parseUserDefinedTypeName());
    }
    expectInto(n, "for");
    if (at("*"))
      n.children.push_back(token());
    else
      n.children.push_back(parseTypeName());
    if (at("global"))
      n.children.push_back(token());
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode parseUserDefinedType() {
    DraftNode n{"user_defined_type_definition", "", {}, {}};
    expectInto(n, "type");
    n.children.push_back(identifier());
    expectInto(n, "is");
    n.children.push_back(parseTypeName());
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode parseStateVariable() {
    DraftNode n{"state_variable_declaration", "", {}, {}};
    n.children.push_back(parseTypeName());
    for (;;) {
      const std::string_view t = peek().text;
      if (peek().kind != TokenKind::Identifier)
        break;
      if (kVisibility.contains(t))
        n.children.push_back(wrapToken("visibility"));
      else if (t == "constant" || t == "immutable" || t == "transient")
        n.children.push_back(token());
      else if (t == "override")
        n.children.push_back(parseOverrideSpecifier());
      else
        break;
    }
    n.children.push_back(identifier());
    if (at("=")) {
      n.children.push_back(token());
      n.children.push_back(parseExpression());
    }
    expectInto(n, ";");
    finish(n);
    return n;
  }

  // ---- types ---------------------------------------------------------------

  DraftNode parseUserDefinedTypeName() {
    DraftNode n{"user_defined_type", "", {}, {}};
    n.children.push_back(identifier());
    while (at(".") && peek(1).kind == TokenKind::Identifier) {
      n.children.push_back(token());
      n.children.push_back(nameToken());
    }
    finish(n);
    return n;
  }

  DraftNode parsePrimitiveType() {
    DraftNode n{"primitive_type", "", {}, {}};
    const bool isAddress = at("address");
    n.children.push_back(token());
    if (isAddress && at("payable"))
      n.children.push_back(token());
    finish(n);
    return n;
  }

  DraftNode parseTypeName() {
    DraftNode inner;
    const Token &t = peek();
    if (t.kind == TokenKind::Identifier && isElementaryType(t.text)) {
      inner = parsePrimitiveType();
    } else if (at("mapping")) {
      inner = DraftNode{"mapping", "", {}, {}};
      inner.children.push_back(token());
      expectInto(inner, "(");
      inner.children.push_back(parseTypeName());
      if (atIdentifier())
        inner.children.push_back(identifier());
      expectInto(inner, "=>");
      inner.children.push_back(parseTypeName());
      if (atIdentifier())
        inner.children.push_back(identifier());
      expectInto(inner, ")");
      finish(inner);
    } else if (at("function")) {
      inner = DraftNode{"function_type", "", {}, {}};
      inner.children.push_back(token());
      parseParameterList(inner);
      for (;;) {
        const std::string_view m = peek().text;
        if (kVisibility.contains(m))
          inner.children.push_back(wrapToken("visibility"));
        else if (kMutability.contains(m))
          inner.children.push_back(wrapToken("state_mutability"));
        else
          break;
      }
      if (at("returns")) {
        DraftNode ret{"return_type_definition", "", {}, {}};
        ret.children.push_back(token());
        parseParameterList(ret);
        finish(ret);
        inner.children.push_back(std::move(ret));
      }
      finish(inner);
    } else if (atIdentifier()) {
      inner = parseUserDefinedTypeName();
    } else {
      fail("type name");
    }
    DraftNode type{"type_name", "", {}, {}};
    type.children.push_back(std::move(inner));
    finish(type);
    while (at("[")) {
      DraftNode array{"type_name", "", {}, {}};
      array.children.push_back(std::move(type));
      array.children.push_back(token());
      if (!at("]"))
        array.children.push_back(parseExpression());
      expectInto(array, "]");
      finish(array);
      type = std::move(array);
    }
    return type;
  }

  // ---- statements ----------------------------------------------------------

  DraftNode parseBlock(const char *type) {
    DraftNode n{type, "", {}, {}};
    expectInto(n, "{");
    while (!at("}")) {
      if (atEof())
        fail("'}'");
      n.children.push_back(parseStatement());
    }
    expectInto(n, "}");
    finish(n);
    return n;
  }

  DraftNode parseStatement() {
    if (at("{"))
      return parseBlock("block_statement");
    if (at("if"))
      return parseIf();
    if (at("for"))
      return parseFor();
    if (at("while")) {
      DraftNode n{"while_statement", "", {}, {}};
      n.children.push_back(token());
      expectInto(n, "(");
      n.children.push_back(parseExpression());
      expectInto(n, ")");
      n.children.push_back(parseStatement());
      finish(n);
      return n;
    }
    if (at("do")) {
      DraftNode n{"do_while_statement", "", {}, {}};
      n.children.push_back(token());
      n.children.push_back(parseStatement());
      expectInto(n, "while");
      expectInto(n, "(");
      n.children.push_back(parseExpression());
      expectInto(n, ")");
      expectInto(n, ";");
      finish(n);
      return n;
    }
    if (at("continue") || at("break")) {
      DraftNode n{at("continue") ? "continue_statement" : "break_statement", "", {}, {}};
      n.children.push_back(token());
      expectInto(n, ";");
      finish(n);
      return n;
    }
    if (at("return")) {
      DraftNode n{"return_statement", "", {}, {}};
      n.children.push_back(token());
      if (!at(";"))
        n.children.push_back(parseExpression());
      expectInto(n, ";");
      finish(n);
      return n;
    }
    if (at("emit")) {
      DraftNode n{"emit_statement", "", {}, {}};
      n.children.push_back(token());
      n.children.push_back(parseExpression());
      expectInto(n, ";");
      finish(n);
      return n;
    }
    if (at("revert") && (at("(", 1) || (peek(1).kind == TokenKind::Identifier))) {
      DraftNode n{"revert_statement", "", {}, {}};
      n.children.push_back(token());
      if (at("("))
        parseCallArguments(n);
      else
        n.children.push_back(parseExpression());
      expectInto(n, ";");
      finish(n);
      return n;
    }
    if (at("try"))
      return parseTry();
    if (at("assembly"))
      return parseAssembly();
    if (at("unchecked") && at("{", 1)) {
      DraftNode n{"unchecked_block", "", {}, {}};
      n.children.push_back(token());
      n.children.push_back(parseBlock("block_statement"));
      finish(n);
      return n;
    }
    if (tupleDeclarationAhead() || variableDeclarationAhead())
      return parseVariableDeclarationStatement();
    DraftNode n{"expression_statement", "", {}, {}};
    n.children.push_back(parseExpression());
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode parseVariableDeclaration() {
    DraftNode decl{"variable_declaration", "", {}, {}};
    decl.children.push_back(parseTypeName());
    if (peek().kind == TokenKind::Identifier && kStorageLocation.contains(peek().text))
      decl.children.push_back(wrapToken("storage_location"));
    decl.children.push_back(identifier());
    finish(decl);
    return decl;
  }

  DraftNode parseVariableDeclarationStatement() {
    DraftNode n{"variable_declaration_statement", "", {}, {}};
    if (at("(")) {
      DraftNode tuple{"variable_declaration_tuple", "", {}, {}};
      tuple.children.push_back(token());
      for (;;) {
        if (!at(",") && !at(")"))
          tuple.children.push_back(parseVariableDeclaration());
        if (!at(","))
          break;
        tuple.children.push_back(token());
      }
      expectInto(tuple, ")");
      finish(tuple);
      n.children.push_back(std::move(tuple));
    } else {
      n.children.push_back(parseVariableDeclaration());
    }
    if (at("=")) {
      n.children.push_back(token());
      n.children.push_back(parseExpression());
    }
    expectInto(n, ";");
    finish(n);
    return n;
  }

  DraftNode parseIf() {
    DraftNode n{"if_statement", "", {}, {}};
    n.children.push_back(token());
    expectInto(n, "(");
    n.children.push_back(parseExpression());
    expectInto(n, ")");
    n.children.push_back(parseStatement());
    if (at("else")) {
      n.children.push_back(token());
      n.children.push_back(parseStatement());
    }
    finish(n);
    return n;
  }

  DraftNode parseFor() {
    DraftNode n{"for_statement", "", {}, {}};
    n.children.push_back(token());
    expectInto(n, "(");
    if (at(";"))
      n.children.push_back(token());
    else if (tupleDeclarationAhead() || variableDeclarationAhead())
      n.children.push_back(parseVariableDeclarationStatement());
    else {
      DraftNode init{"expression_statement", "", {}, {}};
      init.children.push_back(parseExpression());
      expectInto(init, ";");
      finish(init);
      n.children.push_back(std::move(init));
    }
    if (at(";")) {
      n.children.push_back(token());
    } else {
      DraftNode cond{"expression_statement", "", {}, {}};
      cond.children.push_back(parseExpression());
      expectInto(cond, ";");
      finish(cond);
      n.children.push_back(std::move(cond));
    }
    if (!at(")"))
      n.children.push_back(parseExpression());
    expectInto(n, ")");
    n.children.push_back(parseStatement());
    finish(n);
    return n;
  }

  DraftNode parseTry() {
    DraftNode n{"try_statement", "", {}, {}};
    n.children.push_back(token());
    n.children.push_back(parseExpression());
    if (at("returns")) {
      DraftNode ret{"return_type_definition", "", {}, {}};
      ret.children.push_back(token());
      parseParameterList(ret);
      finish(ret);
      n.children.push_back(std::move(ret));
    }
    n.children.push_back(parseBlock("block_statement"));
    if (!at("catch"))
      fail("'catch'");
    while (at("catch")) {
      DraftNode clause{"catch_clause", "", {}, {}};
      clause.children.push_back(token());
      if (atIdentifier())
        clause.children.push_back(identifier());
      if (at("("))
        parseParameterList(clause);
      clause.children.push_back(parseBlock("block_statement"));
      finish(clause);
      n.children.push_back(std::move(clause));
    }
    finish(n);
    return n;
  }

  DraftNode parseAssembly() {
    DraftNode n{"assembly_statement", "", {}, {}};
    n.children.push_back(token());
    if (peek().kind == TokenKind::String)
      n.children.push_back(stringLiteral());
    if (at("(")) {
      n.children.push_back(token());
      while (!at(")")) {
        n.children.push_back(stringLiteral());
        if (!at(","))
          break;
        n.children.push_back(token());
      }
      expectInto(n, ")");
    }
    n.children.push_back(parseYulBlock());
    finish(n);
    return n;
  }

  DraftNode parseYulBlock() {
    DraftNode n{"yul_block", "", {}, {}};
    expectInto(n, "{");
    while (!at("}")) {
      if (atEof())
        fail("'}'");
      if (at("{")) {
        n.children.push_back(parseYulBlock());
        continue;
      }
      const Token &t = peek();
      switch (t.kind) {
      case TokenKind::Identifier:
        n.children.push_back(nameToken());
        break;
      case TokenKind::Number:
        ++pos_;
        n.children.push_back(leafFrom(t, "number", true));
        break;
      case TokenKind::String:
      case TokenKind::UnicodeString:
      case TokenKind::HexString:
        ++pos_;
        n.children.push_back(leafFrom(t, "string", true));
        break;
      default:
        n.children.push_back(token());
      }
    }
    expectInto(n, "}");
    finish(n);
    return n;
  }

  // ---- expressions ---------------------------------------------------------

  DraftNode makeNode(const char *type, std::initializer_list<DraftNode *> parts) {
    DraftNode n{type, "", {}, {}};
    n.children.reserve(parts.size());
    for (DraftNode *p : parts)
      n.children.push_back(std::move(*p));
    finish(n);
    return n;
  }

  DraftNode parseExpression() {
    DraftNode lhs = parseTernary();
    if (peek().kind == TokenKind::Punct && kAssignmentOps.contains(peek().text)) {
      const bool plain = peek().text == "=";
      DraftNode op = operatorToken();
      DraftNode rhs = parseExpression();
      return makeNode(plain ? "assignment_expression" : "augmented_assignment_expression",
                      {&lhs, &op, &rhs});
    }
    return lhs;
  }

  DraftNode parseTernary() {
    DraftNode cond = parseBinary(1);
    if (!at("?"))
      return cond;
    DraftNode q = token();
    DraftNode yes = parseExpression();
    DraftNode colon = expect(":");
    DraftNode no = parseTernary();
    return makeNode("ternary_expression", {&cond, &q, &yes, &colon, &no});
  }

  DraftNode parseBinary(int minPrec) {
    DraftNode left = parseUnary();
    for (;;) {
      if (peek().kind != TokenKind::Punct)
        break;
      const int prec = binaryPrecedence(peek().text);
      if (prec == 0 || prec < minPrec)
        break;
      const bool rightAssoc = peek().text == "**";
      DraftNode op = operatorToken();
      DraftNode right = parseBinary(rightAssoc ? prec : prec + 1);
      left = makeNode("binary_expression", {&left, &op, &right});
    }
    return left;
  }

  DraftNode parseUnary() {
    const Token &t = peek();
    if (t.kind == TokenKind::Punct && (t.text == "++" || t.text == "--")) {
      DraftNode op = operatorToken();
      DraftNode operand = parseUnary();
      return makeNode("update_expression", {&op, &operand});
    }
    if ((t.kind == TokenKind::Punct && (t.text == "!" || t.text == "~" || t.text == "-" || t.text == "+")) ||
        (t.kind == TokenKind::Identifier && t.text == "delete")) {
      DraftNode op = operatorToken();
      DraftNode operand = parseUnary();
      return makeNode("unary_expression", {&op, &operand});
    }
    return parsePostfix(parsePrimary());
  }

  void parseCallArguments(DraftNode &owner) {
    expectInto(owner, "(");
    if (at("{") ) {
      DraftNode arg{"call_argument", "", {}, {}};
      parseNamedArguments(arg);
      finish(arg);
      owner.children.push_back(std::move(arg));
    } else if (!at(")")) {
      for (;;) {
        DraftNode arg{"call_argument", "", {}, {}};
        arg.children.push_back(parseExpression());
        finish(arg);
        owner.children.push_back(std::move(arg));
        if (!at(","))
          break;
        owner.children.push_back(token());
      }
    }
    expectInto(owner, ")");
  }

  void parseNamedArguments(DraftNode &owner) {
    expectInto(owner, "{");
    while (!at("}")) {
      DraftNode field{"struct_field_assignment", "", {}, {}};
      field.children.push_back(nameToken());
      expectInto(field, ":");
      field.children.push_back(parseExpression());
      finish(field);
      owner.children.push_back(std::move(field));
      if (!at(","))
        break;
      owner.children.push_back(token());
    }
    expectInto(owner, "}");
  }

  DraftNode parsePostfix(DraftNode expr) {
    for (;;) {
      if (at(".")) {
        DraftNode dot = token();
        DraftNode name = nameToken();
        expr = makeNode("member_expression", {&expr, &dot, &name});
      } else if (at("[")) {
        DraftNode n{"array_access", "", {}, {}};
        n.children.push_back(std::move(expr));
        n.children.push_back(token());
        if (!at("]") && !at(":"))
          n.children.push_back(parseExpression());
        if (at(":")) {
          n.type = "slice_access";
          n.children.push_back(token());
          if (!at("]"))
            n.children.push_back(parseExpression());
        }
        expectInto(n, "]");
        finish(n);
        expr = std::move(n);
      } else if (at("(")) {
        DraftNode n{"call_expression", "", {}, {}};
        n.children.push_back(std::move(expr));
        parseCallArguments(n);
        finish(n);
        expr = std::move(n);
      } else if (at("{") && peek(1).kind == TokenKind::Identifier && at(":", 2)) {
        DraftNode n{"struct_expression", "", {}, {}};
        n.children.push_back(std::move(expr));
        parseNamedArguments(n);
        finish(n);
        expr = std::move(n);
      } else if (peek().kind == TokenKind::Punct && (at("++") || at("--"))) {
        DraftNode op = operatorToken();
        expr = makeNode("update_expression", {&expr, &op});
      } else {
        return expr;
      }
    }
  }

  DraftNode parsePrimary() {
    const Token &t = peek();
    switch (t.kind) {
    case TokenKind::Number: {
      DraftNode n{"number_literal", "", {}, {}};
      ++pos_;
      n.children.push_back(leafFrom(t, "number", true));
      if (peek().kind == TokenKind::Identifier && kNumberUnits.contains(peek().text))
        n.children.push_back(token());
      finish(n);
      return n;
    }
    case TokenKind::String:
    case TokenKind::UnicodeString:
      return stringLiteral();
    case TokenKind::HexString: {
      DraftNode n{"hex_literal", "", {}, {}};
      while (peek().kind == TokenKind::HexString) {
        const Token &h = peek();
        ++pos_;
        n.children.push_back(leafFrom(h, "hex_string", true));
      }
      finish(n);
      return n;
    }
    case TokenKind::Eof:
      fail("expression");
    default:
      break;
    }
    if (at("(")) {
      DraftNode n{"tuple_expression", "", {}, {}};
      n.children.push_back(token());
      std::size_t elements = 0;
      bool sawComma = false;
      for (;;) {
        if (!at(",") && !at(")")) {
          n.children.push_back(parseExpression());
          ++elements;
        }
        if (!at(","))
          break;
        sawComma = true;
        n.children.push_back(token());
      }
      expectInto(n, ")");
      if (elements == 1 && !sawComma)
        n.type = "parenthesized_expression";
      finish(n);
      return n;
    }
    if (at("[")) {
      DraftNode n{"inline_array_expression", "", {}, {}};
      n.children.push_back(token());
      while (!at("]")) {
        n.children.push_back(parseExpression());
        if (!at(","))
          break;
        n.children.push_back(token());
      }
      expectInto(n, "]");
      finish(n);
      return n;
    }
    if (t.kind != TokenKind::Identifier)
      fail("expression");
    if (t.text == "true" || t.text == "false")
      return wrapToken("boolean_literal");
    if (t.text == "new") {
      DraftNode n{"new_expression", "", {}, {}};
      n.children.push_back(token());
      n.children.push_back(parseTypeName());
      finish(n);
      return n;
    }
    if (t.text == "type" && at("(", 1)) {
      DraftNode n{"meta_type_expression", "", {}, {}};
      n.children.push_back(token());
      expectInto(n, "(");
      n.children.push_back(parseTypeName());
      expectInto(n, ")");
      finish(n);
      return n;
    }
    if (isElementaryType(t.text) || t.text == "payable")
      return parsePrimitiveType();
    return identifier();
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

/// Places each comment under the deepest node whose span encloses it.
void attachComment(DraftNode &root, SourceSpan comment) {
  DraftNode *node = &root;
  for (;;) {
    DraftNode *next = nullptr;
    for (DraftNode &child : node->children) {
      if (!child.children.empty() && child.span.start <= comment.start &&
          comment.end <= child.span.end) {
        next = &child;
        break;
      }
    }
    if (next == nullptr)
      break;
    node = next;
  }
  auto it = std::find_if(node->children.begin(), node->children.end(),
                         [&](const DraftNode &c) { return c.span.start >= comment.end; });
  node->children.insert(it, DraftNode{"comment", "", comment, {}});
}

} // namespace

SyntaxTree SolidityParser::parse(std::string source) {
  auto lexed = detail::lexSolidity(source);
  Parser parser(source, std::move(lexed.tokens));
  DraftNode root = parser.parseSourceUnit();
  for (const SourceSpan &comment : lexed.comments) {
    attachComment(root, comment);
  }
  // Comment labels carry their text so that edits to comments stay visible
  // when comments are not ignored.
  std::vector<DraftNode *> stack{&root};
  while (!stack.empty()) {
    DraftNode *n = stack.back();
    stack.pop_back();
    if (n->type == "comment")
      n->label = source.substr(static_cast<std::size_t>(n->span.start),
                               static_cast<std::size_t>(n->span.length()));
    for (DraftNode &c : n->children)
      stack.push_back(&c);
  }
  return SyntaxTree(root, std::move(source));
}

std::unique_ptr<ParserAdapter> makeDefaultParser() { return std::make_unique<SolidityParser>(); }

SyntaxTree parseSolidity(std::string source) {
  SolidityParser parser;
  return parser.parse(std::move(source));
}

} // namespace soldiff
