#pragma once

// Test-only fixture corpus: hand-written base contracts plus text-level
// mutations with known expected outcomes.

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

std::string fixtureDir();
std::string readText(const std::string &path);
void writeText(const std::string &path, const std::string &text);

struct BaseContract {
  std::string name;
  std::string text;
};

/// Every tests/fixtures/contracts/*.sol file, sorted by name.
std::vector<BaseContract> baseContracts();

std::string goldenBefore();
std::string goldenAfter();
/// Golden original without the reset function and without blank lines.
std::string figureBefore();

/// Byte mask of string literals and comments (true = masked).
std::vector<bool> maskStringsAndComments(const std::string &src);

/// Word-boundary rename outside strings/comments; returns occurrences.
std::size_t renameIdentifier(std::string &src, const std::string &from, const std::string &to);
std::size_t countIdentifier(const std::string &src, const std::string &name);

/// A top-level member function with a body, as a range of whole lines.
struct FunctionBlock {
  std::size_t begin = 0;  // byte offset of the first line
  std::size_t end = 0;    // byte offset just past the closing "    }\n"
  std::size_t lines = 0;
  std::size_t container = 0; // index of the enclosing contract/library
  std::string name;
};

std::vector<FunctionBlock> functionBlocks(const std::string &src);

/// Moves `blocks[from]` (with its trailing blank line) to after the last
/// block of the same container. Returns false when there is none.
bool moveFunctionToEnd(std::string &src, std::size_t from);
/// Moves `blocks[from]` to just after `blocks[after]` (same container, after > from).
bool moveFunctionAfter(std::string &src, std::size_t from, std::size_t after);
bool deleteFunction(std::string &src, std::size_t index);
/// Inserts a fresh four-line function after `blocks[afterBlock]`.
bool insertFunctionAfter(std::string &src, std::size_t afterBlock, const std::string &name);

/// Replaces the n-th number literal (outside pragma lines, strings and
/// comments) with a different value. Returns false if there is none.
bool changeLiteral(std::string &src, std::size_t n);
std::size_t countLiterals(const std::string &src);

/// Swaps the n-th spaced binary operator (" + " -> " - " etc.).
bool swapOperator(std::string &src, std::size_t n);
std::size_t countOperators(const std::string &src);

/// Introduces a syntax error (variant selects the kind of damage).
std::string breakSyntax(const std::string &src, std::size_t variant);

struct FixturePair {
  std::string id;
  std::string category;
  int mutationCount = 1;
  std::string before;
  std::string after;
  /// Known AST edit distance, when the mutation fixes it.
  std::optional<std::size_t> expectedDistance;
  /// Rename: identifier occurrences; move: lines of the moved function.
  std::size_t detail = 0;
};

/// Deterministic mutation corpus (>= 200 pairs) covering renames, literal
/// changes, operator swaps, function insertion/deletion/moves and stacked
/// mutations.
std::vector<FixturePair> mutationCorpus();

/// Rename fixtures: (contract, identifier) pairs with k + 1 occurrences.
std::vector<FixturePair> renameFixtures();

/// One multi-line function relocated within its contract.
std::vector<FixturePair> moveFixtures();

/// Random contract of roughly `lines` lines.
std::string synthesizeContract(std::mt19937 &rng, std::size_t lines);

/// Applies `count` random literal/operator/rename/move mutations.
std::string mutateRandomly(std::mt19937 &rng, const std::string &src, int count);

/// Writes the pairs below `dir` and returns the manifest path.
std::string writeCorpus(const std::string &dir, const std::vector<FixturePair> &pairs);

/// Fresh empty directory below the system temp directory.
std::string scratchDir(const std::string &tag);

} // namespace fixtures
