#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace soldiff {

enum class LineOp { Keep, Add, Remove };

struct LineHunk {
  LineOp op = LineOp::Keep;
  /// The line including its terminating '\n' (absent on a final line
  /// without one).
  std::string text;
  /// 1-based; 0 when the line does not exist on that side.
  std::size_t oldLine = 0;
  std::size_t newLine = 0;
};

struct LineDiffResult {
  std::size_t addedLines = 0;
  std::size_t removedLines = 0;
  std::vector<LineHunk> hunks;
};

/// Splits on '\n', keeping the terminator; a final unterminated line counts.
std::vector<std::string_view> splitLines(std::string_view text);

/// LCS-optimal line diff (Myers, linear space). No whitespace normalisation.
LineDiffResult lineDiff(std::string_view a, std::string_view b);

std::size_t lineEditDistance(const LineDiffResult &r);

/// Rebuilds the old (`newSide == false`) or new text from the hunks.
std::string replay(const LineDiffResult &r, bool newSide);

/// Unified diff with `context` lines around each change; empty when equal.
std::string formatUnified(const LineDiffResult &r, std::string_view oldName,
                          std::string_view newName, std::size_t context = 3);

} // namespace soldiff
