#include "soldiff/line_diff.hpp"

#include <sstream>
#include <unordered_map>

namespace soldiff {

std::vector<std::string_view> splitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    lines.push_back(text.substr(start, end - start));
    start = end;
  }
  return lines;
}

namespace {

enum class Step { Keep, Add, Remove };

// Myers' middle-snake bisection over interned line ids.
class MyersDiff {
public:
  MyersDiff(const std::vector<int> &a, const std::vector<int> &b) : a_(a), b_(b) {}

  std::vector<Step> run() {
    diff(0, static_cast<int>(a_.size()), 0, static_cast<int>(b_.size()));
    return std::move(steps_);
  }

private:
  void diff(int aLo, int aHi, int bLo, int bHi) {
    int prefix = 0;
    while (aLo + prefix < aHi && bLo + prefix < bHi && a_[aLo + prefix] == b_[bLo + prefix])
      ++prefix;
    steps_.insert(steps_.end(), prefix, Step::Keep);
    aLo += prefix;
    bLo += prefix;
    int suffix = 0;
    while (aHi - suffix > aLo && bHi - suffix > bLo && a_[aHi - suffix - 1] == b_[bHi - suffix - 1])
      ++suffix;
    aHi -= suffix;
    bHi -= suffix;

    if (aLo == aHi) {
      steps_.insert(steps_.end(), bHi - bLo, Step::Add);
    } else if (bLo == bHi) {
      steps_.insert(steps_.end(), aHi - aLo, Step::Remove);
    } else {
      const auto [x, y] = bisect(aLo, aHi, bLo, bHi);
      if (x < 0) {
        steps_.insert(steps_.end(), aHi - aLo, Step::Remove);
        steps_.insert(steps_.end(), bHi - bLo, Step::Add);
      } else {
        diff(aLo, aLo + x, bLo, bLo + y);
        diff(aLo + x, aHi, bLo + y, bHi);
      }
    }
    steps_.insert(steps_.end(), suffix, Step::Keep);
  }

  // Returns the split point relative to (aLo, bLo), or {-1,-1}.
  std::pair<int, int> bisect(int aLo, int aHi, int bLo, int bHi) {
    const int n = aHi - aLo;
    const int m = bHi - bLo;
    const int maxD = (n + m + 1) / 2;
    const int offset = maxD;
    const int length = 2 * maxD;
    std::vector<int> v1(length, -1), v2(length, -1);
    v1[offset + 1] = 0;
    v2[offset + 1] = 0;
    const int delta = n - m;
    const bool front = delta % 2 != 0;
    int k1start = 0, k1end = 0, k2start = 0, k2end = 0;
    for (int d = 0; d < maxD; ++d) {
      for (int k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
        const int k1o = offset + k1;
        int x1 = (k1 == -d || (k1 != d && v1[k1o - 1] < v1[k1o + 1])) ? v1[k1o + 1] : v1[k1o - 1] + 1;
        int y1 = x1 - k1;
        while (x1 < n && y1 < m && a_[aLo + x1] == b_[bLo + y1]) {
          ++x1;
          ++y1;
        }
        v1[k1o] = x1;
        if (x1 > n) {
          k1end += 2;
        } else if (y1 > m) {
          k1start += 2;
        } else if (front) {
          const int k2o = offset + delta - k1;
          if (k2o >= 0 && k2o < length && v2[k2o] != -1 && x1 >= n - v2[k2o])
            return {x1, y1};
        }
      }
      for (int k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
        const int k2o = offset + k2;
        int x2 = (k2 == -d || (k2 != d && v2[k2o - 1] < v2[k2o + 1])) ? v2[k2o + 1] : v2[k2o - 1] + 1;
        int y2 = x2 - k2;
        while (x2 < n && y2 < m && a_[aLo + n - x2 - 1] == b_[bLo + m - y2 - 1]) {
          ++x2;
          ++y2;
        }
        v2[k2o] = x2;
        if (x2 > n) {
          k2end += 2;
        } else if (y2 > m) {
          k2start += 2;
        } else if (!front) {
          const int k1o = offset + delta - k2;
          if (k1o >= 0 && k1o < length && v1[k1o] != -1) {
            const int x1 = v1[k1o];
            const int y1 = offset + x1 - k1o;
            if (x1 >= n - x2)
              return {x1, y1};
          }
        }
      }
    }
    return {-1, -1};
  }

  const std::vector<int> &a_;
  const std::vector<int> &b_;
  std::vector<Step> steps_;
};

} // namespace

LineDiffResult lineDiff(std::string_view a, std::string_view b) {
  const auto linesA = splitLines(a);
  const auto linesB = splitLines(b);
  std::unordered_map<std::string_view, int> ids;
  auto intern = [&](const std::vector<std::string_view> &lines) {
    std::vector<int> out;
    out.reserve(lines.size());
    for (auto line : lines)
      out.push_back(ids.emplace(line, static_cast<int>(ids.size())).first->second);
    return out;
  };
  const auto idsA = intern(linesA);
  const auto idsB = intern(linesB);

  LineDiffResult r;
  std::size_t i = 0, j = 0;
  for (Step s : MyersDiff(idsA, idsB).run()) {
    switch (s) {
    case Step::Keep:
      r.hunks.push_back({LineOp::Keep, std::string(linesA[i]), i + 1, j + 1});
      ++i;
      ++j;
      break;
    case Step::Remove:
      r.hunks.push_back({LineOp::Remove, std::string(linesA[i]), i + 1, 0});
      ++i;
      ++r.removedLines;
      break;
    case Step::Add:
      r.hunks.push_back({LineOp::Add, std::string(linesB[j]), 0, j + 1});
      ++j;
      ++r.addedLines;
      break;
    }
  }
  return r;
}

std::size_t lineEditDistance(const LineDiffResult &r) { return r.addedLines + r.removedLines; }

std::string replay(const LineDiffResult &r, bool newSide) {
  std::string out;
  for (const LineHunk &h : r.hunks)
    if (h.op == LineOp::Keep || h.op == (newSide ? LineOp::Add : LineOp::Remove))
      out += h.text;
  return out;
}

std::string formatUnified(const LineDiffResult &r, std::string_view oldName,
                          std::string_view newName, std::size_t context) {
  const auto &h = r.hunks;
  if (r.addedLines + r.removedLines == 0)
    return {};
  std::ostringstream out;
  out << "--- " << oldName << "\n+++ " << newName << "\n";

  auto emit = [&](const LineHunk &line) {
    const char mark = line.op == LineOp::Keep ? ' ' : line.op == LineOp::Add ? '+' : '-';
    out << mark << line.text;
    if (line.text.empty() || line.text.back() != '\n')
      out << "\n\\ No newline at end of file\n";
  };

  std::size_t i = 0;
  while (i < h.size()) {
    while (i < h.size() && h[i].op == LineOp::Keep)
      ++i;
    if (i == h.size())
      break;
    // Grow the group until a run of unchanged lines exceeds 2 * context.
    std::size_t begin = i >= context ? i - context : 0;
    std::size_t end = i;
    while (end < h.size()) {
      std::size_t run = end;
      while (run < h.size() && h[run].op == LineOp::Keep)
        ++run;
      if (run == h.size() || run - end > 2 * context) {
        end = std::min(h.size(), end + context);
        break;
      }
      end = run;
      while (end < h.size() && h[end].op != LineOp::Keep)
        ++end;
    }
    std::size_t oldStart = 0, newStart = 0, oldCount = 0, newCount = 0;
    std::size_t oldBefore = 0, newBefore = 0;
    for (std::size_t k = 0; k < begin; ++k) {
      oldBefore += h[k].op != LineOp::Add;
      newBefore += h[k].op != LineOp::Remove;
    }
    for (std::size_t k = begin; k < end; ++k) {
      oldCount += h[k].op != LineOp::Add;
      newCount += h[k].op != LineOp::Remove;
    }
    oldStart = oldCount == 0 ? oldBefore : oldBefore + 1;
    newStart = newCount == 0 ? newBefore : newBefore + 1;
    out << "@@ -" << oldStart << ',' << oldCount << " +" << newStart << ',' << newCount << " @@\n";
    for (std::size_t k = begin; k < end; ++k)
      emit(h[k]);
    i = end;
  }
  return out.str();
}

} // namespace soldiff
