#include "soldiff/corpus.hpp"

#include "soldiff/line_diff.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace soldiff {

std::vector<std::vector<std::string>> parseCsv(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool fieldStarted = false;
  std::size_t i = 0;
  auto endRow = [&] {
    row.push_back(std::move(field));
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    fieldStarted = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      fieldStarted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      fieldStarted = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // handled by the '\n'
    } else if (c == '\n') {
      endRow();
    } else {
      field += c;
      fieldStarted = true;
    }
    ++i;
  }
  if (quoted)
    throw ManifestError("unterminated quoted field");
  if (fieldStarted || !row.empty())
    endRow();
  // Blank lines carry no record.
  std::erase_if(rows, [](const auto &r) { return r.size() == 1 && r.front().empty(); });
  return rows;
}

namespace {

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::optional<int> parseCount(const std::string &s, const std::string &what) {
  if (s.empty())
    return std::nullopt;
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || value < 0)
    throw ManifestError("invalid " + what + " '" + s + "'");
  return value;
}

std::string csvField(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + '"';
}

template <typename T> std::string optionalField(const std::optional<T> &v) {
  return v ? std::to_string(*v) : std::string();
}

std::string formatNumber(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

double median(std::vector<std::size_t> values) {
  if (values.empty())
    return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? static_cast<double>(values[n / 2])
               : (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

double mean(const std::vector<std::size_t> &values) {
  if (values.empty())
    return 0.0;
  double sum = 0;
  for (auto v : values)
    sum += static_cast<double>(v);
  return sum / static_cast<double>(values.size());
}

} // namespace

std::vector<ManifestEntry> parseManifest(const std::string &text, const std::string &baseDir) {
  const auto rows = parseCsv(text);
  if (rows.empty())
    throw ManifestError("manifest is empty");
  const auto &header = rows.front();
  static const std::vector<std::string> expected{"pairId", "before", "after", "category",
                                                 "mutationCount"};
  if (header.size() < 3 || header.size() > expected.size() ||
      !std::equal(header.begin(), header.end(), expected.begin()))
    throw ManifestError("manifest header must be pairId,before,after[,category[,mutationCount]]");

  auto resolve = [&](const std::string &p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !baseDir.empty())
      path = std::filesystem::path(baseDir) / path;
    return path.string();
  };

  std::vector<ManifestEntry> entries;
  std::map<std::string, std::size_t> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const std::string where = "manifest row " + std::to_string(r + 1);
    if (row.size() < 3 || row.size() > header.size())
      throw ManifestError(where + ": expected " + std::to_string(header.size()) + " fields");
    ManifestEntry e;
    e.pairId = row[0];
    if (e.pairId.empty())
      throw ManifestError(where + ": empty pairId");
    if (!seen.emplace(e.pairId, r).second)
      throw ManifestError(where + ": duplicate pairId '" + e.pairId + "'");
    e.before = resolve(row[1]);
    e.after = resolve(row[2]);
    if (row.size() > 3)
      e.category = row[3];
    if (row.size() > 4)
      e.mutationCount = parseCount(row[4], where + " mutationCount");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> loadManifest(const std::string &path) {
  std::string text;
  try {
    text = readFile(path);
  } catch (const std::runtime_error &e) {
    throw ManifestError(e.what());
  }
  return parseManifest(text, std::filesystem::path(path).parent_path().string());
}

std::string_view toString(PairStatus status) {
  switch (status) {
  case PairStatus::Ok:
    return "ok";
  case PairStatus::ParseErrorBefore:
    return "parse_error_before";
  case PairStatus::ParseErrorAfter:
    return "parse_error_after";
  case PairStatus::InternalError:
    return "internal_error";
  }
  return "internal_error";
}

DiffReport processPair(const DiffEngine &engine, const ManifestEntry &entry, bool verify) {
  DiffReport report;
  report.pairId = entry.pairId;
  report.category = entry.category;
  report.mutationCount = entry.mutationCount;
  report.matcher = engine.options().matcher;
  const auto started = std::chrono::steady_clock::now();
  try {
    std::string before = readFile(entry.before);
    std::string after = readFile(entry.after);
    report.lineEditDistance = lineEditDistance(lineDiff(before, after));
    const DiffOutcome outcome = engine.diff(std::move(before), std::move(after));
    if (verify) {
      const SyntaxTree replayed = applyEditScript(outcome.before, outcome.script);
      if (!isomorphic(replayed, outcome.after))
        throw std::runtime_error("replayed script does not reproduce the destination tree");
    }
    report.counts = countActions(outcome.script);
    report.status = PairStatus::Ok;
  } catch (const PairParseError &e) {
    report.status =
        e.side() == PairSide::Before ? PairStatus::ParseErrorBefore : PairStatus::ParseErrorAfter;
    report.message = (e.side() == PairSide::Before ? entry.before : entry.after) + ":" + e.what();
  } catch (const std::exception &e) {
    report.status = PairStatus::InternalError;
    report.message = e.what();
  } catch (...) {
    report.status = PairStatus::InternalError;
    report.message = "unknown failure";
  }
  report.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                  .count();
  return report;
}

std::vector<DiffReport> runCorpus(const std::vector<ManifestEntry> &manifest,
                                  const CorpusOptions &options) {
  const DiffEngine engine(options.diff);
  std::vector<DiffReport> reports(manifest.size());
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(manifest.size(), 1)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.size(); i = next++)
      reports[i] = processPair(engine, manifest[i], options.verify);
  };
  if (jobs <= 1) {
    worker();
    return reports;
  }
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back(worker);
  pool.clear(); // joins
  return reports;
}

void writeReportCsv(std::ostream &out, const std::vector<DiffReport> &reports, bool timings) {
  out << kReportHeader << '\n';
  for (const DiffReport &r : reports) {
    out << csvField(r.pairId) << ',' << toString(r.status) << ',' << optionalField(r.editDistance());
    if (r.counts)
      out << ',' << r.counts->inserts << ',' << r.counts->deletes << ',' << r.counts->updates << ','
          << r.counts->moves;
    else
      out << ",,,,";
    out << ',' << optionalField(r.lineEditDistance) << ',';
    if (timings)
      out << std::fixed << std::setprecision(3) << r.ms << std::defaultfloat;
    out << ',' << r.matcher.minHeight << ',' << formatNumber(r.matcher.minDice) << ','
        << r.matcher.maxRecoverySize << ',' << csvField(r.category) << ','
        << optionalField(r.mutationCount) << '\n';
  }
}

std::vector<DiffReport> parseReportCsv(const std::string &text) {
  const auto rows = parseCsv(text);
  if (rows.empty())
    throw ManifestError("report is empty");
  std::string header;
  for (std::size_t k = 0; k < rows.front().size(); ++k)
    header += (k ? "," : "") + rows.front()[k];
  if (header != kReportHeader)
    throw ManifestError("unexpected report header");

  auto size = [](const std::string &s, const std::string &where) -> std::optional<std::size_t> {
    auto v = parseCount(s, where);
    return v ? std::optional<std::size_t>(static_cast<std::size_t>(*v)) : std::nullopt;
  };

  std::vector<DiffReport> reports;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    const std::string where = "report row " + std::to_string(r + 1);
    if (row.size() != 14)
      throw ManifestError(where + ": expected 14 fields, found " + std::to_string(row.size()));
    DiffReport d;
    d.pairId = row[0];
    if (row[1] == "ok")
      d.status = PairStatus::Ok;
    else if (row[1] == "parse_error_before")
      d.status = PairStatus::ParseErrorBefore;
    else if (row[1] == "parse_error_after")
      d.status = PairStatus::ParseErrorAfter;
    else if (row[1] == "internal_error")
      d.status = PairStatus::InternalError;
    else
      throw ManifestError(where + ": unknown status '" + row[1] + "'");
    const auto distance = size(row[2], "editDistance");
    if (d.status == PairStatus::Ok) {
      ActionCounts c;
      const auto ins = size(row[3], "inserts"), del = size(row[4], "deletes"),
                 upd = size(row[5], "updates"), mov = size(row[6], "moves");
      if (!distance || !ins || !del || !upd || !mov)
        throw ManifestError(where + ": ok row without action counts");
      c = {*ins, *del, *upd, *mov};
      if (c.total() != *distance)
        throw ManifestError(where + ": action counts do not sum to editDistance");
      d.counts = c;
    } else if (distance) {
      throw ManifestError(where + ": failed row carries an editDistance");
    }
    d.lineEditDistance = size(row[7], "lineEditDistance");
    if (!row[8].empty()) {
      try {
        d.ms = std::stod(row[8]);
      } catch (const std::exception &) {
        throw ManifestError(where + ": invalid ms '" + row[8] + "'");
      }
    }
    d.category = row[12];
    d.mutationCount = parseCount(row[13], "mutationCount");
    reports.push_back(std::move(d));
  }
  return reports;
}

CorpusSummary summarizeReports(const std::vector<DiffReport> &reports) {
  CorpusSummary s;
  s.total = reports.size();
  std::vector<std::size_t> distances;
  for (const DiffReport &r : reports) {
    if (r.status != PairStatus::Ok)
      continue;
    ++s.ok;
    distances.push_back(*r.editDistance());
  }
  s.successRate = s.total ? static_cast<double>(s.ok) / static_cast<double>(s.total) : 0.0;
  s.meanEditDistance = mean(distances);
  s.medianEditDistance = median(distances);
  s.maxEditDistance = distances.empty() ? 0 : *std::max_element(distances.begin(), distances.end());
  return s;
}

std::string formatCorpusSummary(const std::vector<DiffReport> &reports) {
  const CorpusSummary s = summarizeReports(reports);
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "pairs: " << s.total << "\nok: " << s.ok << "\nsuccess rate: " << 100.0 * s.successRate
      << "%\nedit distance: mean " << s.meanEditDistance << ", median " << s.medianEditDistance
      << ", max " << s.maxEditDistance << '\n';
  std::map<std::string, std::vector<std::size_t>> byCategory;
  for (const DiffReport &r : reports)
    if (r.status == PairStatus::Ok && !r.category.empty())
      byCategory[r.category].push_back(*r.editDistance());
  for (const auto &[category, values] : byCategory)
    out << "category " << category << ": mean edit distance " << mean(values) << " over "
        << values.size() << " pairs\n";
  return out.str();
}

std::string formatGroupedSummary(const std::vector<DiffReport> &reports, GroupBy groupBy) {
  struct Group {
    std::size_t rows = 0;
    std::vector<std::size_t> edit;
    std::vector<std::size_t> line;
  };
  // Key: (missing-last flag, numeric key, text key) gives a deterministic order.
  std::map<std::tuple<int, long, std::string>, Group> groups;
  for (const DiffReport &r : reports) {
    std::tuple<int, long, std::string> key{0, 0, "all"};
    if (groupBy == GroupBy::Category)
      key = r.category.empty() ? std::tuple<int, long, std::string>{1, 0, "-"}
                               : std::tuple<int, long, std::string>{0, 0, r.category};
    else if (groupBy == GroupBy::MutationCount)
      key = r.mutationCount
                ? std::tuple<int, long, std::string>{0, *r.mutationCount,
                                                     std::to_string(*r.mutationCount)}
                : std::tuple<int, long, std::string>{1, 0, "-"};
    Group &g = groups[key];
    ++g.rows;
    if (r.status == PairStatus::Ok) {
      g.edit.push_back(*r.editDistance());
      if (r.lineEditDistance)
        g.line.push_back(*r.lineEditDistance);
    }
  }
  auto maxOf = [](const std::vector<std::size_t> &v) {
    return v.empty() ? std::size_t{0} : *std::max_element(v.begin(), v.end());
  };
  std::ostringstream out;
  out << std::left << std::setw(16) << "group" << std::right << std::setw(7) << "rows"
      << std::setw(7) << "ok" << std::setw(10) << "meanED" << std::setw(10) << "medianED"
      << std::setw(8) << "maxED" << std::setw(10) << "meanLED" << std::setw(10) << "medianLED"
      << std::setw(8) << "maxLED" << '\n';
  out << std::fixed << std::setprecision(2);
  for (const auto &[key, g] : groups) {
    out << std::left << std::setw(16) << std::get<2>(key) << std::right << std::setw(7) << g.rows
        << std::setw(7) << g.edit.size() << std::setw(10) << mean(g.edit) << std::setw(10)
        << median(g.edit) << std::setw(8) << maxOf(g.edit) << std::setw(10) << mean(g.line)
        << std::setw(10) << median(g.line) << std::setw(8) << maxOf(g.line) << '\n';
  }
  return out.str();
}

} // namespace soldiff
