#pragma once

#include "soldiff/edit_script.hpp"
#include "soldiff/pipeline.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace soldiff {

struct ManifestEntry {
  std::string pairId;
  std::string before;
  std::string after;
  std::string category;
  std::optional<int> mutationCount;
};

class ManifestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// CSV with header `pairId,before,after[,category[,mutationCount]]`.
/// Relative paths are resolved against `baseDir`. Throws ManifestError on
/// a malformed header, short rows, bad counts or duplicate ids.
std::vector<ManifestEntry> parseManifest(const std::string &text, const std::string &baseDir = "");
std::vector<ManifestEntry> loadManifest(const std::string &path);

enum class PairStatus { Ok, ParseErrorBefore, ParseErrorAfter, InternalError };

std::string_view toString(PairStatus status);

struct DiffReport {
  std::string pairId;
  PairStatus status = PairStatus::InternalError;
  /// Present only when status is Ok.
  std::optional<ActionCounts> counts;
  /// Present whenever both files could be read.
  std::optional<std::size_t> lineEditDistance;
  double ms = 0.0;
  MatcherConfig matcher;
  std::string category;
  std::optional<int> mutationCount;
  /// Diagnostic for non-ok rows; not part of the CSV.
  std::string message;

  std::optional<std::size_t> editDistance() const {
    return counts ? std::optional<std::size_t>(counts->total()) : std::nullopt;
  }
};

struct CorpusOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned jobs = 0;
  /// Replays every script and demotes the pair to internal_error unless the
  /// result is isomorphic to the destination AST.
  bool verify = false;
  DiffOptions diff;
};

/// Never throws for a single pair; failures become status rows.
DiffReport processPair(const DiffEngine &engine, const ManifestEntry &entry, bool verify);

/// Reports in manifest order regardless of completion order.
std::vector<DiffReport> runCorpus(const std::vector<ManifestEntry> &manifest,
                                  const CorpusOptions &options);

inline constexpr std::string_view kReportHeader =
    "pairId,status,editDistance,inserts,deletes,updates,moves,lineEditDistance,ms,minHeight,"
    "minDice,maxRecoverySize,category,mutationCount";

/// `ms` is written only when `timings` is set (left empty otherwise) so that
/// reports are byte-reproducible.
void writeReportCsv(std::ostream &out, const std::vector<DiffReport> &reports, bool timings);

/// Throws ManifestError on malformed input.
std::vector<DiffReport> parseReportCsv(const std::string &text);

struct CorpusSummary {
  std::size_t total = 0;
  std::size_t ok = 0;
  double successRate = 0.0;
  double meanEditDistance = 0.0;
  double medianEditDistance = 0.0;
  std::size_t maxEditDistance = 0;
};

CorpusSummary summarizeReports(const std::vector<DiffReport> &reports);

/// Summary block printed after a corpus run.
std::string formatCorpusSummary(const std::vector<DiffReport> &reports);

enum class GroupBy { None, Category, MutationCount };

/// Per group: rows, ok rows, mean/median/max of editDistance and
/// lineEditDistance over ok rows.
std::string formatGroupedSummary(const std::vector<DiffReport> &reports, GroupBy groupBy);

/// RFC 4180 style record splitting; shared by manifest and report readers.
std::vector<std::vector<std::string>> parseCsv(const std::string &text);

} // namespace soldiff
