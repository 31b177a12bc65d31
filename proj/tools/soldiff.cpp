// soldiff command-line entry point: diff, corpus, summarize.

#include "soldiff/corpus.hpp"
#include "soldiff/line_diff.hpp"
#include "soldiff/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct MatcherFlags {
  std::uint32_t minHeight = soldiff::MatcherConfig{}.minHeight;
  double minDice = soldiff::MatcherConfig{}.minDice;
  std::size_t maxRecoverySize = soldiff::MatcherConfig{}.maxRecoverySize;
  std::string rulesPath;

  void attach(CLI::App *cmd) {
    cmd->add_option("--rules", rulesPath, "Transformation rule file (default: $SOLDIFF_RULES)");
    cmd->add_option("--min-height", minHeight, "Smallest subtree height anchored top-down")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--min-dice", minDice, "Container similarity threshold")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--max-recovery-size", maxRecoverySize,
                    "Largest subtree pair aligned with exact tree edit distance");
  }

  soldiff::DiffOptions options() const {
    soldiff::DiffOptions o;
    std::string path = rulesPath;
    if (path.empty())
      if (const char *env = std::getenv("SOLDIFF_RULES"))
        path = env;
    if (!path.empty())
      o.rules = soldiff::loadRules(path);
    o.matcher.minHeight = minHeight;
    o.matcher.minDice = minDice;
    o.matcher.maxRecoverySize = maxRecoverySize;
    return o;
  }
};

int runDiff(const std::string &beforePath, const std::string &afterPath, const std::string &format,
            bool dumpTree, const MatcherFlags &flags) {
  const std::string before = readFile(beforePath);
  const std::string after = readFile(afterPath);
  if (format == "unified") {
    std::cout << soldiff::formatUnified(soldiff::lineDiff(before, after), beforePath, afterPath);
    return kExitOk;
  }
  const soldiff::DiffEngine engine(flags.options());
  soldiff::DiffOutcome outcome;
  try {
    outcome = engine.diff(before, after);
  } catch (const soldiff::PairParseError &e) {
    const auto &path = e.side() == soldiff::PairSide::Before ? beforePath : afterPath;
    std::cerr << path << ':' << e.what() << '\n';
    return kExitParse;
  }
  if (dumpTree) {
    std::cout << "# before\n" << soldiff::dumpTree(outcome.before) << "# after\n"
              << soldiff::dumpTree(outcome.after) << "# script\n";
  }
  outcome.script.sourceTreeId = beforePath;
  outcome.script.destTreeId = afterPath;
  const auto fmt = format == "json"   ? soldiff::ScriptFormat::Json
                   : format == "text" ? soldiff::ScriptFormat::Text
                                      : soldiff::ScriptFormat::Xml;
  std::cout << soldiff::serialize(outcome.script, fmt);
  return kExitOk;
}

int runCorpus(const std::string &manifestPath, unsigned jobs, bool verify, const std::string &outPath,
              bool timings, const MatcherFlags &flags) {
  soldiff::CorpusOptions options;
  options.jobs = jobs;
  options.verify = verify;
  options.diff = flags.options();
  const auto manifest = soldiff::loadManifest(manifestPath);
  const auto reports = soldiff::runCorpus(manifest, options);
  if (outPath.empty() || outPath == "-") {
    soldiff::writeReportCsv(std::cout, reports, timings);
  } else {
    std::ofstream out(outPath, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write '" + outPath + "'");
    soldiff::writeReportCsv(out, reports, timings);
  }
  for (const auto &r : reports)
    if (r.status != soldiff::PairStatus::Ok)
      std::cerr << r.pairId << ": " << soldiff::toString(r.status) << ": " << r.message << '\n';
  std::cerr << soldiff::formatCorpusSummary(reports);
  return kExitOk;
}

int runSummarize(const std::string &csvPath, const std::string &groupBy) {
  const auto reports = soldiff::parseReportCsv(readFile(csvPath));
  const auto g = groupBy == "category"        ? soldiff::GroupBy::Category
                 : groupBy == "mutationCount" ? soldiff::GroupBy::MutationCount
                                              : soldiff::GroupBy::None;
  std::cout << soldiff::formatGroupedSummary(reports, g);
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Syntax-aware differencing for Solidity sources"};
  app.require_subcommand(0, 1);
  bool grammarVersion = false;
  app.add_flag("--grammar-version", grammarVersion, "Print the parser grammar version");

  std::string before, after, format = "xml";
  bool dumpTree = false;
  MatcherFlags diffFlags;
  auto *diff = app.add_subcommand("diff", "Edit script between two source files");
  diff->add_option("before", before)->required();
  diff->add_option("after", after)->required();
  diff->add_option("--format", format, "xml, json, text or unified")
      ->check(CLI::IsMember({"xml", "json", "text", "unified"}));
  diff->add_flag("--dump-tree", dumpTree, "Print both pruned ASTs before the script");
  diffFlags.attach(diff);

  std::string manifest, outPath;
  unsigned jobs = 0;
  bool verify = false, timings = false;
  MatcherFlags corpusFlags;
  auto *corpus = app.add_subcommand("corpus", "Diff every pair of a manifest into a CSV report");
  corpus->add_option("manifest", manifest)->required();
  corpus->add_option("--jobs,-j", jobs, "Worker threads (default: available cores)");
  corpus->add_flag("--verify", verify, "Replay every script and check the result");
  corpus->add_option("--out,-o", outPath, "Report path (default: standard output)");
  corpus->add_flag("--timings", timings, "Fill the ms column (makes reports non-reproducible)");
  corpusFlags.attach(corpus);

  std::string csvPath, groupBy = "none";
  auto *summarize = app.add_subcommand("summarize", "Summary statistics of a corpus report");
  summarize->add_option("report", csvPath)->required();
  summarize->add_option("--group-by", groupBy, "none, category or mutationCount")
      ->check(CLI::IsMember({"none", "category", "mutationCount"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    if (grammarVersion) {
      std::cout << soldiff::kGrammarVersion << '\n';
      return kExitOk;
    }
    if (diff->parsed())
      return runDiff(before, after, format, dumpTree, diffFlags);
    if (corpus->parsed())
      return runCorpus(manifest, jobs, verify, outPath, timings, corpusFlags);
    if (summarize->parsed())
      return runSummarize(csvPath, groupBy);
    std::cout << app.help();
    return kExitOk;
  } catch (const std::exception &e) {
    std::cerr << "soldiff: " << e.what() << '\n';
    return kExitInternal;
  }
}
