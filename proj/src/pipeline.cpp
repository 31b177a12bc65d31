#include "soldiff/pipeline.hpp"

namespace soldiff {

DiffEngine::DiffEngine(DiffOptions options) : options_(std::move(options)) {
  validateRules(options_.rules);
  options_.matcher.validate();
}

SyntaxTree DiffEngine::buildAst(std::string source) const {
  auto parser = makeDefaultParser();
  return applyTransforms(parser->parse(std::move(source)), options_.rules);
}

DiffOutcome DiffEngine::diff(std::string before, std::string after) const {
  DiffOutcome out;
  try {
    out.before = buildAst(std::move(before));
  } catch (const ParseError &e) {
    throw PairParseError(PairSide::Before, e);
  }
  try {
    out.after = buildAst(std::move(after));
  } catch (const ParseError &e) {
    throw PairParseError(PairSide::After, e);
  }
  out.mapping = matchTrees(out.before, out.after, options_.matcher);
  out.script = generateEditScript(out.before, out.after, out.mapping);
  return out;
}

} // namespace soldiff
