#include "simt/aligner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "simt/error.hpp"

namespace simt {
namespace {

std::uint64_t cellKey(std::uint32_t source, std::uint32_t target) {
  return (static_cast<std::uint64_t>(source) << 32) | target;
}

struct Vocab {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::uint32_t> ids;

  std::uint32_t intern(const std::string& word) {
    auto [it, inserted] = ids.try_emplace(word, static_cast<std::uint32_t>(words.size()));
    if (inserted) words.push_back(word);
    return it->second;
  }
};

// A sentence pair in id space, already oriented for the requested direction.
struct IdPair {
  std::vector<std::uint32_t> source;  // without NULL
  std::vector<std::uint32_t> target;
  std::vector<std::uint32_t> cells;   // (source.size() + 1) x target.size(), NULL row first
};

}  // namespace

bool AlignmentLinkSet::contains(Link link) const {
  return std::binary_search(links.begin(), links.end(), link);
}

AlignmentLinkSet makeLinkSet(std::vector<Link> links, std::size_t sourceLen, std::size_t targetLen) {
  for (const auto& l : links) {
    if (l.source >= sourceLen || l.target >= targetLen) {
      throw RangeError("link " + std::to_string(l.source) + "-" + std::to_string(l.target) +
                       " outside " + std::to_string(sourceLen) + "x" + std::to_string(targetLen));
    }
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  return {std::move(links), sourceLen, targetLen};
}

std::optional<std::uint32_t> TranslationTable::sourceId(std::string_view word) const {
  auto it = sourceIds_.find(std::string(word));
  if (it == sourceIds_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> TranslationTable::targetId(std::string_view word) const {
  auto it = targetIds_.find(std::string(word));
  if (it == targetIds_.end()) return std::nullopt;
  return it->second;
}

double TranslationTable::probabilityById(std::uint32_t source, std::uint32_t target) const {
  auto it = probabilities_.find(cellKey(source, target));
  return it == probabilities_.end() ? 0.0 : it->second;
}

double TranslationTable::probability(std::string_view source, std::string_view target) const {
  const auto s = sourceId(source);
  const auto t = targetId(target);
  if (!s || !t) return 0.0;
  return probabilityById(*s, *t);
}

double TranslationTable::rowSum(std::string_view source) const {
  const auto s = sourceId(source);
  if (!s) return 0.0;
  double sum = 0.0;
  for (std::uint32_t t = 0; t < targetVocab_.size(); ++t) sum += probabilityById(*s, t);
  return sum;
}

std::optional<std::string> TranslationTable::rowArgmax(std::string_view source) const {
  const auto s = sourceId(source);
  if (!s) return std::nullopt;
  std::optional<std::uint32_t> best;
  double bestP = 0.0;
  for (std::uint32_t t = 0; t < targetVocab_.size(); ++t) {
    const double p = probabilityById(*s, t);
    if (p <= 0.0) continue;
    if (!best || p > bestP || (p == bestP && targetVocab_[t] < targetVocab_[*best])) {
      best = t;
      bestP = p;
    }
  }
  if (!best) return std::nullopt;
  return targetVocab_[*best];
}

TranslationTable trainTable(std::span<const SentencePair> corpus, int iterations, Direction direction) {
  if (corpus.empty()) throw EmptyCorpus();
  if (iterations < 1) throw RangeError("EM iterations must be >= 1");

  Vocab sources;
  Vocab targets;
  sources.intern(std::string(kNullWord));

  std::vector<IdPair> pairs;
  pairs.reserve(corpus.size());
  std::unordered_map<std::uint64_t, std::uint32_t> cellIndex;
  std::vector<std::uint64_t> cellKeys;

  for (const auto& pair : corpus) {
    const auto& src = direction == Direction::Forward ? pair.source.words : pair.target.words;
    const auto& tgt = direction == Direction::Forward ? pair.target.words : pair.source.words;
    IdPair ids;
    for (const auto& w : src) ids.source.push_back(sources.intern(w));
    for (const auto& w : tgt) ids.target.push_back(targets.intern(w));
    ids.cells.reserve((ids.source.size() + 1) * ids.target.size());
    for (std::size_t i = 0; i <= ids.source.size(); ++i) {
      const std::uint32_t s = i == 0 ? 0 : ids.source[i - 1];
      for (const auto t : ids.target) {
        const auto key = cellKey(s, t);
        auto [it, inserted] = cellIndex.try_emplace(key, static_cast<std::uint32_t>(cellKeys.size()));
        if (inserted) cellKeys.push_back(key);
        ids.cells.push_back(it->second);
      }
    }
    pairs.push_back(std::move(ids));
  }

  const double uniform = targets.words.empty() ? 0.0 : 1.0 / static_cast<double>(targets.words.size());
  std::vector<double> prob(cellKeys.size(), uniform);
  std::vector<double> counts(cellKeys.size());
  std::vector<double> rowTotals(sources.words.size());
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(iterations) + 1);

  // One E-step pass. Returns the log-likelihood of the current table and,
  // when `accumulate` is set, fills expected counts.
  auto expectation = [&](bool accumulate) {
    double logLikelihood = 0.0;
    if (accumulate) {
      std::fill(counts.begin(), counts.end(), 0.0);
      std::fill(rowTotals.begin(), rowTotals.end(), 0.0);
    }
    for (const auto& p : pairs) {
      const std::size_t rows = p.source.size() + 1;
      const std::size_t cols = p.target.size();
      for (std::size_t j = 0; j < cols; ++j) {
        double z = 0.0;
        for (std::size_t i = 0; i < rows; ++i) z += prob[p.cells[i * cols + j]];
        logLikelihood += std::log(z / static_cast<double>(rows));
        if (!accumulate) continue;
        for (std::size_t i = 0; i < rows; ++i) {
          const auto cell = p.cells[i * cols + j];
          const double posterior = prob[cell] / z;
          counts[cell] += posterior;
          rowTotals[cellKeys[cell] >> 32] += posterior;
        }
      }
    }
    return logLikelihood;
  };

  for (int it = 0; it < iterations; ++it) {
    history.push_back(expectation(true));
    for (std::size_t c = 0; c < cellKeys.size(); ++c) {
      const double total = rowTotals[cellKeys[c] >> 32];
      prob[c] = total > 0.0 ? counts[c] / total : 0.0;
    }
  }
  history.push_back(expectation(false));

  TranslationTable table;
  table.sourceVocab_ = std::move(sources.words);
  table.targetVocab_ = std::move(targets.words);
  table.sourceIds_ = std::move(sources.ids);
  table.targetIds_ = std::move(targets.ids);
  table.probabilities_.reserve(cellKeys.size());
  for (std::size_t c = 0; c < cellKeys.size(); ++c) table.probabilities_.emplace(cellKeys[c], prob[c]);
  table.logLikelihood_ = std::move(history);
  table.iterations_ = iterations;
  table.direction_ = direction;
  return table;
}

AlignerModel trainAligner(std::span<const SentencePair> corpus, int iterations) {
  return {trainTable(corpus, iterations, Direction::Forward),
          trainTable(corpus, iterations, Direction::Reverse)};
}

namespace {

// For each word in `emitted`, the index in `given` that best explains it, or
// nullopt for NULL / no evidence.
std::vector<std::optional<std::size_t>> argmaxLinks(const std::vector<std::string>& given,
                                                    const std::vector<std::string>& emitted,
                                                    const TranslationTable& table) {
  std::vector<std::optional<std::size_t>> best(emitted.size());
  for (std::size_t j = 0; j < emitted.size(); ++j) {
    double bestP = 0.0;
    for (std::size_t i = 0; i < given.size(); ++i) {
      const double p = table.probability(given[i], emitted[j]);
      if (p > bestP) {
        bestP = p;
        best[j] = i;
      }
    }
    if (best[j] && table.probability(kNullWord, emitted[j]) > bestP) best[j].reset();
  }
  return best;
}

}  // namespace

AlignmentLinkSet alignPair(const TokenizedSentence& source, const TokenizedSentence& target,
                           const TranslationTable& forward, const TranslationTable& reverse) {
  const auto perTarget = argmaxLinks(source.words, target.words, forward);
  const auto perSource = argmaxLinks(target.words, source.words, reverse);
  std::vector<Link> links;
  for (std::size_t j = 0; j < perTarget.size(); ++j) {
    if (!perTarget[j]) continue;
    const std::size_t i = *perTarget[j];
    if (perSource[i] && *perSource[i] == j) links.push_back({i, j});
  }
  return makeLinkSet(std::move(links), source.words.size(), target.words.size());
}

std::string toPharaoh(const AlignmentLinkSet& links) {
  std::string out;
  for (const auto& l : links.links) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l.source);
    out += '-';
    out += std::to_string(l.target);
  }
  return out;
}

namespace {

std::size_t parseIndex(std::string_view text, std::size_t lineNumber, std::string_view token) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(lineNumber, "malformed alignment token '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

AlignmentLinkSet parsePharaohLine(std::string_view line, std::size_t lineNumber,
                                  std::optional<std::pair<std::size_t, std::size_t>> lengths) {
  std::vector<Link> links;
  std::size_t maxSource = 0;
  std::size_t maxTarget = 0;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    const auto token = line.substr(pos, end - pos);
    const auto dash = token.find('-');
    if (dash == std::string_view::npos) {
      throw ParseError(lineNumber, "malformed alignment token '" + std::string(token) + "'");
    }
    const Link link{parseIndex(token.substr(0, dash), lineNumber, token),
                    parseIndex(token.substr(dash + 1), lineNumber, token)};
    if (lengths && (link.source >= lengths->first || link.target >= lengths->second)) {
      throw BoundsError(lineNumber, "link " + std::string(token) + " outside " +
                                        std::to_string(lengths->first) + "x" +
                                        std::to_string(lengths->second) + " pair");
    }
    maxSource = std::max(maxSource, link.source + 1);
    maxTarget = std::max(maxTarget, link.target + 1);
    links.push_back(link);
    pos = end;
  }
  const auto sourceLen = lengths ? lengths->first : maxSource;
  const auto targetLen = lengths ? lengths->second : maxTarget;
  return makeLinkSet(std::move(links), sourceLen, targetLen);
}

std::vector<AlignmentLinkSet> importAlignments(const std::filesystem::path& path,
                                               std::span<const SentencePair> companion) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open alignment file " + path.string());
  std::vector<AlignmentLinkSet> out;
  std::string line;
  std::size_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::optional<std::pair<std::size_t, std::size_t>> lengths;
    if (!companion.empty()) {
      if (lineNumber > companion.size()) {
        throw ParseError(lineNumber, "more alignment lines than corpus pairs");
      }
      const auto& pair = companion[lineNumber - 1];
      lengths = std::make_pair(pair.source.words.size(), pair.target.words.size());
    }
    out.push_back(parsePharaohLine(line, lineNumber, lengths));
  }
  if (!companion.empty() && out.size() != companion.size()) {
    throw ParseError(lineNumber, "alignment file has " + std::to_string(out.size()) +
                                     " lines, corpus has " + std::to_string(companion.size()));
  }
  return out;
}

void exportAlignments(const std::filesystem::path& path, std::span<const AlignmentLinkSet> links) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write alignment file " + path.string());
  for (const auto& l : links) out << toPharaoh(l) << '\n';
}

}  // namespace simt
