#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simt/tokenizer.hpp"

namespace simt {

/// One source/target sentence pair.
struct SentencePair {
  TokenizedSentence source;
  TokenizedSentence target;
};

struct Link {
  std::size_t source = 0;
  std::size_t target = 0;

  auto operator<=>(const Link&) const = default;
};

/// Word correspondences for one sentence pair, kept sorted by (source, target).
struct AlignmentLinkSet {
  std::vector<Link> links;
  std::size_t sourceLen = 0;
  std::size_t targetLen = 0;

  bool contains(Link link) const;
  bool operator==(const AlignmentLinkSet&) const = default;
};

/// Sorts, deduplicates, and bounds-checks `links`. Throws RangeError.
AlignmentLinkSet makeLinkSet(std::vector<Link> links, std::size_t sourceLen, std::size_t targetLen);

enum class Direction { Forward, Reverse };

/// Spelling of the position-less NULL source word in table lookups.
inline constexpr std::string_view kNullWord = "<NULL>";

/// Lexical translation probabilities p(target word | source word) estimated
/// with IBM Model 1 EM. Immutable once trained; safe for concurrent reads.
class TranslationTable {
 public:
  /// p(target | source); 0 for unseen pairs and unknown words. `source` may be
  /// kNullWord.
  double probability(std::string_view source, std::string_view target) const;

  /// Sum of a source row; 1 within rounding for every trained source word.
  double rowSum(std::string_view source) const;

  /// All source words including kNullWord.
  const std::vector<std::string>& sourceVocab() const { return sourceVocab_; }
  const std::vector<std::string>& targetVocab() const { return targetVocab_; }

  /// Entry n is the corpus log-likelihood after n iterations (entry 0 is the
  /// uniform initialization), so the size is iterationsRun() + 1.
  const std::vector<double>& logLikelihoodHistory() const { return logLikelihood_; }
  int iterationsRun() const { return iterations_; }
  Direction direction() const { return direction_; }

  /// Target word with the largest probability in the source row (ties go to
  /// the lexicographically smaller word); nullopt for unknown rows.
  std::optional<std::string> rowArgmax(std::string_view source) const;

 private:
  friend TranslationTable trainTable(std::span<const SentencePair>, int, Direction);

  std::optional<std::uint32_t> sourceId(std::string_view word) const;
  std::optional<std::uint32_t> targetId(std::string_view word) const;
  double probabilityById(std::uint32_t source, std::uint32_t target) const;

  std::vector<std::string> sourceVocab_;  // id 0 is NULL
  std::vector<std::string> targetVocab_;
  std::unordered_map<std::string, std::uint32_t> sourceIds_;
  std::unordered_map<std::string, std::uint32_t> targetIds_;
  std::unordered_map<std::uint64_t, double> probabilities_;
  std::vector<double> logLikelihood_;
  int iterations_ = 0;
  Direction direction_ = Direction::Forward;
};

/// Trains p(target | source) for Forward, p(source | target) for Reverse.
/// Throws EmptyCorpus, RangeError (iterations < 1).
TranslationTable trainTable(std::span<const SentencePair> corpus, int iterations, Direction direction);

inline constexpr int kDefaultEmIterations = 15;

/// Forward and reverse tables trained on the same corpus.
struct AlignerModel {
  TranslationTable forward;
  TranslationTable reverse;
};

AlignerModel trainAligner(std::span<const SentencePair> corpus, int iterations = kDefaultEmIterations);

/// Intersection of per-target argmax links under `forward` and per-source
/// argmax links under `reverse`. Ties go to the lowest index; NULL only wins
/// when strictly more probable than every real word, and NULL-aligned or
/// fully unknown words get no link.
AlignmentLinkSet alignPair(const TokenizedSentence& source, const TokenizedSentence& target,
                           const TranslationTable& forward, const TranslationTable& reverse);

/// Pharaoh text for one pair: "i-j" tokens separated by single spaces.
std::string toPharaoh(const AlignmentLinkSet& links);

/// Parses one Pharaoh line. `lineNumber` is used in error messages. Bounds are
/// checked when lengths are given. Throws ParseError, BoundsError.
AlignmentLinkSet parsePharaohLine(std::string_view line, std::size_t lineNumber,
                                  std::optional<std::pair<std::size_t, std::size_t>> lengths = {});

/// Reads a Pharaoh file, one line per sentence pair. When `companion` is given
/// the line count must match and every index is validated against that pair.
std::vector<AlignmentLinkSet> importAlignments(const std::filesystem::path& path,
                                               std::span<const SentencePair> companion = {});

void exportAlignments(const std::filesystem::path& path, std::span<const AlignmentLinkSet> links);

}  // namespace simt
