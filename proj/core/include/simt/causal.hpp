#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "simt/aligner.hpp"
#include "simt/tokenizer.hpp"

namespace simt {

inline constexpr std::string_view kWaitToken = "<WAIT>";
inline constexpr std::string_view kFillerToken = "<FILLER>";

/// An aligned pair after WAIT insertion and filler padding. Both sides have
/// the same length; fillers only occur as a suffix of `sourceWords`.
struct CausalPair {
  std::vector<std::string> sourceWords;
  std::vector<std::string> targetWords;
  std::size_t waitCount = 0;
  std::size_t fillerCount = 0;
  AlignmentLinkSet originLinks;  // indices into the original sentences

  std::size_t alignedLength() const { return sourceWords.size(); }
  bool operator==(const CausalPair&) const = default;
};

/// Delays target words so that every word linked to source position i lands
/// at index >= i, inserting WAITs immediately before the offending word. A
/// word linked to several source words waits for the last of them. The
/// shorter side is then padded: fillers at the source end, or WAITs at the
/// target end.
CausalPair causalAlign(const TokenizedSentence& source, const TokenizedSentence& target,
                       const AlignmentLinkSet& links);

struct CorpusStats {
  std::size_t pairs = 0;
  std::size_t totalWaits = 0;
  std::size_t totalFillers = 0;
  double meanWaits = 0.0;
  double meanFillers = 0.0;
};

struct CausalCorpus {
  std::vector<CausalPair> pairs;
  CorpusStats stats;
};

CorpusStats summarize(std::span<const CausalPair> pairs);

/// Aligns every pair with `model` and applies causalAlign, preserving order.
/// Errors are rethrown as PairError carrying the pair index.
CausalCorpus buildCorpus(std::span<const SentencePair> pairs, const AlignerModel& model);

/// Same, with externally supplied alignments (one link set per pair).
CausalCorpus buildCorpus(std::span<const SentencePair> pairs, std::span<const AlignmentLinkSet> links);

/// JSON-lines record: {"source","target","waits","fillers","links"}.
nlohmann::json toJson(const CausalPair& pair);

/// Parses a record written by toJson. Link bounds refer to the stripped
/// sentences. Throws ParseError (line 0) on schema violations.
CausalPair causalPairFromJson(const nlohmann::json& record);

/// Drops every occurrence of `token`.
std::vector<std::string> stripToken(std::span<const std::string> words, std::string_view token);

}  // namespace simt
