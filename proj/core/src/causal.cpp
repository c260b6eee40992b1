#include "simt/causal.hpp"

#include <algorithm>
#include <optional>

#include "simt/error.hpp"

namespace simt {

CausalPair causalAlign(const TokenizedSentence& source, const TokenizedSentence& target,
                       const AlignmentLinkSet& links) {
  const std::size_t sourceLen = source.words.size();
  const std::size_t targetLen = target.words.size();
  if (links.sourceLen != sourceLen || links.targetLen != targetLen) {
    throw RangeError("link set dimensions do not match the sentence pair");
  }

  // Latest source position each target word depends on.
  std::vector<std::optional<std::size_t>> constraint(targetLen);
  for (const auto& l : links.links) {
    if (l.source >= sourceLen || l.target >= targetLen) throw RangeError("link out of range");
    auto& c = constraint[l.target];
    c = c ? std::max(*c, l.source) : l.source;
  }

  CausalPair out;
  out.sourceWords = source.words;
  out.originLinks = links;
  out.targetWords.reserve(std::max(sourceLen, targetLen));
  for (std::size_t j = 0; j < targetLen; ++j) {
    if (constraint[j]) {
      while (out.targetWords.size() < *constraint[j]) {
        out.targetWords.emplace_back(kWaitToken);
        ++out.waitCount;
      }
    }
    out.targetWords.push_back(target.words[j]);
  }

  while (out.sourceWords.size() < out.targetWords.size()) {
    out.sourceWords.emplace_back(kFillerToken);
    ++out.fillerCount;
  }
  while (out.targetWords.size() < out.sourceWords.size()) {
    out.targetWords.emplace_back(kWaitToken);
    ++out.waitCount;
  }
  return out;
}

CorpusStats summarize(std::span<const CausalPair> pairs) {
  CorpusStats stats;
  stats.pairs = pairs.size();
  for (const auto& p : pairs) {
    stats.totalWaits += p.waitCount;
    stats.totalFillers += p.fillerCount;
  }
  if (stats.pairs > 0) {
    stats.meanWaits = static_cast<double>(stats.totalWaits) / static_cast<double>(stats.pairs);
    stats.meanFillers = static_cast<double>(stats.totalFillers) / static_cast<double>(stats.pairs);
  }
  return stats;
}

CausalCorpus buildCorpus(std::span<const SentencePair> pairs, const AlignerModel& model) {
  CausalCorpus corpus;
  corpus.pairs.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      const auto links = alignPair(pairs[i].source, pairs[i].target, model.forward, model.reverse);
      corpus.pairs.push_back(causalAlign(pairs[i].source, pairs[i].target, links));
    } catch (const Error& e) {
      throw PairError(i, e.what());
    }
  }
  corpus.stats = summarize(corpus.pairs);
  return corpus;
}

CausalCorpus buildCorpus(std::span<const SentencePair> pairs, std::span<const AlignmentLinkSet> links) {
  if (pairs.size() != links.size()) {
    throw InputMismatch(std::to_string(pairs.size()) + " pairs but " + std::to_string(links.size()) +
                        " alignments");
  }
  CausalCorpus corpus;
  corpus.pairs.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      corpus.pairs.push_back(causalAlign(pairs[i].source, pairs[i].target, links[i]));
    } catch (const Error& e) {
      throw PairError(i, e.what());
    }
  }
  corpus.stats = summarize(corpus.pairs);
  return corpus;
}

nlohmann::json toJson(const CausalPair& pair) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : pair.originLinks.links) links.push_back({l.source, l.target});
  return {{"source", pair.sourceWords},
          {"target", pair.targetWords},
          {"waits", pair.waitCount},
          {"fillers", pair.fillerCount},
          {"links", std::move(links)}};
}

std::vector<std::string> stripToken(std::span<const std::string> words, std::string_view token) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    if (w != token) out.push_back(w);
  }
  return out;
}

CausalPair causalPairFromJson(const nlohmann::json& record) {
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!record.is_object() || !record.contains(key)) {
      throw ParseError(0, std::string("missing field '") + key + "'");
    }
    return record.at(key);
  };
  CausalPair pair;
  try {
    pair.sourceWords = require("source").get<std::vector<std::string>>();
    pair.targetWords = require("target").get<std::vector<std::string>>();
    pair.waitCount = require("waits").get<std::size_t>();
    pair.fillerCount = require("fillers").get<std::size_t>();
    std::vector<Link> links;
    for (const auto& l : require("links")) {
      if (!l.is_array() || l.size() != 2) throw ParseError(0, "link must be a [i, j] pair");
      links.push_back({l.at(0).get<std::size_t>(), l.at(1).get<std::size_t>()});
    }
    const auto sourceLen = stripToken(pair.sourceWords, kFillerToken).size();
    const auto targetLen = stripToken(pair.targetWords, kWaitToken).size();
    pair.originLinks = makeLinkSet(std::move(links), sourceLen, targetLen);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  } catch (const RangeError& e) {
    throw ParseError(0, e.what());
  }
  return pair;
}

}  // namespace simt
