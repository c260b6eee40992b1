#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "simt/causal.hpp"
#include "simt/prompt.hpp"

namespace simt {

struct SftConfig {
  std::string targetLanguage = "German";
  std::string waitLiteral = std::string(kWaitToken);
  /// Empty means "use defaultSystemMessage(targetLanguage, waitLiteral)".
  std::string systemMessage;
  bool includeSystemMessage = true;
  std::uint64_t seed = 0;
  std::size_t samplesPerPair = 1;

  PromptConfig promptConfig() const;
};

/// One prompt/completion training example. The loss covers only the
/// completion, which starts at byte offset `lossMaskBoundary` of
/// prompt + completion.
struct SftSample {
  std::string prompt;
  std::string completion;
  std::size_t pairIndex = 0;
  std::size_t trimLen = 0;
  std::size_t alignedLen = 0;
  std::size_t sourceLen = 0;
  std::size_t lossMaskBoundary = 0;

  bool operator==(const SftSample&) const = default;
};

struct TrimmedPair {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::size_t trimLen = 0;
  std::size_t alignedLen = 0;
};

/// Keeps the first `length` aligned positions of both sides, then drops
/// fillers and every WAIT except a trailing one. Throws RangeError unless
/// 1 <= length <= alignedLength().
TrimmedPair trimPair(const CausalPair& pair, std::size_t length);

/// Collates one trimmed pair into a sample.
SftSample collate(const TrimmedPair& trimmed, const SftConfig& config);

/// Draws samplesPerPair trim lengths uniformly from [1, L] for each pair in
/// order and hands each sample to `sink`. Deterministic given the seed.
/// Throws EmptyCorpus, RangeError (samplesPerPair == 0).
void emitSamples(std::span<const CausalPair> corpus, const SftConfig& config,
                 const std::function<void(const SftSample&)>& sink);

std::vector<SftSample> emitSamples(std::span<const CausalPair> corpus, const SftConfig& config);

/// JSON-lines record {"prompt", "completion", "meta": {...}}.
nlohmann::json toJson(const SftSample& sample);

/// Fine-tuning hyperparameters for external trainers, plus the dataset
/// settings that produced the samples. No training happens here.
nlohmann::json exportTrainingMeta(const SftConfig& config);

}  // namespace simt
