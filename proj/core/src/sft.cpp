#include "simt/sft.hpp"

#include "simt/error.hpp"
#include "simt/rng.hpp"

namespace simt {

PromptConfig SftConfig::promptConfig() const {
  PromptConfig prompt;
  prompt.systemMessage = systemMessage.empty() ? defaultSystemMessage(targetLanguage, waitLiteral) : systemMessage;
  prompt.includeSystemMessage = includeSystemMessage;
  return prompt;
}

TrimmedPair trimPair(const CausalPair& pair, std::size_t length) {
  const std::size_t aligned = pair.alignedLength();
  if (length < 1 || length > aligned) {
    throw RangeError("trim length " + std::to_string(length) + " outside [1, " + std::to_string(aligned) + "]");
  }
  TrimmedPair out;
  out.trimLen = length;
  out.alignedLen = aligned;
  for (std::size_t i = 0; i < length; ++i) {
    if (pair.sourceWords[i] != kFillerToken) out.source.push_back(pair.sourceWords[i]);
  }
  const bool trailingWait = pair.targetWords[length - 1] == kWaitToken;
  for (std::size_t i = 0; i < length; ++i) {
    if (pair.targetWords[i] != kWaitToken) out.target.push_back(pair.targetWords[i]);
  }
  if (trailingWait) out.target.emplace_back(kWaitToken);
  return out;
}

SftSample collate(const TrimmedPair& trimmed, const SftConfig& config) {
  SftSample sample;
  sample.prompt = promptPrefix(config.promptConfig(), trimmed.source);
  std::vector<std::string> target = trimmed.target;
  if (config.waitLiteral != kWaitToken) {
    for (auto& w : target) {
      if (w == kWaitToken) w = config.waitLiteral;
    }
  }
  sample.completion = joinWords(target);
  sample.sourceLen = trimmed.source.size();
  sample.trimLen = trimmed.trimLen;
  sample.alignedLen = trimmed.alignedLen;
  sample.lossMaskBoundary = sample.prompt.size();
  return sample;
}

void emitSamples(std::span<const CausalPair> corpus, const SftConfig& config,
                 const std::function<void(const SftSample&)>& sink) {
  if (corpus.empty()) throw EmptyCorpus();
  if (config.samplesPerPair == 0) throw RangeError("samplesPerPair must be >= 1");
  Rng rng(config.seed);
  for (std::size_t index = 0; index < corpus.size(); ++index) {
    const auto& pair = corpus[index];
    const std::size_t aligned = pair.alignedLength();
    if (aligned == 0) throw PairError(index, "empty causal pair");
    for (std::size_t s = 0; s < config.samplesPerPair; ++s) {
      const auto length = static_cast<std::size_t>(rng.uniform(1, aligned));
      SftSample sample = collate(trimPair(pair, length), config);
      sample.pairIndex = index;
      sink(sample);
    }
  }
}

std::vector<SftSample> emitSamples(std::span<const CausalPair> corpus, const SftConfig& config) {
  std::vector<SftSample> out;
  emitSamples(corpus, config, [&](const SftSample& s) { out.push_back(s); });
  return out;
}

nlohmann::json toJson(const SftSample& sample) {
  return {{"prompt", sample.prompt},
          {"completion", sample.completion},
          {"meta",
           {{"pair_index", sample.pairIndex},
            {"trim_len", sample.trimLen},
            {"aligned_len", sample.alignedLen},
            {"source_len", sample.sourceLen},
            {"loss_mask_boundary", sample.lossMaskBoundary},
            {"is_complete", sample.trimLen == sample.alignedLen}}}};
}

nlohmann::json exportTrainingMeta(const SftConfig& config) {
  return {
      {"base_models", {"Llama-2-13b-hf", "Llama-2-70b-hf"}},
      {"load_in_4bit", true},
      {"lora_r", 16},
      {"lora_alpha", 32},
      {"epochs", 3},
      {"batch_size", 25},
      {"gradient_accumulation_steps", 4},
      {"optimizer", "paged_adamw_32bit"},
      {"learning_rate", 0.00005},
      {"lr_scheduler", "cosine"},
      {"warmup_steps", 10},
      {"checkpoint_every_steps", 10},
      {"checkpoint_selection", "lowest_validation_loss"},
      {"loss", "completion_only"},
      {"wait_literal", config.waitLiteral},
      {"wait_token_id", 0},
      {"generation", {{"top_p", 0.7}, {"greedy", true}, {"beam_search", false}}},
      {"dataset",
       {{"seed", config.seed},
        {"samples_per_pair", config.samplesPerPair},
        {"target_language", config.targetLanguage},
        {"system_message", config.includeSystemMessage ? config.promptConfig().systemMessage : ""},
        {"include_system_message", config.includeSystemMessage},
        {"trim_distribution", "uniform_inclusive_1_to_aligned_length"},
        {"rng", "mt19937_64+rejection"}}},
  };
}

}  // namespace simt
