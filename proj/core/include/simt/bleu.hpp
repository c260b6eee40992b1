#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simt {

/// mteval-v13a tokenization as used by sacrebleu's default "13a" tokenizer.
std::string tokenize13a(std::string_view line);

struct BleuStats {
  std::array<std::size_t, 4> correct{};
  std::array<std::size_t, 4> total{};
  std::size_t hypLen = 0;
  std::size_t refLen = 0;

  BleuStats& operator+=(const BleuStats& other);
};

/// Clipped n-gram statistics of one segment against a single reference.
BleuStats segmentStats(std::string_view hypothesis, std::string_view reference);

struct BleuScore {
  double score = 0.0;  // 0..100
  std::array<double, 4> precisions{};
  double brevityPenalty = 0.0;
  std::size_t hypLen = 0;
  std::size_t refLen = 0;
};

/// BLEU-4 from accumulated statistics, no smoothing.
BleuScore bleuFromStats(const BleuStats& stats);

/// Corpus BLEU-4 with 13a tokenization, brevity penalty, and no smoothing,
/// one reference per hypothesis. Throws InputMismatch when the list sizes
/// differ or are zero.
BleuScore corpusBleu(std::span<const std::string> hypotheses, std::span<const std::string> references);

}  // namespace simt
