#include "simt/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "simt/error.hpp"

namespace simt {
namespace {

bool isDigit(char c) { return c >= '0' && c <= '9'; }

// {-~  [-`  space-&  (-+  :-@  /
bool isSeparated(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x7B && u <= 0x7E) || (u >= 0x5B && u <= 0x60) || (u >= 0x20 && u <= 0x26) ||
         (u >= 0x28 && u <= 0x2B) || (u >= 0x3A && u <= 0x40) || u == '/';
}

void replaceAll(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool isSplitSpace(char c) {
  const auto u = static_cast<unsigned char>(c);
  return c == ' ' || (u >= 0x09 && u <= 0x0D) || (u >= 0x1C && u <= 0x1F);
}

std::vector<std::string> splitSpaces(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && isSplitSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !isSplitSpace(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts countNgrams(const std::vector<std::string>& words, std::size_t n) {
  NgramCounts counts;
  if (words.size() < n) return counts;
  for (std::size_t i = 0; i + n <= words.size(); ++i) {
    std::vector<std::string_view> gram(words.begin() + static_cast<std::ptrdiff_t>(i),
                                       words.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++counts[std::move(gram)];
  }
  return counts;
}

}  // namespace

std::string tokenize13a(std::string_view input) {
  std::string line(input);
  replaceAll(line, "<skipped>", "");
  replaceAll(line, "-\n", "");
  replaceAll(line, "\n", " ");
  if (line.find('&') != std::string::npos) {
    replaceAll(line, "&quot;", "\"");
    replaceAll(line, "&amp;", "&");
    replaceAll(line, "&lt;", "<");
    replaceAll(line, "&gt;", ">");
  }
  line = " " + line + " ";

  // Each pass mirrors one left-to-right, non-overlapping regex substitution.
  std::string pass;
  for (char c : line) {
    if (isSeparated(c)) {
      pass += ' ';
      pass += c;
      pass += ' ';
    } else {
      pass += c;
    }
  }

  // ([^0-9])([\.,]) -> "\1 \2 "
  line.clear();
  for (std::size_t i = 0; i < pass.size();) {
    if (i + 1 < pass.size() && !isDigit(pass[i]) && (pass[i + 1] == '.' || pass[i + 1] == ',')) {
      line += pass[i];
      line += ' ';
      line += pass[i + 1];
      line += ' ';
      i += 2;
    } else {
      line += pass[i++];
    }
  }

  // ([\.,])([^0-9]) -> " \1 \2"
  pass.clear();
  for (std::size_t i = 0; i < line.size();) {
    if (i + 1 < line.size() && (line[i] == '.' || line[i] == ',') && !isDigit(line[i + 1])) {
      pass += ' ';
      pass += line[i];
      pass += ' ';
      pass += line[i + 1];
      i += 2;
    } else {
      pass += line[i++];
    }
  }

  // ([0-9])(-) -> "\1 \2 "
  line.clear();
  for (std::size_t i = 0; i < pass.size();) {
    if (i + 1 < pass.size() && isDigit(pass[i]) && pass[i + 1] == '-') {
      line += pass[i];
      line += ' ';
      line += '-';
      line += ' ';
      i += 2;
    } else {
      line += pass[i++];
    }
  }

  std::string out;
  for (const auto& w : splitSpaces(line)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (std::size_t n = 0; n < 4; ++n) {
    correct[n] += other.correct[n];
    total[n] += other.total[n];
  }
  hypLen += other.hypLen;
  refLen += other.refLen;
  return *this;
}

BleuStats segmentStats(std::string_view hypothesis, std::string_view reference) {
  const auto hyp = splitSpaces(tokenize13a(hypothesis));
  const auto ref = splitSpaces(tokenize13a(reference));
  BleuStats stats;
  stats.hypLen = hyp.size();
  stats.refLen = ref.size();
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto hypCounts = countNgrams(hyp, n);
    const auto refCounts = countNgrams(ref, n);
    for (const auto& [gram, count] : hypCounts) {
      stats.total[n - 1] += count;
      auto it = refCounts.find(gram);
      if (it != refCounts.end()) stats.correct[n - 1] += std::min(count, it->second);
    }
  }
  return stats;
}

BleuScore bleuFromStats(const BleuStats& stats) {
  BleuScore score;
  score.hypLen = stats.hypLen;
  score.refLen = stats.refLen;
  score.brevityPenalty = 1.0;
  if (stats.hypLen < stats.refLen) {
    score.brevityPenalty =
        stats.hypLen > 0 ? std::exp(1.0 - static_cast<double>(stats.refLen) / static_cast<double>(stats.hypLen))
                         : 0.0;
  }
  for (std::size_t n = 0; n < 4; ++n) {
    if (stats.total[n] == 0) break;
    score.precisions[n] = 100.0 * static_cast<double>(stats.correct[n]) / static_cast<double>(stats.total[n]);
  }
  if (std::any_of(score.precisions.begin(), score.precisions.end(), [](double p) { return p == 0.0; })) {
    score.score = 0.0;
    return score;
  }
  double logSum = 0.0;
  for (double p : score.precisions) logSum += std::log(p);
  score.score = score.brevityPenalty * std::exp(logSum / 4.0);
  return score;
}

BleuScore corpusBleu(std::span<const std::string> hypotheses, std::span<const std::string> references) {
  if (hypotheses.size() != references.size()) {
    throw InputMismatch(std::to_string(hypotheses.size()) + " hypotheses vs " + std::to_string(references.size()) +
                        " references");
  }
  if (hypotheses.empty()) throw InputMismatch("BLEU needs at least one segment");
  BleuStats stats;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) stats += segmentStats(hypotheses[i], references[i]);
  return bleuFromStats(stats);
}

}  // namespace simt
