#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "simt/engine.hpp"

namespace simt {

/// Delays g(t) of one hypothesis: source consumed (words or ms) when target
/// word t was committed. `sourceLen` is |x| in the same unit.
struct DelaySequence {
  std::vector<double> g;
  double sourceLen = 0.0;
  std::size_t refLen = 0;

  std::size_t hypLen() const { return g.size(); }
};

/// Average Proportion: sum of g over |x| * |y|.
double averageProportion(const DelaySequence& d);

/// 1-based index of the first write made with the whole source available,
/// or |y| when that never happens.
std::size_t cutoffStep(const DelaySequence& d);

/// True when some g(t) reaches |x|; AL-style metrics fall back to tau = |y|
/// otherwise.
bool reachesSourceEnd(const DelaySequence& d);

/// Average Lagging with gamma = |y| / |x|, averaged up to the cutoff step.
double averageLagging(const DelaySequence& d);

/// AL with gamma = max(|y|, |y*|) / |x|; requires refLen.
double lengthAdaptiveAverageLagging(const DelaySequence& d);

/// Differentiable Average Lagging: each delay is pushed to at least
/// 1/gamma after the previous one, then averaged over all of |y|.
double differentiableAverageLagging(const DelaySequence& d);

double realTimeFactor(double processingMs, double audioMs);

/// Delay sequence of a finished session; refLen is the whitespace word count
/// of `reference`.
DelaySequence delaysOf(const SessionTrace& trace, const std::string& reference);

enum class LatencyUnit { Words, Milliseconds };

struct LatencyReport {
  double bleu = 0.0;
  double al = 0.0;
  double laal = 0.0;
  double ap = 0.0;
  double dal = 0.0;
  std::optional<double> rtf;
  LatencyUnit unit = LatencyUnit::Words;
  std::size_t sessionCount = 0;
  /// Sessions whose delays never reached |x| (tau fell back to |y|).
  std::size_t truncatedSessions = 0;
  /// Sessions left out of the latency means because they wrote nothing.
  std::size_t emptySessions = 0;
};

nlohmann::json toJson(const LatencyReport& report);

/// One evaluated session: hypothesis, reference, and delays.
struct EvaluationItem {
  std::string hypothesis;  // detokenized
  std::string reference;
  DelaySequence delays;
  std::optional<double> processingMs;
  std::optional<double> audioMs;
};

EvaluationItem evaluationItem(const SessionTrace& trace, const std::string& reference);

/// Corpus BLEU plus per-session latency means. RTF is total processing time
/// over total audio, present only when every item has both. Throws
/// InputMismatch on an empty set.
LatencyReport evaluate(std::span<const EvaluationItem> items, LatencyUnit unit);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

struct BootstrapReport {
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
  std::map<std::string, MetricSummary> metrics;  // bleu, al, laal, ap, dal[, rtf]
};

/// Resamples the item set with replacement `resamples` times and reports the
/// mean and sample standard deviation of every metric.
BootstrapReport bootstrap(std::span<const EvaluationItem> items, LatencyUnit unit, std::size_t resamples,
                          std::uint64_t seed);

nlohmann::json toJson(const BootstrapReport& report);

struct WaitHistogram {
  std::map<std::string, std::size_t> counts;  // preceding source word -> WAITs
  std::size_t total = 0;
  std::size_t functionWaits = 0;

  /// Share of WAITs that followed a function word; 0 when there are none.
  double functionShare() const;
};

/// Counts the source word that was last revealed when each WAIT was emitted.
/// Function-word membership is case-insensitive for ASCII letters.
WaitHistogram waitHistogram(std::span<const SessionTrace> traces, const std::set<std::string>& functionWords);

nlohmann::json toJson(const WaitHistogram& histogram);

/// One word per line; blank lines and '#' comments are skipped.
std::set<std::string> loadWordList(const std::string& path);

/// CSV rows "k,bleu,al,laal,ap,dal,rtf,unit,sessions" sorted by k; runs with
/// equal k keep their input order. Throws InputMismatch when empty.
std::string tradeoffCurve(std::vector<std::pair<std::size_t, LatencyReport>> runs);

}  // namespace simt
