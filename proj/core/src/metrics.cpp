#include "simt/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "simt/bleu.hpp"
#include "simt/rng.hpp"
#include "simt/tokenizer.hpp"

namespace simt {
namespace {

void requireLengths(const DelaySequence& d, const char* metric) {
  if (d.g.empty() || d.sourceLen <= 0.0) {
    throw DegenerateInput(std::string(metric) + " needs a non-empty hypothesis and source");
  }
}

double laggingWithRate(const DelaySequence& d, double gamma) {
  const std::size_t tau = cutoffStep(d);
  double sum = 0.0;
  for (std::size_t t = 1; t <= tau; ++t) sum += d.g[t - 1] - static_cast<double>(t - 1) / gamma;
  return sum / static_cast<double>(tau);
}

std::string asciiLower(std::string s) {
  for (auto& c : s) {
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

std::size_t whitespaceWords(const std::string& text) {
  std::size_t count = 0;
  bool inWord = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !inWord) ++count;
    inWord = !space;
  }
  return count;
}

std::string formatNumber(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

}  // namespace

double averageProportion(const DelaySequence& d) {
  requireLengths(d, "AP");
  double sum = 0.0;
  for (double g : d.g) sum += g;
  return sum / (d.sourceLen * static_cast<double>(d.hypLen()));
}

std::size_t cutoffStep(const DelaySequence& d) {
  for (std::size_t t = 0; t < d.g.size(); ++t) {
    if (d.g[t] >= d.sourceLen) return t + 1;
  }
  return d.g.size();
}

bool reachesSourceEnd(const DelaySequence& d) {
  return std::any_of(d.g.begin(), d.g.end(), [&](double g) { return g >= d.sourceLen; });
}

double averageLagging(const DelaySequence& d) {
  requireLengths(d, "AL");
  return laggingWithRate(d, static_cast<double>(d.hypLen()) / d.sourceLen);
}

double lengthAdaptiveAverageLagging(const DelaySequence& d) {
  requireLengths(d, "LAAL");
  if (d.refLen == 0) throw DegenerateInput("LAAL needs the reference length");
  const auto longer = static_cast<double>(std::max(d.hypLen(), d.refLen));
  return laggingWithRate(d, longer / d.sourceLen);
}

double differentiableAverageLagging(const DelaySequence& d) {
  requireLengths(d, "DAL");
  const double gamma = static_cast<double>(d.hypLen()) / d.sourceLen;
  double previous = 0.0;
  double sum = 0.0;
  for (std::size_t t = 1; t <= d.hypLen(); ++t) {
    const double smoothed = t == 1 ? d.g[0] : std::max(d.g[t - 1], previous + 1.0 / gamma);
    sum += smoothed - static_cast<double>(t - 1) / gamma;
    previous = smoothed;
  }
  return sum / static_cast<double>(d.hypLen());
}

double realTimeFactor(double processingMs, double audioMs) {
  if (audioMs <= 0.0) throw DegenerateInput("RTF needs a positive audio duration");
  return processingMs / audioMs;
}

DelaySequence delaysOf(const SessionTrace& trace, const std::string& reference) {
  DelaySequence d;
  d.g = trace.delays();
  d.sourceLen = static_cast<double>(trace.sourceExtent);
  d.refLen = whitespaceWords(reference);
  return d;
}

EvaluationItem evaluationItem(const SessionTrace& trace, const std::string& reference) {
  EvaluationItem item;
  item.hypothesis = detokenize(trace.hypothesisWords);
  item.reference = reference;
  item.delays = delaysOf(trace, reference);
  item.processingMs = trace.processingMs;
  if (trace.mode == StreamMode::Speech) item.audioMs = static_cast<double>(trace.sourceExtent);
  return item;
}

LatencyReport evaluate(std::span<const EvaluationItem> items, LatencyUnit unit) {
  if (items.empty()) throw InputMismatch("nothing to evaluate");
  LatencyReport report;
  report.unit = unit;
  report.sessionCount = items.size();

  std::vector<std::string> hyps;
  std::vector<std::string> refs;
  double processing = 0.0;
  double audio = 0.0;
  bool timed = true;
  std::size_t measured = 0;
  for (const auto& item : items) {
    hyps.push_back(item.hypothesis);
    refs.push_back(item.reference);
    if (item.processingMs && item.audioMs) {
      processing += *item.processingMs;
      audio += *item.audioMs;
    } else {
      timed = false;
    }
    if (item.delays.g.empty() || item.delays.sourceLen <= 0.0) {
      ++report.emptySessions;
      continue;
    }
    ++measured;
    if (!reachesSourceEnd(item.delays)) ++report.truncatedSessions;
    report.al += averageLagging(item.delays);
    report.laal += item.delays.refLen ? lengthAdaptiveAverageLagging(item.delays) : averageLagging(item.delays);
    report.ap += averageProportion(item.delays);
    report.dal += differentiableAverageLagging(item.delays);
  }
  if (measured > 0) {
    const auto n = static_cast<double>(measured);
    report.al /= n;
    report.laal /= n;
    report.ap /= n;
    report.dal /= n;
  }
  report.bleu = corpusBleu(hyps, refs).score;
  if (timed && audio > 0.0) report.rtf = realTimeFactor(processing, audio);
  return report;
}

nlohmann::json toJson(const LatencyReport& report) {
  nlohmann::json j{{"bleu", report.bleu},
                   {"al", report.al},
                   {"laal", report.laal},
                   {"ap", report.ap},
                   {"dal", report.dal},
                   {"unit", report.unit == LatencyUnit::Words ? "words" : "ms"},
                   {"session_count", report.sessionCount},
                   {"truncated_sessions", report.truncatedSessions},
                   {"empty_sessions", report.emptySessions}};
  j["rtf"] = report.rtf ? nlohmann::json(*report.rtf) : nlohmann::json(nullptr);
  return j;
}

BootstrapReport bootstrap(std::span<const EvaluationItem> items, LatencyUnit unit, std::size_t resamples,
                          std::uint64_t seed) {
  if (items.empty()) throw InputMismatch("nothing to resample");
  BootstrapReport out;
  out.resamples = resamples;
  out.seed = seed;
  if (resamples == 0) return out;

  Rng rng(seed);
  std::map<std::string, std::vector<double>> samples;
  std::vector<EvaluationItem> draw(items.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    for (auto& slot : draw) slot = items[rng.uniform(0, items.size() - 1)];
    const auto report = evaluate(draw, unit);
    samples["bleu"].push_back(report.bleu);
    samples["al"].push_back(report.al);
    samples["laal"].push_back(report.laal);
    samples["ap"].push_back(report.ap);
    samples["dal"].push_back(report.dal);
    if (report.rtf) samples["rtf"].push_back(*report.rtf);
  }
  for (const auto& [name, values] : samples) {
    MetricSummary summary;
    for (double v : values) summary.mean += v;
    summary.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
      double squares = 0.0;
      for (double v : values) squares += (v - summary.mean) * (v - summary.mean);
      summary.stddev = std::sqrt(squares / static_cast<double>(values.size() - 1));
    }
    out.metrics[name] = summary;
  }
  return out;
}

nlohmann::json toJson(const BootstrapReport& report) {
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [name, s] : report.metrics) metrics[name] = {{"mean", s.mean}, {"std", s.stddev}};
  return {{"resamples", report.resamples}, {"seed", report.seed}, {"metrics", std::move(metrics)}};
}

double WaitHistogram::functionShare() const {
  return total == 0 ? 0.0 : static_cast<double>(functionWaits) / static_cast<double>(total);
}

WaitHistogram waitHistogram(std::span<const SessionTrace> traces, const std::set<std::string>& functionWords) {
  std::set<std::string> lowered;
  for (const auto& w : functionWords) lowered.insert(asciiLower(w));
  WaitHistogram h;
  for (const auto& trace : traces) {
    for (const auto& event : trace.events) {
      if (event.type != EventType::Wait || event.revealed == 0) continue;
      const auto& word = trace.sourceWords.at(event.revealed - 1);
      ++h.counts[word];
      ++h.total;
      if (lowered.contains(asciiLower(word))) ++h.functionWaits;
    }
  }
  return h;
}

nlohmann::json toJson(const WaitHistogram& histogram) {
  return {{"counts", histogram.counts},
          {"total", histogram.total},
          {"function_waits", histogram.functionWaits},
          {"function_share", histogram.functionShare()}};
}

std::set<std::string> loadWordList(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open word list " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto norm = normalizeWhitespace(line);
    if (norm.empty() || norm.front() == '#') continue;
    words.insert(norm);
  }
  return words;
}

std::string tradeoffCurve(std::vector<std::pair<std::size_t, LatencyReport>> runs) {
  if (runs.empty()) throw InputMismatch("trade-off curve needs at least one run");
  std::stable_sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string csv = "k,bleu,al,laal,ap,dal,rtf,unit,sessions\n";
  for (const auto& [k, r] : runs) {
    csv += std::to_string(k) + ',' + formatNumber(r.bleu) + ',' + formatNumber(r.al) + ',' + formatNumber(r.laal) +
           ',' + formatNumber(r.ap) + ',' + formatNumber(r.dal) + ',' + (r.rtf ? formatNumber(*r.rtf) : "") + ',' +
           (r.unit == LatencyUnit::Words ? "words" : "ms") + ',' + std::to_string(r.sessionCount) + '\n';
  }
  return csv;
}

}  // namespace simt
