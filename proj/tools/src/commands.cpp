#include "simt/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <atomic>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "simt/aligner.hpp"
#include "simt/causal.hpp"
#include "simt/engine.hpp"
#include "simt/metrics.hpp"
#include "simt/mock_backends.hpp"
#include "simt/tokenizer.hpp"
#include "simt/trace_io.hpp"

namespace simt::cli {
namespace {

using nlohmann::json;

struct Line {
  std::size_t number;  // 1-based
  std::string text;
};

std::vector<Line> readNonBlankLines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Line> lines;
  std::string text;
  for (std::size_t number = 1; std::getline(in, text); ++number) {
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (normalizeWhitespace(text).empty()) continue;
    lines.push_back({number, std::move(text)});
  }
  return lines;
}

json parseLine(const fs::path& path, const Line& line) {
  try {
    return json::parse(line.text);
  } catch (const json::parse_error& e) {
    throw ParseError(line.number, path.string() + ": " + e.what());
  }
}

std::string stringField(const fs::path& path, const Line& line, const json& record, const char* key) {
  if (!record.is_object() || !record.contains(key) || !record.at(key).is_string()) {
    throw ParseError(line.number, path.string() + ": missing string field '" + key + "'");
  }
  return record.at(key).get<std::string>();
}

void writeFileAtomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<SentencePair> readParallelCorpus(const fs::path& path) {
  std::vector<SentencePair> pairs;
  for (const auto& line : readNonBlankLines(path)) {
    const auto record = parseLine(path, line);
    SentencePair pair;
    try {
      pair.source = tokenize(stringField(path, line, record, "source"));
      pair.target = tokenize(stringField(path, line, record, "target"));
    } catch (const EmptySentence& e) {
      throw ParseError(line.number, path.string() + ": " + e.what());
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

struct TestItem {
  std::string id;
  std::vector<std::string> sourceWords;
  std::optional<TimedTranscript> transcript;
  std::string reference;
};

std::vector<TestItem> readTextTestSet(const fs::path& path) {
  std::vector<TestItem> items;
  for (const auto& line : readNonBlankLines(path)) {
    const auto record = parseLine(path, line);
    TestItem item;
    item.id = record.contains("id") ? (record.at("id").is_string() ? record.at("id").get<std::string>()
                                                                  : record.at("id").dump())
                                    : std::to_string(items.size());
    try {
      item.sourceWords = tokenize(stringField(path, line, record, "source")).words;
    } catch (const EmptySentence& e) {
      throw ParseError(line.number, path.string() + ": " + e.what());
    }
    if (record.contains("target") && record.at("target").is_string()) item.reference = record.at("target");
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<TestItem> readSpeechTestSet(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    if (!fs::exists(path)) throw Error("cannot open " + path.string());
    files.push_back(path);
  }
  std::vector<TestItem> items;
  for (const auto& file : files) {
    TestItem item;
    item.id = file.stem().string();
    item.transcript = loadTranscript(file);
    item.reference = item.transcript->reference;
    items.push_back(std::move(item));
  }
  return items;
}

std::map<std::string, std::vector<Unit>> readScripts(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(0, path.string() + ": script file must map ids to unit lists");
  std::map<std::string, std::vector<Unit>> scripts;
  for (const auto& [id, units] : doc.items()) {
    if (!units.is_array()) throw ParseError(0, path.string() + ": script for '" + id + "' is not a list");
    auto& out = scripts[id];
    for (const auto& u : units) {
      if (!u.is_string()) throw ParseError(0, path.string() + ": script units must be strings");
      out.push_back(unitFromString(u.get<std::string>()));
    }
  }
  return scripts;
}

class BackendFactory {
 public:
  explicit BackendFactory(const SimulateOptions& options) : options_(options) {
    switch (options.backend) {
      case BackendKind::Scripted:
        if (!options.script) throw Error("--backend scripted needs --script");
        scripts_ = readScripts(*options.script);
        break;
      case BackendKind::Dictionary:
        if (!options.dictionary) throw Error("--backend dict needs --dictionary");
        inner_ = std::make_unique<DictionaryBackend>(loadDictionary(*options.dictionary), options.lookahead);
        break;
      case BackendKind::Http:
        inner_ = std::make_unique<HttpBackend>(options.http);
        break;
      case BackendKind::Replay:
        if (!options.recording) throw Error("--backend replay needs --recording");
        shared_ = std::make_unique<RecordReplayBackend>(RecordReplayBackend::replay(*options.recording));
        break;
    }
    if (options.record) {
      if (!options.recording) throw Error("--record needs --recording");
      if (!inner_) throw Error("--record works with the dict and http backends");
      shared_ = std::make_unique<RecordReplayBackend>(RecordReplayBackend::record(*options.recording, *inner_));
    }
  }

  /// Recording appends in call order, so it runs sequentially to stay reproducible.
  bool parallel() const {
    if (options_.record) return false;
    if (options_.backend == BackendKind::Scripted) return true;
    return shared() ? shared()->concurrentSafe() : false;
  }

  /// Backend for one session; `owned` receives per-session instances.
  TranslatorBackend& forSession(const std::string& id, std::unique_ptr<TranslatorBackend>& owned) const {
    if (options_.backend == BackendKind::Scripted) {
      const auto it = scripts_.find(id);
      if (it == scripts_.end()) throw Error("no script for sentence '" + id + "'");
      owned = std::make_unique<ScriptedBackend>(it->second);
      return *owned;
    }
    return *shared();
  }

 private:
  TranslatorBackend* shared() const { return shared_ ? shared_.get() : inner_.get(); }

  const SimulateOptions& options_;
  std::map<std::string, std::vector<Unit>> scripts_;
  std::unique_ptr<TranslatorBackend> inner_;
  std::unique_ptr<TranslatorBackend> shared_;
};

struct Job {
  std::size_t item;
  std::size_t k;
};

struct JobResult {
  SessionTrace trace;
  bool failed = false;
};

JobResult runJob(const TestItem& item, std::size_t k, const SimulateOptions& options, const BackendFactory& factory) {
  SessionConfig config;
  config.k = k;
  config.prompt = options.prompt;
  config.recordWallClock = options.wallClock;
  JobResult result;
  try {
    std::unique_ptr<TranslatorBackend> owned;
    auto& backend = factory.forSession(item.id, owned);
    std::unique_ptr<WordSource> source;
    if (item.transcript) {
      source = std::make_unique<AsrSimStream>(*item.transcript, options.asr);
    } else {
      source = std::make_unique<TextStream>(item.sourceWords);
    }
    result.trace = runSession(*source, backend, config);
  } catch (const SessionError& e) {
    result.trace = e.partial();
    result.failed = true;
  } catch (const std::exception& e) {
    result.trace.mode = options.mode;
    result.trace.k = k;
    result.trace.error = e.what();
    result.failed = true;
  }
  result.trace.id = item.id;
  if (!item.reference.empty()) result.trace.reference = item.reference;
  return result;
}

}  // namespace

BackendKind backendFromString(const std::string& name) {
  if (name == "scripted") return BackendKind::Scripted;
  if (name == "dict" || name == "dictionary") return BackendKind::Dictionary;
  if (name == "replay") return BackendKind::Replay;
  if (name == "http") return BackendKind::Http;
  throw Error("unknown backend '" + name + "'");
}

std::string traceFileName(const std::string& id, std::size_t k) {
  std::string safe;
  for (char c : id) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    safe += keep ? c : '_';
  }
  return safe + ".k" + std::to_string(k) + ".json";
}

int cmdAlign(const AlignOptions& options, std::ostream& out, std::ostream&) {
  const auto pairs = readParallelCorpus(options.input);
  CausalCorpus corpus;
  std::vector<AlignmentLinkSet> links;
  if (options.alignments) {
    links = importAlignments(*options.alignments, pairs);
    corpus = buildCorpus(pairs, links);
  } else if (pairs.empty()) {
    corpus.stats = summarize({});
  } else {
    const auto model = trainAligner(pairs, options.iterations);
    links.reserve(pairs.size());
    for (const auto& p : pairs) links.push_back(alignPair(p.source, p.target, model.forward, model.reverse));
    corpus = buildCorpus(pairs, links);
  }

  std::string content;
  for (const auto& pair : corpus.pairs) content += toJson(pair).dump() + '\n';
  writeFileAtomic(options.output, content);
  if (options.pharaohOut) exportAlignments(*options.pharaohOut, links);

  const auto& s = corpus.stats;
  out << "pairs: " << s.pairs << "\nwaits: " << s.totalWaits << " (mean " << s.meanWaits << ")\nfillers: "
      << s.totalFillers << " (mean " << s.meanFillers << ")\n";
  return kSuccess;
}

int cmdBuildDataset(const BuildDatasetOptions& options, std::ostream& out, std::ostream&) {
  std::vector<CausalPair> corpus;
  for (const auto& line : readNonBlankLines(options.corpus)) {
    const std::size_t index = corpus.size();
    try {
      corpus.push_back(causalPairFromJson(json::parse(line.text)));
    } catch (const json::exception& e) {
      throw PairError(index, options.corpus.string() + " line " + std::to_string(line.number) + ": " + e.what());
    } catch (const Error& e) {
      throw PairError(index, options.corpus.string() + " line " + std::to_string(line.number) + ": " + e.what());
    }
  }
  if (corpus.empty()) throw EmptyCorpus();

  std::string content;
  std::size_t count = 0;
  emitSamples(corpus, options.sft, [&](const SftSample& sample) {
    content += toJson(sample).dump() + '\n';
    ++count;
  });
  writeFileAtomic(options.output, content);
  auto metaPath = options.meta.value_or(fs::path(options.output.string() + ".meta.json"));
  writeFileAtomic(metaPath, exportTrainingMeta(options.sft).dump(2) + '\n');
  out << "samples: " << count << "\npairs: " << corpus.size() << '\n';
  return kSuccess;
}

int cmdSimulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  if (options.ks.empty()) throw Error("--k needs at least one value");
  if (std::find(options.ks.begin(), options.ks.end(), 0) != options.ks.end()) throw RangeError("k must be >= 1");
  if (options.workers == 0) throw RangeError("--workers must be >= 1");
  const auto items =
      options.mode == StreamMode::Speech ? readSpeechTestSet(options.testSet) : readTextTestSet(options.testSet);
  const BackendFactory factory(options);

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t k : options.ks) jobs.push_back({i, k});
  }
  fs::create_directories(options.outDir);

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      results[j] = runJob(items[jobs[j].item], jobs[j].k, options, factory);
      writeTrace(options.outDir / traceFileName(items[jobs[j].item].id, jobs[j].k), results[j].trace);
    }
  };
  const std::size_t threads = factory.parallel() ? std::min(options.workers, std::max<std::size_t>(jobs.size(), 1)) : 1;
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::map<std::size_t, std::pair<std::size_t, std::size_t>> perK;  // k -> (sessions, failures)
  std::size_t failures = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& [sessions, failed] = perK[jobs[j].k];
    ++sessions;
    if (results[j].failed) {
      ++failed;
      ++failures;
      err << items[jobs[j].item].id << " k=" << jobs[j].k << ": " << results[j].trace.error.value_or("failed")
          << '\n';
    }
  }
  for (const auto& [k, counts] : perK) {
    out << "k=" << k << ": " << counts.first << " sessions, " << counts.second << " failed\n";
  }
  return failures ? kPartialFailure : kSuccess;
}

int cmdEvaluate(const EvaluateOptions& options, std::ostream& out, std::ostream&) {
  if (!fs::is_directory(options.traceDir)) throw Error("cannot open trace directory " + options.traceDir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(options.traceDir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputMismatch("no traces in " + options.traceDir.string());

  std::map<std::string, std::string> references;
  if (options.references) {
    for (const auto& line : readNonBlankLines(*options.references)) {
      const auto record = parseLine(*options.references, line);
      const auto id = stringField(*options.references, line, record, "id");
      references[id] = stringField(*options.references, line, record, "target");
    }
  }

  std::map<std::size_t, std::vector<SessionTrace>> byK;
  std::map<std::size_t, std::size_t> failedByK;
  std::optional<StreamMode> mode;
  for (const auto& file : files) {
    auto trace = readTrace(file);
    if (mode && *mode != trace.mode) throw InputMismatch("traces mix text and speech mode");
    mode = trace.mode;
    if (trace.error) {
      ++failedByK[trace.k];
      continue;
    }
    byK[trace.k].push_back(std::move(trace));
  }
  const auto unit = mode == StreamMode::Speech ? LatencyUnit::Milliseconds : LatencyUnit::Words;

  std::set<std::string> functionWords;
  if (options.functionWords) functionWords = loadWordList(*options.functionWords);

  json report;
  report["runs"] = json::array();
  std::vector<std::pair<std::size_t, LatencyReport>> curve;
  for (const auto& [k, traces] : byK) {
    std::vector<EvaluationItem> items;
    for (const auto& trace : traces) {
      std::string reference;
      if (const auto it = references.find(trace.id); it != references.end()) {
        reference = it->second;
      } else if (trace.reference) {
        reference = *trace.reference;
      } else {
        throw InputMismatch("no reference for id '" + trace.id + "'");
      }
      items.push_back(evaluationItem(trace, reference));
    }
    const auto latency = evaluate(items, unit);
    curve.emplace_back(k, latency);
    json run{{"k", k}, {"metrics", toJson(latency)}, {"failed_sessions", failedByK[k]}};
    if (options.bootstrap > 0) run["bootstrap"] = toJson(bootstrap(items, unit, options.bootstrap, options.seed));
    if (options.functionWords) run["wait_histogram"] = toJson(waitHistogram(traces, functionWords));
    report["runs"].push_back(std::move(run));
    out << "k=" << k << " BLEU " << latency.bleu << " AL " << latency.al << " LAAL " << latency.laal << " AP "
        << latency.ap << " DAL " << latency.dal << '\n';
  }
  if (byK.empty()) throw InputMismatch("every trace in " + options.traceDir.string() + " failed");
  writeFileAtomic(options.report, report.dump(2) + '\n');
  if (options.curve) writeFileAtomic(*options.curve, tradeoffCurve(curve));
  return kSuccess;
}

int cmdVerify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  const auto lines = readNonBlankLines(options.corpus);
  std::vector<SentencePair> originals;
  if (options.original) originals = readParallelCorpus(*options.original);
  if (lines.empty()) {
    err << "warning: " << options.corpus.string() << " has no records\n";
    out << "verified 0 pairs\n";
    return kSuccess;
  }
  if (options.original && originals.size() != lines.size()) {
    err << "original corpus has " << originals.size() << " pairs, causal corpus has " << lines.size() << '\n';
    return kVerificationFailure;
  }

  std::size_t failing = 0;
  for (std::size_t index = 0; index < lines.size(); ++index) {
    std::vector<std::string> problems;
    try {
      const auto record = json::parse(lines[index].text);
      const auto source = record.at("source").get<std::vector<std::string>>();
      const auto target = record.at("target").get<std::vector<std::string>>();
      const auto links = record.at("links").get<std::vector<std::array<std::size_t, 2>>>();
      const auto waits = record.at("waits").get<std::size_t>();
      const auto fillers = record.at("fillers").get<std::size_t>();

      if (source.size() != target.size()) problems.push_back("source and target lengths differ");
      std::size_t firstFiller = source.size();
      std::size_t fillerSeen = 0;
      for (std::size_t i = 0; i < source.size(); ++i) {
        if (source[i] == kFillerToken) {
          firstFiller = std::min(firstFiller, i);
          ++fillerSeen;
        } else if (firstFiller < i) {
          problems.push_back("filler inside the source");
          break;
        }
        if (source[i] == kWaitToken) problems.push_back("WAIT in the source");
      }
      if (fillerSeen != fillers) problems.push_back("filler count mismatch");

      // Original target index -> aligned position.
      std::vector<std::size_t> position;
      std::size_t waitSeen = 0;
      for (std::size_t p = 0; p < target.size(); ++p) {
        if (target[p] == kWaitToken) {
          ++waitSeen;
        } else if (target[p] == kFillerToken) {
          problems.push_back("filler in the target");
        } else {
          position.push_back(p);
        }
      }
      if (waitSeen != waits) problems.push_back("WAIT count mismatch");

      const std::size_t sourceWords = source.size() - fillerSeen;
      for (const auto& [i, j] : links) {
        if (i >= sourceWords || j >= position.size()) {
          problems.push_back("link " + std::to_string(i) + "-" + std::to_string(j) + " out of range");
        } else if (position[j] < i) {
          problems.push_back("target word " + std::to_string(j) + " at position " + std::to_string(position[j]) +
                             " precedes source word " + std::to_string(i));
        }
      }

      if (options.original) {
        const auto& orig = originals[index];
        std::vector<std::string> strippedSource(source.begin(), source.end());
        std::erase(strippedSource, std::string(kFillerToken));
        std::vector<std::string> strippedTarget(target.begin(), target.end());
        std::erase(strippedTarget, std::string(kWaitToken));
        if (strippedSource != orig.source.words) problems.push_back("source does not round-trip");
        if (strippedTarget != orig.target.words) problems.push_back("target does not round-trip");
      }
    } catch (const json::exception& e) {
      problems.push_back(std::string("malformed record: ") + e.what());
    }
    if (!problems.empty()) {
      ++failing;
      for (const auto& p : problems) err << "pair " << index << ": " << p << '\n';
    }
  }
  out << "verified " << lines.size() << " pairs, " << failing << " failing\n";
  return failing ? kVerificationFailure : kSuccess;
}

}  // namespace simt::cli
