#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simt/backends.hpp"
#include "simt/sft.hpp"
#include "simt/source_stream.hpp"

namespace simt::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kPartialFailure = 2,
  kVerificationFailure = 3,
};

struct AlignOptions {
  fs::path input;   // JSONL {"source", "target"}
  fs::path output;  // causal corpus JSONL
  int iterations = 15;
  std::optional<fs::path> alignments;  // Pharaoh links to use instead of EM
  std::optional<fs::path> pharaohOut;
};

struct BuildDatasetOptions {
  fs::path corpus;
  fs::path output;
  std::optional<fs::path> meta;  // defaults to <output>.meta.json
  SftConfig sft;
};

enum class BackendKind { Scripted, Dictionary, Replay, Http };

BackendKind backendFromString(const std::string& name);

struct SimulateOptions {
  /// Text mode: JSONL {"id", "source", "target"}. Speech mode: a directory of
  /// transcript JSON files or a single one; the id is the file stem.
  fs::path testSet;
  fs::path outDir;
  std::vector<std::size_t> ks{1};
  StreamMode mode = StreamMode::Text;
  BackendKind backend = BackendKind::Dictionary;
  /// JSON object mapping sentence id to its unit list, e.g. ["<WAIT>", "Ya", "<EOS>"].
  std::optional<fs::path> script;
  std::optional<fs::path> dictionary;
  std::size_t lookahead = 0;
  std::optional<fs::path> recording;
  bool record = false;
  HttpBackendConfig http;
  std::size_t workers = 1;
  PromptConfig prompt;
  AsrSimConfig asr;
  bool wallClock = false;
};

struct EvaluateOptions {
  fs::path traceDir;
  /// JSONL {"id", "target"}; falls back to the reference stored in each trace.
  std::optional<fs::path> references;
  fs::path report;
  std::optional<fs::path> curve;
  std::optional<fs::path> functionWords;
  std::size_t bootstrap = 0;
  std::uint64_t seed = 0;
};

struct VerifyOptions {
  fs::path corpus;
  /// Parallel corpus the causal corpus was built from, for the round-trip check.
  std::optional<fs::path> original;
};

int cmdAlign(const AlignOptions& options, std::ostream& out, std::ostream& err);
int cmdBuildDataset(const BuildDatasetOptions& options, std::ostream& out, std::ostream& err);
int cmdSimulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmdEvaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);
int cmdVerify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

/// Trace file name for one session.
std::string traceFileName(const std::string& id, std::size_t k);

/// Parses arguments (argv[0] is the program name) and runs the subcommand.
/// Option precedence: flags, then the --config file, then SIMT_API_KEY_ENV,
/// then defaults.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace simt::cli
