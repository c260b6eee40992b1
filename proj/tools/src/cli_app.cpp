#include <ostream>

#include "CLI11.hpp"
#include "simt/cli/commands.hpp"
#include "simt/error.hpp"

namespace simt::cli {
namespace {

void addPromptOptions(CLI::App& cmd, bool& noSystemMessage, std::string& targetLanguage, std::string& systemMessage) {
  cmd.add_flag("--no-system-message", noSystemMessage, "Leave the <<SYS>> block out of the prompt");
  cmd.add_option("--target-language", targetLanguage, "Target language named in the default system message")
      ->capture_default_str();
  cmd.add_option("--system-message", systemMessage, "Replace the default system message");
}

PromptConfig promptConfig(bool noSystemMessage, const std::string& targetLanguage, const std::string& systemMessage) {
  PromptConfig config;
  config.includeSystemMessage = !noSystemMessage;
  config.systemMessage = systemMessage.empty() ? defaultSystemMessage(targetLanguage) : systemMessage;
  return config;
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simultaneous translation toolkit: causal alignment, SFT data, wait-k sessions, evaluation", "simt"};
  app.set_config("--config", "", "INI/TOML file with option defaults; [section] per subcommand");
  app.require_subcommand(1);
  bool printConfig = false;
  app.add_flag("--print-config", printConfig, "Print the merged options of the subcommand and exit");

  AlignOptions align;
  auto* alignCmd = app.add_subcommand("align", "Tokenize, align and causally restructure a parallel corpus");
  alignCmd->add_option("input", align.input, "JSONL of {\"source\", \"target\"}")->required();
  alignCmd->add_option("-o,--output", align.output, "Causal corpus JSONL")->required();
  alignCmd->add_option("--iterations", align.iterations, "EM iterations")->capture_default_str()->check(
      CLI::PositiveNumber);
  alignCmd->add_option("--alignments", align.alignments, "Pharaoh links to use instead of EM");
  alignCmd->add_option("--pharaoh-out", align.pharaohOut, "Write the links in Pharaoh format");

  BuildDatasetOptions build;
  bool buildNoSys = false;
  std::string buildLanguage = "German";
  std::string buildSystem;
  auto* buildCmd = app.add_subcommand("build-dataset", "Emit SFT prompt/completion samples");
  buildCmd->add_option("corpus", build.corpus, "Causal corpus JSONL")->required();
  buildCmd->add_option("-o,--output", build.output, "SFT JSONL")->required();
  buildCmd->add_option("--meta", build.meta, "Training metadata sidecar (default <output>.meta.json)");
  buildCmd->add_option("--seed", build.sft.seed, "RNG seed")->capture_default_str();
  buildCmd->add_option("--samples-per-pair", build.sft.samplesPerPair, "Trim draws per pair")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  addPromptOptions(*buildCmd, buildNoSys, buildLanguage, buildSystem);

  SimulateOptions sim;
  bool simNoSys = false;
  std::string simLanguage = "German";
  std::string simSystem;
  std::string simMode = "text";
  std::string simBackend = "dict";
  std::uint64_t simSeed = 0;
  auto* simCmd = app.add_subcommand("simulate", "Run wait-k sessions and write one trace per (sentence, k)");
  simCmd->add_option("test-set", sim.testSet, "JSONL test set, or transcript directory in speech mode")->required();
  simCmd->add_option("-o,--out-dir", sim.outDir, "Trace directory")->required();
  simCmd->add_option("--k", sim.ks, "Wait-k values, e.g. 1,3,5")->delimiter(',')->capture_default_str();
  simCmd->add_option("--mode", simMode, "text or speech")
      ->check(CLI::IsMember({"text", "speech"}))
      ->capture_default_str();
  simCmd->add_option("--backend", simBackend, "scripted, dict, replay or http")
      ->check(CLI::IsMember({"scripted", "dict", "replay", "http"}))
      ->capture_default_str();
  simCmd->add_option("--seed", simSeed, "Accepted for symmetry; sessions are deterministic");
  simCmd->add_option("--workers", sim.workers, "Concurrent sessions")->capture_default_str()->check(
      CLI::PositiveNumber);
  simCmd->add_option("--window-ms", sim.asr.windowMs, "ASR window in speech mode")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simCmd->add_option("--script", sim.script, "Scripted backend units per sentence id (JSON)");
  simCmd->add_option("--dictionary", sim.dictionary, "Dictionary TSV: source, target[, lookahead]");
  simCmd->add_option("--lookahead", sim.lookahead, "Default dictionary lookahead")->capture_default_str();
  simCmd->add_option("--recording", sim.recording, "Record/replay file");
  simCmd->add_flag("--record", sim.record, "Record the dict or http backend's answers to --recording");
  simCmd->add_option("--endpoint", sim.http.endpointUrl, "Completion endpoint URL")->capture_default_str();
  simCmd->add_option("--model", sim.http.modelName, "Model name sent to the server");
  simCmd->add_option("--api-key-env", sim.http.apiKeyEnv, "Environment variable holding the API key")
      ->envname("SIMT_API_KEY_ENV");
  simCmd->add_option("--top-p", sim.http.topP, "Nucleus sampling mass")->capture_default_str();
  simCmd->add_option("--max-unit-tokens", sim.http.maxUnitTokens, "Token budget per unit")->capture_default_str();
  simCmd->add_option("--timeout-ms", sim.http.timeoutMs, "HTTP timeout")->capture_default_str();
  simCmd->add_option("--retries", sim.http.retries, "HTTP retries")->capture_default_str();
  simCmd->add_flag("--wall-clock", sim.wallClock, "Record wall-clock stamps (needed for RTF)");
  addPromptOptions(*simCmd, simNoSys, simLanguage, simSystem);

  EvaluateOptions eval;
  auto* evalCmd = app.add_subcommand("evaluate", "BLEU and latency metrics over a trace directory");
  evalCmd->add_option("trace-dir", eval.traceDir, "Directory of trace JSON files")->required();
  evalCmd->add_option("-o,--report", eval.report, "Report JSON")->required();
  evalCmd->add_option("--references", eval.references, "JSONL of {\"id\", \"target\"}");
  evalCmd->add_option("--curve", eval.curve, "Quality-latency CSV");
  evalCmd->add_option("--function-words", eval.functionWords, "Word list for the WAIT histogram");
  evalCmd->add_option("--bootstrap", eval.bootstrap, "Resamples with replacement")->capture_default_str();
  evalCmd->add_option("--seed", eval.seed, "Bootstrap seed")->capture_default_str();

  VerifyOptions verify;
  auto* verifyCmd = app.add_subcommand("verify", "Re-check causality, lengths and round trip of a causal corpus");
  verifyCmd->add_option("corpus", verify.corpus, "Causal corpus JSONL")->required();
  verifyCmd->add_option("--original", verify.original, "Parallel corpus for the round-trip check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
  }

  if (printConfig) {
    out << app.config_to_str(true, false);
    return kSuccess;
  }

  try {
    if (*alignCmd) return cmdAlign(align, out, err);
    if (*buildCmd) {
      build.sft.targetLanguage = buildLanguage;
      build.sft.systemMessage = buildSystem;
      build.sft.includeSystemMessage = !buildNoSys;
      return cmdBuildDataset(build, out, err);
    }
    if (*simCmd) {
      sim.mode = streamModeFromString(simMode);
      sim.backend = backendFromString(simBackend);
      sim.prompt = promptConfig(simNoSys, simLanguage, simSystem);
      return cmdSimulate(sim, out, err);
    }
    if (*evalCmd) return cmdEvaluate(eval, out, err);
    if (*verifyCmd) return cmdVerify(verify, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace simt::cli
