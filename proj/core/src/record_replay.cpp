#include <openssl/evp.h>

#include <array>
#include <fstream>

#include "simt/backends.hpp"

namespace simt {

std::string sha256Hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

namespace {

nlohmann::json unitJson(const Unit& unit) {
  switch (unit.kind) {
    case UnitKind::Wait:
      return {{"type", "wait"}};
    case UnitKind::Eos:
      return {{"type", "eos"}};
    case UnitKind::Word:
      break;
  }
  return {{"type", "word"}, {"word", unit.word}};
}

Unit unitFromJson(const nlohmann::json& json) {
  const auto type = json.at("type").get<std::string>();
  if (type == "wait") return Unit::makeWait();
  if (type == "eos") return Unit::makeEos();
  if (type == "word") return Unit::makeWord(json.at("word").get<std::string>());
  throw ParseError(0, "unknown unit type '" + type + "'");
}

}  // namespace

RecordReplayBackend::RecordReplayBackend(std::filesystem::path path, TranslatorBackend* inner)
    : path_(std::move(path)), inner_(inner) {
  if (!std::filesystem::exists(path_)) {
    if (!inner_) throw Error("recording not found: " + path_.string());
    return;
  }
  std::ifstream in(path_);
  if (!in) throw Error("cannot read recording " + path_.string());
  std::string line;
  std::size_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (line.empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      const Key key{record.at("prompt_sha256").get<std::string>(), record.value("suppress_wait", false)};
      units_.try_emplace(key, unitFromJson(record.at("unit")));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineNumber, path_.string() + ": " + e.what());
    }
  }
}

RecordReplayBackend RecordReplayBackend::record(const std::filesystem::path& path, TranslatorBackend& inner) {
  return RecordReplayBackend(path, &inner);
}

RecordReplayBackend RecordReplayBackend::replay(const std::filesystem::path& path) {
  return RecordReplayBackend(path, nullptr);
}

RecordReplayBackend::RecordReplayBackend(RecordReplayBackend&& other) noexcept
    : path_(std::move(other.path_)), inner_(other.inner_), units_(std::move(other.units_)) {}

RecordReplayBackend::~RecordReplayBackend() = default;

bool RecordReplayBackend::concurrentSafe() const { return inner_ == nullptr || inner_->concurrentSafe(); }

std::size_t RecordReplayBackend::size() const {
  std::lock_guard lock(mutex_);
  return units_.size();
}

Unit RecordReplayBackend::nextUnit(const std::string& prompt, bool suppressWait) {
  const Key key{sha256Hex(prompt), suppressWait};
  if (!inner_) {
    std::lock_guard lock(mutex_);
    auto it = units_.find(key);
    if (it == units_.end()) {
      throw ReplayMiss("no recorded unit for prompt " + key.first + (suppressWait ? " (WAIT suppressed)" : ""));
    }
    return it->second;
  }
  Unit unit = inner_->nextUnit(prompt, suppressWait);
  std::lock_guard lock(mutex_);
  if (units_.try_emplace(key, unit).second) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot append to recording " + path_.string());
    nlohmann::json record{{"prompt_sha256", key.first}, {"suppress_wait", suppressWait}, {"unit", unitJson(unit)}};
    out << record.dump() << '\n';
  }
  return unit;
}

}  // namespace simt
