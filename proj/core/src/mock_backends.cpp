#include "simt/mock_backends.hpp"

#include <fstream>

#include "simt/prompt.hpp"

namespace simt {

ScriptedBackend::ScriptedBackend(std::vector<Unit> script) : script_(std::move(script)) {}

Unit ScriptedBackend::nextUnit(const std::string&, bool) {
  if (position_ >= script_.size()) throw ScriptUnderrun();
  return script_[position_++];
}

DictionaryBackend::DictionaryBackend(Dictionary dictionary, std::size_t defaultLookahead)
    : dictionary_(std::move(dictionary)), defaultLookahead_(defaultLookahead) {}

DictionaryEntry DictionaryBackend::lookup(const std::string& word) const {
  auto it = dictionary_.find(word);
  if (it != dictionary_.end()) return it->second;
  return {word, defaultLookahead_};
}

Unit DictionaryBackend::nextUnit(const std::string& prompt, bool suppressWait) {
  std::vector<std::string> source;
  std::vector<std::string> target;
  if (!parsePrompt(prompt, source, target)) throw MalformedResponse("dictionary backend: unrecognized prompt");
  const std::size_t t = target.size();
  if (t >= source.size()) return suppressWait ? Unit::makeEos() : Unit::makeWait();
  const auto entry = lookup(source[t]);
  if (suppressWait || t + entry.lookahead < source.size()) return Unit::makeWord(entry.translation);
  return Unit::makeWait();
}

std::vector<std::string> DictionaryBackend::translate(const std::vector<std::string>& source) const {
  std::vector<std::string> out;
  out.reserve(source.size());
  for (const auto& w : source) out.push_back(lookup(w).translation);
  return out;
}

Dictionary loadDictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dictionary " + path.string());
  Dictionary dict;
  std::string line;
  std::size_t lineNumber = 0;
  while (std::getline(in, line)) {
    ++lineNumber;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() || fields[1].empty() ||
        fields[1].find(' ') != std::string::npos) {
      throw ParseError(lineNumber, "expected 'source<TAB>translation[<TAB>lookahead]'");
    }
    DictionaryEntry entry{fields[1], 0};
    if (fields.size() == 3) {
      try {
        std::size_t used = 0;
        entry.lookahead = std::stoul(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ParseError(lineNumber, "invalid lookahead '" + fields[2] + "'");
      }
    }
    dict[fields[0]] = std::move(entry);
  }
  return dict;
}

}  // namespace simt
