#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "simt/engine.hpp"

namespace simt {

/// Session trace as JSON: id, mode, k, source, source_extent, hypothesis,
/// delays_words, delays_ms (speech only), events, reference, timestamps and
/// error. Keys serialize sorted, so equal traces give equal bytes.
nlohmann::json toJson(const SessionTrace& trace);

/// Throws ParseError on missing or ill-typed fields.
SessionTrace traceFromJson(const nlohmann::json& json);

/// Writes through a temporary file and a rename.
void writeTrace(const std::filesystem::path& path, const SessionTrace& trace);
SessionTrace readTrace(const std::filesystem::path& path);

}  // namespace simt
