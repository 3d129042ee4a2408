#pragma once

#include <string>
#include <vector>

#include "cdyn/spec_json.hpp"
#include "cdyn/words.hpp"

namespace cdyn {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a (64-bit, hex) of the canonical serialization of the parameters.
std::string config_hash(const Json& parameters);

/// {"command", "parameters", "results", "anomalies", "version", "config_hash"}.
Json make_report(const std::string& command, const Json& parameters, const Json& results,
                 const std::vector<std::string>& anomalies);

/// Sorted keys, two-space indent, trailing newline.
std::string render(const Json& report);

std::string cycles_csv(const std::vector<CycleEntry>& cycles);

/// Throws Io with the path on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace cdyn
