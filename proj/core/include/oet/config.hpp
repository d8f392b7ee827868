#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "oet/tracker.hpp"

namespace oet {

/// One `key = value` line of a flat configuration file.
struct KeyValue {
  int line = 0;
  std::string key;
  std::string value;
};

/// Splits `key = value` lines; `#` starts a comment, blank lines are
/// skipped. Throws ParseError for lines without '=' or with an empty key.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

/// Typed accessors that throw ConfigError naming the key on mismatch.
int parse_int(const KeyValue& kv);
double parse_double(const KeyValue& kv);
bool parse_bool(const KeyValue& kv);
std::uint64_t parse_u64(const KeyValue& kv);
std::vector<double> parse_double_list(const KeyValue& kv);

/// Applies the entries to cfg. Unknown keys are rejected; the result is
/// validated.
void apply_config(TrackerConfig& cfg, std::span<const KeyValue> entries);

TrackerConfig parse_config(std::string_view text);
TrackerConfig load_config(const std::filesystem::path& path);

}  // namespace oet
