#include "oet/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "oet/error.hpp"

namespace oet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const KeyValue& kv, const char* expected) {
  T value{};
  const char* begin = kv.value.data();
  const char* end = begin + kv.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || kv.value.empty()) {
    throw ConfigError(kv.key, std::string("expected ") + expected + ", got '" +
                                  kv.value + "' (line " + std::to_string(kv.line) + ")");
  }
  return value;
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    out.push_back({line_no, std::string(key), std::string(trim(line.substr(eq + 1)))});
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int parse_int(const KeyValue& kv) { return parse_number<int>(kv, "an integer"); }

double parse_double(const KeyValue& kv) {
  return parse_number<double>(kv, "a number");
}

std::uint64_t parse_u64(const KeyValue& kv) {
  return parse_number<std::uint64_t>(kv, "a non-negative integer");
}

bool parse_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
  if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
  throw ConfigError(kv.key, "expected true or false, got '" + kv.value + "'");
}

std::vector<double> parse_double_list(const KeyValue& kv) {
  std::vector<double> out;
  std::string_view rest = kv.value;
  // Accept "5,7,9" as well as "{5, 7, 9}".
  if (!rest.empty() && rest.front() == '{') rest.remove_prefix(1);
  if (!rest.empty() && rest.back() == '}') rest.remove_suffix(1);
  while (!trim(rest).empty()) {
    const auto comma = rest.find(',');
    KeyValue item{kv.line, kv.key, std::string(trim(rest.substr(0, comma)))};
    out.push_back(parse_number<double>(item, "a comma-separated list of numbers"));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

void apply_config(TrackerConfig& cfg, std::span<const KeyValue> entries) {
  bool background_given = false;
  for (const auto& kv : entries) {
    const std::string& k = kv.key;
    if (k == "n_candidates") {
      cfg.n_candidates = parse_int(kv);
    } else if (k == "trans_std") {
      cfg.trans_std = parse_double(kv);
    } else if (k == "scale_std") {
      cfg.scale_std = parse_double(kv);
    } else if (k == "buffer_size") {
      cfg.buffer_size = parse_int(kv);
    } else if (k == "n_background") {
      cfg.n_background = parse_int(kv);
      background_given = true;
    } else if (k == "shift_magnitudes") {
      cfg.shift_magnitudes = parse_double_list(kv);
    } else if (k == "relearn_interval") {
      cfg.relearn_interval = parse_int(kv);
    } else if (k == "feature_mode") {
      try {
        cfg.feature_mode = parse_feature_mode(kv.value);
      } catch (const InvalidParameter& e) {
        throw ConfigError(k, e.what());
      }
    } else if (k == "lambda") {
      cfg.solver.lambda = parse_double(kv);
    } else if (k == "scale_lambda") {
      cfg.solver.scale_lambda = parse_bool(kv);
    } else if (k == "mu") {
      if (kv.value == "auto") {
        cfg.solver.mu.reset();
      } else {
        cfg.solver.mu = parse_double(kv);
      }
    } else if (k == "tol") {
      cfg.solver.tol = parse_double(kv);
    } else if (k == "max_iter") {
      cfg.solver.max_iter = parse_int(kv);
    } else if (k == "label_sigma") {
      cfg.solver.label_sigma = parse_double(kv);
    } else if (k == "observation_gain") {
      cfg.observation_gain = parse_double(kv);
    } else if (k == "classifier_reg") {
      if (kv.value == "auto") {
        cfg.classifier_reg.reset();
      } else {
        cfg.classifier_reg = parse_double(kv);
      }
    } else if (k == "seed") {
      cfg.seed = parse_u64(kv);
    } else if (k == "workers") {
      cfg.workers = parse_int(kv);
    } else {
      throw ConfigError(k, "unknown key (line " + std::to_string(kv.line) + ")");
    }
  }
  if (!background_given) {
    cfg.n_background = 8 * static_cast<int>(cfg.shift_magnitudes.size());
  }
  cfg.validate();
}

TrackerConfig parse_config(std::string_view text) {
  TrackerConfig cfg;
  const auto entries = parse_key_values(text);
  apply_config(cfg, entries);
  return cfg;
}

TrackerConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

}  // namespace oet
