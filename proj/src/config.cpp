#include "plap/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace plap {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key_char(char c) {
  return std::islower(static_cast<unsigned char>(c)) ||
         std::isdigit(static_cast<unsigned char>(c)) || c == '_';
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), valid_key_char);
}

[[noreturn]] void parse_fail(const std::string& origin, int line,
                             const std::string& message) {
  fail(ErrorCode::Parse,
       origin + ":" + std::to_string(line) + ": " + message);
}

double parse_scalar(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    fail(ErrorCode::Validation,
         "config field '" + key + "': expected a number, got '" + t + "'");
  }
  return value;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config config;
  config.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        parse_fail(origin, line, "unterminated section header '" + stripped + "'");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (!valid_key(section)) {
        parse_fail(origin, line, "invalid section name '" + section + "'");
      }
      continue;
    }

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      parse_fail(origin, line,
                 "expected 'key = value' or '[section]', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    if (!valid_key(key)) {
      parse_fail(origin, line, "invalid key '" + key + "'");
    }
    const std::string full_key = section.empty() ? key : section + "." + key;
    if (config.find(full_key) != nullptr) {
      parse_fail(origin, line, "duplicate key '" + full_key + "'");
    }
    config.entries_.push_back(
        Entry{full_key, trim(stripped.substr(eq + 1)), line});
  }
  config.consumed_.assign(config.entries_.size(), false);
  return config;
}

const Config::Entry* Config::find(const std::string& key) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].key == key) {
      if (!consumed_.empty()) consumed_[i] = true;
      return &entries_[i];
    }
  }
  return nullptr;
}

const Config::Entry& Config::require(const std::string& key) const {
  const Entry* entry = find(key);
  if (entry == nullptr) {
    fail(ErrorCode::Validation,
         "config field '" + key + "' is required but missing (" + origin_ + ")");
  }
  return *entry;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

std::string Config::get_string(const std::string& key) const {
  return require(key).value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const Entry* entry = find(key);
  return entry ? entry->value : fallback;
}

double Config::get_number(const std::string& key) const {
  return parse_scalar(require(key).value, key);
}

double Config::get_number(const std::string& key, double fallback) const {
  const Entry* entry = find(key);
  return entry ? parse_scalar(entry->value, key) : fallback;
}

long Config::get_integer(const std::string& key) const {
  const double v = get_number(key);
  if (v != std::floor(v) || std::abs(v) > 1e15) {
    fail(ErrorCode::Validation,
         "config field '" + key + "': expected an integer");
  }
  return static_cast<long>(v);
}

long Config::get_integer(const std::string& key, long fallback) const {
  return find(key) ? get_integer(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const Entry* entry = find(key);
  if (!entry) return fallback;
  if (entry->value == "true") return true;
  if (entry->value == "false") return false;
  fail(ErrorCode::Validation,
       "config field '" + key + "': expected true or false, got '" +
           entry->value + "'");
}

std::vector<double> Config::get_number_list(const std::string& key) const {
  const Entry& entry = require(key);
  std::vector<double> values;
  std::size_t start = 0;
  const std::string& v = entry.value;
  if (trim(v).empty()) return values;
  while (true) {
    const std::size_t comma = v.find(',', start);
    const std::string field = v.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    values.push_back(parse_scalar(field, key));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

void Config::ensure_all_consumed() const {
  std::string unknown;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!consumed_[i]) {
      if (!unknown.empty()) unknown += ", ";
      unknown += "'" + entries_[i].key + "' (line " +
                 std::to_string(entries_[i].line) + ")";
    }
  }
  if (!unknown.empty()) {
    fail(ErrorCode::Validation,
         "unknown config field(s) in " + origin_ + ": " + unknown);
  }
}

std::string Config::echo() const {
  std::ostringstream out;
  std::string section;
  for (const Entry& entry : entries_) {
    const std::size_t dot = entry.key.find('.');
    const std::string entry_section =
        dot == std::string::npos ? "" : entry.key.substr(0, dot);
    const std::string bare =
        dot == std::string::npos ? entry.key : entry.key.substr(dot + 1);
    if (entry_section != section) {
      section = entry_section;
      out << "[" << section << "]\n";
    }
    out << bare << " = " << entry.value << "\n";
  }
  return out.str();
}

}  // namespace plap
