#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plap/errors.hpp"

namespace plap {

// INI-style run configuration:
//   - '#' starts a comment (full line or trailing);
//   - '[section]' opens a section; keys before any section are top-level;
//   - 'key = value' entries, whitespace-trimmed;
//   - keys are addressed as "section.key" (or the bare key at top level);
//   - duplicate keys are parse errors, unknown keys are validation errors.
// Number lists are comma-separated; booleans are true/false; "inf" is
// accepted where a norm order is expected.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text,
                           const std::string& origin = "<inline>");

  bool has(const std::string& key) const;

  // Typed getters; a wrong type raises a validation error naming the field,
  // a missing key without default likewise.
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double fallback) const;
  long get_integer(const std::string& key) const;
  long get_integer(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_number_list(const std::string& key) const;

  // Getters mark keys consumed; once validation is done, any leftover key is
  // reported as unknown. `has` also consumes so optional gates work.
  void ensure_all_consumed() const;

  // Normalized re-rendering for the run manifest.
  std::string echo() const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string key;  // normalized "section.key"
    std::string value;
    int line = 0;
  };

  const Entry* find(const std::string& key) const;
  const Entry& require(const std::string& key) const;

  std::string origin_;
  std::vector<Entry> entries_;
  mutable std::vector<bool> consumed_;
};

}  // namespace plap
