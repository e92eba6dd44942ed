// Run configuration: a flat table of dotted keys with typed defaults, read from
// YAML (or JSON, which YAML accepts) plus key=value overrides.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace optomech::config {

enum class Kind { Number, Integer, Text };
enum class Bound { None, Positive, NonNegative, Fraction };

using Value = std::variant<double, long long, std::string>;

struct KeySpec {
  std::string key;
  Kind kind = Kind::Number;
  Value fallback;
  std::string unit;  // CSV unit label, "1" for dimensionless
  std::string help;
  Bound bound = Bound::None;
  std::vector<std::string> choices;  // Text keys only; empty means free text
};

const std::vector<KeySpec>& schema();
const KeySpec* find_key(const std::string& key);

/// One line per key: name, default, unit and description.
std::string help_text();

/// Closest schema key by edit distance, compared on the full key and on its last segment.
std::string nearest_key(const std::string& key);

class RunConfig {
 public:
  RunConfig();

  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  /// Stores without checks; validate() reports problems.
  void set(const std::string& key, Value v, bool explicit_value = true);
  bool is_explicit(const std::string& key) const { return explicit_.count(key) > 0; }

  /// Every bound and cross-key rule; all errors, not only the first.
  std::vector<std::string> validate() const;

  const std::map<std::string, Value>& values() const { return values_; }
  nlohmann::json to_json() const;

 private:
  const Value& get(const std::string& key) const;
  std::map<std::string, Value> values_;
  std::set<std::string> explicit_;
};

struct Validation {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return config.has_value(); }
};

/// Parses text (may be empty), applies "key=value" overrides in order, then validates.
Validation validate_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Converts a textual scalar to the kind the key expects; errors name the key.
std::optional<Value> parse_value(const KeySpec& spec, const std::string& raw, std::string& error);

std::string format_value(const Value& v);

}  // namespace optomech::config
