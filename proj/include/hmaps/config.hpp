#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmaps/target_metrics.hpp"

namespace hmaps {

enum class Subcommand { metrics, solve, closedform, verify, evolve };

const char* to_string(Subcommand s);
Subcommand parse_subcommand(std::string_view name);

enum class ValueKind { real, integer, text, boolean };

struct KeySpec {
  std::string_view name;
  ValueKind kind;
  std::string_view fallback;  // empty: no default
};

std::span<const KeySpec> known_keys();

// Resolved settings for one invocation. Values are kept as validated text so
// the echo in exported metadata is exactly what was given.
class RunConfig {
 public:
  Subcommand subcommand = Subcommand::metrics;
  std::string action;  // "list" or "curvature" for metrics

  bool has(std::string_view key) const;  // explicitly set or defaulted
  bool given(std::string_view key) const;  // explicitly set
  double real(std::string_view key) const;
  int integer(std::string_view key) const;
  std::string text(std::string_view key) const;
  bool flag(std::string_view key) const;

  void set(std::string_view key, std::string_view value);

  // Throws ValidationError naming the first missing key.
  void require(std::initializer_list<std::string_view> keys) const;

  // param.<name> entries, plus the c shortcut when the metric takes c.
  ParamList metric_params() const;

  // Every known key with a value (given or default), sorted by name.
  std::vector<std::pair<std::string, std::string>> resolved() const;

 private:
  const std::string* lookup(std::string_view key) const;

  std::map<std::string, std::string, std::less<>> values_;
};

// file_text: `key = value` lines, '#' comments. args: positional subcommand
// (and action for metrics) followed by --key value flags, which win over
// the file. `--param k=v` sets metric parameter k.
RunConfig parse_config(std::string_view file_text, std::span<const std::string> args);

}  // namespace hmaps
