#include "hmaps/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "hmaps/errors.hpp"

namespace hmaps {

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::metrics: return "metrics";
    case Subcommand::solve: return "solve";
    case Subcommand::closedform: return "closedform";
    case Subcommand::verify: return "verify";
    case Subcommand::evolve: return "evolve";
  }
  return "?";
}

Subcommand parse_subcommand(std::string_view name) {
  if (name == "metrics") return Subcommand::metrics;
  if (name == "solve") return Subcommand::solve;
  if (name == "closedform") return Subcommand::closedform;
  if (name == "verify") return Subcommand::verify;
  if (name == "evolve") return Subcommand::evolve;
  throw ValidationError("unknown subcommand '" + std::string(name) +
                        "' (expected metrics, solve, closedform, verify, evolve)");
}

namespace {

using VK = ValueKind;

constexpr std::array kKeys{
    KeySpec{"metric", VK::text, ""},
    KeySpec{"name", VK::text, ""},
    KeySpec{"c", VK::real, ""},
    KeySpec{"eps2", VK::integer, ""},
    KeySpec{"del2", VK::integer, ""},
    KeySpec{"a", VK::real, ""},
    KeySpec{"b", VK::real, ""},
    KeySpec{"kappa", VK::real, ""},
    KeySpec{"lambda", VK::real, ""},
    KeySpec{"r0", VK::real, ""},
    KeySpec{"rp0", VK::real, ""},
    KeySpec{"sign", VK::integer, "1"},
    KeySpec{"t0", VK::real, "0"},
    KeySpec{"t1", VK::real, ""},
    KeySpec{"t_seed", VK::real, ""},
    KeySpec{"dt", VK::real, "0.001"},
    KeySpec{"method", VK::text, "rk4"},
    KeySpec{"invariant_tol", VK::real, "1e-08"},
    KeySpec{"max_steps", VK::integer, "50000000"},
    KeySpec{"out", VK::text, ""},
    KeySpec{"map_out", VK::text, ""},
    KeySpec{"format", VK::text, ""},
    KeySpec{"x_min", VK::real, "-1"},
    KeySpec{"x_max", VK::real, "1"},
    KeySpec{"y_min", VK::real, "-1"},
    KeySpec{"y_max", VK::real, "1"},
    KeySpec{"nx", VK::integer, "50"},
    KeySpec{"ny", VK::integer, "50"},
    KeySpec{"fd_h", VK::real, "0.001"},
    KeySpec{"fd_order", VK::integer, "2"},
    KeySpec{"samples", VK::integer, "9"},
    KeySpec{"r_min", VK::real, ""},
    KeySpec{"r_max", VK::real, ""},
    KeySpec{"family", VK::text, ""},
    KeySpec{"theta", VK::real, ""},
    KeySpec{"embed", VK::boolean, "false"},
    KeySpec{"recover", VK::boolean, "false"},
    KeySpec{"input", VK::text, ""},
    KeySpec{"solution", VK::text, ""},
    KeySpec{"dx", VK::real, "0.01"},
    KeySpec{"cfl", VK::real, "0.5"},
    KeySpec{"T", VK::real, "1"},
    KeySpec{"chart", VK::text, "auto"},
    KeySpec{"sweeps", VK::integer, "3"},
    KeySpec{"fields_out", VK::text, ""},
};

constexpr std::string_view kParamPrefix = "param.";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const KeySpec* find_key(std::string_view name) {
  for (const KeySpec& k : kKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool parse_real(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_int(std::string_view s, long long& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_bool(std::string_view s, bool& out) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no" || s == "off") {
    out = false;
    return true;
  }
  return false;
}

ValueKind kind_of(std::string_view key) {
  if (key.starts_with(kParamPrefix)) return ValueKind::real;
  const KeySpec* k = find_key(key);
  if (!k) throw ValidationError("unknown key '" + std::string(key) + "'");
  return k->kind;
}

void type_check(std::string_view key, std::string_view value) {
  double d;
  long long i;
  bool b;
  switch (kind_of(key)) {
    case ValueKind::real:
      if (!parse_real(value, d) || !std::isfinite(d)) {
        throw ValidationError("key '" + std::string(key) + "' expects a number, got '" +
                              std::string(value) + "'");
      }
      break;
    case ValueKind::integer:
      if (!parse_int(value, i)) {
        throw ValidationError("key '" + std::string(key) + "' expects an integer, got '" +
                              std::string(value) + "'");
      }
      break;
    case ValueKind::boolean:
      if (!parse_bool(value, b)) {
        throw ValidationError("key '" + std::string(key) + "' expects true/false, got '" +
                              std::string(value) + "'");
      }
      break;
    case ValueKind::text:
      if (value.empty()) throw ValidationError("key '" + std::string(key) + "' is empty");
      break;
  }
}

std::string normalize_flag(std::string_view flag) {
  std::string key(flag);
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

}  // namespace

std::span<const KeySpec> known_keys() { return kKeys; }

const std::string* RunConfig::lookup(std::string_view key) const {
  if (auto it = values_.find(key); it != values_.end()) return &it->second;
  return nullptr;
}

bool RunConfig::given(std::string_view key) const { return lookup(key) != nullptr; }

bool RunConfig::has(std::string_view key) const {
  if (given(key)) return true;
  const KeySpec* k = find_key(key);
  return k && !k->fallback.empty();
}

namespace {

std::string value_or_default(const std::string* v, std::string_view key) {
  if (v) return *v;
  const KeySpec* k = find_key(key);
  if (k && !k->fallback.empty()) return std::string(k->fallback);
  throw ValidationError("missing required key '" + std::string(key) + "'");
}

}  // namespace

double RunConfig::real(std::string_view key) const {
  double d = 0.0;
  parse_real(value_or_default(lookup(key), key), d);
  return d;
}

int RunConfig::integer(std::string_view key) const {
  long long i = 0;
  parse_int(value_or_default(lookup(key), key), i);
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw ValidationError("key '" + std::string(key) + "' out of range");
  }
  return int(i);
}

std::string RunConfig::text(std::string_view key) const {
  return value_or_default(lookup(key), key);
}

bool RunConfig::flag(std::string_view key) const {
  bool b = false;
  parse_bool(value_or_default(lookup(key), key), b);
  return b;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  type_check(key, value);
  values_[std::string(key)] = std::string(trim(value));
}

void RunConfig::require(std::initializer_list<std::string_view> keys) const {
  for (std::string_view k : keys) {
    if (!has(k)) {
      throw ValidationError("missing required key '" + std::string(k) + "' for subcommand " +
                            to_string(subcommand));
    }
  }
}

ParamList RunConfig::metric_params() const {
  ParamList out;
  for (const auto& [k, v] : values_) {
    if (k.starts_with(kParamPrefix)) {
      double d = 0.0;
      parse_real(v, d);
      out[k.substr(kParamPrefix.size())] = d;
    }
  }
  if (given("c") && !out.contains("c")) out["c"] = real("c");
  return out;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::map<std::string, std::string> all;
  for (const KeySpec& k : kKeys) {
    if (!k.fallback.empty()) all[std::string(k.name)] = std::string(k.fallback);
  }
  for (const auto& [k, v] : values_) all[k] = v;
  return {all.begin(), all.end()};
}

RunConfig parse_config(std::string_view file_text, std::span<const std::string> args) {
  RunConfig cfg;

  std::size_t line_no = 0;
  while (!file_text.empty()) {
    const auto nl = file_text.find('\n');
    std::string_view line = file_text.substr(0, nl);
    file_text = nl == std::string_view::npos ? std::string_view{} : file_text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = normalize_flag(trim(line.substr(0, eq)));
    cfg.set(key, trim(line.substr(eq + 1)));
  }

  std::vector<std::string> positional;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string_view arg = args[i];
    if (!arg.starts_with("--")) {
      positional.emplace_back(arg);
      continue;
    }
    arg.remove_prefix(2);
    std::string key;
    std::string value;
    bool have_value = false;
    if (arg.starts_with("param=")) {
      key = "param";
      value = std::string(arg.substr(6));
      have_value = true;
    } else if (const auto eq = arg.find('='); eq != std::string_view::npos) {
      key = normalize_flag(arg.substr(0, eq));
      value = std::string(arg.substr(eq + 1));
      have_value = true;
    } else {
      key = normalize_flag(arg);
    }
    if (!have_value && kind_of(key == "param" ? "param.x" : key) == ValueKind::boolean) {
      // bare boolean switch unless an explicit value follows
      bool b;
      if (i + 1 < args.size() && parse_bool(args[i + 1], b)) {
        value = args[++i];
      } else {
        value = "true";
      }
      have_value = true;
    }
    if (!have_value) {
      if (i + 1 >= args.size()) throw ValidationError("flag --" + std::string(arg) + " needs a value");
      value = args[++i];
    }
    if (key == "param") {
      const auto eq = value.find('=');
      if (eq == std::string::npos) throw ValidationError("--param expects name=value");
      key = std::string(kParamPrefix) + std::string(trim(std::string_view(value).substr(0, eq)));
      value = value.substr(eq + 1);
    }
    cfg.set(key, value);
  }

  if (positional.empty()) throw ValidationError("missing subcommand");
  cfg.subcommand = parse_subcommand(positional[0]);
  if (cfg.subcommand == Subcommand::metrics) {
    cfg.action = positional.size() > 1 ? positional[1] : "list";
    if (cfg.action != "list" && cfg.action != "curvature") {
      throw ValidationError("metrics action must be list or curvature");
    }
    if (positional.size() > 2) throw ValidationError("unexpected argument '" + positional[2] + "'");
  } else if (positional.size() > 1) {
    throw ValidationError("unexpected argument '" + positional[1] + "'");
  }
  if (cfg.given("name") && !cfg.given("metric")) cfg.set("metric", cfg.text("name"));
  return cfg;
}

}  // namespace hmaps
