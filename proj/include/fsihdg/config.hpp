#pragma once

// Case configuration: a small TOML-compatible reader (sections, scalars,
// homogeneous arrays, comments) plus the validated experiment schema.
// Validation is exhaustive: every violation is reported, not just the first.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fsihdg {

// ---------------------------------------------------------------------------
// TOML-subset document
// ---------------------------------------------------------------------------

struct TomlValue {
  enum class Kind { Number, String, Boolean, NumberList, StringList };
  Kind kind = Kind::Number;
  double number = 0;
  bool boolean = false;
  std::string text;
  std::vector<double> numbers;
  std::vector<std::string> texts;
};

struct TomlDocument {
  std::map<std::string, TomlValue> values;  // "section.key" -> value
  std::map<std::string, int> line_of;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline bool valid_key(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.')
      return false;
  return true;
}

inline bool parse_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

/// Splits a bracketed array body at top-level commas.
inline std::vector<std::string> split_items(const std::string& body) {
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty()) items.push_back(last);
  return items;
}

inline bool parse_scalar(const std::string& raw, TomlValue& v,
                         std::string& why) {
  const std::string s = trim(raw);
  if (s.empty()) {
    why = "empty value";
    return false;
  }
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') {
      why = "unterminated string";
      return false;
    }
    v.kind = TomlValue::Kind::String;
    v.text = s.substr(1, s.size() - 2);
    return true;
  }
  if (s == "true" || s == "false") {
    v.kind = TomlValue::Kind::Boolean;
    v.boolean = s == "true";
    return true;
  }
  if (parse_number(s, v.number)) {
    v.kind = TomlValue::Kind::Number;
    return true;
  }
  why = "cannot parse value '" + s + "'";
  return false;
}

}  // namespace detail

/// Parses the supported TOML subset; syntax problems are appended to
/// `errors` with line numbers and the offending line is skipped.
inline TomlDocument parse_toml(const std::string& text,
                               std::vector<std::string>& errors) {
  TomlDocument doc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  auto fail = [&errors, &lineno](const std::string& why) {
    errors.push_back("line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::trim(detail::strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        fail("unterminated section header");
        continue;
      }
      section = detail::trim(s.substr(1, s.size() - 2));
      if (!detail::valid_key(section)) {
        fail("invalid section name '" + section + "'");
        section.clear();
      }
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      fail("expected key = value");
      continue;
    }
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string raw = detail::trim(s.substr(eq + 1));
    if (!detail::valid_key(key)) {
      fail("invalid key '" + key + "'");
      continue;
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (doc.values.count(full)) {
      fail("duplicate key '" + full + "'");
      continue;
    }
    TomlValue v;
    std::string why;
    if (!raw.empty() && raw.front() == '[') {
      if (raw.back() != ']') {
        fail("unterminated array");
        continue;
      }
      const std::vector<std::string> items =
          detail::split_items(raw.substr(1, raw.size() - 2));
      bool ok = true;
      bool any_string = false, any_number = false;
      std::vector<TomlValue> parsed(items.size());
      for (std::size_t i = 0; i < items.size() && ok; ++i) {
        ok = detail::parse_scalar(items[i], parsed[i], why);
        if (ok) {
          any_string |= parsed[i].kind == TomlValue::Kind::String;
          any_number |= parsed[i].kind == TomlValue::Kind::Number;
        }
      }
      if (!ok) {
        fail(why);
        continue;
      }
      if (any_string && any_number) {
        fail("mixed array types for '" + full + "'");
        continue;
      }
      v.kind = any_string ? TomlValue::Kind::StringList
                          : TomlValue::Kind::NumberList;
      for (const TomlValue& item : parsed) {
        if (v.kind == TomlValue::Kind::StringList)
          v.texts.push_back(item.text);
        else
          v.numbers.push_back(item.number);
      }
    } else if (!detail::parse_scalar(raw, v, why)) {
      fail(why);
      continue;
    }
    doc.values[full] = v;
    doc.line_of[full] = lineno;
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Case schema
// ---------------------------------------------------------------------------

struct BcEntry {
  bool normal_essential = true;
  bool tangential_essential = true;
  std::string traction = "zero";  // zero | inlet_pulse; only for natural normal
};

struct CaseConfig {
  std::string experiment;         // converge | pulse2d | single
  std::string geometry;           // layered | channel
  int k = 1;
  std::string scheme = "cn";      // cn | bdf3
  std::string bdf3_bootstrap = "exact";  // exact | cn
  std::vector<int> n{10, 20, 40};
  bool dt_is_h = false;
  double dt = 0;
  double t_end = 0;
  double rho_f = 1, mu_f = 1;
  // solid parameters: either a study grid (rho_s, delta1, delta2 with
  // mu_s = delta1 rho_s, lambda_s = delta2 mu_s) or absolute values
  std::vector<double> rho_s{1}, delta1{1}, delta2{1};
  bool absolute_solid = false;
  double mu_s = 0, lambda_s = 0, beta_s = 0;
  double p_max = 1.333e4, t_max = 3e-2;  // inlet pulse shape
  double tol = 1e-8;
  int maxit = 500;
  std::string backend = "direct";  // direct | amg
  std::string out_dir = ".";
  std::map<std::string, BcEntry> bc;  // complete table, one row per part
};

namespace detail {

struct ConfigReader {
  const TomlDocument& doc;
  std::vector<std::string>& errors;
  std::set<std::string> used;

  bool has(const std::string& key) { return doc.values.count(key) > 0; }

  const TomlValue* fetch(const std::string& key, TomlValue::Kind kind,
                         const char* what) {
    auto it = doc.values.find(key);
    if (it == doc.values.end()) return nullptr;
    used.insert(key);
    if (it->second.kind != kind) {
      errors.push_back(key + ": expected " + what);
      return nullptr;
    }
    return &it->second;
  }

  double number(const std::string& key, double fallback) {
    const TomlValue* v = fetch(key, TomlValue::Kind::Number, "a number");
    return v ? v->number : fallback;
  }

  int integer(const std::string& key, int fallback) {
    const TomlValue* v = fetch(key, TomlValue::Kind::Number, "a number");
    if (!v) return fallback;
    const double r = v->number;
    if (r != static_cast<double>(static_cast<long long>(r))) {
      errors.push_back(key + ": expected an integer");
      return fallback;
    }
    return static_cast<int>(r);
  }

  std::string str(const std::string& key, const std::string& fallback) {
    const TomlValue* v = fetch(key, TomlValue::Kind::String, "a string");
    return v ? v->text : fallback;
  }

  /// Scalar numbers are accepted as one-element lists.
  std::vector<double> number_list(const std::string& key,
                                  std::vector<double> fallback) {
    auto it = doc.values.find(key);
    if (it == doc.values.end()) return fallback;
    used.insert(key);
    if (it->second.kind == TomlValue::Kind::Number) return {it->second.number};
    if (it->second.kind == TomlValue::Kind::NumberList)
      return it->second.numbers;
    errors.push_back(key + ": expected a number or number array");
    return fallback;
  }

  std::string enum_str(const std::string& key, const std::string& fallback,
                       const std::vector<std::string>& allowed) {
    const std::string v = str(key, fallback);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string opts;
      for (const std::string& o : allowed) opts += (opts.empty() ? "" : ", ") + o;
      errors.push_back(key + ": must be one of {" + opts + "}");
      return fallback;
    }
    return v;
  }

  void finish() {
    for (const auto& [key, value] : doc.values)
      if (!used.count(key)) errors.push_back(key + ": unknown key");
  }
};

inline const std::vector<std::string>& geometry_parts(
    const std::string& geometry) {
  static const std::vector<std::string> layered{"exterior"};
  static const std::vector<std::string> channel{
      "fluid_inlet", "fluid_outlet", "fluid_bottom",
      "solid_inlet", "solid_outlet", "solid_top"};
  return geometry == "channel" ? channel : layered;
}

inline std::map<std::string, BcEntry> default_bc_table(
    const std::string& geometry) {
  std::map<std::string, BcEntry> bc;
  if (geometry == "channel") {
    bc["fluid_inlet"] = {false, true, "inlet_pulse"};
    bc["fluid_outlet"] = {false, true, "zero"};
    bc["fluid_bottom"] = {true, false, "zero"};
    bc["solid_inlet"] = {true, true, "zero"};
    bc["solid_outlet"] = {true, true, "zero"};
    bc["solid_top"] = {false, true, "zero"};
  } else {
    bc["exterior"] = {true, true, "zero"};
  }
  return bc;
}

}  // namespace detail

/// Reads and validates a case configuration. All violations are collected
/// into `errors`; the returned config is only meaningful when empty.
inline CaseConfig load_case_config(const std::string& text,
                                   std::vector<std::string>& errors) {
  const TomlDocument doc = parse_toml(text, errors);
  detail::ConfigReader r{doc, errors, {}};
  CaseConfig c;

  // --- [case] --------------------------------------------------------------
  if (!r.has("case.experiment"))
    errors.push_back("case.experiment: required (converge | pulse2d | single)");
  c.experiment = r.enum_str("case.experiment", "single",
                            {"converge", "pulse2d", "single"});
  const std::string default_geometry =
      c.experiment == "pulse2d" ? "channel" : "layered";
  c.geometry =
      r.enum_str("case.geometry", default_geometry, {"layered", "channel"});
  if (c.experiment == "converge" && c.geometry != "layered")
    errors.push_back("case.geometry: converge requires layered");
  if (c.experiment == "pulse2d" && c.geometry != "channel")
    errors.push_back("case.geometry: pulse2d requires channel");

  c.k = r.integer("case.k", 1);
  if (c.k < 1 || c.k > 3)
    errors.push_back("case.k: polynomial degree must be 1, 2, or 3");

  c.scheme = r.enum_str("case.scheme", "cn", {"cn", "bdf3"});
  c.bdf3_bootstrap =
      r.enum_str("case.bdf3_bootstrap", "exact", {"exact", "cn"});
  if (c.scheme == "bdf3" && c.bdf3_bootstrap == "exact" &&
      c.geometry != "layered")
    errors.push_back(
        "case.bdf3_bootstrap: exact startup needs the layered geometry's "
        "closed-form solution; use bdf3_bootstrap = \"cn\"");

  // mesh family: n (cells per unit length) or h = 1/n
  const bool has_n = r.has("case.n"), has_h = r.has("case.h");
  if (has_n && has_h) errors.push_back("case.n and case.h are exclusive");
  std::vector<double> n_raw;
  if (has_h) {
    for (double h : r.number_list("case.h", {})) {
      if (h <= 0) {
        errors.push_back("case.h: entries must be positive");
        continue;
      }
      n_raw.push_back(1.0 / h);
    }
  } else {
    n_raw = r.number_list("case.n", {10, 20, 40});
  }
  c.n.clear();
  const int unit_div = c.geometry == "channel" ? 10 : 2;
  for (double v : n_raw) {
    const int n = static_cast<int>(std::lround(v));
    if (std::abs(v - n) > 1e-9 * std::max(1.0, std::abs(v)) || n < 1) {
      errors.push_back("case.n: entries must be positive integers (or h an "
                       "exact reciprocal)");
      continue;
    }
    if (n % unit_div != 0) {
      errors.push_back("case.n: " + std::to_string(n) +
                       " does not tile the geometry (needs a multiple of " +
                       std::to_string(unit_div) + ")");
      continue;
    }
    c.n.push_back(n);
  }
  if (c.n.empty()) errors.push_back("case.n: at least one valid mesh size");

  // dt: a positive number, or the string "h" for the dt = h protocol
  if (!r.has("case.dt")) {
    errors.push_back("case.dt: required (positive number or \"h\")");
  } else if (doc.values.at("case.dt").kind == TomlValue::Kind::String) {
    r.used.insert("case.dt");
    if (doc.values.at("case.dt").text == "h")
      c.dt_is_h = true;
    else
      errors.push_back("case.dt: the only string form is \"h\"");
  } else {
    c.dt = r.number("case.dt", 0.0);
    if (c.dt <= 0) errors.push_back("case.dt: must be positive");
  }

  c.t_end = r.number("case.t_end", 0.0);
  if (c.t_end <= 0) errors.push_back("case.t_end: must be positive");
  if (!c.dt_is_h && c.dt > 0 && c.t_end > 0 && c.t_end < c.dt)
    errors.push_back("case.t_end: must be at least dt");
  for (int n : c.n) {
    const double dt = c.dt_is_h ? 1.0 / n : c.dt;
    if (dt <= 0 || c.t_end <= 0) break;
    const long steps = std::lround(c.t_end / dt);
    if (std::abs(steps * dt - c.t_end) > 1e-9 * c.t_end)
      errors.push_back("case.t_end: not a whole number of steps at n = " +
                       std::to_string(n));
    else if (c.scheme == "bdf3" && steps < 3)
      errors.push_back("case.t_end: bdf3 needs at least 3 steps at n = " +
                       std::to_string(n));
  }

  // --- [materials] ----------------------------------------------------------
  c.rho_f = r.number("materials.rho_f", 1.0);
  c.mu_f = r.number("materials.mu_f", 1.0);
  if (c.rho_f <= 0) errors.push_back("materials.rho_f: must be positive");
  if (c.mu_f <= 0) errors.push_back("materials.mu_f: must be positive");
  const bool has_abs = r.has("materials.mu_s") ||
                       r.has("materials.lambda_s") ||
                       r.has("materials.beta_s");
  const bool has_grid =
      r.has("materials.delta1") || r.has("materials.delta2");
  if (has_abs && has_grid)
    errors.push_back(
        "materials: absolute solid parameters (mu_s, lambda_s, beta_s) and "
        "the delta1/delta2 grid are exclusive");
  c.rho_s = r.number_list("materials.rho_s", {1.0});
  for (double v : c.rho_s)
    if (v <= 0) errors.push_back("materials.rho_s: entries must be positive");
  if (has_abs && c.experiment == "converge")
    errors.push_back("materials: converge uses the delta1/delta2 grid form");
  if (has_abs) {
    c.absolute_solid = true;
    if (c.rho_s.size() != 1)
      errors.push_back("materials.rho_s: one value with absolute parameters");
    c.mu_s = r.number("materials.mu_s", 1.0);
    c.lambda_s = r.number("materials.lambda_s", 1.0);
    c.beta_s = r.number("materials.beta_s", 0.0);
    if (c.mu_s <= 0) errors.push_back("materials.mu_s: must be positive");
    if (c.lambda_s <= 0)
      errors.push_back("materials.lambda_s: must be positive");
    if (c.beta_s < 0) errors.push_back("materials.beta_s: must be nonnegative");
  } else {
    c.delta1 = r.number_list("materials.delta1", {1.0});
    c.delta2 = r.number_list("materials.delta2", {1.0});
    for (double v : c.delta1)
      if (v <= 0) errors.push_back("materials.delta1: entries must be positive");
    for (double v : c.delta2)
      if (v <= 0) errors.push_back("materials.delta2: entries must be positive");
  }
  if (c.experiment != "converge" &&
      c.rho_s.size() * c.delta1.size() * c.delta2.size() != 1)
    errors.push_back("materials: parameter grids need experiment = converge");

  // --- [inflow] --------------------------------------------------------------
  c.p_max = r.number("inflow.p_max", 1.333e4);
  c.t_max = r.number("inflow.t_max", 3e-2);
  if (c.t_max <= 0) errors.push_back("inflow.t_max: must be positive");

  // --- [solver] ---------------------------------------------------------------
  c.tol = r.number("solver.tol", 1e-8);
  if (!(c.tol > 0 && c.tol < 1))
    errors.push_back("solver.tol: must lie in (0, 1)");
  c.maxit = r.integer("solver.maxit", 500);
  if (c.maxit < 1) errors.push_back("solver.maxit: must be at least 1");
  c.backend = r.enum_str("solver.backend", "direct", {"direct", "amg"});

  // --- [output] ----------------------------------------------------------------
  c.out_dir = r.str("output.directory", ".");

  // --- [bc.<part>] -----------------------------------------------------------
  c.bc = detail::default_bc_table(c.geometry);
  const std::vector<std::string>& parts = detail::geometry_parts(c.geometry);
  bool any_bc = false;
  std::set<std::string> given;
  for (const auto& [key, value] : doc.values) {
    if (key.rfind("bc.", 0) != 0) continue;
    any_bc = true;
    const std::size_t dot = key.find('.', 3);
    if (dot == std::string::npos) {
      r.used.insert(key);
      errors.push_back(key + ": expected bc.<part>.<field>");
      continue;
    }
    const std::string part = key.substr(3, dot - 3);
    const std::string field = key.substr(dot + 1);
    if (std::find(parts.begin(), parts.end(), part) == parts.end()) {
      r.used.insert(key);
      errors.push_back("bc." + part + ": unknown boundary part for " +
                       c.geometry + " geometry");
      continue;
    }
    given.insert(part);
    BcEntry& e = c.bc[part];
    const std::string full = "bc." + part + "." + field;
    if (field == "normal") {
      e.normal_essential =
          r.enum_str(full, "essential", {"essential", "natural"}) ==
          "essential";
    } else if (field == "tangential") {
      e.tangential_essential =
          r.enum_str(full, "essential", {"essential", "natural"}) ==
          "essential";
    } else if (field == "traction") {
      e.traction = r.enum_str(full, "zero", {"zero", "inlet_pulse"});
    } else {
      r.used.insert(key);
      errors.push_back(full + ": unknown key");
    }
  }
  if (any_bc && c.experiment == "converge")
    errors.push_back("bc: converge uses the built-in essential table");
  if (any_bc && c.experiment == "single") {
    for (const std::string& part : parts)
      if (!given.count(part))
        errors.push_back("bc: missing row for part " + part);
  }
  for (const auto& [part, entry] : c.bc)
    if (entry.normal_essential && entry.traction != "zero")
      errors.push_back("bc." + part +
                       ": traction needs normal = \"natural\"");

  r.finish();
  return c;
}

}  // namespace fsihdg
