#pragma once

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aeromix/constitutive.hpp"
#include "aeromix/mechanics.hpp"
#include "aeromix/thermal.hpp"

namespace aeromix {

enum class CaseKind { mechanical, thermal, mms_mechanical, mms_thermal };

inline const char* to_string(CaseKind k) {
  switch (k) {
    case CaseKind::mechanical: return "mechanical";
    case CaseKind::thermal: return "thermal";
    case CaseKind::mms_mechanical: return "mms-mechanical";
    case CaseKind::mms_thermal: return "mms-thermal";
  }
  return "?";
}

struct MmsSettings {
  std::vector<int> refinements = {8, 16, 32};
  int steps = 4;
  double dt = 0.05;   // [s]
  double tau = 1.0;   // [s], time scale of the manufactured fields
};

struct DiagnosticsSettings {
  bool mixture_csv = false;
  double rho_s = 0.0, rho_g = 0.0, rho_f = 0.0;  // [kg/m^3]
};

// Everything a run needs.  Sections not consumed by the chosen case are
// rejected by the parser, so a config describes exactly one kind of run.
struct RunConfig {
  CaseKind kind = CaseKind::mechanical;
  double lx = 0.0, ly = 0.0;  // [m]
  int nx = 0, ny = 0;
  double dt = 0.0, t_end = 0.0;  // [s]
  int snapshot_every = 1;

  MechParams mech;
  MechBCs mech_bcs;
  MechOptions mech_opts;
  double p_init = 0.0;  // [Pa]

  ThermalParams thermal;
  ThermalBCs thermal_bcs;
  ThermalOptions thermal_opts;
  NewtonSettings newton;
  double theta_init = 0.0;  // [K]

  std::vector<Vec2> probes;  // [m]
  std::string output_dir = "out";
  bool write_vtk = true;
  bool write_csv = true;

  MmsSettings mms;
  DiagnosticsSettings diagnostics;
};

struct ConfigIssue {
  int line = 0;  // 0 for whole-file/semantic problems
  std::string message;
};

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<ConfigIssue> issues;

  bool ok() const { return config.has_value() && issues.empty(); }
};

namespace cfg_detail {

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

using RawMap = std::map<std::string, RawEntry>;  // "section.key" -> entry

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline bool valid_word(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

inline RawMap tokenize(const std::string& text,
                       std::vector<ConfigIssue>& issues) {
  RawMap raw;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({line_no, "unterminated section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_word(section))
        issues.push_back({line_no, "invalid section name '" + section + "'"});
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line_no, "expected 'key = value', got '" + line + "'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_word(key)) {
      issues.push_back({line_no, "invalid key name '" + key + "'"});
      continue;
    }
    if (value.empty()) {
      issues.push_back({line_no, "key '" + key + "' has no value"});
      continue;
    }
    const std::string full = section + "." + key;
    if (raw.count(full)) {
      issues.push_back({line_no, "duplicate key '" + key + "' in section [" +
                                     section + "] (first on line " +
                                     std::to_string(raw[full].line) + ")"});
      continue;
    }
    raw[full] = {value, line_no, false};
  }
  return raw;
}

inline bool parse_double(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size() && !s.empty();
}

inline bool parse_int(const std::string& s, int& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end != begin + s.size() || s.empty()) return false;
  out = static_cast<int>(v);
  return out == v;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = s.find(',', pos);
    out.push_back(trim(s.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

using Units = std::vector<std::pair<std::string, double>>;

// Common unit alternates; the first entry is the canonical SI suffix used
// when printing.
inline const Units& u_none() { static const Units u = {{"", 1.0}}; return u; }
inline const Units& u_pressure() {
  static const Units u = {{"_Pa", 1.0}, {"_kPa", 1e3}, {"_MPa", 1e6}};
  return u;
}
inline const Units& u_length() {
  static const Units u = {{"_m", 1.0}, {"_mm", 1e-3}};
  return u;
}
inline const Units& u_time() { static const Units u = {{"_s", 1.0}}; return u; }
inline const Units& u_per_pa() {
  static const Units u = {{"_per_Pa", 1.0}};
  return u;
}
inline const Units& u_area() { static const Units u = {{"_m2", 1.0}}; return u; }
inline const Units& u_density() {
  static const Units u = {{"_kg_per_m3", 1.0}};
  return u;
}
inline const Units& u_heat_capacity() {
  static const Units u = {{"_J_per_kgK", 1.0}};
  return u;
}
inline const Units& u_conductivity() {
  static const Units u = {{"_W_per_mK", 1.0}};
  return u;
}
inline const Units& u_exchange() {
  static const Units u = {{"_W_per_m3K3", 1.0}};
  return u;
}
inline const Units& u_film() {
  static const Units u = {{"_W_per_m2K", 1.0}};
  return u;
}
inline const Units& u_temperature() {
  static const Units u = {{"_K", 1.0}};
  return u;
}
inline const Units& u_drag() {
  static const Units u = {{"_Pa_s_per_m2", 1.0}};
  return u;
}

class Reader {
 public:
  Reader(RawMap& raw, std::vector<ConfigIssue>& issues)
      : raw_(raw), issues_(issues) {}

  // Finds a key with one of the unit suffixes and returns the value in SI
  // units.  More than one spelling present is an error.
  std::optional<double> quantity(const std::string& section,
                                 const std::string& base, const Units& units,
                                 std::optional<double> fallback,
                                 bool required) {
    std::optional<double> result;
    int found_line = 0;
    int n_found = 0;
    for (const auto& [suffix, scale] : units) {
      const auto it = raw_.find(section + "." + base + suffix);
      if (it == raw_.end()) continue;
      it->second.used = true;
      ++n_found;
      double v;
      if (!parse_double(it->second.value, v)) {
        issues_.push_back({it->second.line,
                           "value of '" + base + suffix + "' is not a number"});
        continue;
      }
      result = v * scale;
      found_line = it->second.line;
    }
    if (n_found > 1) {
      issues_.push_back({found_line, "key '" + base + "' in section [" +
                                         section +
                                         "] given in more than one unit"});
      return std::nullopt;
    }
    if (n_found == 0) {
      if (required)
        issues_.push_back({0, "missing required key '" + base +
                                  canonical_suffix(units) + "' in section [" +
                                  section + "]"});
      return fallback;
    }
    return result;
  }

  std::optional<int> integer(const std::string& section,
                             const std::string& key,
                             std::optional<int> fallback, bool required) {
    const auto it = raw_.find(section + "." + key);
    if (it == raw_.end()) {
      if (required)
        issues_.push_back({0, "missing required key '" + key +
                                  "' in section [" + section + "]"});
      return fallback;
    }
    it->second.used = true;
    int v;
    if (!parse_int(it->second.value, v)) {
      issues_.push_back(
          {it->second.line, "value of '" + key + "' is not an integer"});
      return fallback;
    }
    return v;
  }

  std::optional<bool> boolean(const std::string& section,
                              const std::string& key,
                              std::optional<bool> fallback) {
    const auto it = raw_.find(section + "." + key);
    if (it == raw_.end()) return fallback;
    it->second.used = true;
    const std::string& v = it->second.value;
    if (v == "on" || v == "true") return true;
    if (v == "off" || v == "false") return false;
    issues_.push_back({it->second.line, "value of '" + key +
                                            "' must be on/off/true/false"});
    return fallback;
  }

  std::optional<std::string> word(const std::string& section,
                                  const std::string& key,
                                  const std::vector<std::string>& allowed,
                                  std::optional<std::string> fallback,
                                  bool required) {
    const auto it = raw_.find(section + "." + key);
    if (it == raw_.end()) {
      if (required)
        issues_.push_back({0, "missing required key '" + key +
                                  "' in section [" + section + "]"});
      return fallback;
    }
    it->second.used = true;
    for (const std::string& a : allowed)
      if (it->second.value == a) return it->second.value;
    std::string opts;
    for (const std::string& a : allowed) {
      if (!opts.empty()) opts += " | ";
      opts += a;
    }
    issues_.push_back({it->second.line, "value of '" + key + "' must be one of: " + opts});
    return fallback;
  }

  const RawEntry* raw_entry(const std::string& section,
                            const std::string& key) {
    const auto it = raw_.find(section + "." + key);
    if (it == raw_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  // Every "section.point*" key, in name order.
  std::vector<std::string> keys_with_prefix(const std::string& section,
                                            const std::string& prefix) {
    std::vector<std::string> out;
    const std::string want = section + "." + prefix;
    for (const auto& [full, entry] : raw_) {
      (void)entry;
      if (full.rfind(want, 0) == 0) out.push_back(full);
    }
    return out;
  }

  void report_issue(int line, std::string message) {
    issues_.push_back({line, std::move(message)});
  }

  void flag_unused() {
    for (const auto& [full, entry] : raw_) {
      if (!entry.used)
        issues_.push_back(
            {entry.line, "unknown or unused key '" + full + "'"});
    }
  }

 private:
  static std::string canonical_suffix(const Units& units) {
    return units.front().first;
  }

  RawMap& raw_;
  std::vector<ConfigIssue>& issues_;
};

inline std::optional<BoundaryTag> tag_from_word(const std::string& w) {
  if (w == "bottom") return BoundaryTag::bottom;
  if (w == "right") return BoundaryTag::right;
  if (w == "top") return BoundaryTag::top;
  if (w == "left") return BoundaryTag::left;
  return std::nullopt;
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace cfg_detail

// Parses a config text.  All problems are collected (with line numbers where
// the problem is tied to a line) rather than stopping at the first; the
// returned config is only meaningful when issues is empty.
inline ParseResult parse_config(const std::string& text) {
  using namespace cfg_detail;
  ParseResult result;
  RawMap raw = tokenize(text, result.issues);
  Reader rd(raw, result.issues);
  RunConfig c;

  const auto kind_word =
      rd.word("", "case",
              {"mechanical", "thermal", "mms-mechanical", "mms-thermal"},
              std::nullopt, true);
  if (!kind_word) {
    rd.flag_unused();
    return result;
  }
  if (*kind_word == "mechanical") c.kind = CaseKind::mechanical;
  else if (*kind_word == "thermal") c.kind = CaseKind::thermal;
  else if (*kind_word == "mms-mechanical") c.kind = CaseKind::mms_mechanical;
  else c.kind = CaseKind::mms_thermal;

  const bool is_mms = c.kind == CaseKind::mms_mechanical ||
                      c.kind == CaseKind::mms_thermal;
  const bool wants_mech = c.kind == CaseKind::mechanical;
  const bool wants_thermal = c.kind == CaseKind::thermal;

  // ---- mesh ----
  c.lx = rd.quantity("mesh", "Lx", u_length(), std::nullopt, true).value_or(0.0);
  c.ly = rd.quantity("mesh", "Ly", u_length(), std::nullopt, true).value_or(0.0);
  if (!is_mms) {
    c.nx = rd.integer("mesh", "nx", std::nullopt, true).value_or(0);
    c.ny = rd.integer("mesh", "ny", std::nullopt, true).value_or(0);
    if (c.nx < 1 || c.ny < 1)
      rd.report_issue(0, "[mesh] nx and ny must be >= 1");
  }
  if (!(c.lx > 0.0) || !(c.ly > 0.0))
    rd.report_issue(0, "[mesh] Lx and Ly must be > 0");

  // ---- time ----
  if (!is_mms) {
    c.dt = rd.quantity("time", "dt", u_time(), std::nullopt, true).value_or(0.0);
    c.t_end = rd.quantity("time", "T", u_time(), std::nullopt, true).value_or(0.0);
    c.snapshot_every = rd.integer("time", "snapshot_every", 1, false).value_or(1);
    if (!(c.dt > 0.0)) rd.report_issue(0, "[time] dt must be > 0");
    if (!(c.t_end >= c.dt)) rd.report_issue(0, "[time] T must be >= dt");
    if (c.snapshot_every < 1)
      rd.report_issue(0, "[time] snapshot_every must be >= 1");
  }

  // ---- phases ----
  if (wants_mech || wants_thermal) {
    const double ps = rd.quantity("phases", "phi_s", u_none(), std::nullopt, true).value_or(0.0);
    const double pg = rd.quantity("phases", "phi_g", u_none(), std::nullopt, true).value_or(0.0);
    const double pf = rd.quantity("phases", "phi_f", u_none(), std::nullopt, true).value_or(0.0);
    c.mech.phi_s = c.thermal.phi_s = ps;
    c.mech.phi_g = c.thermal.phi_g = pg;
    c.mech.phi_f = c.thermal.phi_f = pf;
  }

  // ---- mechanics ----
  if (wants_mech) {
    c.mech.lambda_s = rd.quantity("mech", "lambda_s", u_pressure(), std::nullopt, true).value_or(0.0);
    c.mech.mu_s = rd.quantity("mech", "mu_s", u_pressure(), std::nullopt, true).value_or(0.0);
    c.mech.lambda_f = rd.quantity("mech", "lambda_f", u_pressure(), std::nullopt, true).value_or(0.0);
    c.mech.mu_f = rd.quantity("mech", "mu_f", u_pressure(), std::nullopt, true).value_or(0.0);
    c.mech.chi0 = rd.quantity("mech", "chi0", u_pressure(), std::nullopt, true).value_or(0.0);
    c.mech.eps_strain = rd.quantity("mech", "eps_strain", u_none(), std::nullopt, true).value_or(0.0);
    c.mech.C0 = rd.quantity("mech", "C0", u_per_pa(), std::nullopt, true).value_or(0.0);
    c.mech.k = rd.quantity("mech", "k", u_area(), std::nullopt, true).value_or(0.0);
    c.mech.gamma_s = rd.quantity("mech", "gamma_s", u_drag(), 0.0, false).value_or(0.0);
    c.mech.gamma_f = rd.quantity("mech", "gamma_f", u_drag(), 0.0, false).value_or(0.0);
    c.p_init = rd.quantity("mech", "p_init", u_pressure(), 0.0, false).value_or(0.0);

    for (const std::string& bad : check(c.mech))
      rd.report_issue(0, "[mech] " + bad);

    c.mech_bcs.top_displacement.x() =
        rd.quantity("mech_bc", "ubar_x", u_length(), std::nullopt, true).value_or(0.0);
    c.mech_bcs.top_displacement.y() =
        rd.quantity("mech_bc", "ubar_y", u_length(), std::nullopt, true).value_or(0.0);
    c.mech_bcs.ramp_time = rd.quantity("mech_bc", "ramp", u_time(), 0.0, false).value_or(0.0);
    c.mech_bcs.fix_bottom = rd.boolean("mech_bc", "fix_bottom", true).value_or(true);

    if (const RawEntry* e = rd.raw_entry("mech_bc", "drained")) {
      c.mech_bcs.drained.clear();
      if (e->value == "all") {
        c.mech_bcs.drained = {BoundaryTag::bottom, BoundaryTag::right,
                              BoundaryTag::top, BoundaryTag::left};
      } else if (e->value != "none") {
        for (const std::string& w : split_commas(e->value)) {
          const auto tag = tag_from_word(w);
          if (!tag) {
            rd.report_issue(e->line, "unknown boundary name '" + w +
                                         "' in 'drained'");
            continue;
          }
          c.mech_bcs.drained.insert(*tag);
        }
      }
    }

    const auto fiber = rd.word("mech_bc", "fiber_mode",
                               {"bottom_fixed", "mirror_skeleton"},
                               std::string("bottom_fixed"), false);
    c.mech_bcs.fiber_mode = (fiber && *fiber == "mirror_skeleton")
                                ? FiberBcMode::mirror_skeleton
                                : FiberBcMode::bottom_fixed;

    c.mech_opts.pressure_coupling =
        rd.boolean("solver", "pressure_coupling", true).value_or(true);
    const auto chi_mode = rd.word("solver", "chi_mode",
                                  {"lagged", "fixed_point"},
                                  std::string("lagged"), false);
    c.mech_opts.chi_mode = (chi_mode && *chi_mode == "fixed_point")
                               ? ChiMode::fixed_point
                               : ChiMode::lagged;
    c.mech_opts.chi_max_sweeps =
        rd.integer("solver", "chi_max_sweeps", 10, false).value_or(10);
    if (c.mech_opts.chi_max_sweeps < 1)
      rd.report_issue(0, "[solver] chi_max_sweeps must be >= 1");

    // Mixture diagnostics need material densities the mechanics step itself
    // does not use.
    if (rd.raw_entry("diagnostics", "mixture_csv") ||
        rd.keys_with_prefix("diagnostics", "rho").size() > 0) {
      c.diagnostics.mixture_csv =
          rd.boolean("diagnostics", "mixture_csv", true).value_or(true);
      c.diagnostics.rho_s =
          rd.quantity("diagnostics", "rho_s", u_density(), std::nullopt, true).value_or(0.0);
      c.diagnostics.rho_g =
          rd.quantity("diagnostics", "rho_g", u_density(), std::nullopt, true).value_or(0.0);
      c.diagnostics.rho_f =
          rd.quantity("diagnostics", "rho_f", u_density(), std::nullopt, true).value_or(0.0);
      if (c.diagnostics.mixture_csv &&
          !(c.diagnostics.rho_s > 0.0 && c.diagnostics.rho_g > 0.0 &&
            c.diagnostics.rho_f > 0.0))
        rd.report_issue(0, "[diagnostics] densities must be > 0");
    }
  }

  // ---- thermal ----
  if (wants_thermal) {
    auto& t = c.thermal;
    t.rho_s = rd.quantity("thermal", "rho_s", u_density(), std::nullopt, true).value_or(0.0);
    t.rho_g = rd.quantity("thermal", "rho_g", u_density(), std::nullopt, true).value_or(0.0);
    t.rho_f = rd.quantity("thermal", "rho_f", u_density(), std::nullopt, true).value_or(0.0);
    t.c_s = rd.quantity("thermal", "c_s", u_heat_capacity(), std::nullopt, true).value_or(0.0);
    t.c_g = rd.quantity("thermal", "c_g", u_heat_capacity(), std::nullopt, true).value_or(0.0);
    t.c_f = rd.quantity("thermal", "c_f", u_heat_capacity(), std::nullopt, true).value_or(0.0);
    t.kappa_s = rd.quantity("thermal", "kappa_s", u_conductivity(), std::nullopt, true).value_or(0.0);
    t.kappa_f = rd.quantity("thermal", "kappa_f", u_conductivity(), std::nullopt, true).value_or(0.0);
    t.kappa_bg = rd.quantity("thermal", "kappa_bg", u_conductivity(), std::nullopt, true).value_or(0.0);
    t.l_g = rd.quantity("thermal", "l_g", u_length(), std::nullopt, true).value_or(0.0);
    t.beta = rd.quantity("thermal", "beta", u_none(), 1.0, false).value_or(1.0);
    t.pore_size.omega0 = rd.quantity("thermal", "omega0", u_length(), std::nullopt, true).value_or(0.0);
    t.pore_size.domega_dx = rd.quantity("thermal", "domega_dx", u_none(), 0.0, false).value_or(0.0);
    t.pore_size.domega_dy = rd.quantity("thermal", "domega_dy", u_none(), 0.0, false).value_or(0.0);
    t.h_sg = rd.quantity("thermal", "h_sg", u_exchange(), std::nullopt, true).value_or(0.0);
    t.h_sf = rd.quantity("thermal", "h_sf", u_exchange(), std::nullopt, true).value_or(0.0);
    t.h_gf = rd.quantity("thermal", "h_gf", u_exchange(), std::nullopt, true).value_or(0.0);
    t.h_air = rd.quantity("thermal", "h_air", u_film(), std::nullopt, true).value_or(0.0);
    t.theta_hot = rd.quantity("thermal", "theta_hot", u_temperature(), std::nullopt, true).value_or(0.0);
    t.theta_cold = rd.quantity("thermal", "theta_cold", u_temperature(), std::nullopt, true).value_or(0.0);
    c.theta_init = rd.quantity("thermal", "theta_init", u_temperature(), t.theta_cold, false)
                       .value_or(t.theta_cold);

    for (const std::string& bad : check(t))
      rd.report_issue(0, "[thermal] " + bad);
    if (c.lx > 0.0 && c.ly > 0.0 && !t.pore_size.positive_on(c.lx, c.ly))
      rd.report_issue(0, "[thermal] pore size must stay positive on the domain");

    const auto hot = rd.word("thermal_bc", "hot_edge",
                             {"bottom", "right", "top", "left"},
                             std::string("top"), false);
    const auto cold = rd.word("thermal_bc", "cold_edge",
                              {"bottom", "right", "top", "left"},
                              std::string("bottom"), false);
    c.thermal_bcs.hot = tag_from_word(hot.value_or("top")).value_or(BoundaryTag::top);
    c.thermal_bcs.cold = tag_from_word(cold.value_or("bottom")).value_or(BoundaryTag::bottom);
    if (c.thermal_bcs.hot == c.thermal_bcs.cold)
      rd.report_issue(0, "[thermal_bc] hot_edge and cold_edge must differ");
  }

  // ---- shared solver settings ----
  if (wants_thermal || c.kind == CaseKind::mms_thermal) {
    c.thermal_opts.mass_lumping =
        rd.boolean("solver", "mass_lumping", true).value_or(true);
    c.newton.abs_tol = rd.quantity("solver", "newton_abs_tol", u_none(),
                                   c.newton.abs_tol, false).value_or(c.newton.abs_tol);
    c.newton.rel_tol = rd.quantity("solver", "newton_rel_tol", u_none(),
                                   c.newton.rel_tol, false).value_or(c.newton.rel_tol);
    c.newton.max_iter = rd.integer("solver", "newton_max_iter",
                                   c.newton.max_iter, false).value_or(c.newton.max_iter);
    c.newton.damping = rd.quantity("solver", "newton_damping", u_none(),
                                   c.newton.damping, false).value_or(c.newton.damping);
    c.newton.max_halvings = rd.integer("solver", "newton_max_halvings",
                                       c.newton.max_halvings, false)
                                .value_or(c.newton.max_halvings);
    if (!(c.newton.abs_tol > 0.0) || c.newton.rel_tol < 0.0 ||
        c.newton.max_iter < 1 || !(c.newton.damping > 0.0) ||
        c.newton.damping > 1.0 || c.newton.max_halvings < 0)
      rd.report_issue(0, "[solver] invalid newton settings");
  }

  // ---- probes ----
  if (!is_mms) {
    for (const std::string& full : rd.keys_with_prefix("probes", "point")) {
      const std::string key = full.substr(std::string("probes.").size());
      const RawEntry* e = rd.raw_entry("probes", key);
      double scale = 1.0;
      std::string base = key;
      if (key.size() > 3 && key.rfind("_mm") == key.size() - 3) {
        scale = 1e-3;
        base = key.substr(0, key.size() - 3);
      } else if (key.size() > 2 && key.rfind("_m") == key.size() - 2) {
        base = key.substr(0, key.size() - 2);
      }
      (void)base;
      const auto parts = split_commas(e->value);
      double px = 0.0, py = 0.0;
      if (parts.size() != 2 || !parse_double(parts[0], px) ||
          !parse_double(parts[1], py)) {
        rd.report_issue(e->line, "value of '" + key + "' must be 'x, y'");
        continue;
      }
      c.probes.push_back({px * scale, py * scale});
    }
    for (const Vec2& p : c.probes) {
      if (p.x < 0.0 || p.x > c.lx || p.y < 0.0 || p.y > c.ly)
        rd.report_issue(0, "probe point (" + fmt_double(p.x) + ", " +
                               fmt_double(p.y) + ") lies outside the domain");
    }
  }

  // ---- output ----
  if (const RawEntry* e = rd.raw_entry("output", "dir")) c.output_dir = e->value;
  c.write_vtk = rd.boolean("output", "write_vtk", true).value_or(true);
  c.write_csv = rd.boolean("output", "write_csv", true).value_or(true);

  // ---- mms ----
  if (is_mms) {
    if (const RawEntry* e = rd.raw_entry("mms", "refinements")) {
      c.mms.refinements.clear();
      for (const std::string& w : split_commas(e->value)) {
        int v;
        if (!parse_int(w, v)) {
          rd.report_issue(e->line, "refinements must be integers");
          continue;
        }
        c.mms.refinements.push_back(v);
      }
    }
    c.mms.steps = rd.integer("mms", "steps", c.mms.steps, false).value_or(c.mms.steps);
    c.mms.dt = rd.quantity("mms", "dt", u_time(), c.mms.dt, false).value_or(c.mms.dt);
    c.mms.tau = rd.quantity("mms", "tau", u_time(), c.mms.tau, false).value_or(c.mms.tau);
    if (c.mms.refinements.size() < 2)
      rd.report_issue(0, "[mms] need at least two refinement levels");
    for (std::size_t i = 0; i < c.mms.refinements.size(); ++i) {
      if (c.mms.refinements[i] < 2)
        rd.report_issue(0, "[mms] refinements must be >= 2");
      if (i > 0 && c.mms.refinements[i] <= c.mms.refinements[i - 1])
        rd.report_issue(0, "[mms] refinements must increase strictly");
    }
    if (c.mms.steps < 1) rd.report_issue(0, "[mms] steps must be >= 1");
    if (!(c.mms.dt > 0.0) || !(c.mms.tau > 0.0))
      rd.report_issue(0, "[mms] dt and tau must be > 0");
  }

  rd.flag_unused();
  if (result.issues.empty()) result.config = c;
  return result;
}

// Canonical text form: SI suffixes, fixed section order, 17 significant
// digits.  parse_config(print_config(c)) reproduces c exactly.
inline std::string print_config(const RunConfig& c) {
  using cfg_detail::fmt_double;
  std::string out;
  const auto kv = [&](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  const auto num = [&](const std::string& key, double v) { kv(key, fmt_double(v)); };
  const auto onoff = [&](const std::string& key, bool v) { kv(key, v ? "on" : "off"); };

  kv("case", to_string(c.kind));
  out += "\n[mesh]\n";
  num("Lx_m", c.lx);
  num("Ly_m", c.ly);
  const bool is_mms = c.kind == CaseKind::mms_mechanical ||
                      c.kind == CaseKind::mms_thermal;
  if (!is_mms) {
    kv("nx", std::to_string(c.nx));
    kv("ny", std::to_string(c.ny));
    out += "\n[time]\n";
    num("dt_s", c.dt);
    num("T_s", c.t_end);
    kv("snapshot_every", std::to_string(c.snapshot_every));
  }

  if (c.kind == CaseKind::mechanical || c.kind == CaseKind::thermal) {
    out += "\n[phases]\n";
    num("phi_s", c.mech.phi_s ? c.mech.phi_s : c.thermal.phi_s);
    num("phi_g", c.mech.phi_g ? c.mech.phi_g : c.thermal.phi_g);
    num("phi_f", c.mech.phi_f ? c.mech.phi_f : c.thermal.phi_f);
  }

  if (c.kind == CaseKind::mechanical) {
    out += "\n[mech]\n";
    num("lambda_s_Pa", c.mech.lambda_s);
    num("mu_s_Pa", c.mech.mu_s);
    num("lambda_f_Pa", c.mech.lambda_f);
    num("mu_f_Pa", c.mech.mu_f);
    num("chi0_Pa", c.mech.chi0);
    num("eps_strain", c.mech.eps_strain);
    num("C0_per_Pa", c.mech.C0);
    num("k_m2", c.mech.k);
    num("gamma_s_Pa_s_per_m2", c.mech.gamma_s);
    num("gamma_f_Pa_s_per_m2", c.mech.gamma_f);
    num("p_init_Pa", c.p_init);
    out += "\n[mech_bc]\n";
    num("ubar_x_m", c.mech_bcs.top_displacement.x());
    num("ubar_y_m", c.mech_bcs.top_displacement.y());
    num("ramp_s", c.mech_bcs.ramp_time);
    onoff("fix_bottom", c.mech_bcs.fix_bottom);
    std::string drained;
    for (BoundaryTag tag : kBoundaryTags) {
      if (!c.mech_bcs.drained.count(tag)) continue;
      if (!drained.empty()) drained += ", ";
      drained += to_string(tag);
    }
    kv("drained", c.mech_bcs.drained.size() == 4 ? "all"
                  : drained.empty() ? "none" : drained);
    kv("fiber_mode", c.mech_bcs.fiber_mode == FiberBcMode::mirror_skeleton
                         ? "mirror_skeleton"
                         : "bottom_fixed");
    out += "\n[solver]\n";
    onoff("pressure_coupling", c.mech_opts.pressure_coupling);
    kv("chi_mode", c.mech_opts.chi_mode == ChiMode::fixed_point ? "fixed_point"
                                                                : "lagged");
    kv("chi_max_sweeps", std::to_string(c.mech_opts.chi_max_sweeps));
    if (c.diagnostics.mixture_csv) {
      out += "\n[diagnostics]\n";
      onoff("mixture_csv", true);
      num("rho_s_kg_per_m3", c.diagnostics.rho_s);
      num("rho_g_kg_per_m3", c.diagnostics.rho_g);
      num("rho_f_kg_per_m3", c.diagnostics.rho_f);
    }
  }

  if (c.kind == CaseKind::thermal) {
    const auto& t = c.thermal;
    out += "\n[thermal]\n";
    num("rho_s_kg_per_m3", t.rho_s);
    num("rho_g_kg_per_m3", t.rho_g);
    num("rho_f_kg_per_m3", t.rho_f);
    num("c_s_J_per_kgK", t.c_s);
    num("c_g_J_per_kgK", t.c_g);
    num("c_f_J_per_kgK", t.c_f);
    num("kappa_s_W_per_mK", t.kappa_s);
    num("kappa_f_W_per_mK", t.kappa_f);
    num("kappa_bg_W_per_mK", t.kappa_bg);
    num("l_g_m", t.l_g);
    num("beta", t.beta);
    num("omega0_m", t.pore_size.omega0);
    num("domega_dx", t.pore_size.domega_dx);
    num("domega_dy", t.pore_size.domega_dy);
    num("h_sg_W_per_m3K3", t.h_sg);
    num("h_sf_W_per_m3K3", t.h_sf);
    num("h_gf_W_per_m3K3", t.h_gf);
    num("h_air_W_per_m2K", t.h_air);
    num("theta_hot_K", t.theta_hot);
    num("theta_cold_K", t.theta_cold);
    num("theta_init_K", c.theta_init);
    out += "\n[thermal_bc]\n";
    kv("hot_edge", to_string(c.thermal_bcs.hot));
    kv("cold_edge", to_string(c.thermal_bcs.cold));
  }

  if (c.kind == CaseKind::thermal || c.kind == CaseKind::mms_thermal) {
    out += "\n[solver]\n";
    onoff("mass_lumping", c.thermal_opts.mass_lumping);
    num("newton_abs_tol", c.newton.abs_tol);
    num("newton_rel_tol", c.newton.rel_tol);
    kv("newton_max_iter", std::to_string(c.newton.max_iter));
    num("newton_damping", c.newton.damping);
    kv("newton_max_halvings", std::to_string(c.newton.max_halvings));
  }

  if (!is_mms && !c.probes.empty()) {
    out += "\n[probes]\n";
    for (std::size_t i = 0; i < c.probes.size(); ++i)
      kv("point" + std::to_string(i + 1) + "_m",
         fmt_double(c.probes[i].x) + ", " + fmt_double(c.probes[i].y));
  }

  out += "\n[output]\n";
  kv("dir", c.output_dir);
  onoff("write_vtk", c.write_vtk);
  onoff("write_csv", c.write_csv);

  if (is_mms) {
    out += "\n[mms]\n";
    std::string refs;
    for (int r : c.mms.refinements) {
      if (!refs.empty()) refs += ", ";
      refs += std::to_string(r);
    }
    kv("refinements", refs);
    kv("steps", std::to_string(c.mms.steps));
    num("dt_s", c.mms.dt);
    num("tau_s", c.mms.tau);
  }
  return out;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  return print_config(a) == print_config(b);
}

}  // namespace aeromix
