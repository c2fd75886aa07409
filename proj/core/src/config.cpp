#include "pairprod/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pairprod/error.hpp"
#include "pairprod/units.hpp"

namespace pairprod {
namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "field.F_es",   "field.L",      "nuclei.preset", "nuclei.R",      "nuclei.g",
    "nuclei.semi_distance",         "grid.dx",       "energy.nodes",  "energy.inset",
    "sweep.axis",   "sweep.min",    "sweep.max",     "sweep.step",    "sweep.spectra",
    "peaks.threshold",              "output.dir",    "output.format", "output.svg",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Leading number and the (trimmed) remainder.
std::pair<double, std::string_view> split_number(std::string_view value, const std::string& key) {
  value = trim(value);
  double out = 0.0;
  const char* begin = value.data();
  const char* end = value.data() + value.size();
  if (!value.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr == begin) {
    throw ConfigError(key, "expected a number, got '" + std::string(value) + "'");
  }
  if (!std::isfinite(out)) throw ConfigError(key, "value must be finite");
  return {out, trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)))};
}

double parse_number(std::string_view value, const std::string& key) {
  const auto [number, rest] = split_number(value, key);
  if (!rest.empty()) throw ConfigError(key, "unexpected trailing text '" + std::string(rest) + "'");
  return number;
}

double parse_field(std::string_view value, const std::string& key) {
  const auto [number, rest] = split_number(value, key);
  if (!rest.empty() && rest != "E_S") {
    throw ConfigError(key, "field strength takes an optional 'E_S' unit, got '" + std::string(rest) + "'");
  }
  return number;
}

long parse_integer(std::string_view value, const std::string& key) {
  const double number = parse_number(value, key);
  if (number != std::floor(number)) throw ConfigError(key, "expected an integer");
  return static_cast<long>(number);
}

bool parse_bool(std::string_view value, const std::string& key) {
  value = trim(value);
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(value) + "'");
}

double outermost_offset(int preset, double spacing) {
  return preset < 2 ? 0.0 : 0.5 * static_cast<double>(preset - 1) * spacing;
}

}  // namespace

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::R: return "R";
    case SweepAxis::F: return "F";
    case SweepAxis::N: return "N";
  }
  return "?";
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  if (step <= 0.0 || max < min) return out;
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(min + static_cast<double>(i) * step);
  return out;
}

double parse_length(std::string_view value, const std::string& key) {
  const auto [number, unit] = split_number(value, key);
  if (unit.empty()) throw ConfigError(key, "length needs a unit suffix (lu or pm)");
  if (unit == "lu") return number;
  if (unit == "pm") return units::pm_to_lu(number);
  throw ConfigError(key, "unknown length unit '" + std::string(unit) + "' (expected lu or pm)");
}

FieldConfig RunConfig::field() const { return FieldConfig(field_es, half_extent); }

NucleiConfig RunConfig::nuclei() const {
  // Spacing is irrelevant below two nuclei; any positive value builds the preset.
  return nuclei_preset(preset, preset < 2 ? 1.0 : spacing, well_strength);
}

SpectrumOptions RunConfig::spectrum_options(unsigned jobs) const {
  SpectrumOptions options;
  options.base_nodes = energy_nodes;
  options.inset = energy_inset;
  options.dx = dx;
  options.jobs = jobs;
  return options;
}

RunConfig RunConfig::at_axis_value(SweepAxis axis, double value) const {
  RunConfig out = *this;
  switch (axis) {
    case SweepAxis::R: out.spacing = value; break;
    case SweepAxis::F: out.field_es = value; break;
    case SweepAxis::N: out.preset = static_cast<int>(std::lround(value)); break;
  }
  return out;
}

void validate_geometry(const RunConfig& config) {
  const double reach = outermost_offset(config.preset, config.spacing);
  if (!(reach < config.half_extent)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "outermost nucleus at |x| = " << reach << " lu does not lie inside (-L, L) with L = "
        << config.half_extent << " lu";
    throw ConfigError("nuclei.R", msg.str());
  }
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto next = text.find('\n', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view line = text.substr(pos, next - pos);
    pos = next + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", "line " + std::to_string(line_no) + ": unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    if (!kKnownKeys.contains(key)) throw ConfigError(key, "unknown key");
    if (entries.contains(key)) throw ConfigError(key, "key given more than once");
    entries.emplace(key, std::string(trim(line.substr(eq + 1))));
  }

  auto get = [&](std::string_view key) -> const std::string* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  RunConfig cfg;
  std::vector<std::string> missing;
  for (const char* key : {"field.F_es", "field.L", "nuclei.preset"}) {
    if (!get(key)) missing.emplace_back(key);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError(missing.size() == 1 ? missing.front() : "", "missing required keys: " + list);
  }

  cfg.field_es = parse_field(*get("field.F_es"), "field.F_es");
  if (cfg.field_es < 0.0) throw ConfigError("field.F_es", "field strength must be >= 0");
  cfg.half_extent = parse_length(*get("field.L"), "field.L");
  if (!(cfg.half_extent > 0.0)) throw ConfigError("field.L", "L must be > 0");

  const long preset = parse_integer(*get("nuclei.preset"), "nuclei.preset");
  if (preset < 0 || preset > 5) throw ConfigError("nuclei.preset", "preset must be in 0..5");
  cfg.preset = static_cast<int>(preset);

  if (const auto* v = get("nuclei.semi_distance")) cfg.semi_distance = parse_bool(*v, "nuclei.semi_distance");
  const double spacing_factor = cfg.semi_distance ? 2.0 : 1.0;
  if (const auto* v = get("nuclei.R")) {
    cfg.spacing = spacing_factor * parse_length(*v, "nuclei.R");
    if (!(cfg.spacing > 0.0)) throw ConfigError("nuclei.R", "spacing must be > 0");
  }
  if (const auto* v = get("nuclei.g")) {
    cfg.well_strength = parse_number(*v, "nuclei.g");
    if (cfg.well_strength < 0.0) throw ConfigError("nuclei.g", "well strength must be >= 0");
  }
  if (const auto* v = get("grid.dx")) {
    cfg.dx = parse_number(*v, "grid.dx");
    if (!(cfg.dx > 0.0)) throw ConfigError("grid.dx", "dx must be > 0");
  }
  if (const auto* v = get("energy.nodes")) {
    const long nodes = parse_integer(*v, "energy.nodes");
    if (nodes < 3) throw ConfigError("energy.nodes", "need at least 3 energy nodes");
    cfg.energy_nodes = static_cast<std::size_t>(nodes);
  }
  if (const auto* v = get("energy.inset")) {
    cfg.energy_inset = parse_number(*v, "energy.inset");
    if (!(cfg.energy_inset > 0.0)) throw ConfigError("energy.inset", "inset must be > 0");
  }
  if (const auto* v = get("peaks.threshold")) {
    cfg.peak_threshold = parse_number(*v, "peaks.threshold");
    if (cfg.peak_threshold < 0.0) throw ConfigError("peaks.threshold", "threshold must be >= 0");
  }
  if (const auto* v = get("output.dir")) {
    if (v->empty()) throw ConfigError("output.dir", "empty path");
    cfg.output.directory = *v;
  }
  if (const auto* v = get("output.format")) {
    if (*v == "csv") {
      cfg.output.format = OutputFormat::Csv;
    } else if (*v == "json") {
      cfg.output.format = OutputFormat::Json;
    } else {
      throw ConfigError("output.format", "expected csv or json, got '" + *v + "'");
    }
  }
  if (const auto* v = get("output.svg")) cfg.output.svg = parse_bool(*v, "output.svg");

  const bool any_sweep = get("sweep.axis") || get("sweep.min") || get("sweep.max") || get("sweep.step") ||
                         get("sweep.spectra");
  if (any_sweep) {
    for (const char* key : {"sweep.axis", "sweep.min", "sweep.max", "sweep.step"}) {
      if (!get(key)) throw ConfigError(key, "required when a sweep is configured");
    }
    SweepSpec sweep;
    const std::string& axis = *get("sweep.axis");
    if (axis == "R") {
      sweep.axis = SweepAxis::R;
      sweep.min = spacing_factor * parse_length(*get("sweep.min"), "sweep.min");
      sweep.max = spacing_factor * parse_length(*get("sweep.max"), "sweep.max");
      sweep.step = spacing_factor * parse_length(*get("sweep.step"), "sweep.step");
      if (!(sweep.min > 0.0)) throw ConfigError("sweep.min", "spacing must be > 0");
    } else if (axis == "F") {
      sweep.axis = SweepAxis::F;
      sweep.min = parse_field(*get("sweep.min"), "sweep.min");
      sweep.max = parse_field(*get("sweep.max"), "sweep.max");
      sweep.step = parse_field(*get("sweep.step"), "sweep.step");
      if (sweep.min < 0.0) throw ConfigError("sweep.min", "field strength must be >= 0");
    } else if (axis == "N") {
      sweep.axis = SweepAxis::N;
      sweep.min = static_cast<double>(parse_integer(*get("sweep.min"), "sweep.min"));
      sweep.max = static_cast<double>(parse_integer(*get("sweep.max"), "sweep.max"));
      sweep.step = static_cast<double>(parse_integer(*get("sweep.step"), "sweep.step"));
      if (sweep.min < 0.0) throw ConfigError("sweep.min", "nucleus count must be in 0..5");
      if (sweep.max > 5.0) throw ConfigError("sweep.max", "nucleus count must be in 0..5");
    } else {
      throw ConfigError("sweep.axis", "expected R, F or N, got '" + axis + "'");
    }
    if (!(sweep.step > 0.0)) throw ConfigError("sweep.step", "step must be > 0");
    if (sweep.max < sweep.min) throw ConfigError("sweep.max", "must not be below sweep.min");
    if (const auto* v = get("sweep.spectra")) sweep.keep_spectra = parse_bool(*v, "sweep.spectra");
    cfg.sweep = sweep;
  }

  const bool sweeps_r = cfg.sweep && cfg.sweep->axis == SweepAxis::R;
  const bool sweeps_n = cfg.sweep && cfg.sweep->axis == SweepAxis::N;
  const int max_nuclei = sweeps_n ? static_cast<int>(cfg.sweep->max) : cfg.preset;
  if (max_nuclei >= 2 && !sweeps_r && !get("nuclei.R")) {
    throw ConfigError("nuclei.R", "required for two or more nuclei");
  }
  if (max_nuclei >= 1 && !get("nuclei.g")) throw ConfigError("nuclei.g", "required when nuclei are present");

  if (sweeps_r) {
    RunConfig widest = cfg.at_axis_value(SweepAxis::R, cfg.sweep->values().back());
    validate_geometry(widest);
  } else if (sweeps_n) {
    validate_geometry(cfg.at_axis_value(SweepAxis::N, cfg.sweep->max));
  } else {
    validate_geometry(cfg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace pairprod
