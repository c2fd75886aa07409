#pragma once

// Run configuration for the command-line front end.
//
// The document is a list of `key = value` lines. `#` starts a comment, and a
// `[section]` line prefixes the keys that follow with `section.`:
//
//   field.F_es     = 0.2 E_S     # field strength in units of the critical field
//   field.L        = 38 pm       # half-width of the field region, lu or pm
//   nuclei.preset  = 2           # number of nuclei, 0..5
//   nuclei.R       = 8 lu        # full internuclear spacing, lu or pm
//   nuclei.g       = 0.8         # well strength
//   nuclei.semi_distance = false # true: nuclei.R is half the spacing
//   grid.dx        = 5e-4        # spatial step target, natural lengths
//   energy.nodes   = 400
//   energy.inset   = 1e-3        # mc^2
//   sweep.axis     = R           # R | F | N
//   sweep.min      = 2 lu        # lengths for R, plain numbers for F and N
//   sweep.max      = 40 lu
//   sweep.step     = 0.5 lu
//   sweep.spectra  = false       # also keep the spectrum of every point
//   peaks.threshold = 0.05       # prominence, fraction of the largest rate
//   output.dir     = out
//   output.format  = csv         # csv | json
//   output.svg     = false

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairprod/physics.hpp"
#include "pairprod/scattering.hpp"

namespace pairprod {

enum class SweepAxis { R, F, N };

std::string_view axis_name(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::R;
  /// Natural lengths for R, E_S units for F, nucleus count for N.
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;
  bool keep_spectra = false;

  /// min, min + step, ... up to max (inclusive within a 1e-9 step tolerance).
  std::vector<double> values() const;
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
  std::string directory = ".";
  OutputFormat format = OutputFormat::Csv;
  bool svg = false;
};

struct RunConfig {
  /// F / E_S; equal to the field strength in natural units.
  double field_es = 0.0;
  /// L in natural lengths.
  double half_extent = 0.0;
  int preset = 0;
  /// Full internuclear spacing in natural lengths, after any semi-distance doubling.
  double spacing = 0.0;
  bool semi_distance = false;
  double well_strength = 0.0;
  double dx = 5e-4;
  std::size_t energy_nodes = 400;
  double energy_inset = 1e-3;
  double peak_threshold = 0.05;
  std::optional<SweepSpec> sweep;
  OutputSpec output;

  FieldConfig field() const;
  NucleiConfig nuclei() const;
  SpectrumOptions spectrum_options(unsigned jobs = 1) const;

  /// Copy with the sweep axis parameter replaced by `value`.
  RunConfig at_axis_value(SweepAxis axis, double value) const;
};

/// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(std::string_view text);

/// Reads `path` and parses it. Throws ConfigError (key path empty) when the file is unreadable.
RunConfig load_config(const std::string& path);

/// Throws ConfigError when the nuclei of `config` do not fit strictly inside (-L, L).
void validate_geometry(const RunConfig& config);

/// Length literal `<number> lu|pm` converted to natural lengths. Throws ConfigError naming `key`.
double parse_length(std::string_view value, const std::string& key);

}  // namespace pairprod
