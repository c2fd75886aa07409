#pragma once

// Text serialisation of results. CSV numbers use 17 significant digits so that a
// value read back is bit-identical; JSON carries the same doubles.

#include <string>

#include "pairprod/config.hpp"
#include "pairprod/scattering.hpp"
#include "pairprod/sweep.hpp"

namespace pairprod {

/// printf "%.17g"; non-finite values print as nan, inf, -inf.
std::string format_number(double value);

/// Header "E_mc2,absA2,dndEdt", one row per energy node.
std::string spectrum_csv(const SpectrumTable& table);
/// Header "axis,rate,flag"; axis is in natural lengths for R, E_S for F, a count for N.
std::string sweep_csv(const SweepResult& sweep);
/// Header "axis,rate,prominence".
std::string peaks_csv(const PeakList& peaks);

/// Resolved configuration with defaults filled in.
std::string config_json(const RunConfig& config);
std::string spectrum_json(const SpectrumTable& table, const RunConfig& config);
std::string sweep_json(const SweepResult& sweep, const RunConfig& config);
std::string peaks_json(const PeakList& peaks, const RunConfig& config);

/// Writes `content` to `path`, creating parent directories. Throws Error on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pairprod
