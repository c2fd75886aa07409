#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairprod/config.hpp"
#include "pairprod/scattering.hpp"

namespace pairprod {

enum class PointStatus { Ok, Unconverged, Failed };

/// "ok", "unconverged" or "failed", as written to the flag column.
std::string_view status_name(PointStatus status);

struct SweepPoint {
  double axis_value = 0.0;
  /// NaN when the point failed.
  double rate = 0.0;
  PointStatus status = PointStatus::Ok;
  /// Error text for failed points.
  std::string message;
  std::size_t energy_nodes = 0;
  std::optional<SpectrumTable> spectrum;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::R;
  /// Ordered by axis value.
  std::vector<SweepPoint> points;

  std::size_t failures() const;
};

/// Total rate of `config` with its sweep parameter set to `value`. Errors are
/// captured in the returned point rather than thrown.
SweepPoint evaluate_point(const RunConfig& config, SweepAxis axis, double value, bool keep_spectrum,
                          unsigned jobs = 1);

/// Evaluates every sweep value of `config` (which must carry a sweep). Points are
/// independent; with jobs > 1 they are spread over a worker pool, and the result
/// is identical for any job count.
SweepResult run_sweep(const RunConfig& config, unsigned jobs = 1);

struct Peak {
  double axis_value = 0.0;
  double rate = 0.0;
  double prominence = 0.0;
};

struct PeakList {
  std::vector<Peak> peaks;
  /// Echo of the detection parameters.
  double threshold = 0.0;
  double max_rate = 0.0;
};

/// Strict interior local maxima whose prominence is at least threshold * max(rate).
/// Prominence is the height above the higher of the two flanking minima, each found
/// by walking outward until a higher sample or the end of the curve. Non-finite
/// samples are dropped first. Throws DomainError for fewer than 3 samples.
PeakList detect_peaks(std::span<const double> axis, std::span<const double> rate, double threshold);
PeakList detect_peaks(const SweepResult& sweep, double threshold);

}  // namespace pairprod
