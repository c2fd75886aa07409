#include "pairprod/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pairprod/error.hpp"
#include "pairprod/parallel.hpp"

namespace pairprod {

std::string_view status_name(PointStatus status) {
  switch (status) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Unconverged: return "unconverged";
    case PointStatus::Failed: return "failed";
  }
  return "?";
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const SweepPoint& p) {
    return p.status == PointStatus::Failed;
  }));
}

SweepPoint evaluate_point(const RunConfig& config, SweepAxis axis, double value, bool keep_spectrum,
                          unsigned jobs) {
  SweepPoint point;
  point.axis_value = value;
  try {
    const RunConfig local = config.at_axis_value(axis, value);
    validate_geometry(local);
    SpectrumTable table = spectrum(local.field(), local.nuclei(), local.spectrum_options(jobs));
    point.rate = table.total_rate;
    point.energy_nodes = table.quadrature.node_count;
    point.status = table.quadrature.converged ? PointStatus::Ok : PointStatus::Unconverged;
    if (keep_spectrum) point.spectrum = std::move(table);
  } catch (const std::exception& e) {
    point.rate = std::numeric_limits<double>::quiet_NaN();
    point.status = PointStatus::Failed;
    point.message = e.what();
  }
  return point;
}

SweepResult run_sweep(const RunConfig& config, unsigned jobs) {
  if (!config.sweep) throw ConfigError("sweep.axis", "configuration has no sweep");
  const SweepSpec& spec = *config.sweep;
  const std::vector<double> values = spec.values();

  SweepResult result;
  result.axis = spec.axis;
  result.points.resize(values.size());
  jobs = std::max(1u, jobs);
  // Spread points over the pool when there are enough of them; otherwise give the
  // energy nodes of each point the threads. Either way every slot is written once.
  const bool outer = values.size() >= 2 && jobs > 1;
  const unsigned inner_jobs = outer ? 1u : jobs;
  parallel_for(values.size(), outer ? jobs : 1u, [&](std::size_t i) {
    result.points[i] = evaluate_point(config, spec.axis, values[i], spec.keep_spectra, inner_jobs);
  });
  return result;
}

PeakList detect_peaks(std::span<const double> axis, std::span<const double> rate, double threshold) {
  if (axis.size() != rate.size()) throw DomainError("axis and rate lengths differ");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < rate.size(); ++i) {
    if (std::isfinite(rate[i])) {
      xs.push_back(axis[i]);
      ys.push_back(rate[i]);
    }
  }
  if (ys.size() < 3) throw DomainError("peak detection needs at least 3 finite samples");

  PeakList out;
  out.threshold = threshold;
  out.max_rate = *std::max_element(ys.begin(), ys.end());
  const double needed = threshold * out.max_rate;
  const std::size_t n = ys.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(ys[i] > ys[i - 1] && ys[i] > ys[i + 1])) continue;
    double left_min = ys[i];
    for (std::size_t j = i; j-- > 0;) {
      if (ys[j] > ys[i]) break;
      left_min = std::min(left_min, ys[j]);
    }
    double right_min = ys[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ys[j] > ys[i]) break;
      right_min = std::min(right_min, ys[j]);
    }
    const double prominence = ys[i] - std::max(left_min, right_min);
    if (prominence >= needed) out.peaks.push_back({xs[i], ys[i], prominence});
  }
  return out;
}

PeakList detect_peaks(const SweepResult& sweep, double threshold) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const SweepPoint& p : sweep.points) {
    xs.push_back(p.axis_value);
    ys.push_back(p.rate);
  }
  return detect_peaks(xs, ys, threshold);
}

}  // namespace pairprod
