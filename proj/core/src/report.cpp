#include "pairprod/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "pairprod/error.hpp"

namespace pairprod {
namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json quadrature_json(const QuadratureInfo& q) {
  return {{"rule", q.rule},
          {"base_nodes", q.base_nodes},
          {"node_count", q.node_count},
          {"refinement_passes", q.refinement_passes},
          {"inset", q.inset},
          {"dx", q.dx},
          {"converged", q.converged}};
}

json config_object(const RunConfig& c) {
  json out = {{"field", {{"F_es", c.field_es}, {"L_lu", c.half_extent}}},
              {"nuclei",
               {{"preset", c.preset},
                {"R_lu", c.spacing},
                {"g", c.well_strength},
                {"semi_distance", c.semi_distance}}},
              {"grid", {{"dx", c.dx}}},
              {"energy", {{"nodes", c.energy_nodes}, {"inset", c.energy_inset}}},
              {"peaks", {{"threshold", c.peak_threshold}}}};
  if (c.sweep) {
    out["sweep"] = {{"axis", std::string(axis_name(c.sweep->axis))},
                    {"min", c.sweep->min},
                    {"max", c.sweep->max},
                    {"step", c.sweep->step},
                    {"spectra", c.sweep->keep_spectra}};
  }
  return out;
}

json spectrum_rows(const SpectrumTable& table) {
  json rows = json::array();
  for (const ScatterPoint& p : table.rows) {
    rows.push_back({{"E_mc2", number(p.energy)}, {"absA2", number(p.abs_a2)}, {"dndEdt", number(p.spectrum)}});
  }
  return rows;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string spectrum_csv(const SpectrumTable& table) {
  std::string out = "E_mc2,absA2,dndEdt\n";
  for (const ScatterPoint& p : table.rows) {
    out += format_number(p.energy) + ',' + format_number(p.abs_a2) + ',' + format_number(p.spectrum) + '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "axis,rate,flag\n";
  for (const SweepPoint& p : sweep.points) {
    out += format_number(p.axis_value) + ',' + format_number(p.rate) + ',' + std::string(status_name(p.status)) + '\n';
  }
  return out;
}

std::string peaks_csv(const PeakList& peaks) {
  std::string out = "axis,rate,prominence\n";
  for (const Peak& p : peaks.peaks) {
    out += format_number(p.axis_value) + ',' + format_number(p.rate) + ',' + format_number(p.prominence) + '\n';
  }
  return out;
}

std::string config_json(const RunConfig& config) { return config_object(config).dump(2) + "\n"; }

std::string spectrum_json(const SpectrumTable& table, const RunConfig& config) {
  const json out = {{"config", config_object(config)},
                    {"quadrature", quadrature_json(table.quadrature)},
                    {"total_rate", number(table.total_rate)},
                    {"rows", spectrum_rows(table)}};
  return out.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& sweep, const RunConfig& config) {
  json points = json::array();
  for (const SweepPoint& p : sweep.points) {
    json row = {{"axis", number(p.axis_value)},
                {"rate", number(p.rate)},
                {"flag", std::string(status_name(p.status))},
                {"energy_nodes", p.energy_nodes}};
    if (!p.message.empty()) row["message"] = p.message;
    if (p.spectrum) {
      row["quadrature"] = quadrature_json(p.spectrum->quadrature);
      row["spectrum"] = spectrum_rows(*p.spectrum);
    }
    points.push_back(std::move(row));
  }
  const json out = {{"config", config_object(config)},
                    {"axis", std::string(axis_name(sweep.axis))},
                    {"points", std::move(points)}};
  return out.dump(2) + "\n";
}

std::string peaks_json(const PeakList& peaks, const RunConfig& config) {
  json list = json::array();
  for (const Peak& p : peaks.peaks) {
    list.push_back({{"axis", number(p.axis_value)}, {"rate", number(p.rate)}, {"prominence", number(p.prominence)}});
  }
  const json out = {{"config", config_object(config)},
                    {"threshold", peaks.threshold},
                    {"max_rate", number(peaks.max_rate)},
                    {"peaks", std::move(list)}};
  return out.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace pairprod
