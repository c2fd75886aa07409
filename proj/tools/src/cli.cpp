#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pairprod/config.hpp"
#include "pairprod/error.hpp"
#include "pairprod/report.hpp"
#include "pairprod/sweep.hpp"
#include "pairprod/svg.hpp"

namespace pairprod::cli {
namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string format;
  bool svg = false;
  unsigned jobs = 1;
  double dx = 0.0;
  std::size_t energy_nodes = 0;
  double threshold = -1.0;
  std::string input;
  bool log_scale = false;
};

std::string path_in(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output.directory) / name).string();
}

RunConfig resolve_config(const Options& opt) {
  RunConfig cfg = load_config(opt.config_path);
  if (opt.dx > 0.0) cfg.dx = opt.dx;
  if (opt.energy_nodes > 0) {
    if (opt.energy_nodes < 3) throw ConfigError("energy.nodes", "need at least 3 energy nodes");
    cfg.energy_nodes = opt.energy_nodes;
  }
  if (!opt.out_dir.empty()) cfg.output.directory = opt.out_dir;
  if (opt.format == "json") cfg.output.format = OutputFormat::Json;
  if (opt.format == "csv") cfg.output.format = OutputFormat::Csv;
  if (opt.svg) cfg.output.svg = true;
  if (opt.threshold >= 0.0) cfg.peak_threshold = opt.threshold;
  return cfg;
}

std::string axis_label(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::R: return "internuclear spacing R (l_u)";
    case SweepAxis::F: return "field strength F (E_S)";
    case SweepAxis::N: return "number of nuclei N";
  }
  return "";
}

std::string spectrum_svg(const SpectrumTable& table) {
  PlotSeries s;
  s.label = "d<n>/dEdt";
  for (const ScatterPoint& p : table.rows) {
    s.x.push_back(p.energy);
    s.y.push_back(p.spectrum);
  }
  PlotStyle style;
  style.title = "Pair spectrum";
  style.x_label = "E (mc^2)";
  style.y_label = "d<n>/dEdt (mc^2/hbar per mc^2)";
  style.log_scale = true;
  return render_line_plot(std::span<const PlotSeries>(&s, 1), style);
}

std::string sweep_svg(const SweepResult& sweep) {
  PlotSeries s;
  s.label = "total rate";
  for (const SweepPoint& p : sweep.points) {
    s.x.push_back(p.axis_value);
    s.y.push_back(p.rate);
  }
  PlotStyle style;
  style.title = "Total pair-creation rate";
  style.x_label = axis_label(sweep.axis);
  style.y_label = "d<n>/dt (mc^2/hbar)";
  style.log_scale = true;
  return render_line_plot(std::span<const PlotSeries>(&s, 1), style);
}

std::string sweep_heatmap(const SweepResult& sweep) {
  std::vector<HeatmapColumn> columns;
  for (const SweepPoint& p : sweep.points) {
    if (!p.spectrum) continue;
    HeatmapColumn c;
    c.x = p.axis_value;
    for (const ScatterPoint& r : p.spectrum->rows) {
      c.y.push_back(r.energy);
      c.z.push_back(r.spectrum);
    }
    columns.push_back(std::move(c));
  }
  PlotStyle style;
  style.title = "Pair spectrum across the sweep";
  style.x_label = axis_label(sweep.axis);
  style.y_label = "E (mc^2)";
  style.log_scale = true;
  return render_heatmap(columns, style);
}

// Spectrum metadata without the rows, written next to a CSV.
std::string spectrum_meta(const SpectrumTable& table, const RunConfig& cfg) {
  SpectrumTable head = table;
  head.rows.clear();
  return spectrum_json(head, cfg);
}

int cmd_spectrum(const Options& opt) {
  const RunConfig cfg = resolve_config(opt);
  const FieldConfig field = cfg.field();
  if (klein_region(field).empty()) {
    std::cerr << "warning: the Klein interval is empty for this field; writing an empty spectrum\n";
  }
  SpectrumTable table;
  try {
    table = spectrum(field, cfg.nuclei(), cfg.spectrum_options(opt.jobs));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTotalFailure;
  }
  if (!table.quadrature.converged) {
    std::cerr << "warning: energy refinement hit the node budget before the rate settled\n";
  }
  if (cfg.output.format == OutputFormat::Json) {
    write_text_file(path_in(cfg, "spectrum.json"), spectrum_json(table, cfg));
  } else {
    write_text_file(path_in(cfg, "spectrum.csv"), spectrum_csv(table));
    write_text_file(path_in(cfg, "spectrum.meta.json"), spectrum_meta(table, cfg));
  }
  if (cfg.output.svg && !table.rows.empty()) write_text_file(path_in(cfg, "spectrum.svg"), spectrum_svg(table));
  return kSuccess;
}

int cmd_rate(const Options& opt) {
  const RunConfig cfg = resolve_config(opt);
  RateEstimate rate;
  try {
    rate = total_rate(cfg.field(), cfg.nuclei(), cfg.spectrum_options(opt.jobs));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTotalFailure;
  }
  const std::string flag = rate.converged ? "ok" : "unconverged";
  std::cout << format_number(rate.rate) << " " << flag << "\n";
  if (!opt.out_dir.empty()) {
    write_text_file(path_in(cfg, "rate.csv"),
                    "rate,flag,energy_nodes\n" + format_number(rate.rate) + "," + flag + "," +
                        std::to_string(rate.nodes) + "\n");
  }
  return kSuccess;
}

int cmd_sweep(const Options& opt) {
  const RunConfig cfg = resolve_config(opt);
  if (!cfg.sweep) throw ConfigError("sweep.axis", "the sweep command needs a sweep section");
  const SweepResult sweep = run_sweep(cfg, opt.jobs);
  if (cfg.output.format == OutputFormat::Json) {
    write_text_file(path_in(cfg, "sweep.json"), sweep_json(sweep, cfg));
  } else {
    write_text_file(path_in(cfg, "sweep.csv"), sweep_csv(sweep));
    write_text_file(path_in(cfg, "sweep.meta.json"), config_json(cfg));
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
      if (!sweep.points[i].spectrum) continue;
      char name[48];
      std::snprintf(name, sizeof name, "spectra/point_%04zu.csv", i);
      write_text_file(path_in(cfg, name), spectrum_csv(*sweep.points[i].spectrum));
    }
  }
  if (cfg.output.svg) {
    bool any_finite = false;
    bool any_spectrum = false;
    for (const SweepPoint& p : sweep.points) {
      any_finite = any_finite || std::isfinite(p.rate);
      any_spectrum = any_spectrum || (p.spectrum && !p.spectrum->rows.empty());
    }
    if (any_finite) write_text_file(path_in(cfg, "sweep.svg"), sweep_svg(sweep));
    if (any_spectrum) write_text_file(path_in(cfg, "sweep_heatmap.svg"), sweep_heatmap(sweep));
  }
  return sweep_exit_code(sweep);
}

struct Curve {
  std::string header;
  std::vector<double> x;
  std::vector<double> y;
};

double parse_cell(const std::string& cell) {
  if (cell == "nan") return std::nan("");
  std::size_t used = 0;
  const double v = std::stod(cell, &used);
  if (used != cell.size()) throw std::invalid_argument(cell);
  return v;
}

// Spectrum CSV (E_mc2 vs dndEdt) or sweep CSV (axis vs rate).
Curve read_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read input file '" + path + "'");
  Curve curve;
  std::getline(in, curve.header);
  std::size_t y_col = 0;
  if (curve.header == "E_mc2,absA2,dndEdt") {
    y_col = 2;
  } else if (curve.header == "axis,rate,flag") {
    y_col = 1;
  } else {
    throw ConfigError("", "'" + path + "' is neither a spectrum nor a sweep CSV");
  }
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    try {
      if (cells.size() != 3) throw std::invalid_argument(line);
      curve.x.push_back(parse_cell(cells[0]));
      curve.y.push_back(parse_cell(cells[y_col]));
    } catch (const std::exception&) {
      throw ConfigError("", path + ":" + std::to_string(line_no) + ": malformed row");
    }
  }
  return curve;
}

int cmd_peaks(const Options& opt) {
  std::vector<double> xs;
  std::vector<double> ys;
  RunConfig cfg;
  int code = kSuccess;
  if (!opt.input.empty()) {
    if (!opt.config_path.empty()) cfg = resolve_config(opt);
    if (opt.threshold >= 0.0) cfg.peak_threshold = opt.threshold;
    if (!opt.out_dir.empty()) cfg.output.directory = opt.out_dir;
    if (opt.format == "json") cfg.output.format = OutputFormat::Json;
    const Curve curve = read_curve(opt.input);
    xs = curve.x;
    ys = curve.y;
  } else {
    if (opt.config_path.empty()) throw ConfigError("", "peaks needs --config or --input");
    cfg = resolve_config(opt);
    if (!cfg.sweep) throw ConfigError("sweep.axis", "the peaks command needs a sweep section");
    const SweepResult sweep = run_sweep(cfg, opt.jobs);
    code = sweep_exit_code(sweep);
    if (code == kTotalFailure) return code;
    for (const SweepPoint& p : sweep.points) {
      xs.push_back(p.axis_value);
      ys.push_back(p.rate);
    }
  }
  PeakList peaks;
  try {
    peaks = detect_peaks(xs, ys, cfg.peak_threshold);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  for (const Peak& p : peaks.peaks) {
    std::cout << format_number(p.axis_value) << " " << format_number(p.rate) << " " << format_number(p.prominence)
              << "\n";
  }
  if (cfg.output.format == OutputFormat::Json) {
    write_text_file(path_in(cfg, "peaks.json"), peaks_json(peaks, cfg));
  } else {
    write_text_file(path_in(cfg, "peaks.csv"), peaks_csv(peaks));
  }
  return code;
}

int cmd_plot(const Options& opt) {
  const Curve curve = read_curve(opt.input);
  PlotSeries s;
  s.x = curve.x;
  s.y = curve.y;
  PlotStyle style;
  style.log_scale = opt.log_scale;
  if (curve.header.rfind("E_mc2", 0) == 0) {
    style.title = "Pair spectrum";
    style.x_label = "E (mc^2)";
    style.y_label = "d<n>/dEdt (mc^2/hbar per mc^2)";
  } else {
    style.title = "Total pair-creation rate";
    style.x_label = "sweep axis";
    style.y_label = "d<n>/dt (mc^2/hbar)";
  }
  std::string out = opt.out_dir.empty() ? "." : opt.out_dir;
  const std::string name = std::filesystem::path(opt.input).stem().string() + ".svg";
  try {
    write_text_file((std::filesystem::path(out) / name).string(),
                    render_line_plot(std::span<const PlotSeries>(&s, 1), style));
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kSuccess;
}

}  // namespace

int sweep_exit_code(const SweepResult& sweep) {
  const std::size_t failed = sweep.failures();
  if (failed == 0) return kSuccess;
  for (const SweepPoint& p : sweep.points) {
    if (p.status == PointStatus::Failed) {
      std::cerr << "error: point " << format_number(p.axis_value) << " failed: " << p.message << "\n";
    }
  }
  return failed == sweep.points.size() ? kTotalFailure : kPartialFailure;
}

int run(int argc, char** argv) {
  CLI::App app{"Pair creation in a constant field with delta-well nuclei"};
  app.require_subcommand(1);
  Options opt;

  auto add_run_flags = [&](CLI::App* sub, bool config_required) {
    auto* config = sub->add_option("--config", opt.config_path, "run configuration file");
    if (config_required) config->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides output.dir)");
    sub->add_option("--format", opt.format, "csv or json (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--svg", opt.svg, "also write SVG plots");
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--dx", opt.dx, "spatial step target (overrides grid.dx)")->check(CLI::PositiveNumber);
    sub->add_option("--energy-nodes", opt.energy_nodes, "base energy nodes (overrides energy.nodes)");
  };

  auto* spectrum_cmd = app.add_subcommand("spectrum", "write the pair spectrum over the Klein interval");
  add_run_flags(spectrum_cmd, true);
  auto* rate_cmd = app.add_subcommand("rate", "print the total pair-creation rate");
  add_run_flags(rate_cmd, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "total rate along the configured sweep axis");
  add_run_flags(sweep_cmd, true);
  auto* peaks_cmd = app.add_subcommand("peaks", "detect peaks in a sweep curve");
  add_run_flags(peaks_cmd, false);
  peaks_cmd->add_option("--input", opt.input, "existing sweep CSV instead of running the sweep");
  peaks_cmd->add_option("--threshold", opt.threshold, "prominence threshold as a fraction of the maximum")
      ->check(CLI::NonNegativeNumber);
  auto* plot_cmd = app.add_subcommand("plot", "render a spectrum or sweep CSV as SVG");
  plot_cmd->add_option("--input", opt.input, "spectrum or sweep CSV")->required();
  plot_cmd->add_option("--out", opt.out_dir, "output directory");
  plot_cmd->add_flag("--log", opt.log_scale, "logarithmic ordinate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*spectrum_cmd) return cmd_spectrum(opt);
    if (*rate_cmd) return cmd_rate(opt);
    if (*sweep_cmd) return cmd_sweep(opt);
    if (*peaks_cmd) return cmd_peaks(opt);
    if (*plot_cmd) return cmd_plot(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTotalFailure;
  }
  return kUsageError;
}

}  // namespace pairprod::cli
