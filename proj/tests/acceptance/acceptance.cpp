// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all
// selected criteria pass.
//
//   pairprod_acceptance [--workdir DIR] [--full] [--only 1,4,9] [--jobs N] [--cli PATH]
//
// The default is the smoke variant (coarser grids for the long sweeps); --full
// uses production grid spacing for criteria 5, 6, 8 and 9.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pairprod/config.hpp"
#include "pairprod/oracle.hpp"
#include "pairprod/physics.hpp"
#include "pairprod/propagator.hpp"
#include "pairprod/scattering.hpp"
#include "pairprod/sweep.hpp"
#include "pairprod/units.hpp"

namespace fs = std::filesystem;
using namespace pairprod;

namespace {

struct Settings {
  fs::path workdir = fs::temp_directory_path() / "pairprod_acceptance";
  bool full = false;
  std::set<int> only;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string cli = PAIRPROD_CLI_PATH;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double rel(const Spinor& a, const Spinor& b) { return std::sqrt(norm2(a - b) / norm2(b)); }

double flux_factor(const AsymptoticState& s) { return s.k * std::abs(s.left_energy) / (s.energy * s.p); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Numeric CSV with a header row; non-numeric cells become NaN.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      row.push_back(end == cell.c_str() ? std::nan("") : v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_cli(const Settings& s, const std::string& args, const fs::path& log) {
  const std::string cmd = "\"" + s.cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 1. Sauter plateau at the Klein midpoint.
Outcome sauter_plateau(const Settings&) {
  const FieldConfig field(0.2, 98.4);
  const KleinInterval k = klein_region(field);
  const double e = 0.5 * (k.e_min + k.e_max);
  const ScatterPoint p = scatter(e, build_grid(field, NucleiConfig(), 1e-3), field, NucleiConfig());
  const double target = std::exp(-5.0 * std::numbers::pi);
  const double dev = std::abs(p.abs_a2 / target - 1.0);
  return {dev <= 0.05, fmt("|A|^2(E=%.2f) = %.5g, exp(-5 pi) = %.5g, deviation %.2f%% (limit 5%%)", e, p.abs_a2,
                           target, 100.0 * dev)};
}

// 2. Propagator against the exact constant-field transport and the extrapolated fine grid.
Outcome oracle_equivalence(const Settings&) {
  const FieldConfig field(0.2, 98.4);
  const double e = 20.0;
  const Spinor initial = initial_condition(asymptotic_state(e, field), field);
  const Spinor exact = oracle::AnalyticBasis(e, field).transport(98.4, -98.4) * initial;
  const Spinor numeric =
      compose_propagator(e, build_grid(field, NucleiConfig(), 1e-4), field, NucleiConfig()).matrix * initial;
  const std::array<double, 3> dxs = {4e-4, 2e-4, 1e-4};
  const oracle::FineGridReference ref = oracle::fine_grid_reference(e, field, NucleiConfig(), dxs, initial);

  const double vs_exact = rel(numeric, exact);
  const double scale = std::sqrt(norm2(ref.value));
  const double vs_ref = std::sqrt(norm2(numeric - ref.value));
  const double ref_vs_exact = std::sqrt(norm2(ref.value - exact));
  const bool ok = vs_exact <= 1e-6 && ref.converged && vs_ref <= 1.01 * ref.error_estimate + 1e-9 * scale &&
                  ref_vs_exact <= ref.error_estimate;
  return {ok, fmt("rel |compose - exact| = %.2e (limit 1e-6); |compose - ref| = %.2e, ref estimate %.2e, "
                  "|ref - exact| = %.2e",
                  vs_exact, vs_ref / scale, ref.error_estimate / scale, ref_vs_exact / scale)};
}

// 3. Second-order convergence of psi~(-L) on random configurations.
Outcome convergence_order(const Settings&) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::array<double, 4> dxs = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  const std::array<double, 3> ref_dxs = {6.25e-4, 3.125e-4, 1.5625e-4};
  constexpr int kCases = 6;
  int good = 0;
  std::string orders;
  for (int c = 0; c < kCases; ++c) {
    // Lengths on a 0.01 lattice keep every well on a node of every grid.
    const double l = std::round(100.0 * (8.0 + 12.0 * u(rng))) / 100.0;
    const FieldConfig field(0.2 + 0.6 * u(rng), l);
    const int n = c % 3;
    const double spacing = 0.02 * std::round((0.5 + 0.5 * l * u(rng)) / 0.02);
    const NucleiConfig nuclei = nuclei_preset(n, spacing, 0.3 + 1.2 * u(rng));
    const KleinInterval k = klein_region(field);
    const double e = k.e_min + (0.05 + 0.9 * u(rng)) * k.width();
    const Spinor initial = initial_condition(asymptotic_state(e, field), field);
    const Spinor ref = oracle::fine_grid_reference(e, field, nuclei, ref_dxs, initial).value;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double dx : dxs) {
      const PropagationGrid grid = build_grid(field, nuclei, dx);
      const double err = rel(propagate_to_left_edge(e, grid, field, nuclei, initial), ref);
      const double lx = std::log(grid.dx());
      const double ly = std::log(err);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double m = static_cast<double>(dxs.size());
    const double order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (order >= 1.8 && order <= 2.2) ++good;
    orders += fmt("%s%.3f(N=%d)", orders.empty() ? "" : " ", order, n);
  }
  return {good == kCases, fmt("%d/%d configurations in [1.8, 2.2]: %s", good, kCases, orders.c_str())};
}

// 4. Exact invariants over random configurations, double-double accumulation.
Outcome invariants(const Settings&) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int kCases = 120;
  double worst_current = 0, worst_det = 0, worst_flux = 0, worst_g = 0;
  for (int c = 0; c < kCases; ++c) {
    // F >= 0.25 keeps |A|^2 well above the resolution of |B|^2 - 1 in double.
    const FieldConfig field(0.25 + 0.75 * u(rng), 5.0 + 25.0 * u(rng));
    const double l = field.half_extent();
    const double dx = std::max(2e-3 + 1.8e-2 * u(rng), 2.0 * l / 30000.0);
    const int n = std::uniform_int_distribution<int>(0, 5)(rng);
    const double widest = n > 1 ? 2.0 * (l - 1.0) / (n - 1) : 1.0;
    const double spacing = std::max(3.0 * dx, 0.1) + (widest - std::max(3.0 * dx, 0.1)) * u(rng);
    const double g = 2.0 * u(rng);
    const NucleiConfig nuclei = nuclei_preset(n, spacing, g);
    const KleinInterval k = klein_region(field);
    const double e = k.e_min + (0.1 + 0.8 * u(rng)) * k.width();
    const PropagationGrid grid = build_grid(field, nuclei, dx);
    const AsymptoticState s = asymptotic_state(e, field);
    const Spinor initial = initial_condition(s, field);

    const auto samples = propagate_samples(e, grid, field, nuclei, initial, Accumulation::Compensated);
    const double j0 = samples.front().current;
    for (const auto& p : samples) worst_current = std::max(worst_current, std::abs(p.current / j0 - 1.0));

    const CompositePropagator m = compose_propagator(e, grid, field, nuclei, Accumulation::Compensated);
    worst_det = std::max(worst_det, std::abs(m.determinant - 1.0));

    const ScatterPoint sp = scatter(e, grid, field, nuclei, Accumulation::Compensated);
    const double lhs = std::norm(sp.b_coeff) - 1.0;
    const double rhs = sp.abs_a2 * flux_factor(s);
    worst_flux = std::max(worst_flux, std::abs(lhs / rhs - 1.0));

    const Matrix2C gm = transfer_matrix(g);
    worst_g = std::max(worst_g, max_abs(gm * gm.adjoint() - Matrix2C::identity()));
  }
  const bool ok = worst_current <= 1e-10 && worst_det <= 1e-10 && worst_flux <= 1e-8 && worst_g <= 1e-14;
  return {ok, fmt("%d configurations; worst current drift %.2e (1e-10), |det-1| %.2e (1e-10), flux identity "
                  "%.2e (1e-8), |GG^+ - 1| %.2e (1e-14)",
                  kCases, worst_current, worst_det, worst_flux, worst_g)};
}

// Criterion 5 sweep through the command-line tool. `semi` reads the axis value as
// half the internuclear spacing; otherwise it is the full spacing.
std::string spectrum_sweep_config(bool semi, double dx) {
  return "[field]\nF_es = 0.2 E_S\nL = 38 pm\n"
         "[nuclei]\npreset = 2\ng = 0.8\nsemi_distance = " +
         std::string(semi ? "true" : "false") + "\n[grid]\ndx = " + fmt("%.17g", dx) +
         "\n[sweep]\naxis = R\nmin = 3.04 pm\nmax = 5.32 pm\nstep = 0.38 pm\nspectra = true\n";
}

double spectrum_dx(const Settings& s) { return s.full ? 5e-4 : 1e-3; }

struct SweepRun {
  fs::path dir;
  int exit_code = -1;
};

SweepRun run_spectrum_sweep(const Settings& s, bool semi, unsigned jobs, const std::string& tag) {
  SweepRun run;
  run.dir = s.workdir / tag;
  fs::remove_all(run.dir);
  fs::create_directories(run.dir);
  const fs::path cfg = run.dir / "sweep.cfg";
  std::ofstream(cfg) << spectrum_sweep_config(semi, spectrum_dx(s));
  run.exit_code = run_cli(s,
                          "sweep --config \"" + cfg.string() + "\" --out \"" + (run.dir / "out").string() +
                              "\" --jobs " + std::to_string(jobs),
                          run.dir / "cli.log");
  return run;
}

std::map<std::string, SweepRun> g_spectrum_runs;

const SweepRun& spectrum_run(const Settings& s, bool semi) {
  const std::string tag = semi ? "c5_semi_distance" : "c5_full_spacing";
  auto it = g_spectrum_runs.find(tag);
  if (it == g_spectrum_runs.end()) it = g_spectrum_runs.emplace(tag, run_spectrum_sweep(s, semi, 1, tag)).first;
  return it->second;
}

// 5. Resonance near E = 19.5 for a semi-distance near 5.5 axis units of 0.76 pm.
Outcome spectrum_feature(const Settings& s) {
  const double unit = units::pm_to_lu(0.76);
  std::string found;
  std::string notes;
  for (bool semi : {true, false}) {
    const SweepRun& run = spectrum_run(s, semi);
    if (run.exit_code != 0) {
      notes += fmt(" [%s sweep exit %d]", semi ? "semi" : "full", run.exit_code);
      continue;
    }
    const auto points = read_csv(run.dir / "out" / "sweep.csv");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double axis_units = points[i][0] / (semi ? 2.0 : 1.0) / unit;
      const auto rows = read_csv(run.dir / "out" / fmt("spectra/point_%04zu.csv", i));
      std::vector<double> es, ys;
      for (const auto& r : rows) {
        es.push_back(r[0]);
        ys.push_back(r[2]);
      }
      const PeakList peaks = detect_peaks(es, ys, 0.05);
      for (const Peak& p : peaks.peaks) {
        if (std::abs(axis_units - 5.5) <= 1.0 + 1e-9 && std::abs(p.axis_value - 19.5) <= 1.95) {
          found += fmt(" %s R=%.2f: E=%.2f", semi ? "semi" : "full", axis_units, p.axis_value);
        }
      }
    }
  }
  return {!found.empty(), (found.empty() ? "no prominent spectrum peak in 19.5 +- 10%" : "peaks at" + found) +
                              notes + fmt(" (dx %.0e, prominence >= 5%% of spectrum max)", spectrum_dx(s))};
}

struct RSweep {
  SweepResult n2;
  double n0_rate = 0.0;
};
std::optional<RSweep> g_r_sweep;

double sweep_dx(const Settings& s) { return s.full ? 5e-4 : 2e-3; }

const RSweep& r_sweep(const Settings& s) {
  if (!g_r_sweep) {
    RunConfig cfg;
    cfg.field_es = 0.2;
    cfg.half_extent = 98.4;
    cfg.preset = 2;
    cfg.well_strength = 0.8;
    cfg.spacing = 2.0;
    cfg.dx = sweep_dx(s);
    cfg.sweep = SweepSpec{SweepAxis::R, 2.0, 40.0, 1.0, false};
    RSweep r;
    r.n2 = run_sweep(cfg, s.jobs);
    RunConfig empty = cfg;
    empty.preset = 0;
    r.n0_rate = total_rate(empty.field(), empty.nuclei(), empty.spectrum_options(s.jobs)).rate;
    g_r_sweep = std::move(r);
  }
  return *g_r_sweep;
}

// 6. Enhancement of the total rate by two nuclei.
Outcome enhancement(const Settings& s) {
  const RSweep& r = r_sweep(s);
  double best = 0.0, best_r = 0.0;
  for (const SweepPoint& p : r.n2.points) {
    if (std::isfinite(p.rate) && p.rate > best) {
      best = p.rate;
      best_r = p.axis_value;
    }
  }
  const double bound = s.full ? 10.0 : 5.0;
  const double ratio = best / r.n0_rate;
  return {ratio >= bound, fmt("max N=2 rate %.4g at R=%.0f over R in [2, 40]; N=0 rate %.4g; ratio %.2f "
                              "(required >= %.0f, dx %.0e)",
                              best, best_r, r.n0_rate, ratio, bound, sweep_dx(s))};
}

// 7. The rate at the smallest spacing exceeds the rate at R = 30.
Outcome small_r_growth(const Settings& s) {
  const RSweep& r = r_sweep(s);
  double at2 = std::nan(""), at30 = std::nan("");
  for (const SweepPoint& p : r.n2.points) {
    if (std::abs(p.axis_value - 2.0) < 1e-9) at2 = p.rate;
    if (std::abs(p.axis_value - 30.0) < 1e-9) at30 = p.rate;
  }
  const PeakList peaks = detect_peaks(r.n2, 0.05);
  return {at2 > at30, fmt("rate(R=2) = %.4g, rate(R=30) = %.4g; sweep has %zu interior peaks at prominence 0.05",
                          at2, at30, peaks.peaks.size())};
}

// 8. Interior peak counts of the low-field R sweep for N = 2..5.
Outcome peak_multiplication(const Settings& s) {
  const double dx = s.full ? 2e-3 : 5e-3;
  std::vector<std::size_t> counts;
  std::string detail;
  for (int n = 2; n <= 5; ++n) {
    RunConfig cfg;
    cfg.field_es = 0.05;
    cfg.half_extent = 98.4;
    cfg.preset = n;
    cfg.well_strength = 0.8;
    cfg.spacing = 2.0;
    cfg.dx = dx;
    cfg.sweep = SweepSpec{SweepAxis::R, 2.0, 40.0, 1.0, false};
    const SweepResult sweep = run_sweep(cfg, s.jobs);
    const PeakList peaks = detect_peaks(sweep, 0.05);
    counts.push_back(peaks.peaks.size());
    detail += fmt("%sN=%d: %zu", detail.empty() ? "" : ", ", n, peaks.peaks.size());
  }
  const bool ok = std::is_sorted(counts.begin(), counts.end());
  return {ok, "peak counts " + detail + fmt(" (must be non-decreasing; dx %.0e)", dx)};
}

// 9. Criterion-5 sweep repeated with one and eight workers.
Outcome determinism(const Settings& s) {
  const SweepRun& one = spectrum_run(s, true);
  const SweepRun eight = run_spectrum_sweep(s, true, 8, "c9_jobs8");
  if (one.exit_code != 0 || eight.exit_code != 0) {
    return {false, fmt("sweep exit codes %d / %d", one.exit_code, eight.exit_code)};
  }
  std::size_t files = 0;
  std::string mismatch;
  for (const auto& entry : fs::recursive_directory_iterator(one.dir / "out")) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    const fs::path rel_path = fs::relative(entry.path(), one.dir / "out");
    const fs::path other = eight.dir / "out" / rel_path;
    ++files;
    if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) mismatch += " " + rel_path.string();
  }
  return {mismatch.empty() && files > 1,
          mismatch.empty() ? fmt("%zu CSV files bitwise identical between --jobs 1 and --jobs 8", files)
                           : "differing files:" + mismatch};
}

void usage() {
  std::cerr << "usage: pairprod_acceptance [--workdir DIR] [--full] [--only 1,2,...] [--jobs N] [--cli PATH]\n";
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) {
        usage();
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--workdir") {
      s.workdir = value();
    } else if (arg == "--full") {
      s.full = true;
    } else if (arg == "--only") {
      std::stringstream ss(value());
      for (std::string item; std::getline(ss, item, ',');) s.only.insert(std::stoi(item));
    } else if (arg == "--jobs") {
      s.jobs = static_cast<unsigned>(std::max(1, std::stoi(value())));
    } else if (arg == "--cli") {
      s.cli = value();
    } else {
      usage();
      return 2;
    }
  }
  fs::create_directories(s.workdir);

  const std::vector<std::pair<std::string, std::function<Outcome(const Settings&)>>> criteria = {
      {"Sauter plateau", sauter_plateau},
      {"oracle equivalence", oracle_equivalence},
      {"convergence order", convergence_order},
      {"exact invariants", invariants},
      {"spectrum resonance feature", spectrum_feature},
      {"enhancement by two nuclei", enhancement},
      {"small-R growth", small_r_growth},
      {"peak multiplication with N", peak_multiplication},
      {"determinism across job counts", determinism},
  };

  std::cout << "acceptance (" << (s.full ? "full" : "smoke") << ", workdir " << s.workdir.string() << ")\n"
            << std::flush;
  int selected = 0, passed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!s.only.empty() && !s.only.contains(id)) continue;
    ++selected;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second(s);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass) ++passed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << o.detail
              << fmt(" [%.1fs]", secs) << "\n"
              << std::flush;
  }
  std::cout << passed << "/" << selected << " criteria passed\n";
  return passed == selected ? 0 : 1;
}
