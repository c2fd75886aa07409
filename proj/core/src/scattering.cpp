#include "pairprod/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pairprod/error.hpp"
#include "pairprod/parallel.hpp"
#include "pairprod/units.hpp"

namespace pairprod {
namespace {

constexpr double kDegenerateDenominator = 1e-300;

// Principal branch throughout; for negative kinetic energy the common phase
// cancels in |A|^2.
Spinor free_spinor(double kinetic, double momentum, double sign_lower) {
  const Complex norm = std::sqrt(Complex{2.0 * kinetic, 0.0});
  const double cp = units::c * momentum;
  return {std::sqrt(Complex{kinetic + cp, 0.0}) / norm,
          sign_lower * std::sqrt(Complex{kinetic - cp, 0.0}) / norm};
}

}  // namespace

AsymptoticState asymptotic_state(double energy, const FieldConfig& field) {
  const KleinInterval klein = klein_region(field);
  if (!klein.contains_open(energy)) {
    throw DomainError("energy " + std::to_string(energy) + " is outside the open Klein interval (" +
                      std::to_string(klein.e_min) + ", " + std::to_string(klein.e_max) + ")");
  }
  const double m2c4 = units::mc2 * units::mc2;
  AsymptoticState s;
  s.energy = energy;
  s.left_energy = energy - field.potential_drop();
  s.k = std::sqrt((energy - units::mc2) * (energy + units::mc2)) / units::c;
  s.p = std::sqrt(std::max(0.0, s.left_energy * s.left_energy - m2c4)) / units::c;
  s.u = free_spinor(energy, s.k, 1.0);
  s.v_plus = free_spinor(s.left_energy, s.p, -1.0);
  s.v_minus = free_spinor(s.left_energy, -s.p, -1.0);
  return s;
}

Spinor initial_condition(const AsymptoticState& state, const FieldConfig& field) {
  return std::polar(1.0, state.k * field.half_extent()) * state.u;
}

Complex transmission(const AsymptoticState& state, const Spinor& psi, const FieldConfig& field) {
  const Complex denominator = cross(psi, state.v_minus);
  if (!(std::abs(denominator) >= kDegenerateDenominator)) {
    throw DegenerateMatchingError("matching system is singular at E = " + std::to_string(state.energy));
  }
  // Incident wave v(p) e^{ipx} evaluated at x = -L.
  const Complex phase = std::polar(1.0, -state.p * field.half_extent());
  return cross(state.v_plus, state.v_minus) * phase / denominator;
}

Complex transmission(double energy, const Spinor& psi, const FieldConfig& field) {
  return transmission(asymptotic_state(energy, field), psi, field);
}

Complex reflection(const AsymptoticState& state, const Spinor& psi, Complex a_coeff, const FieldConfig& field) {
  const Complex denominator = cross(state.v_minus, state.v_plus);
  if (!(std::abs(denominator) >= kDegenerateDenominator)) {
    throw DegenerateMatchingError("free spinors are degenerate at E = " + std::to_string(state.energy));
  }
  // Reflected wave B v(-p) e^{-ipx} evaluated at x = -L.
  const Complex phase = std::polar(1.0, -state.p * field.half_extent());
  return a_coeff * cross(psi, state.v_plus) * phase / denominator;
}

Complex reflection(double energy, const Spinor& psi, Complex a_coeff, const FieldConfig& field) {
  return reflection(asymptotic_state(energy, field), psi, a_coeff, field);
}

double matching_residual(const AsymptoticState& state, const Spinor& psi, Complex a_coeff, Complex b_coeff,
                         const FieldConfig& field) {
  const double pl = state.p * field.half_extent();
  const Spinor target = a_coeff * psi;
  const Spinor lhs = std::polar(1.0, -pl) * state.v_plus + (b_coeff * std::polar(1.0, pl)) * state.v_minus;
  return std::sqrt(norm2(lhs - target)) / std::sqrt(norm2(target));
}

ScatterPoint make_scatter_point(double energy, Complex a_coeff, Complex b_coeff) {
  ScatterPoint pt;
  pt.energy = energy;
  pt.a_coeff = a_coeff;
  pt.b_coeff = b_coeff;
  pt.abs_a2 = std::norm(a_coeff);
  pt.spectrum = pt.abs_a2 / (2.0 * std::numbers::pi);
  return pt;
}

ScatterPoint scatter(double energy, const PropagationGrid& grid, const FieldConfig& field,
                     const NucleiConfig& nuclei, Accumulation accumulation) {
  const AsymptoticState state = asymptotic_state(energy, field);
  const Spinor psi =
      propagate_to_left_edge(energy, grid, field, nuclei, initial_condition(state, field), accumulation);
  const Complex a = transmission(state, psi, field);
  const Complex b = reflection(state, psi, a, field);
  return make_scatter_point(energy, a, b);
}

double simpson_rate(const std::vector<ScatterPoint>& rows) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 < rows.size(); i += 2) {
    const double width = rows[i + 2].energy - rows[i].energy;
    sum += width / 6.0 * (rows[i].spectrum + 4.0 * rows[i + 1].spectrum + rows[i + 2].spectrum);
  }
  return sum;
}

namespace {

struct Panel {
  std::size_t lo;
  std::size_t mid;
  std::size_t hi;
};

bool varies(double f1, double f2, double threshold) {
  const double top = std::max(f1, f2);
  return top > 0.0 && std::abs(f1 - f2) > threshold * top;
}

}  // namespace

SpectrumTable spectrum(const FieldConfig& field, const NucleiConfig& nuclei, const SpectrumOptions& options) {
  if (options.base_nodes < 3) throw DomainError("spectrum needs at least 3 energy nodes");
  if (!(options.inset > 0.0)) throw DomainError("energy inset must be > 0");

  SpectrumTable table;
  table.quadrature.inset = options.inset;
  table.quadrature.dx = options.dx;

  const KleinInterval klein = klein_region(field);
  const double e_lo = klein.e_min + options.inset;
  const double e_hi = klein.e_max - options.inset;
  if (klein.empty() || !(e_hi > e_lo)) return table;

  const PropagationGrid grid = build_grid(field, nuclei, options.dx);
  const std::size_t panels0 = options.base_nodes / 2;
  const std::size_t base = 2 * panels0 + 1;
  const std::size_t budget = options.node_budget > 0 ? options.node_budget : 4 * options.base_nodes + 1;
  table.quadrature.base_nodes = base;

  std::vector<double> energies(base);
  const double h = (e_hi - e_lo) / static_cast<double>(base - 1);
  for (std::size_t i = 0; i < base; ++i) energies[i] = e_lo + static_cast<double>(i) * h;
  energies.back() = e_hi;

  std::vector<ScatterPoint> points(base);
  auto evaluate = [&](std::size_t first) {
    parallel_for(energies.size() - first, options.jobs, [&](std::size_t i) {
      points[first + i] = scatter(energies[first + i], grid, field, nuclei, options.accumulation);
    });
  };
  evaluate(0);

  std::vector<Panel> panels;
  panels.reserve(panels0);
  for (std::size_t k = 0; k < panels0; ++k) panels.push_back({2 * k, 2 * k + 1, 2 * k + 2});

  auto panel_sum = [&] {
    double sum = 0.0;
    for (const Panel& pn : panels) {
      sum += (energies[pn.hi] - energies[pn.lo]) / 6.0 *
             (points[pn.lo].spectrum + 4.0 * points[pn.mid].spectrum + points[pn.hi].spectrum);
    }
    return sum;
  };

  double rate = panel_sum();
  while (options.refine) {
    std::vector<std::size_t> flagged;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      const Panel& pn = panels[k];
      if (varies(points[pn.lo].spectrum, points[pn.mid].spectrum, options.refine_variation) ||
          varies(points[pn.mid].spectrum, points[pn.hi].spectrum, options.refine_variation)) {
        flagged.push_back(k);
      }
    }
    if (flagged.empty()) break;
    if (points.size() + 2 * flagged.size() > budget) {
      table.quadrature.converged = false;
      break;
    }

    const std::size_t first_new = energies.size();
    std::vector<Panel> next;
    next.reserve(panels.size() + flagged.size());
    std::size_t f = 0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      const Panel pn = panels[k];
      if (f < flagged.size() && flagged[f] == k) {
        ++f;
        const std::size_t left = energies.size();
        energies.push_back(0.5 * (energies[pn.lo] + energies[pn.mid]));
        const std::size_t right = energies.size();
        energies.push_back(0.5 * (energies[pn.mid] + energies[pn.hi]));
        next.push_back({pn.lo, left, pn.mid});
        next.push_back({pn.mid, right, pn.hi});
      } else {
        next.push_back(pn);
      }
    }
    panels = std::move(next);
    points.resize(energies.size());
    evaluate(first_new);
    ++table.quadrature.refinement_passes;

    const double refined = panel_sum();
    const bool settled = std::abs(refined - rate) <= options.rate_tolerance * std::abs(refined);
    rate = refined;
    if (settled) break;
  }

  std::sort(points.begin(), points.end(),
            [](const ScatterPoint& a, const ScatterPoint& b) { return a.energy < b.energy; });
  table.rows = std::move(points);
  table.quadrature.node_count = table.rows.size();
  table.total_rate = simpson_rate(table.rows);
  return table;
}

RateEstimate total_rate(const FieldConfig& field, const NucleiConfig& nuclei, const SpectrumOptions& options) {
  const SpectrumTable table = spectrum(field, nuclei, options);
  return {table.total_rate, table.quadrature.converged, table.quadrature.node_count};
}

}  // namespace pairprod
