#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pairprod/linalg.hpp"
#include "pairprod/physics.hpp"
#include "pairprod/propagator.hpp"

namespace pairprod {

/// Free spinors and momenta outside the field region at a given energy.
struct AsymptoticState {
  double energy = 0.0;
  /// Right-side momentum, k = sqrt(E^2 - m^2 c^4) / c.
  double k = 0.0;
  /// Left-side momentum, p = sqrt((E - 2FL)^2 - m^2 c^4) / c.
  double p = 0.0;
  /// Positive-energy spinor u(k) for x >= L.
  Spinor u;
  /// Negative-energy spinors v(p) and v(-p) for x <= -L.
  Spinor v_plus;
  Spinor v_minus;
  /// E - 2FL, the kinetic energy on the left (negative inside the Klein window).
  double left_energy = 0.0;
};

/// Throws DomainError unless energy lies strictly inside the Klein window.
AsymptoticState asymptotic_state(double energy, const FieldConfig& field);

/// psi~(L) = u(k) e^{ikL}.
Spinor initial_condition(const AsymptoticState& state, const FieldConfig& field);

/// Transmission amplitude A from psi~(-L), with psi~(L) = u(k) e^{ikL}.
Complex transmission(double energy, const Spinor& psi_at_minus_l, const FieldConfig& field);
Complex transmission(const AsymptoticState& state, const Spinor& psi_at_minus_l, const FieldConfig& field);

/// Reflection amplitude B consistent with `a_coeff`.
Complex reflection(double energy, const Spinor& psi_at_minus_l, Complex a_coeff, const FieldConfig& field);
Complex reflection(const AsymptoticState& state, const Spinor& psi_at_minus_l, Complex a_coeff,
                   const FieldConfig& field);

/// Residual of v(p)e^{-ipL} + B v(-p)e^{ipL} - A psi~(-L), relative to |A psi~(-L)|.
double matching_residual(const AsymptoticState& state, const Spinor& psi_at_minus_l, Complex a_coeff,
                         Complex b_coeff, const FieldConfig& field);

struct ScatterPoint {
  double energy = 0.0;
  Complex a_coeff;
  Complex b_coeff;
  double abs_a2 = 0.0;
  /// d<n>/dtdE = |A|^2 / (2 pi).
  double spectrum = 0.0;
};

ScatterPoint make_scatter_point(double energy, Complex a_coeff, Complex b_coeff);

/// Solves the transmission-reflection problem at one energy.
ScatterPoint scatter(double energy, const PropagationGrid& grid, const FieldConfig& field,
                     const NucleiConfig& nuclei, Accumulation accumulation = Accumulation::Extended);

/// Energy sampling and quadrature controls shared by spectrum() and total_rate().
struct SpectrumOptions {
  /// Base energy nodes across the Klein window (rounded up to an odd count).
  std::size_t base_nodes = 400;
  /// Distance kept from each Klein endpoint, in mc^2.
  double inset = 1e-3;
  /// Spatial step target in natural lengths.
  double dx = 5e-4;
  bool refine = true;
  /// Adjacent-node relative variation that triggers bisection of a panel.
  double refine_variation = 0.2;
  /// Refinement stops once the rate changes by less than this fraction.
  double rate_tolerance = 0.005;
  /// Maximum node count; 0 means 4 * base_nodes + 1.
  std::size_t node_budget = 0;
  unsigned jobs = 1;
  Accumulation accumulation = Accumulation::Extended;
};

struct QuadratureInfo {
  std::string rule = "composite-simpson";
  std::size_t base_nodes = 0;
  std::size_t node_count = 0;
  std::size_t refinement_passes = 0;
  double inset = 0.0;
  double dx = 0.0;
  /// False when the node budget ran out before the rate settled.
  bool converged = true;
};

struct SpectrumTable {
  /// Ordered by energy; consecutive triples (0,1,2), (2,3,4), ... are Simpson panels.
  std::vector<ScatterPoint> rows;
  /// d<n>/dt per unit time.
  double total_rate = 0.0;
  QuadratureInfo quadrature;
};

/// Composite Simpson over consecutive row triples of the spectrum column.
double simpson_rate(const std::vector<ScatterPoint>& rows);

SpectrumTable spectrum(const FieldConfig& field, const NucleiConfig& nuclei, const SpectrumOptions& options);

struct RateEstimate {
  double rate = 0.0;
  bool converged = true;
  std::size_t nodes = 0;
};

RateEstimate total_rate(const FieldConfig& field, const NucleiConfig& nuclei, const SpectrumOptions& options);

}  // namespace pairprod
