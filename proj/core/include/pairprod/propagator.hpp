#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pairprod/linalg.hpp"
#include "pairprod/physics.hpp"

namespace pairprod {

/// Midpoint coefficients of one exponential step.
///
/// For a step of signed length delta = x_from - x_to the step operator is
/// exp(i sigma_z b - sigma_y cc) with
///   b  = (delta / c) (F L - E - F xbar),
///   cc = (delta / c) m c^2,
/// and xbar the midpoint. Propagation runs from +L toward -L, so delta and cc
/// are positive along the composite path.
struct StepCoefficients {
  enum class Branch { Oscillatory, Hyperbolic };

  double b = 0.0;
  double cc = 0.0;
  Branch branch = Branch::Oscillatory;
  /// D = sqrt(b^2 - cc^2) on the oscillatory branch, sqrt(cc^2 - b^2) on the hyperbolic one.
  double d = 0.0;
};

StepCoefficients step_coefficients(double energy, double x_from, double x_to, const FieldConfig& field);

namespace detail {

inline constexpr double kSeriesThreshold = 1e-4;

/// cos(D)/cosh(D~) and sinc(D)/sinhc(D~) as functions of D^2 = b^2 - cc^2.
inline void evolution_factors(double b, double cc, double& cosine, double& sinc) {
  const double d2 = (b - cc) * (b + cc);
  if (std::abs(d2) < kSeriesThreshold * kSeriesThreshold) {
    cosine = 1.0 - d2 / 2.0 + d2 * d2 / 24.0 - d2 * d2 * d2 / 720.0;
    sinc = 1.0 - d2 / 6.0 + d2 * d2 / 120.0 - d2 * d2 * d2 / 5040.0;
  } else if (d2 > 0.0) {
    const double d = std::sqrt(d2);
    cosine = std::cos(d);
    sinc = std::sin(d) / d;
  } else {
    const double d = std::sqrt(-d2);
    cosine = std::cosh(d);
    sinc = std::sinh(d) / d;
  }
}

inline Matrix2C step_matrix(double b, double cc) {
  double cosine = 0.0;
  double sinc = 0.0;
  evolution_factors(b, cc, cosine, sinc);
  return {{Complex{cosine, b * sinc}, Complex{0.0, cc * sinc}, Complex{0.0, -cc * sinc},
           Complex{cosine, -b * sinc}}};
}

}  // namespace detail

/// Second-order space-evolution operator mapping psi(x_from) to psi(x_to), x_to <= x_from.
Matrix2C step_operator(double energy, double x_from, double x_to, const FieldConfig& field);

/// Uniform grid from +L down to -L with every well snapped onto a node.
class PropagationGrid {
 public:
  double half_extent() const { return half_extent_; }
  std::size_t intervals() const { return intervals_; }
  std::size_t node_count() const { return intervals_ + 1; }
  double dx() const { return dx_; }

  /// x_j = L - j dx, with x_0 = L and x_n = -L exactly.
  double node(std::size_t j) const {
    if (j == 0) return half_extent_;
    if (j == intervals_) return -half_extent_;
    return half_extent_ - static_cast<double>(j) * dx_;
  }
  std::vector<double> nodes() const;

  /// One node index per nucleus, in the order of NucleiConfig::positions().
  const std::vector<std::size_t>& well_node_indices() const { return well_nodes_; }
  /// Snapped node minus requested position, per nucleus.
  const std::vector<double>& snap_displacements() const { return snap_; }

  /// True when node j carries a well.
  bool is_well_node(std::size_t j) const;

 private:
  friend PropagationGrid build_grid(const FieldConfig&, const NucleiConfig&, double);

  double half_extent_ = 0.0;
  std::size_t intervals_ = 0;
  double dx_ = 0.0;
  std::vector<std::size_t> well_nodes_;
  std::vector<double> snap_;
};

/// Builds the propagation grid with step <= dx_target. Throws ResolutionError when
/// two wells land on the same node or a well lands on the field boundary.
PropagationGrid build_grid(const FieldConfig& field, const NucleiConfig& nuclei, double dx_target);

/// Working precision of the factor products.
///
/// Every factor is rescaled so that it is exactly pseudo-unitary at the working
/// precision; the products then conserve the current up to accumulated rounding.
/// Extended uses the x87 80-bit format (about 1e-10 relative current drift over
/// 1e6 steps at amplification 1e7); Compensated uses double-double arithmetic
/// (drift near 1e-16) at roughly three times the cost.
enum class Accumulation { Extended, Compensated };

struct CompositePropagator {
  /// Maps psi~(L) to psi~(-L), rounded to double.
  Matrix2C matrix;
  double energy = 0.0;
  std::size_t steps = 0;
  std::size_t wells = 0;
  double dx = 0.0;
  /// det(matrix) evaluated at the working precision before rounding.
  Complex determinant;
  /// max |M^dagger sigma_z M - sigma_z| evaluated at the working precision.
  double sigma_z_defect = 0.0;
};

/// Ordered product U(-L, x_{n-1}) ... G^{-1} ... U(x_1, L), assembled by
/// sequential left multiplication.
CompositePropagator compose_propagator(double energy, const PropagationGrid& grid,
                                       const FieldConfig& field, const NucleiConfig& nuclei,
                                       Accumulation accumulation = Accumulation::Extended);

struct PropagationSample {
  double x = 0.0;
  /// Partial composite (rounded to double) applied to the initial spinor.
  Spinor psi;
  /// c psi^dagger sigma_z psi evaluated at the working precision.
  double current = 0.0;
};

/// psi~ at every node, x_0 = L first. The last sample equals
/// compose_propagator(...).matrix * initial bit for bit.
std::vector<PropagationSample> propagate_samples(double energy, const PropagationGrid& grid,
                                                 const FieldConfig& field, const NucleiConfig& nuclei,
                                                 const Spinor& initial,
                                                 Accumulation accumulation = Accumulation::Extended);

/// psi~(-L) from psi~(L) by direct spinor updates. This is the hot path used for spectra.
Spinor propagate_to_left_edge(double energy, const PropagationGrid& grid, const FieldConfig& field,
                              const NucleiConfig& nuclei, const Spinor& initial,
                              Accumulation accumulation = Accumulation::Extended);

}  // namespace pairprod
