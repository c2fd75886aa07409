#pragma once

// Independent references for validating the propagator: the exact constant-field
// solution in parabolic cylinder functions, the Sauter/Schwinger exponential,
// and Richardson extrapolation over a sequence of grids.

#include <span>
#include <vector>

#include "pairprod/linalg.hpp"
#include "pairprod/physics.hpp"
#include "pairprod/propagator.hpp"

namespace pairprod::oracle {

/// Declared validity region of pcf_u.
inline constexpr double kMaxOrder = 50.0;
inline constexpr double kMaxArgument = 80.0;

struct PcfValue {
  Complex value;
  /// dU/dz at the same point.
  Complex derivative;
  double relative_error = 0.0;
  /// Set when relative_error exceeds 1e-7.
  bool precision_loss = false;
  /// Working precision of the series, in bits.
  long bits = 0;
};

/// U(a, z) in DLMF normalisation, from the Maclaurin series of the even and odd
/// solutions summed in multiprecision. Throws DomainError outside |a| <= 50, |z| <= 80.
PcfValue pcf_u_eval(Complex order, Complex argument);
Complex pcf_u(Complex order, Complex argument);

/// 1 / Gamma(z) for complex z; zero at the poles of Gamma.
Complex reciprocal_gamma(Complex z);

/// Exact solution pair of the field-region Dirac equation at fixed energy.
class AnalyticBasis {
 public:
  /// Throws DomainError when y(x) leaves the pcf_u validity region on [-L, L].
  AnalyticBasis(double energy, const FieldConfig& field);

  Complex gamma() const { return gamma_; }
  /// y(x) = e^{-i pi/4} sqrt(2c/F) (E - A0(x)) / c.
  Complex y(double x) const;

  Spinor u_a(double x) const;
  Spinor u_b(double x) const;
  /// Columns u_a(x), u_b(x).
  Matrix2C fundamental(double x) const;
  /// Exact map psi(x_from) -> psi(x_to).
  Matrix2C transport(double x_from, double x_to) const;

 private:
  double energy_;
  FieldConfig field_;
  Complex gamma_;
};

/// Leading Schwinger/Sauter tunnelling probability exp(-pi m^2 c^3 / (hbar F)).
double sauter_probability(double field_over_es);

struct FineGridReference {
  Spinor value;
  double error_estimate = 0.0;
  /// False when successive increments failed to shrink; value is then the finest grid.
  bool converged = true;
  std::vector<Spinor> levels;
};

/// psi~(-L) extrapolated from a strictly decreasing dx sequence assuming second-order convergence.
FineGridReference fine_grid_reference(double energy, const FieldConfig& field, const NucleiConfig& nuclei,
                                      std::span<const double> dx_sequence, const Spinor& initial,
                                      Accumulation accumulation = Accumulation::Extended);
/// Same, starting from u(k) e^{ikL}.
FineGridReference fine_grid_reference(double energy, const FieldConfig& field, const NucleiConfig& nuclei,
                                      std::span<const double> dx_sequence,
                                      Accumulation accumulation = Accumulation::Extended);

}  // namespace pairprod::oracle
