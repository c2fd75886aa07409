#include "pairprod/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pairprod/error.hpp"
#include "pairprod/propagator.hpp"
#include "pairprod/scattering.hpp"
#include "pairprod/units.hpp"

namespace pairprod::oracle {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

}  // namespace

AnalyticBasis::AnalyticBasis(double energy, const FieldConfig& field)
    : energy_(energy), field_(field) {
  const double f = field.strength();
  if (!(f > 0.0)) throw DomainError("analytic basis needs a nonzero field");
  const double m2c3 = units::mc2 * units::electron_mass * units::c;
  gamma_ = Complex{-0.5, m2c3 / (2.0 * f)};
  if (std::abs(gamma_) + 1.0 > kMaxOrder) {
    throw DomainError("analytic basis order |gamma| + 1 exceeds the pcf_u validity region");
  }
  const double l = field.half_extent();
  const double reach = std::max(std::abs(y(l)), std::abs(y(-l)));
  if (reach > kMaxArgument) {
    throw DomainError("analytic basis argument |y| = " + std::to_string(reach) +
                      " exceeds the pcf_u validity region");
  }
}

Complex AnalyticBasis::y(double x) const {
  const double f = field_.strength();
  const double kinetic = energy_ - potential_a0(x, field_);
  return std::polar(1.0, -kPi / 4.0) * std::sqrt(2.0 * units::c / f) * (kinetic / units::c);
}

Spinor AnalyticBasis::u_a(double x) const {
  const double f = field_.strength();
  const double mc = units::electron_mass * units::c;
  const Complex yy = y(x);
  return {pcf_u(gamma_, yy),
          std::polar(mc * std::sqrt(units::c / (2.0 * f)), -kPi / 4.0) * pcf_u(gamma_ + 1.0, yy)};
}

Spinor AnalyticBasis::u_b(double x) const {
  const double f = field_.strength();
  const double mc = units::electron_mass * units::c;
  const Complex w = -kI * y(x);
  return {pcf_u(-gamma_, w),
          std::polar(std::sqrt(2.0 * f / units::c) / mc, 3.0 * kPi / 4.0) * pcf_u(-gamma_ - 1.0, w)};
}

Matrix2C AnalyticBasis::fundamental(double x) const {
  const Spinor a = u_a(x);
  const Spinor b = u_b(x);
  return {{a.up, b.up, a.down, b.down}};
}

Matrix2C AnalyticBasis::transport(double x_from, double x_to) const {
  return fundamental(x_to) * fundamental(x_from).inverse();
}

double sauter_probability(double field_over_es) {
  if (!(field_over_es > 0.0)) throw DomainError("field strength must be > 0");
  return std::exp(-kPi * units::mc2 * units::mc2 / (units::c * units::hbar * field_over_es));
}

FineGridReference fine_grid_reference(double energy, const FieldConfig& field, const NucleiConfig& nuclei,
                                      std::span<const double> dx_sequence, const Spinor& initial,
                                      Accumulation accumulation) {
  if (dx_sequence.size() < 3) throw DomainError("fine-grid reference needs at least 3 grid spacings");
  for (std::size_t i = 1; i < dx_sequence.size(); ++i) {
    if (!(dx_sequence[i] < dx_sequence[i - 1]) || !(dx_sequence[i] > 0.0)) {
      throw DomainError("fine-grid dx sequence must be strictly decreasing and positive");
    }
  }

  FineGridReference out;
  std::vector<double> steps;
  for (double dx : dx_sequence) {
    const PropagationGrid grid = build_grid(field, nuclei, dx);
    steps.push_back(grid.dx());
    out.levels.push_back(propagate_to_left_edge(energy, grid, field, nuclei, initial, accumulation));
  }

  const std::size_t n = out.levels.size();
  std::vector<double> increments;
  for (std::size_t i = 1; i < n; ++i) {
    increments.push_back(std::sqrt(norm2(out.levels[i] - out.levels[i - 1])));
  }
  bool shrinking = true;
  for (std::size_t i = 1; i < increments.size(); ++i) {
    if (!(increments[i] < increments[i - 1])) shrinking = false;
  }

  const Spinor& finest = out.levels[n - 1];
  if (!shrinking) {
    out.converged = false;
    out.value = finest;
    out.error_estimate = 0.0;
    for (double inc : increments) out.error_estimate += inc;
    return out;
  }
  const double ratio = steps[n - 2] / steps[n - 1];
  const double denom = ratio * ratio - 1.0;
  const Spinor correction = (1.0 / denom) * (finest - out.levels[n - 2]);
  out.value = finest + correction;
  out.error_estimate = std::sqrt(norm2(correction));
  return out;
}

FineGridReference fine_grid_reference(double energy, const FieldConfig& field, const NucleiConfig& nuclei,
                                      std::span<const double> dx_sequence,
                                      Accumulation accumulation) {
  const AsymptoticState state = asymptotic_state(energy, field);
  return fine_grid_reference(energy, field, nuclei, dx_sequence, initial_condition(state, field), accumulation);
}

}  // namespace pairprod::oracle
