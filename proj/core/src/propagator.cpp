#include "pairprod/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "double_double.hpp"
#include "pairprod/error.hpp"
#include "pairprod/units.hpp"

namespace pairprod {
namespace {

using detail::DoubleDouble;

void check_grid_matches(const PropagationGrid& grid, const FieldConfig& field,
                        const NucleiConfig& nuclei) {
  if (grid.half_extent() != field.half_extent()) {
    throw DomainError("propagation grid was built for a different field extent");
  }
  if (grid.well_node_indices().size() != nuclei.size()) {
    throw DomainError("propagation grid was built for a different nuclei layout");
  }
}

// Step j goes from node j to node j + 1.
inline void grid_step_coefficients(double energy, const PropagationGrid& grid, double f, double fl,
                                   std::size_t j, double& b, double& cc) {
  const double xbar = 0.5 * (grid.node(j) + grid.node(j + 1));
  const double delta = grid.dx() / units::c;
  b = delta * (fl - energy - f * xbar);
  cc = delta * units::mc2;
}

// 1 / sqrt(a^2 + s1^2 - s2^2) at working precision; the exact value is 1.
inline long double unit_scale(long double a, long double s1, long double s2) {
  return 1.0L / std::sqrt(a * a + s1 * s1 - s2 * s2);
}

inline DoubleDouble unit_scale(DoubleDouble a, DoubleDouble s1, DoubleDouble s2) {
  const DoubleDouble excess = a * a + s1 * s1 - s2 * s2 - DoubleDouble{1.0};
  // (1 + e)^{-1/2} = 1 - e/2 + O(e^2), and |e| ~ 1e-16.
  return DoubleDouble{1.0} - DoubleDouble{0.5 * excess.hi, 0.5 * excess.lo};
}

template <class R>
struct StepFactor {
  // [a + i s1, i s2; -i s2, a - i s1]
  R a;
  R s1;
  R s2;
};

template <class R>
inline StepFactor<R> make_step(double b, double cc) {
  double cosine = 0.0;
  double sinc = 0.0;
  detail::evolution_factors(b, cc, cosine, sinc);
  const R a{cosine};
  const R s1{b * sinc};
  const R s2{cc * sinc};
  const R k = unit_scale(a, s1, s2);
  return {a * k, s1 * k, s2 * k};
}

// Upper diagonal entry of G^{-1}; the lower one is its conjugate.
template <class R>
struct WellFactor {
  R re;
  R im;
};

template <class R>
WellFactor<R> make_well(double well_strength) {
  const R gc = R{well_strength} / R{units::c};
  const R quarter = gc * gc * R{0.25};
  const R norm = R{1.0} + quarter;
  // conj((1 - g^2/4c^2 + i g/c) / (1 + g^2/4c^2))
  return {(R{1.0} - quarter) / norm, -(gc / norm)};
}

template <class R>
struct SpinorR {
  R p, q;  // psi_1 = p + i q
  R r, t;  // psi_2 = r + i t
};

template <class R>
inline void apply(const StepFactor<R>& u, SpinorR<R>& s) {
  const R u_re = u.s1 * s.p + u.s2 * s.r;
  const R u_im = u.s1 * s.q + u.s2 * s.t;
  const R v_re = u.s2 * s.p + u.s1 * s.r;
  const R v_im = u.s2 * s.q + u.s1 * s.t;
  const R np = u.a * s.p - u_im;
  const R nq = u.a * s.q + u_re;
  const R nr = u.a * s.r + v_im;
  const R nt = u.a * s.t - v_re;
  s = {np, nq, nr, nt};
}

template <class R>
inline void apply(const WellFactor<R>& w, SpinorR<R>& s) {
  const R np = w.re * s.p - w.im * s.q;
  const R nq = w.re * s.q + w.im * s.p;
  const R nr = w.re * s.r + w.im * s.t;
  const R nt = w.re * s.t - w.im * s.r;
  s = {np, nq, nr, nt};
}

template <class R>
R current_of(const SpinorR<R>& s) {
  return s.p * s.p + s.q * s.q - (s.r * s.r + s.t * s.t);
}

template <class R>
Spinor round(const SpinorR<R>& s) {
  using detail::to_double;
  return {Complex{to_double(s.p), to_double(s.q)}, Complex{to_double(s.r), to_double(s.t)}};
}

// A 2x2 matrix stored as two columns, each transformed like a spinor.
template <class R>
struct MatrixR {
  SpinorR<R> col0{R{1.0}, R{0.0}, R{0.0}, R{0.0}};
  SpinorR<R> col1{R{0.0}, R{0.0}, R{1.0}, R{0.0}};
};

template <class R>
SpinorR<R> multiply(const MatrixR<R>& m, const SpinorR<R>& v) {
  // column0 * v.up + column1 * v.down, with v.up = p + i q and v.down = r + i t
  const SpinorR<R>& a = m.col0;
  const SpinorR<R>& b = m.col1;
  return {a.p * v.p - a.q * v.q + b.p * v.r - b.q * v.t, a.p * v.q + a.q * v.p + b.p * v.t + b.q * v.r,
          a.r * v.p - a.t * v.q + b.r * v.r - b.t * v.t, a.r * v.q + a.t * v.p + b.r * v.t + b.t * v.r};
}

template <class R>
Matrix2C round(const MatrixR<R>& m) {
  const Spinor c0 = round(m.col0);
  const Spinor c1 = round(m.col1);
  return {{c0.up, c1.up, c0.down, c1.down}};
}

template <class R>
Complex determinant(const MatrixR<R>& m) {
  using detail::to_double;
  // (p0 + i q0)(r1 + i t1) - (p1 + i q1)(r0 + i t0)
  const R re = m.col0.p * m.col1.r - m.col0.q * m.col1.t - (m.col1.p * m.col0.r - m.col1.q * m.col0.t);
  const R im = m.col0.p * m.col1.t + m.col0.q * m.col1.r - (m.col1.p * m.col0.t + m.col1.q * m.col0.r);
  return {to_double(re), to_double(im)};
}

template <class R>
double sigma_z_defect(const MatrixR<R>& m) {
  using detail::to_double;
  // (M^dagger sigma_z M)_{ij} = col_i^dagger sigma_z col_j
  const R d00 = current_of(m.col0) - R{1.0};
  const R d11 = current_of(m.col1) + R{1.0};
  const R off_re = m.col0.p * m.col1.p + m.col0.q * m.col1.q - (m.col0.r * m.col1.r + m.col0.t * m.col1.t);
  const R off_im = m.col0.p * m.col1.q - m.col0.q * m.col1.p - (m.col0.r * m.col1.t - m.col0.t * m.col1.r);
  const double off = std::hypot(to_double(off_re), to_double(off_im));
  return std::max({std::abs(to_double(d00)), std::abs(to_double(d11)), off});
}

template <class R, class Visit>
MatrixR<R> walk_factors(double energy, const PropagationGrid& grid, const FieldConfig& field,
                        const NucleiConfig& nuclei, Visit&& visit) {
  check_grid_matches(grid, field, nuclei);
  std::vector<std::size_t> wells = grid.well_node_indices();
  std::sort(wells.begin(), wells.end());
  const WellFactor<R> well = make_well<R>(nuclei.well_strength());
  const double f = field.strength();
  const double fl = f * field.half_extent();

  MatrixR<R> m;
  visit(std::size_t{0}, m);
  auto next_well = wells.begin();
  for (std::size_t j = 0; j < grid.intervals(); ++j) {
    double b = 0.0;
    double cc = 0.0;
    grid_step_coefficients(energy, grid, f, fl, j, b, cc);
    const StepFactor<R> u = make_step<R>(b, cc);
    apply(u, m.col0);
    apply(u, m.col1);
    if (next_well != wells.end() && *next_well == j + 1) {
      apply(well, m.col0);
      apply(well, m.col1);
      ++next_well;
    }
    visit(j + 1, m);
  }
  return m;
}

template <class R>
CompositePropagator compose_impl(double energy, const PropagationGrid& grid, const FieldConfig& field,
                                 const NucleiConfig& nuclei) {
  const MatrixR<R> m = walk_factors<R>(energy, grid, field, nuclei, [](std::size_t, const MatrixR<R>&) {});
  CompositePropagator out;
  out.matrix = round(m);
  out.energy = energy;
  out.steps = grid.intervals();
  out.wells = nuclei.size();
  out.dx = grid.dx();
  out.determinant = determinant(m);
  out.sigma_z_defect = sigma_z_defect(m);
  return out;
}

template <class R>
std::vector<PropagationSample> samples_impl(double energy, const PropagationGrid& grid,
                                            const FieldConfig& field, const NucleiConfig& nuclei,
                                            const Spinor& initial) {
  std::vector<PropagationSample> samples;
  samples.reserve(grid.node_count());
  const SpinorR<R> init{R{initial.up.real()}, R{initial.up.imag()}, R{initial.down.real()},
                        R{initial.down.imag()}};
  walk_factors<R>(energy, grid, field, nuclei, [&](std::size_t j, const MatrixR<R>& m) {
    const SpinorR<R> psi = multiply(m, init);
    PropagationSample sample;
    sample.x = grid.node(j);
    sample.psi = round(m) * initial;
    sample.current = units::c * detail::to_double(current_of(psi));
    samples.push_back(sample);
  });
  return samples;
}

template <class R>
Spinor left_edge_impl(double energy, const PropagationGrid& grid, const FieldConfig& field,
                      const NucleiConfig& nuclei, const Spinor& initial) {
  check_grid_matches(grid, field, nuclei);
  std::vector<std::size_t> wells = grid.well_node_indices();
  std::sort(wells.begin(), wells.end());
  const WellFactor<R> well = make_well<R>(nuclei.well_strength());
  const double f = field.strength();
  const double fl = f * field.half_extent();

  SpinorR<R> s{R{initial.up.real()}, R{initial.up.imag()}, R{initial.down.real()}, R{initial.down.imag()}};
  auto next_well = wells.begin();
  const std::size_t n = grid.intervals();
  for (std::size_t j = 0; j < n; ++j) {
    double b = 0.0;
    double cc = 0.0;
    grid_step_coefficients(energy, grid, f, fl, j, b, cc);
    apply(make_step<R>(b, cc), s);
    if (next_well != wells.end() && *next_well == j + 1) {
      apply(well, s);
      ++next_well;
    }
  }
  return round(s);
}

}  // namespace

StepCoefficients step_coefficients(double energy, double x_from, double x_to, const FieldConfig& field) {
  const double l = field.half_extent();
  if (x_from < -l || x_from > l || x_to < -l || x_to > l) {
    throw DomainError("step endpoints must lie inside [-L, L]");
  }
  if (x_to > x_from) throw DomainError("steps run from +L toward -L: x_to must not exceed x_from");
  const double f = field.strength();
  const double xbar = 0.5 * (x_from + x_to);
  const double delta = (x_from - x_to) / units::c;
  StepCoefficients s;
  s.b = delta * (f * l - energy - f * xbar);
  s.cc = delta * units::mc2;
  const double d2 = (s.b - s.cc) * (s.b + s.cc);
  s.branch = d2 >= 0.0 ? StepCoefficients::Branch::Oscillatory : StepCoefficients::Branch::Hyperbolic;
  s.d = std::sqrt(std::abs(d2));
  return s;
}

Matrix2C step_operator(double energy, double x_from, double x_to, const FieldConfig& field) {
  const StepCoefficients s = step_coefficients(energy, x_from, x_to, field);
  return detail::step_matrix(s.b, s.cc);
}

std::vector<double> PropagationGrid::nodes() const {
  std::vector<double> out(node_count());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = node(j);
  return out;
}

bool PropagationGrid::is_well_node(std::size_t j) const {
  return std::find(well_nodes_.begin(), well_nodes_.end(), j) != well_nodes_.end();
}

PropagationGrid build_grid(const FieldConfig& field, const NucleiConfig& nuclei, double dx_target) {
  if (!(dx_target > 0.0) || !std::isfinite(dx_target)) {
    throw DomainError("dx_target must be finite and > 0");
  }
  const double l = field.half_extent();
  PropagationGrid grid;
  grid.half_extent_ = l;
  // Guard against 2L/dx landing a hair above an integer.
  const double ratio = 2.0 * l / dx_target;
  grid.intervals_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-12))));
  grid.dx_ = 2.0 * l / static_cast<double>(grid.intervals_);

  grid.well_nodes_.reserve(nuclei.size());
  grid.snap_.reserve(nuclei.size());
  for (double x : nuclei.positions()) {
    const double index = std::round((l - x) / grid.dx_);
    if (!(index >= 1.0) || !(index <= static_cast<double>(grid.intervals_) - 1.0)) {
      throw ResolutionError("well at x = " + std::to_string(x) +
                            " does not fall on an interior grid node; it must lie at least one step inside (-L, L)");
    }
    const auto j = static_cast<std::size_t>(index);
    if (grid.is_well_node(j)) {
      throw ResolutionError("two wells snap to the same grid node near x = " + std::to_string(x) +
                            "; decrease dx (currently " + std::to_string(grid.dx_) + ")");
    }
    grid.well_nodes_.push_back(j);
    grid.snap_.push_back(grid.node(j) - x);
  }
  return grid;
}

CompositePropagator compose_propagator(double energy, const PropagationGrid& grid,
                                       const FieldConfig& field, const NucleiConfig& nuclei,
                                       Accumulation accumulation) {
  if (accumulation == Accumulation::Compensated) {
    return compose_impl<DoubleDouble>(energy, grid, field, nuclei);
  }
  return compose_impl<long double>(energy, grid, field, nuclei);
}

std::vector<PropagationSample> propagate_samples(double energy, const PropagationGrid& grid,
                                                 const FieldConfig& field, const NucleiConfig& nuclei,
                                                 const Spinor& initial, Accumulation accumulation) {
  if (accumulation == Accumulation::Compensated) {
    return samples_impl<DoubleDouble>(energy, grid, field, nuclei, initial);
  }
  return samples_impl<long double>(energy, grid, field, nuclei, initial);
}

Spinor propagate_to_left_edge(double energy, const PropagationGrid& grid, const FieldConfig& field,
                              const NucleiConfig& nuclei, const Spinor& initial, Accumulation accumulation) {
  if (accumulation == Accumulation::Compensated) {
    return left_edge_impl<DoubleDouble>(energy, grid, field, nuclei, initial);
  }
  return left_edge_impl<long double>(energy, grid, field, nuclei, initial);
}

}  // namespace pairprod
