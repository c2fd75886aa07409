#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "pairprod/linalg.hpp"
#include "pairprod/physics.hpp"

namespace pairprod::testing {

inline double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline double rel_diff(const Spinor& a, const Spinor& b) {
  return std::sqrt(norm2(a - b) / std::max(norm2(a), norm2(b)));
}

/// A field, a nuclei layout that fits, and an energy strictly inside the Klein window.
struct RandomCase {
  FieldConfig field{1.0, 1.0};
  NucleiConfig nuclei;
  double energy = 0.0;
};

/// Kept small so that a grid at dx ~ 1e-2 has a few thousand steps.
inline RandomCase random_case(std::mt19937_64& rng, int max_nuclei = 3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomCase c;
  const double f = 0.2 + 0.6 * u(rng);
  const double l = 8.0 + 12.0 * u(rng);
  c.field = FieldConfig(f, l);
  const int n = std::uniform_int_distribution<int>(0, max_nuclei)(rng);
  const double spacing = 0.5 + (n > 1 ? (1.6 * l - 1.0) / (n - 1) : 1.0) * 0.5 * u(rng);
  c.nuclei = nuclei_preset(n, spacing, 1.5 * u(rng));
  const KleinInterval k = klein_region(c.field);
  c.energy = k.e_min + (0.02 + 0.96 * u(rng)) * k.width();
  return c;
}

}  // namespace pairprod::testing
