#pragma once

#include <vector>

#include "pairprod/linalg.hpp"

namespace pairprod {

/// Constant electric field of strength F (in units of E_S) filling (-L, L).
class FieldConfig {
 public:
  FieldConfig(double strength, double half_extent);

  double strength() const { return strength_; }
  double half_extent() const { return half_extent_; }
  /// Total potential drop 2FL across the field region.
  double potential_drop() const { return 2.0 * strength_ * half_extent_; }

 private:
  double strength_;
  double half_extent_;
};

/// Delta-well nuclei: common strength g and strictly increasing positions.
class NucleiConfig {
 public:
  NucleiConfig() = default;
  NucleiConfig(double well_strength, std::vector<double> positions);

  double well_strength() const { return well_strength_; }
  const std::vector<double>& positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }

  /// Throws GeometryError unless every well lies inside (-half_extent + margin, half_extent - margin).
  void validate_inside(double half_extent, double margin = 0.0) const;

 private:
  double well_strength_ = 0.0;
  std::vector<double> positions_;
};

struct KleinInterval {
  double e_min = 0.0;
  double e_max = 0.0;

  bool empty() const { return !(e_max > e_min); }
  double width() const { return empty() ? 0.0 : e_max - e_min; }
  bool contains_open(double e) const { return e > e_min && e < e_max; }
};

/// Electrostatic potential energy A0(x): 2FL left of the field, 0 right of it.
double potential_a0(double x, const FieldConfig& field);

/// Symmetric linear chain of n in [0, 5] wells with constant spacing.
NucleiConfig nuclei_preset(int n, double spacing, double well_strength);

/// Jump matrix G with psi(R+) = G psi(R-) across a well of strength g.
Matrix2C transfer_matrix(double well_strength);

/// Energies that are positive-continuum on the right and negative-continuum on the left.
KleinInterval klein_region(const FieldConfig& field);

}  // namespace pairprod
