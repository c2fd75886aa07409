#include "pairprod/physics.hpp"

#include <cmath>
#include <string>

#include "pairprod/error.hpp"
#include "pairprod/units.hpp"

namespace pairprod {

FieldConfig::FieldConfig(double strength, double half_extent)
    : strength_(strength), half_extent_(half_extent) {
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw DomainError("field strength must be finite and >= 0");
  }
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw DomainError("field half-extent L must be finite and > 0");
  }
}

NucleiConfig::NucleiConfig(double well_strength, std::vector<double> positions)
    : well_strength_(well_strength), positions_(std::move(positions)) {
  if (!(well_strength >= 0.0) || !std::isfinite(well_strength)) {
    throw DomainError("well strength g must be finite and >= 0");
  }
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i])) throw DomainError("well positions must be finite");
    if (i > 0 && !(positions_[i] > positions_[i - 1])) {
      throw DomainError("well positions must be strictly increasing");
    }
  }
}

void NucleiConfig::validate_inside(double half_extent, double margin) const {
  for (double x : positions_) {
    if (!(std::abs(x) < half_extent - margin)) {
      throw GeometryError("well at x = " + std::to_string(x) + " is not inside (-L, L) = (" +
                          std::to_string(-half_extent) + ", " + std::to_string(half_extent) +
                          ") with margin " + std::to_string(margin));
    }
  }
}

double potential_a0(double x, const FieldConfig& field) {
  const double f = field.strength();
  const double l = field.half_extent();
  if (x <= -l) return 2.0 * f * l;
  if (x >= l) return 0.0;
  return -f * (x - l);
}

NucleiConfig nuclei_preset(int n, double spacing, double well_strength) {
  if (n < 0 || n > 5) {
    throw InvalidPresetError("nuclei preset must be in 0..5, got " + std::to_string(n));
  }
  if (!(spacing > 0.0)) throw DomainError("internuclear spacing must be > 0");
  // Positions (i - (n-1)/2) R, i = 0..n-1.
  std::vector<double> positions;
  positions.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    positions.push_back((2 * i - (n - 1)) * spacing / 2.0);
  }
  return NucleiConfig(well_strength, std::move(positions));
}

Matrix2C transfer_matrix(double well_strength) {
  if (!(well_strength >= 0.0)) throw DomainError("well strength g must be >= 0");
  const double gc = well_strength / units::c;
  const double a = gc * gc / 4.0;
  const double norm = 1.0 + a;
  return Matrix2C::diagonal(Complex{(1.0 - a) / norm, gc / norm},
                            Complex{(1.0 - a) / norm, -gc / norm});
}

KleinInterval klein_region(const FieldConfig& field) {
  // Positive continuum on the right needs E > mc^2, negative continuum on the
  // left needs E < 2FL - mc^2.
  return {units::mc2, field.potential_drop() - units::mc2};
}

}  // namespace pairprod
