#pragma once

#include <array>
#include <complex>

namespace pairprod {

using Complex = std::complex<double>;

/// Two-component Dirac bispinor (psi_1, psi_2).
struct Spinor {
  Complex up{};
  Complex down{};

  constexpr Complex& operator[](int i) { return i == 0 ? up : down; }
  constexpr const Complex& operator[](int i) const { return i == 0 ? up : down; }

  friend Spinor operator*(Complex s, const Spinor& v) { return {s * v.up, s * v.down}; }
  friend Spinor operator+(const Spinor& a, const Spinor& b) { return {a.up + b.up, a.down + b.down}; }
  friend Spinor operator-(const Spinor& a, const Spinor& b) { return {a.up - b.up, a.down - b.down}; }
};

/// psi^dagger psi
inline double norm2(const Spinor& v) { return std::norm(v.up) + std::norm(v.down); }

/// psi^dagger sigma_z psi; the Dirac current density in units of c.
inline double sigma_z_form(const Spinor& v) { return std::norm(v.up) - std::norm(v.down); }

/// a^dagger sigma_z b
inline Complex sigma_z_form(const Spinor& a, const Spinor& b) {
  return std::conj(a.up) * b.up - std::conj(a.down) * b.down;
}

/// det[a b] = a_1 b_2 - a_2 b_1
inline Complex cross(const Spinor& a, const Spinor& b) { return a.up * b.down - a.down * b.up; }

/// Row-major 2x2 complex matrix.
struct Matrix2C {
  std::array<Complex, 4> m{};

  static constexpr Matrix2C identity() { return {{Complex{1.0}, Complex{}, Complex{}, Complex{1.0}}}; }
  static constexpr Matrix2C diagonal(Complex d0, Complex d1) { return {{d0, Complex{}, Complex{}, d1}}; }

  constexpr Complex& operator()(int r, int c) { return m[2 * r + c]; }
  constexpr const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

  Complex det() const { return m[0] * m[3] - m[1] * m[2]; }

  Matrix2C adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
  }

  /// Inverse of a matrix with unit determinant.
  Matrix2C unimodular_inverse() const { return {{m[3], -m[1], -m[2], m[0]}}; }

  Matrix2C inverse() const {
    const Complex d = det();
    return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
  }

  friend Matrix2C operator*(const Matrix2C& a, const Matrix2C& b) {
    return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
             a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
  }
  friend Spinor operator*(const Matrix2C& a, const Spinor& v) {
    return {a.m[0] * v.up + a.m[1] * v.down, a.m[2] * v.up + a.m[3] * v.down};
  }
  friend Matrix2C operator+(const Matrix2C& a, const Matrix2C& b) {
    return {{a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]}};
  }
  friend Matrix2C operator-(const Matrix2C& a, const Matrix2C& b) {
    return {{a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]}};
  }
  friend Matrix2C operator*(Complex s, const Matrix2C& a) {
    return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
  }
};

namespace pauli {
inline constexpr Matrix2C x{{Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}}};
inline constexpr Matrix2C y{{Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0}}};
inline constexpr Matrix2C z{{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{-1, 0}}};
}  // namespace pauli

inline double max_abs(const Matrix2C& a) {
  double r = 0.0;
  for (const auto& v : a.m) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace pairprod
