#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "pairprod/error.hpp"
#include "pairprod/oracle.hpp"

namespace pairprod::oracle {
namespace {

class MpReal {
 public:
  explicit MpReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  ~MpReal() { mpfr_clear(v_); }
  MpReal(const MpReal&) = delete;
  MpReal& operator=(const MpReal&) = delete;

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

struct MpComplex {
  MpReal re;
  MpReal im;

  explicit MpComplex(mpfr_prec_t bits) : re(bits), im(bits) {}

  void set(Complex z) {
    mpfr_set_d(re.get(), z.real(), MPFR_RNDN);
    mpfr_set_d(im.get(), z.imag(), MPFR_RNDN);
  }
  void set(const MpComplex& o) {
    mpfr_set(re.get(), o.re.get(), MPFR_RNDN);
    mpfr_set(im.get(), o.im.get(), MPFR_RNDN);
  }
  Complex to_complex() const {
    return {mpfr_get_d(re.get(), MPFR_RNDN), mpfr_get_d(im.get(), MPFR_RNDN)};
  }
  /// Binary exponent of max(|re|, |im|); very negative for zero.
  long magnitude() const {
    constexpr long kZero = -(1L << 40);
    const long er = mpfr_zero_p(re.get()) ? kZero : static_cast<long>(mpfr_get_exp(re.get()));
    const long ei = mpfr_zero_p(im.get()) ? kZero : static_cast<long>(mpfr_get_exp(im.get()));
    return std::max(er, ei);
  }
};

// out = a * b. `tmp` is scratch; out may alias neither a nor b.
void mul(MpComplex& out, const MpComplex& a, const MpComplex& b, MpReal& tmp) {
  mpfr_mul(out.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(tmp.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(out.re.get(), out.re.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul(out.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(tmp.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(out.im.get(), out.im.get(), tmp.get(), MPFR_RNDN);
}

void add(MpComplex& acc, const MpComplex& x) {
  mpfr_add(acc.re.get(), acc.re.get(), x.re.get(), MPFR_RNDN);
  mpfr_add(acc.im.get(), acc.im.get(), x.im.get(), MPFR_RNDN);
}

void add_scaled(MpComplex& acc, const MpComplex& x, unsigned long k, MpReal& tmp) {
  mpfr_mul_ui(tmp.get(), x.re.get(), k, MPFR_RNDN);
  mpfr_add(acc.re.get(), acc.re.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul_ui(tmp.get(), x.im.get(), k, MPFR_RNDN);
  mpfr_add(acc.im.get(), acc.im.get(), tmp.get(), MPFR_RNDN);
}

void sub(MpComplex& acc, const MpComplex& x) {
  mpfr_sub(acc.re.get(), acc.re.get(), x.re.get(), MPFR_RNDN);
  mpfr_sub(acc.im.get(), acc.im.get(), x.im.get(), MPFR_RNDN);
}

// out = 1 / a.
void reciprocal(MpComplex& out, const MpComplex& a, MpReal& tmp) {
  mpfr_sqr(tmp.get(), a.re.get(), MPFR_RNDN);
  mpfr_fma(tmp.get(), a.im.get(), a.im.get(), tmp.get(), MPFR_RNDN);
  mpfr_div(out.re.get(), a.re.get(), tmp.get(), MPFR_RNDN);
  mpfr_div(out.im.get(), a.im.get(), tmp.get(), MPFR_RNDN);
  mpfr_neg(out.im.get(), out.im.get(), MPFR_RNDN);
}

// out = exp(a).
void exp(MpComplex& out, const MpComplex& a, MpReal& tmp) {
  mpfr_sin_cos(out.im.get(), out.re.get(), a.im.get(), MPFR_RNDN);
  mpfr_exp(tmp.get(), a.re.get(), MPFR_RNDN);
  mpfr_mul(out.re.get(), out.re.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul(out.im.get(), out.im.get(), tmp.get(), MPFR_RNDN);
}

// Principal log(a).
void log(MpComplex& out, const MpComplex& a) {
  mpfr_atan2(out.im.get(), a.im.get(), a.re.get(), MPFR_RNDN);
  mpfr_hypot(out.re.get(), a.re.get(), a.im.get(), MPFR_RNDN);
  mpfr_log(out.re.get(), out.re.get(), MPFR_RNDN);
}

// 1/Gamma(z) at `bits` of precision. Shifts z up to w = z + N with Re w ~ 0.2 bits,
// sums the Stirling series for log Gamma(w), and multiplies back by z (z+1) ... (z+N-1).
void reciprocal_gamma_mp(MpComplex& out, const MpComplex& z, mpfr_prec_t bits) {
  if (mpfr_zero_p(z.im.get()) && mpfr_integer_p(z.re.get()) && mpfr_sgn(z.re.get()) <= 0) {
    out.set(Complex{});
    return;
  }
  const mpfr_prec_t p = bits + 48;
  MpReal tmp(p), tmp2(p);
  MpComplex w(p), prod(p), scratch(p);
  w.set(z);
  prod.set(Complex{1.0, 0.0});
  const double target = 0.2 * static_cast<double>(p) + 10.0;
  const double shift = std::ceil(target - mpfr_get_d(z.re.get(), MPFR_RNDN));
  for (long j = 0; j < static_cast<long>(shift); ++j) {
    mul(scratch, prod, w, tmp);
    prod.set(scratch);
    mpfr_add_ui(w.re.get(), w.re.get(), 1, MPFR_RNDN);
  }

  // (w - 1/2) log w - w + log(2 pi)/2
  MpComplex lg(p), logw(p), half(p);
  log(logw, w);
  half.set(w);
  mpfr_sub_d(half.re.get(), half.re.get(), 0.5, MPFR_RNDN);
  mul(lg, half, logw, tmp);
  sub(lg, w);
  MpReal two_pi(p);
  mpfr_const_pi(two_pi.get(), MPFR_RNDN);
  mpfr_mul_2ui(two_pi.get(), two_pi.get(), 1, MPFR_RNDN);
  mpfr_log(tmp2.get(), two_pi.get(), MPFR_RNDN);
  mpfr_div_2ui(tmp2.get(), tmp2.get(), 1, MPFR_RNDN);
  mpfr_add(lg.re.get(), lg.re.get(), tmp2.get(), MPFR_RNDN);

  // + sum_k B_2k / (2k (2k-1) w^(2k-1)), B_2k / (2k (2k-1)) = (-1)^(k+1) 2 (2k-2)! zeta(2k) / (2 pi)^2k
  MpComplex winv(p), winv2(p), power(p), term(p);
  reciprocal(winv, w, tmp);
  mul(winv2, winv, winv, tmp);
  power.set(winv);
  MpReal two_pi_sq(p), factor(p), coeff(p);
  mpfr_sqr(two_pi_sq.get(), two_pi.get(), MPFR_RNDN);
  mpfr_ui_div(factor.get(), 2, two_pi_sq.get(), MPFR_RNDN);
  const long floor_exp = -static_cast<long>(p) - 8;
  for (unsigned long k = 1; k < 100000; ++k) {
    mpfr_zeta_ui(coeff.get(), 2 * k, MPFR_RNDN);
    mpfr_mul(coeff.get(), coeff.get(), factor.get(), MPFR_RNDN);
    if (k % 2 == 0) mpfr_neg(coeff.get(), coeff.get(), MPFR_RNDN);
    mpfr_mul(term.re.get(), power.re.get(), coeff.get(), MPFR_RNDN);
    mpfr_mul(term.im.get(), power.im.get(), coeff.get(), MPFR_RNDN);
    add(lg, term);
    if (term.magnitude() < floor_exp) break;
    mul(scratch, power, winv2, tmp);
    power.set(scratch);
    mpfr_mul_ui(factor.get(), factor.get(), (2 * k - 1) * (2 * k), MPFR_RNDN);
    mpfr_div(factor.get(), factor.get(), two_pi_sq.get(), MPFR_RNDN);
  }

  mpfr_neg(lg.re.get(), lg.re.get(), MPFR_RNDN);
  mpfr_neg(lg.im.get(), lg.im.get(), MPFR_RNDN);
  exp(scratch, lg, tmp);
  MpComplex result(p);
  mul(result, prod, scratch, tmp);
  out.set(result);
}

// sign * sqrt(pi) 2^(-s) / Gamma(t); U(a, 0) and U'(a, 0) both have this form.
void origin_value(MpComplex& out, const MpComplex& a, double s_offset, double t_offset, int sign,
                  mpfr_prec_t bits) {
  MpReal tmp(bits);
  MpComplex half_a(bits), t(bits), rg(bits), scaled(bits), pow2(bits);
  half_a.set(a);
  mpfr_div_2ui(half_a.re.get(), half_a.re.get(), 1, MPFR_RNDN);
  mpfr_div_2ui(half_a.im.get(), half_a.im.get(), 1, MPFR_RNDN);
  t.set(half_a);
  mpfr_add_d(t.re.get(), t.re.get(), t_offset, MPFR_RNDN);
  reciprocal_gamma_mp(rg, t, bits);

  // 2^(-(a/2 + s_offset)) = exp(-(a/2 + s_offset) ln 2)
  MpReal ln2(bits);
  mpfr_const_log2(ln2.get(), MPFR_RNDN);
  scaled.set(half_a);
  mpfr_add_d(scaled.re.get(), scaled.re.get(), s_offset, MPFR_RNDN);
  mpfr_mul(scaled.re.get(), scaled.re.get(), ln2.get(), MPFR_RNDN);
  mpfr_mul(scaled.im.get(), scaled.im.get(), ln2.get(), MPFR_RNDN);
  mpfr_neg(scaled.re.get(), scaled.re.get(), MPFR_RNDN);
  mpfr_neg(scaled.im.get(), scaled.im.get(), MPFR_RNDN);
  exp(pow2, scaled, tmp);

  mul(out, pow2, rg, tmp);
  mpfr_const_pi(tmp.get(), MPFR_RNDN);
  mpfr_sqrt(tmp.get(), tmp.get(), MPFR_RNDN);
  if (sign < 0) mpfr_neg(tmp.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul(out.re.get(), out.re.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul(out.im.get(), out.im.get(), tmp.get(), MPFR_RNDN);
}

struct SeriesSum {
  MpComplex value;
  /// z * d/dz of the series.
  MpComplex z_derivative;
  long max_term_exp = 0;

  explicit SeriesSum(mpfr_prec_t bits) : value(bits), z_derivative(bits) {}
};

// Sums one parity of sum_n t_n with t_n = c_n z^n, where w'' = (z^2/4 + a) w:
//   t_{n+2} = (a z^2 t_n + (z^4/4) t_{n-2}) / ((n+1)(n+2)).
// Starts from t_0 = 1 (even) or t_1 = z (odd).
void sum_parity(SeriesSum& out, const MpComplex& a, const MpComplex& z, bool odd, mpfr_prec_t bits) {
  MpReal tmp(bits);
  MpComplex z2(bits), az2(bits), z4q(bits);
  mul(z2, z, z, tmp);
  mul(az2, a, z2, tmp);
  mul(z4q, z2, z2, tmp);
  mpfr_div_2ui(z4q.re.get(), z4q.re.get(), 2, MPFR_RNDN);
  mpfr_div_2ui(z4q.im.get(), z4q.im.get(), 2, MPFR_RNDN);

  MpComplex prev(bits), cur(bits), next(bits), part(bits);
  MpComplex& sum = out.value;
  MpComplex& dsum = out.z_derivative;
  if (odd) {
    cur.set(z);
  } else {
    cur.set(Complex{1.0, 0.0});
  }
  sum.set(cur);
  unsigned long n = odd ? 1 : 0;
  dsum.set(Complex{});
  add_scaled(dsum, cur, n, tmp);

  long max_exp = cur.magnitude();
  int quiet = 0;
  constexpr unsigned long kMaxTerms = 400000;
  const long guard = static_cast<long>(bits) + 16;
  while (n < kMaxTerms) {
    mul(next, az2, cur, tmp);
    mul(part, z4q, prev, tmp);
    add(next, part);
    const unsigned long denom = (n + 1) * (n + 2);
    mpfr_div_ui(next.re.get(), next.re.get(), denom, MPFR_RNDN);
    mpfr_div_ui(next.im.get(), next.im.get(), denom, MPFR_RNDN);
    n += 2;
    add(sum, next);
    add_scaled(dsum, next, n, tmp);
    max_exp = std::max(max_exp, next.magnitude());

    prev.set(cur);
    cur.set(next);
    // Stop once two consecutive terms vanish against the running sum well past the peak.
    const long sum_exp = sum.magnitude();
    const long ref = std::max(sum_exp, max_exp - guard);
    if (cur.magnitude() < ref - guard && prev.magnitude() < ref - guard) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  if (n >= kMaxTerms) throw DomainError("parabolic cylinder series did not converge");
  out.max_term_exp = max_exp;
}

}  // namespace

Complex reciprocal_gamma(Complex z) {
  constexpr double pi = std::numbers::pi;
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return {};
  if (z.real() < 0.5) {
    // 1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi
    const Complex s = std::sin(pi * z);
    if (s == Complex{}) return {};
    return s / (pi * reciprocal_gamma(1.0 - z));
  }
  // Lanczos, g = 7, n = 9.
  static constexpr std::array<double, 9> kCoeff = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  const Complex w = z - 1.0;
  Complex x = kCoeff[0];
  for (std::size_t i = 1; i < kCoeff.size(); ++i) x += kCoeff[i] / (w + static_cast<double>(i));
  const Complex t = w + g + 0.5;
  // Gamma(z) = sqrt(2 pi) t^{w + 1/2} e^{-t} x
  const Complex log_gamma = 0.5 * std::log(2.0 * pi) + (w + 0.5) * std::log(t) - t + std::log(x);
  return std::exp(-log_gamma);
}

PcfValue pcf_u_eval(Complex order, Complex argument) {
  if (!(std::abs(order) <= kMaxOrder) || !(std::abs(argument) <= kMaxArgument)) {
    throw DomainError("pcf_u outside validity region |a| <= " + std::to_string(kMaxOrder) +
                      ", |z| <= " + std::to_string(kMaxArgument));
  }
  PcfValue out;
  // Terms peak near exp(|z|^2/4 + 2 sqrt|a| |z|), and on the recessive side the
  // result is a further exp(-Re z^2 / 4) below them.
  const double r = std::abs(argument);
  const double recessive = std::max(0.0, (argument * argument).real()) / 4.0;
  const double growth = r * r / 4.0 + recessive + 2.0 * std::sqrt(std::abs(order)) * r;
  auto bits = static_cast<mpfr_prec_t>(128 + growth / std::numbers::ln2);
  // The prefactors only need to survive the cancellation between the two parities.
  auto gamma_bits = std::min(bits, static_cast<mpfr_prec_t>(160 + recessive / std::numbers::ln2));

  for (int attempt = 0; attempt < 4; ++attempt) {
    MpReal tmp(bits);
    MpComplex a(bits), z(bits), u0(bits), du0(bits);
    a.set(order);
    z.set(argument);
    origin_value(u0, a, 0.25, 0.75, +1, gamma_bits);
    origin_value(du0, a, -0.25, 0.25, -1, gamma_bits);
    out.bits = static_cast<long>(bits);
    if (argument == Complex{}) {
      out.value = u0.to_complex();
      out.derivative = du0.to_complex();
      out.relative_error = 1e-16;
      break;
    }

    SeriesSum even(bits), odd(bits);
    sum_parity(even, a, z, false, bits);
    sum_parity(odd, a, z, true, bits);
    MpComplex value(bits), deriv(bits), part(bits);
    mul(value, u0, even.value, tmp);
    mul(part, du0, odd.value, tmp);
    const long combined = std::max(value.magnitude(), part.magnitude());
    add(value, part);
    mul(deriv, u0, even.z_derivative, tmp);
    mul(part, du0, odd.z_derivative, tmp);
    add(deriv, part);
    MpComplex zinv(bits), scaled(bits);
    reciprocal(zinv, z, tmp);
    mul(scaled, deriv, zinv, tmp);
    out.value = value.to_complex();
    out.derivative = scaled.to_complex();

    if (mpfr_zero_p(value.re.get()) && mpfr_zero_p(value.im.get())) break;
    const long value_exp = value.magnitude();
    // Series rounding is bounded by the largest term carried; prefactor rounding by the
    // larger of the two parity contributions. Both relative to the final value.
    const long carried = std::max(even.max_term_exp + u0.magnitude(), odd.max_term_exp + du0.magnitude());
    const long series_lost = carried - value_exp;
    const long gamma_lost = combined - value_exp;
    const long error_exp =
        std::max(series_lost - static_cast<long>(bits), gamma_lost - static_cast<long>(gamma_bits)) + 8;
    out.relative_error = std::max(std::ldexp(1.0, static_cast<int>(std::max(error_exp, -1000L))), 1e-16);
    if (error_exp < -60) break;
    if (series_lost - static_cast<long>(bits) + 8 >= -60) bits += static_cast<mpfr_prec_t>(std::max(series_lost, 0L) + 96);
    gamma_bits = std::min(bits, gamma_bits + static_cast<mpfr_prec_t>(std::max(gamma_lost, 0L) + 96));
  }
  out.precision_loss = !(out.relative_error <= 1e-7);
  return out;
}

Complex pcf_u(Complex order, Complex argument) { return pcf_u_eval(order, argument).value; }

}  // namespace pairprod::oracle
