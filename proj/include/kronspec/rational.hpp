#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>

namespace kron {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline Rational rational_pow(const Rational& base, long e) {
  Rational acc(1), b = base;
  long n = e < 0 ? -e : e;
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  if (e < 0) acc = Rational(1) / acc;
  return acc;
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
inline bool rational_sqrt(const Rational& r, Rational& out) {
  if (r < 0) return false;
  Int n = numerator(r), d = denominator(r);
  Int sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) return false;
  out = Rational(sn, sd);
  return true;
}

/// Complex number with exact rational real and imaginary parts.
struct GaussRat {
  Rational re, im;

  GaussRat() = default;
  GaussRat(Rational r) : re(std::move(r)) {}
  GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussRat(long r) : re(r) {}
  GaussRat(long r, long i) : re(r), im(i) {}

  static GaussRat i() { return GaussRat(Rational(0), Rational(1)); }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussRat conj() const { return {re, -im}; }
  Rational norm2() const { return re * re + im * im; }

  GaussRat operator-() const { return {-re, -im}; }
  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    Rational n2 = b.norm2();
    GaussRat num = a * b.conj();
    return {num.re / n2, num.im / n2};
  }
  GaussRat& operator/=(const GaussRat& o) { return *this = *this / o; }

  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
  friend bool operator<(const GaussRat& a, const GaussRat& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  GaussRat pow(long e) const {
    GaussRat acc(1), b = *this;
    long n = e < 0 ? -e : e;
    while (n) {
      if (n & 1) acc *= b;
      b *= b;
      n >>= 1;
    }
    if (e < 0) acc = GaussRat(1) / acc;
    return acc;
  }
};

inline std::string to_string(const GaussRat& z) {
  return "(" + to_string(z.re) + ", " + to_string(z.im) + ")";
}

/// Exact square root in Q(i), when one exists.
inline bool gauss_sqrt(const GaussRat& z, GaussRat& out) {
  // (x+iy)^2 = z  =>  x^2 - y^2 = re, 2xy = im, x^2 + y^2 = |z|.
  Rational mod;
  if (!rational_sqrt(z.norm2(), mod)) return false;
  Rational x2 = (z.re + mod) / 2, y2 = (mod - z.re) / 2;
  Rational x, y;
  if (!rational_sqrt(x2, x) || !rational_sqrt(y2, y)) return false;
  if (z.im < 0) y = -y;
  out = GaussRat(x, y);
  return out * out == z;
}

}  // namespace kron
