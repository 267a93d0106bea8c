#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <vector>

#include "kronspec/algebra.hpp"

namespace kron {

// The Hankel-type determinants of the h-function decay like 1e-20 .. 1e-60
// over the probe windows while staying provably nonzero; double precision
// cannot certify that, so the scans run at 100 decimal digits.
using BigReal = boost::multiprecision::cpp_bin_float_100;

struct BigCplx {
  BigReal re = 0, im = 0;

  BigCplx() = default;
  BigCplx(BigReal r) : re(std::move(r)) {}
  BigCplx(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
  BigCplx(double r) : re(r) {}

  BigReal norm2() const { return re * re + im * im; }
  BigReal abs() const { return sqrt(norm2()); }

  BigCplx operator-() const { return {-re, -im}; }
  friend BigCplx operator+(const BigCplx& a, const BigCplx& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend BigCplx operator-(const BigCplx& a, const BigCplx& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend BigCplx operator*(const BigCplx& a, const BigCplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BigCplx operator/(const BigCplx& a, const BigCplx& b) {
    BigReal n2 = b.norm2();
    BigCplx num = a * BigCplx{b.re, -b.im};
    return {num.re / n2, num.im / n2};
  }
  BigCplx& operator+=(const BigCplx& o) { return *this = *this + o; }
  BigCplx& operator-=(const BigCplx& o) { return *this = *this - o; }
};

/// LU determinant with partial pivoting on |.|^2.
inline BigCplx det_big(std::vector<std::vector<BigCplx>> m) {
  size_t n = m.size();
  BigCplx det(BigReal(1));
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    BigReal best = m[c][c].norm2();
    for (size_t r = c + 1; r < n; ++r)
      if (m[r][c].norm2() > best) {
        best = m[r][c].norm2();
        piv = r;
      }
    if (best == 0) return BigCplx(BigReal(0));
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det = det * m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      BigCplx f = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

inline BigReal big_from(const Rational& r) {
  return BigReal(numerator(r).str()) / BigReal(denominator(r).str());
}

/// sqrt(lambda_{kl}) * gamma_{kl,+} at 100-digit precision, with the kernel
/// convention w(0,0) = 0.
inline BigCplx w_big(const Foliation& f, long k, long l) {
  if (k == 0 && l == 0) return {};
  BigReal a = f.exact_pair ? big_from(f.ar) : BigReal(f.a);
  BigReal b = f.exact_pair ? big_from(f.br) : BigReal(f.b);
  BigReal u = a * k + b * l, wv = b * k - a * l;
  BigReal lam = sqrt(u * u * u * u + wv * wv);
  return BigCplx{-u * u, a * l - b * k} / BigCplx(lam) * BigCplx(sqrt(lam));
}

inline BigCplx h_big(const Foliation& f, long i) {
  return w_big(f, i, 0) - w_big(f, i - 1, 0);
}

}  // namespace kron
