#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "kronspec/bigfloat.hpp"
#include "kronspec/spectral.hpp"

namespace kron {
namespace hankel {

// ---------------------------------------------------------------------------
// Determinants of Hankelian type: matrix (p,q) entry f(i_p + q).
// Exact in Gaussian-rational arithmetic, double or 100-digit otherwise.
// ---------------------------------------------------------------------------

inline GaussRat det(std::vector<std::vector<GaussRat>> m) {
  size_t n = m.size();
  GaussRat d(1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c].is_zero()) ++piv;
    if (piv == n) return GaussRat(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      if (m[r][c].is_zero()) continue;
      GaussRat f = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return d;
}

inline std::complex<double> det(std::vector<std::vector<std::complex<double>>> m) {
  size_t n = m.size();
  std::complex<double> d(1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    double best = std::norm(m[c][c]);
    for (size_t r = c + 1; r < n; ++r)
      if (std::norm(m[r][c]) > best) {
        best = std::norm(m[r][c]);
        piv = r;
      }
    if (best == 0.0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      auto f = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return d;
}

template <class C>
C hankel_det(const std::function<C(long)>& f, const std::vector<long>& rows, int k) {
  std::vector<std::vector<C>> m(rows.size());
  for (size_t p = 0; p < rows.size(); ++p)
    for (int q = 0; q <= k; ++q) m[p].push_back(f(rows[p] + q));
  return det(std::move(m));
}

/// Exact linear solve A x = b over Q(i); returns false when A is singular.
inline bool solve(std::vector<std::vector<GaussRat>> a, std::vector<GaussRat> b,
                  std::vector<GaussRat>& x) {
  size_t n = a.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c].is_zero()) ++piv;
    if (piv == n) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      GaussRat f = a[r][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

inline bool solve(std::vector<std::vector<std::complex<double>>> a,
                  std::vector<std::complex<double>> b,
                  std::vector<std::complex<double>>& x, double tol) {
  size_t n = a.size();
  double scale = 0;
  for (auto& row : a)
    for (auto& e : row) scale = std::max(scale, std::abs(e));
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    double best = std::norm(a[c][c]);
    for (size_t r = c + 1; r < n; ++r)
      if (std::norm(a[r][c]) > best) {
        best = std::norm(a[r][c]);
        piv = r;
      }
    if (std::sqrt(best) <= tol * std::max(1.0, scale)) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      auto f = a[r][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

// ---------------------------------------------------------------------------
// Sequence classification (the appendix theorem as a fitter):
//   poly_exp  f(i) = beta^i * sum_j alpha_j i^j      (single base)
//   pure_exp  f(i) = sum_j alpha_j beta_j^i          (distinct bases)
// The 2k leading samples determine the order-k model; every further sample is
// a consistency constraint. classify returns nothing when no model survives.
// ---------------------------------------------------------------------------

struct SeqSamples {
  long i0 = 0;
  std::vector<std::complex<double>> values;
  std::vector<GaussRat> exact_values;  // parallel to values when exact
  int order = 1;
  bool exact = false;

  static SeqSamples from_exact(long i0, std::vector<GaussRat> v, int k) {
    SeqSamples s;
    s.i0 = i0;
    s.order = k;
    s.exact = true;
    for (auto& g : v) s.values.push_back(g.to_complex());
    s.exact_values = std::move(v);
    return s;
  }
  static SeqSamples from_numeric(long i0, std::vector<std::complex<double>> v, int k) {
    SeqSamples s;
    s.i0 = i0;
    s.order = k;
    s.values = std::move(v);
    return s;
  }
};

struct SeqModel {
  enum class Kind { poly_exp, pure_exp, zero };
  Kind kind = Kind::zero;
  int order = 0;
  bool exact = false;

  GaussRat beta;                  // poly_exp base (exact)
  std::vector<GaussRat> alphas;   // poly coefficients / weights (exact)
  std::vector<GaussRat> betas;    // pure_exp bases (exact)

  std::complex<double> beta_n;
  std::vector<std::complex<double>> alphas_n, betas_n;

  std::complex<double> eval(long i) const {
    if (kind == Kind::zero) return 0;
    if (kind == Kind::poly_exp) {
      std::complex<double> p = 0, x = 1;
      for (auto& a : alphas_n) {
        p += a * x;
        x *= static_cast<double>(i);
      }
      return std::pow(beta_n, static_cast<double>(i)) * p;
    }
    std::complex<double> s = 0;
    for (size_t j = 0; j < betas_n.size(); ++j)
      s += alphas_n[j] * std::pow(betas_n[j], static_cast<double>(i));
    return s;
  }

  GaussRat eval_exact(long i) const {
    if (kind == Kind::zero) return GaussRat(0);
    if (kind == Kind::poly_exp) {
      GaussRat p(0), x(1);
      for (auto& a : alphas) {
        p += a * x;
        x *= GaussRat(Rational(i));
      }
      return beta.pow(i) * p;
    }
    GaussRat s(0);
    for (size_t j = 0; j < betas.size(); ++j) s += alphas[j] * betas[j].pow(i);
    return s;
  }
};

namespace detail {

/// Durand-Kerner roots of a monic polynomial given by coeffs c0..c_{n-1}
/// (x^n + c_{n-1} x^{n-1} + ... + c0).
inline std::vector<std::complex<double>> roots_monic(
    const std::vector<std::complex<double>>& c) {
  size_t n = c.size();
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v = 1;
    for (size_t j = n; j-- > 0;) v = v * x + c[j];
    return v;
  };
  std::vector<std::complex<double>> r(n);
  for (size_t j = 0; j < n; ++j) r[j] = std::polar(1.3, 0.7 + 1.9 * j);
  for (int iter = 0; iter < 300; ++iter) {
    double moved = 0;
    for (size_t j = 0; j < n; ++j) {
      std::complex<double> den = 1;
      for (size_t m = 0; m < n; ++m)
        if (m != j) den *= r[j] - r[m];
      auto step = eval(r[j]) / den;
      r[j] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14) break;
  }
  return r;
}

/// Best rational p/q with q <= qmax approximating x (continued fractions).
inline bool snap_rational(double x, long qmax, Rational& out) {
  if (!std::isfinite(x)) return false;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(v);
    if (fl > 1e15 || fl < -1e15) break;
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > qmax) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = v - fl;
    if (frac < 1e-12) break;
    v = 1.0 / frac;
  }
  if (q1 == 0) return false;
  out = Rational(p1, q1);
  return std::abs(to_double(out) - x) < 1e-7;
}

inline bool snap_gauss(std::complex<double> z, GaussRat& out, long qmax = 1024) {
  Rational re, im;
  if (!snap_rational(z.real(), qmax, re) || !snap_rational(z.imag(), qmax, im))
    return false;
  out = GaussRat(re, im);
  return true;
}

}  // namespace detail

/// Order-kk leading Hankel minor [f(i0+p+q)]_{p,q<kk}.
template <class C>
std::vector<std::vector<C>> leading_minor(const std::vector<C>& v, int kk) {
  std::vector<std::vector<C>> m(kk);
  for (int p = 0; p < kk; ++p)
    for (int q = 0; q < kk; ++q) m[p].push_back(v[p + q]);
  return m;
}

std::optional<SeqModel> classify(const SeqSamples& s, double tol = 1e-9);

namespace detail {

inline std::optional<SeqModel> classify_numeric(const SeqSamples& s, double tol) {
  const auto& v = s.values;
  double scale = 0;
  for (auto& z : v) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) {
    SeqModel m;
    m.kind = SeqModel::Kind::zero;
    return m;
  }
  auto verify = [&](const SeqModel& m) {
    for (size_t j = 0; j < v.size(); ++j) {
      long i = s.i0 + static_cast<long>(j);
      if (std::abs(m.eval(i) - v[j]) > tol * std::max(1.0, scale)) return false;
    }
    return true;
  };
  for (int kk = s.order; kk >= 1; --kk) {
    if (static_cast<size_t>(2 * kk) > v.size()) continue;
    auto minor = leading_minor(std::vector<std::complex<double>>(v.begin(), v.end()), kk);
    double dscale = 0;
    for (auto& row : minor)
      for (auto& e : row) dscale = std::max(dscale, std::abs(e));
    if (std::abs(det(minor)) <= 1e-9 * std::pow(std::max(1.0, dscale), kk))
      continue;  // order deficient, fall through as the appendix prescribes
    // monic recurrence x^kk + c_{kk-1} x^{kk-1} + ... + c0 from the 2kk samples
    std::vector<std::complex<double>> rhs(kk), c;
    for (int p = 0; p < kk; ++p) rhs[p] = -v[p + kk];
    if (!solve(minor, rhs, c, 1e-12)) continue;
    // repeated-root candidate: p(x) = (x - beta)^kk
    std::complex<double> beta = -c[kk - 1] / static_cast<double>(kk);
    bool repeated = std::abs(beta) > 0;
    for (int j = 0; j < kk && repeated; ++j) {
      // binomial coefficient of x^j in (x-beta)^kk
      double bin = 1;
      for (int t = 0; t < kk - j; ++t) bin = bin * (kk - t) / (t + 1);
      auto want = bin * std::pow(-beta, static_cast<double>(kk - j));
      if (std::abs(want - c[j]) > tol * std::max(1.0, std::abs(want))) repeated = false;
    }
    if (repeated) {
      SeqModel m;
      m.kind = SeqModel::Kind::poly_exp;
      m.order = kk;
      m.beta_n = beta;
      std::vector<std::vector<std::complex<double>>> vand(kk);
      std::vector<std::complex<double>> g(kk);
      for (int p = 0; p < kk; ++p) {
        long i = s.i0 + p;
        g[p] = v[p] / std::pow(beta, static_cast<double>(i));
        std::complex<double> x = 1;
        for (int q = 0; q < kk; ++q) {
          vand[p].push_back(x);
          x *= static_cast<double>(i);
        }
      }
      if (solve(vand, g, m.alphas_n, 1e-12) && verify(m)) return m;
      return std::nullopt;
    }
    auto roots = roots_monic(c);
    bool ok = true;
    for (size_t a = 0; a < roots.size() && ok; ++a) {
      if (std::abs(roots[a]) < tol) ok = false;  // zero base: outside both types
      for (size_t b = a + 1; b < roots.size() && ok; ++b)
        if (std::abs(roots[a] - roots[b]) < 1e-7 * std::max(1.0, std::abs(roots[a])))
          ok = false;  // mixed multiplicities: outside both types
    }
    if (!ok) return std::nullopt;
    SeqModel m;
    m.kind = SeqModel::Kind::pure_exp;
    m.order = kk;
    m.betas_n = roots;
    std::vector<std::vector<std::complex<double>>> vand(kk);
    std::vector<std::complex<double>> rhsv(kk);
    for (int p = 0; p < kk; ++p) {
      long i = s.i0 + p;
      rhsv[p] = v[p];
      for (int q = 0; q < kk; ++q)
        vand[p].push_back(std::pow(roots[q], static_cast<double>(i)));
    }
    if (solve(vand, rhsv, m.alphas_n, 1e-12) && verify(m)) return m;
    return std::nullopt;
  }
  return std::nullopt;
}

inline std::optional<SeqModel> classify_exact(const SeqSamples& s) {
  const auto& v = s.exact_values;
  bool allzero = true;
  for (auto& g : v)
    if (!g.is_zero()) allzero = false;
  if (allzero) {
    SeqModel m;
    m.kind = SeqModel::Kind::zero;
    m.exact = true;
    return m;
  }
  auto verify = [&](const SeqModel& m) {
    for (size_t j = 0; j < v.size(); ++j)
      if (!(m.eval_exact(s.i0 + static_cast<long>(j)) == v[j])) return false;
    return true;
  };
  for (int kk = s.order; kk >= 1; --kk) {
    if (static_cast<size_t>(2 * kk) > v.size()) continue;
    auto minor = leading_minor(v, kk);
    if (det(minor).is_zero()) continue;
    std::vector<GaussRat> rhs(kk), c;
    for (int p = 0; p < kk; ++p) rhs[p] = -v[p + kk];
    if (!solve(minor, rhs, c)) continue;
    // (x - beta)^kk candidate
    GaussRat beta = -c[kk - 1] / GaussRat(Rational(kk));
    bool repeated = !beta.is_zero();
    for (int j = 0; j < kk && repeated; ++j) {
      Rational bin = 1;
      for (int t = 0; t < kk - j; ++t) bin = bin * (kk - t) / (t + 1);
      if (!((-beta).pow(kk - j) * GaussRat(bin) == c[j])) repeated = false;
    }
    if (repeated) {
      SeqModel m;
      m.kind = SeqModel::Kind::poly_exp;
      m.order = kk;
      m.exact = true;
      m.beta = beta;
      m.beta_n = beta.to_complex();
      std::vector<std::vector<GaussRat>> vand(kk);
      std::vector<GaussRat> g(kk);
      for (int p = 0; p < kk; ++p) {
        long i = s.i0 + p;
        g[p] = v[p] / beta.pow(i);
        GaussRat x(1);
        for (int q = 0; q < kk; ++q) {
          vand[p].push_back(x);
          x *= GaussRat(Rational(i));
        }
      }
      if (!solve(vand, g, m.alphas)) return std::nullopt;
      for (auto& a : m.alphas) m.alphas_n.push_back(a.to_complex());
      if (verify(m)) return m;
      return std::nullopt;
    }
    // distinct-base branch: exact roots for degree 1, 2; snapped and
    // certified roots beyond
    std::vector<GaussRat> roots;
    bool exact_roots = true;
    if (kk == 1) {
      roots.push_back(-c[0]);
    } else if (kk == 2) {
      GaussRat half(Rational(1, 2));
      GaussRat disc = c[1] * c[1] - GaussRat(Rational(4)) * c[0], sq;
      if (gauss_sqrt(disc, sq)) {
        roots.push_back((-c[1] + sq) * half);
        roots.push_back((-c[1] - sq) * half);
      } else {
        exact_roots = false;
      }
    } else {
      std::vector<std::complex<double>> cn;
      for (auto& g : c) cn.push_back(g.to_complex());
      for (auto z : roots_monic(cn)) {
        GaussRat snapped;
        if (!detail::snap_gauss(z, snapped)) {
          exact_roots = false;
          break;
        }
        // certify: snapped root must solve the exact recurrence polynomial
        GaussRat val(0), x(1);
        for (auto& cc : c) {
          val += cc * x;
          x *= snapped;
        }
        val += x;  // monic leading term
        if (!val.is_zero()) {
          exact_roots = false;
          break;
        }
        roots.push_back(snapped);
      }
    }
    if (!exact_roots) {
      auto num = classify_numeric(s, 1e-9);
      if (num) num->exact = false;
      return num;
    }
    for (size_t a = 0; a < roots.size(); ++a) {
      if (roots[a].is_zero()) return std::nullopt;
      for (size_t b = a + 1; b < roots.size(); ++b)
        if (roots[a] == roots[b]) return std::nullopt;
    }
    SeqModel m;
    m.kind = SeqModel::Kind::pure_exp;
    m.order = kk;
    m.exact = true;
    m.betas = roots;
    std::vector<std::vector<GaussRat>> vand(kk);
    std::vector<GaussRat> rhsv(kk);
    for (int p = 0; p < kk; ++p) {
      long i = s.i0 + p;
      rhsv[p] = v[p];
      for (int q = 0; q < kk; ++q) vand[p].push_back(roots[q].pow(i));
    }
    if (!solve(vand, rhsv, m.alphas)) return std::nullopt;
    for (auto& a : m.alphas) m.alphas_n.push_back(a.to_complex());
    for (auto& b : m.betas) m.betas_n.push_back(b.to_complex());
    if (verify(m)) return m;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

inline std::optional<SeqModel> classify(const SeqSamples& s, double tol) {
  return s.exact ? detail::classify_exact(s) : detail::classify_numeric(s, tol);
}

// ---------------------------------------------------------------------------
// The h-function and the nonvanishing scans.
// ---------------------------------------------------------------------------

inline std::complex<double> h_function(const Foliation& f, long i) {
  auto w = [&](long k) -> std::complex<double> {
    if (k == 0) return 0;
    double lam = mixed_lambda(f, k, 0);
    return std::sqrt(lam) * mixed_gamma(f, k, 0, +1);
  };
  return w(i) - w(i - 1);
}

struct ScanReport {
  double min_raw = 0;        // smallest |det|
  double min_normalized = 0; // smallest |det|^(1/n), n the matrix dimension
  std::vector<long> witness;
  long long evaluated = 0;
};

/// Minimum Hankel determinant of h over consecutive and random row tuples,
/// evaluated at 100-digit precision. The normalized modulus |det|^{1/n} is
/// the per-row scale of the determinant; raw values decay rapidly with the
/// matrix dimension even though the determinants never vanish.
inline ScanReport lemma3_scan(const Foliation& f, int kmax, long range,
                              int random_tuples = 2000, unsigned seed = 1) {
  if (kmax < 1 || kmax > 5 || range < 1)
    throw std::invalid_argument("lemma3_scan: order must be 1..5 over a finite range");
  ScanReport rep;
  rep.min_raw = rep.min_normalized = 1e300;
  std::vector<BigCplx> cache;  // h(i) for i in [-range - kmax, range + 2 kmax]
  long lo = -range - kmax - 1, hi = range + 2 * kmax + 1;
  for (long i = lo; i <= hi; ++i) cache.push_back(h_big(f, i));
  auto h = [&](long i) { return cache[i - lo]; };

  auto consider = [&](const std::vector<long>& rows, int k) {
    std::vector<std::vector<BigCplx>> m(rows.size());
    for (size_t p = 0; p < rows.size(); ++p)
      for (int q = 0; q <= k; ++q) m[p].push_back(h(rows[p] + q));
    double raw = det_big(std::move(m)).abs().convert_to<double>();
    double norm = std::pow(raw, 1.0 / (k + 1));
    ++rep.evaluated;
    if (norm < rep.min_normalized) {
      rep.min_normalized = norm;
      rep.min_raw = raw;
      rep.witness = rows;
    }
  };

  for (int k = 1; k <= kmax; ++k)
    for (long i0 = -range; i0 <= range; ++i0) {
      std::vector<long> rows(k + 1);
      for (int p = 0; p <= k; ++p) rows[p] = i0 + p;
      consider(rows, k);
    }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(-range, range);
  std::uniform_int_distribution<int> pk(1, kmax);
  for (int t = 0; t < random_tuples; ++t) {
    int k = pk(rng);
    std::set<long> rows;
    while (static_cast<int>(rows.size()) < k + 1) rows.insert(pick(rng));
    consider(std::vector<long>(rows.begin(), rows.end()), k);
  }
  return rep;
}

/// sum_j (-1)^j C(r, j) j^s, which must vanish for all s < r.
inline Int binomial_alternating_sum(int r, int s) {
  Int acc = 0, binom = 1;
  for (int j = 0; j <= r; ++j) {
    Int jp = 1;
    for (int t = 0; t < s; ++t) jp *= j;  // 0^0 = 1
    acc += ((j % 2) ? -binom : binom) * jp;
    binom = binom * (r - j) / (j + 1);
  }
  return acc;
}

}  // namespace hankel
}  // namespace kron
