#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "kronspec/rep.hpp"

namespace kron {

// ---------------------------------------------------------------------------
// Closed-form eigendata.
//
// First-order operator: lambda_{kl}^{+-} = +-sqrt((ak+bl)^2 + (al-bk)^2),
// which collapses to +-sqrt(k^2 + l^2) since the chart rotation is
// orthogonal. Mixed operator: lambda_{kl+-} = +-sqrt((ak+bl)^4 + (bk-al)^2)
// with gamma_{kl+-} = (-(ak+bl)^2 + i(al-bk)) / lambda_{kl+-}.
// ---------------------------------------------------------------------------

struct SpectralPair {
  long k = 0, l = 0;
  int family = 1;   // 1 or 2
  int branch = +1;  // +1 / -1
  double eigenvalue = 0;
  Section<NumScalar> vec;
};

inline double linear_lambda(const Foliation& f, long k, long l) {
  double ax = f.a * k + f.b * l, ay = f.a * l - f.b * k;
  return std::sqrt(ax * ax + ay * ay);
}

/// Exact check payload: (ak+bl)^2 + (al-bk)^2 as a rational.
inline Rational linear_lambda_sq(const Foliation& f, long k, long l) {
  Rational ax = f.ar * k + f.br * l, ay = f.ar * l - f.br * k;
  return ax * ax + ay * ay;
}

inline Section<NumScalar> section4(std::array<std::complex<double>, 4> comps, long k, long l) {
  Section<NumScalar> s;
  for (int c = 0; c < 4; ++c)
    if (comps[c] != std::complex<double>(0, 0)) s.add(Mode{c, k, l}, NumScalar(comps[c]));
  return s;
}

/// The four eigenvectors of the first-order operator at (k,l), orthonormal;
/// at the origin the four frame modes with eigenvalue 0.
inline std::array<SpectralPair, 4> linear_eigs(const Foliation& f, long k, long l) {
  std::array<SpectralPair, 4> out;
  const std::complex<double> i(0, 1);
  if (k == 0 && l == 0) {
    for (int c = 0; c < 4; ++c)
      out[c] = {0, 0, c < 2 ? 1 : 2, (c % 2 == 0) ? +1 : -1, 0.0,
                Section<NumScalar>::basis(Mode{c, 0, 0})};
    return out;
  }
  double al = f.a * k + f.b * l;       // x-symbol / i
  double be = f.a * l - f.b * k;       // transverse symbol / i
  double lam = std::hypot(al, be);
  double r = 1.0 / std::sqrt(2.0);
  out[0] = {k, l, 1, +1, lam,
            section4({-i * (be / lam) * r, 0, r, i * (al / lam) * r}, k, l)};
  out[1] = {k, l, 2, +1, lam,
            section4({-i * (al / lam) * r, r, 0, -i * (be / lam) * r}, k, l)};
  out[2] = {k, l, 1, -1, -lam,
            section4({r, -i * (al / lam) * r, -i * (be / lam) * r, 0}, k, l)};
  out[3] = {k, l, 2, -1, -lam,
            section4({0, -i * (be / lam) * r, i * (al / lam) * r, r}, k, l)};
  return out;
}

inline double mixed_lambda(const Foliation& f, long k, long l) {
  double u = f.a * k + f.b * l, w = f.b * k - f.a * l;
  return std::sqrt(u * u * u * u + w * w);
}

/// gamma_{kl,branch}; |gamma| = 1 away from the origin.
inline std::complex<double> mixed_gamma(const Foliation& f, long k, long l, int branch) {
  double u = f.a * k + f.b * l;
  double lam = mixed_lambda(f, k, l) * branch;
  return std::complex<double>(-u * u, f.a * l - f.b * k) / lam;
}

/// Eigenvectors e^{(1)} on components {1, nu}, e^{(2)} on {tau x nu, tau}.
inline SpectralPair mixed_eig(const Foliation& f, long k, long l, int family, int branch) {
  SpectralPair p;
  p.k = k;
  p.l = l;
  p.family = family;
  p.branch = branch;
  if (k == 0 && l == 0) {
    p.eigenvalue = 0;
    int comp = family == 1 ? (branch > 0 ? 0 : 2) : (branch > 0 ? 3 : 1);
    p.vec = Section<NumScalar>::basis(Mode{comp, 0, 0});
    return p;
  }
  auto g = mixed_gamma(f, k, l, branch);
  p.eigenvalue = branch * mixed_lambda(f, k, l);
  if (family == 1)
    p.vec = section4({0.5 * (g + 1.0), 0, 0.5 * (g - 1.0), 0}, k, l);
  else
    p.vec = section4({0, 0.5 * (g - 1.0), 0, 0.5 * (g + 1.0)}, k, l);
  return p;
}

inline std::array<SpectralPair, 4> mixed_eigs(const Foliation& f, long k, long l) {
  return {mixed_eig(f, k, l, 1, +1), mixed_eig(f, k, l, 1, -1),
          mixed_eig(f, k, l, 2, +1), mixed_eig(f, k, l, 2, -1)};
}

/// eta^{(1,2)}_{kl+-} = (e_{kl+} +- e_{kl-}) / 2.
inline Section<NumScalar> eta_vec(const Foliation& f, long k, long l, int family, int branch) {
  auto p = mixed_eig(f, k, l, family, +1).vec;
  auto m = mixed_eig(f, k, l, family, -1).vec;
  if (branch < 0) m.scale(NumScalar(std::complex<double>(-1, 0)));
  p += m;
  p.scale(NumScalar(std::complex<double>(0.5, 0)));
  return p;
}

/// D is diagonal on the e^{(1,2)}_{kl+-} with eigenvalues +-sqrt(lambda_{kl}).
inline SpectralPair dirac_pair(const Foliation& f, long k, long l, int family, int branch) {
  SpectralPair p = mixed_eig(f, k, l, family, branch);
  p.eigenvalue = branch * std::sqrt(mixed_lambda(f, k, l));
  return p;
}

/// Fibrewise D = sqrt(lambda) (P_+ - P_-), built from the closed-form
/// eigenvectors; no numerical diagonalization anywhere.
inline BlockOp<NumScalar, 4> dirac_block(const Foliation& f) {
  return BlockOp<NumScalar, 4>::single(0, 0, [f](long k, long l) {
    auto m = mat_zero<NumScalar, 4>();
    if (k == 0 && l == 0) return m;
    double rt = std::sqrt(mixed_lambda(f, k, l));
    for (int family : {1, 2})
      for (int branch : {+1, -1}) {
        auto v = mixed_eig(f, k, l, family, branch).vec;
        std::array<std::complex<double>, 4> comp{};
        for (auto& [mode, s] : v.c) comp[mode.comp] = s.eval(NumEnv{});
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) {
            auto e = branch * rt * comp[r] * std::conj(comp[c]);
            if (e != std::complex<double>(0, 0)) m[r][c] += NumScalar(e);
          }
      }
    return m;
  });
}

/// |D| = sqrt(lambda_{kl}) on the whole fibre.
inline BlockOp<NumScalar, 4> abs_dirac_block(const Foliation& f) {
  return BlockOp<NumScalar, 4>::single(0, 0, [f](long k, long l) {
    auto m = mat_zero<NumScalar, 4>();
    double rt = std::sqrt(mixed_lambda(f, k, l));
    for (int c = 0; c < 4; ++c) m[c][c] = NumScalar(std::complex<double>(rt, 0));
    return m;
  });
}

// ---------------------------------------------------------------------------
// Weyl counts N(R) = #{ eigenvalues of |op| <= R } by lattice enumeration
// over the closed-form spectra, and the log-log dimension fit.
// ---------------------------------------------------------------------------

enum class SpectrumKind { linear, mixed, dirac, torus };

struct WeylCount {
  std::vector<double> radii;
  std::vector<long long> counts;
  double exponent = 0;
  double residual = 0;
  double constant = 0;  // fitted prefactor exp(intercept)
};

namespace detail {

inline long long isqrt_ll(long long v) {
  if (v < 0) return -1;
  auto r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// #{(k,l) in Z^2 : k^2 + l^2 <= m}.
inline long long circle_count(long long m) {
  if (m < 0) return 0;
  long long kmax = isqrt_ll(m), n = 0;
  for (long long k = -kmax; k <= kmax; ++k) n += 2 * isqrt_ll(m - k * k) + 1;
  return n;
}

}  // namespace detail

/// Eigenvalue count of the first-order operator: 4 per lattice point with
/// sqrt(k^2+l^2) <= R  (multiplicity 2 per sign branch).
inline long long count_linear(const Foliation&, double R) {
  double m = std::floor(R * R + 1e-9);
  return 4 * detail::circle_count(static_cast<long long>(m));
}

/// Count for |D|: four eigenvalues sqrt(lambda_{kl}) per lattice point, so
/// the condition is (ak+bl)^4 + (bk-al)^2 <= R^4.
inline long long count_dirac(const Foliation& f, double R) {
  long long n = 0;
  double R4 = R * R * R * R;
  long kmax = static_cast<long>(std::ceil(f.a * R + std::abs(f.b) * R * R)) + 2;
  bool exact = f.exact_pair && R == std::floor(R);
  // Integer form (p k + q l)^4 + r^2 (q k - p l)^2 <= (r R)^4 when a = p/r.
  __int128 p = 0, q = 0, r = 1, bound = 0;
  if (exact) {
    Int den = lcm(denominator(f.ar), denominator(f.br));
    p = (numerator(f.ar) * (den / denominator(f.ar))).convert_to<long long>();
    q = (numerator(f.br) * (den / denominator(f.br))).convert_to<long long>();
    r = den.convert_to<long long>();
    if (static_cast<double>(static_cast<long long>(r)) * R < 2e9) {
      __int128 rR = r * static_cast<long long>(R);
      bound = rR * rR * rR * rR;
    } else {
      exact = false;
    }
  }
  for (long k = -kmax; k <= kmax; ++k) {
    // l must satisfy both |ak + bl| <= R and |bk - al| <= R^2 (a > 0); the
    // first interval degenerates when b = 0.
    double lo2 = (f.b * k - R * R) / f.a - 1, hi2 = (f.b * k + R * R) / f.a + 1;
    double lo1 = lo2, hi1 = hi2;
    if (f.b != 0.0) {
      double e1 = (-R - f.a * k) / f.b, e2 = (R - f.a * k) / f.b;
      lo1 = std::min(e1, e2) - 1;
      hi1 = std::max(e1, e2) + 1;
    } else if (std::abs(f.a * k) > R) {
      continue;
    }
    long lo = static_cast<long>(std::floor(std::max(lo1, lo2)));
    long hi = static_cast<long>(std::ceil(std::min(hi1, hi2)));
    for (long l = lo; l <= hi; ++l) {
      if (exact) {
        __int128 u = p * k + q * l, w = q * k - p * l;
        if (u * u * u * u + r * r * w * w <= bound) ++n;
      } else {
        double u = f.a * k + f.b * l, w = f.b * k - f.a * l;
        if (u * u * u * u + w * w <= R4 * (1 + 1e-12)) ++n;
      }
    }
  }
  return 4 * n;
}

/// Torus triple: |D| eigenvalues sqrt(2 pi (k^2 + l^2)), two signs each.
inline long long count_torus(double R) {
  double t = R * R / (2.0 * std::numbers::pi);
  return 2 * detail::circle_count(static_cast<long long>(std::floor(t * (1 + 1e-12))));
}

inline long long spectrum_count(const Foliation& f, SpectrumKind kind, double R) {
  switch (kind) {
    case SpectrumKind::linear:
      return count_linear(f, R);
    case SpectrumKind::dirac:
      return count_dirac(f, R);
    case SpectrumKind::torus:
      return count_torus(R);
    case SpectrumKind::mixed:
      break;  // the mixed operator is not a counting target
  }
  throw std::invalid_argument("spectrum_count: unsupported operator");
}

/// Least-squares fit of log N against log R over a geometric radius grid;
/// radii below 10 (in units of the operator's gap scale) are discarded to
/// suppress lattice-boundary noise.
inline WeylCount weyl_count(const Foliation& f, SpectrumKind kind, double r_max,
                            int grid_points = 14) {
  if (r_max < 5) throw std::invalid_argument("weyl_count: r_max must be >= 5");
  double scale = kind == SpectrumKind::torus ? std::sqrt(2.0 * std::numbers::pi) : 1.0;
  double r0 = 10.0 * scale;
  if (r_max < 2 * r0) r0 = std::max(scale * 5.0, r_max / 4);
  WeylCount wc;
  int n = std::max(grid_points, 4);
  for (int j = 0; j < n; ++j) {
    double R = r0 * std::pow(r_max / r0, static_cast<double>(j) / (n - 1));
    if (kind != SpectrumKind::torus) R = std::round(R);
    if (!wc.radii.empty() && R <= wc.radii.back()) continue;
    wc.radii.push_back(R);
    wc.counts.push_back(spectrum_count(f, kind, R));
  }
  // linear least squares on (log R, log N)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t m = wc.radii.size();
  for (size_t j = 0; j < m; ++j) {
    double x = std::log(wc.radii[j]), y = std::log(static_cast<double>(wc.counts[j]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double det = m * sxx - sx * sx;
  wc.exponent = (m * sxy - sx * sy) / det;
  double icept = (sy - wc.exponent * sx) / m;
  wc.constant = std::exp(icept);
  double ss = 0;
  for (size_t j = 0; j < m; ++j) {
    double pred = icept + wc.exponent * std::log(wc.radii[j]);
    double e = std::log(static_cast<double>(wc.counts[j])) - pred;
    ss += e * e;
  }
  wc.residual = std::sqrt(ss / m);
  return wc;
}

}  // namespace kron
