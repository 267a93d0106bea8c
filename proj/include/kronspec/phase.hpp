#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "kronspec/rational.hpp"

namespace kron {

// Formal phase exponent: e^{i phi} with phi = sum_m c_m * atom_m where the
// atoms are real numbers assumed Q-linearly independent (and independent of
// 2*pi). Atom ids are allocated by the owning registry.
struct PhaseExp {
  std::map<int, Rational> c;

  bool is_zero() const { return c.empty(); }

  PhaseExp& add(int atom, const Rational& q) {
    if (q == 0) return *this;
    auto [it, fresh] = c.emplace(atom, q);
    if (!fresh) {
      it->second += q;
      if (it->second == 0) c.erase(it);
    }
    return *this;
  }

  PhaseExp operator+(const PhaseExp& o) const {
    PhaseExp r = *this;
    for (auto& [a, q] : o.c) r.add(a, q);
    return r;
  }
  PhaseExp operator-() const {
    PhaseExp r;
    for (auto& [a, q] : c) r.c.emplace(a, -q);
    return r;
  }

  friend bool operator==(const PhaseExp& x, const PhaseExp& y) { return x.c == y.c; }
  friend bool operator<(const PhaseExp& x, const PhaseExp& y) { return x.c < y.c; }
};

// Term key of a phased scalar: formal phase times an integer power of
// sqrt(2*pi). The radical slot only shows up in the torus triple.
struct PhaseKey {
  PhaseExp exp;
  int rad = 0;

  friend bool operator==(const PhaseKey& x, const PhaseKey& y) {
    return x.rad == y.rad && x.exp == y.exp;
  }
  friend bool operator<(const PhaseKey& x, const PhaseKey& y) {
    if (x.rad != y.rad) return x.rad < y.rad;
    return x.exp < y.exp;
  }
};

/// Numeric values for the phase atoms, used when collapsing formal scalars.
struct NumEnv {
  std::vector<double> atoms;

  double atom(int id) const {
    return id >= 0 && id < static_cast<int>(atoms.size()) ? atoms[id] : 0.0;
  }
  std::complex<double> eval(const PhaseKey& k) const {
    double phi = 0.0;
    for (auto& [a, q] : k.exp.c) phi += to_double(q) * atom(a);
    double mag = std::pow(2.0 * std::numbers::pi, 0.5 * k.rad);
    return std::polar(mag, phi);
  }
};

template <class C>
struct coeff_ops;

template <>
struct coeff_ops<GaussRat> {
  static bool is_zero(const GaussRat& c) { return c.is_zero(); }
  static GaussRat conj(const GaussRat& c) { return c.conj(); }
  static std::complex<double> to_complex(const GaussRat& c) { return c.to_complex(); }
};

template <>
struct coeff_ops<std::complex<double>> {
  static bool is_zero(const std::complex<double>& c) {
    return c.real() == 0.0 && c.imag() == 0.0;
  }
  static std::complex<double> conj(const std::complex<double>& c) { return std::conj(c); }
  static std::complex<double> to_complex(const std::complex<double>& c) { return c; }
};

// Finite sum  sum_k  coeff_k * e^{i phi_k} * sqrt(2 pi)^{r_k}, the scalar field
// every operator identity is checked over. Coefficients are Gaussian rationals
// in exact mode and complex doubles in numeric mode; the phases stay formal in
// both, so phase bookkeeping is always exact.
template <class C>
class Phased {
 public:
  using coeff_type = C;
  std::map<PhaseKey, C> terms;

  Phased() = default;
  explicit Phased(C c) {
    if (!coeff_ops<C>::is_zero(c)) terms.emplace(PhaseKey{}, std::move(c));
  }
  Phased(C c, PhaseKey k) {
    if (!coeff_ops<C>::is_zero(c)) terms.emplace(std::move(k), std::move(c));
  }

  static Phased zero() { return Phased(); }
  static Phased one() { return Phased(C(1)); }
  static Phased phase(PhaseExp e, int rad = 0) { return Phased(C(1), PhaseKey{std::move(e), rad}); }

  bool is_zero() const { return terms.empty(); }
  bool is_single_phase() const { return terms.size() == 1; }

  Phased& add_term(const PhaseKey& k, const C& c) {
    if (coeff_ops<C>::is_zero(c)) return *this;
    auto [it, fresh] = terms.emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (coeff_ops<C>::is_zero(it->second)) terms.erase(it);
    }
    return *this;
  }

  Phased operator-() const {
    Phased r;
    for (auto& [k, c] : terms) r.terms.emplace(k, -c);
    return r;
  }
  Phased& operator+=(const Phased& o) {
    for (auto& [k, c] : o.terms) add_term(k, c);
    return *this;
  }
  Phased& operator-=(const Phased& o) {
    for (auto& [k, c] : o.terms) add_term(k, -c);
    return *this;
  }
  friend Phased operator+(Phased a, const Phased& b) { return a += b; }
  friend Phased operator-(Phased a, const Phased& b) { return a -= b; }

  friend Phased operator*(const Phased& a, const Phased& b) {
    Phased r;
    for (auto& [ka, ca] : a.terms)
      for (auto& [kb, cb] : b.terms)
        r.add_term(PhaseKey{ka.exp + kb.exp, ka.rad + kb.rad}, ca * cb);
    return r;
  }
  Phased& operator*=(const Phased& o) { return *this = *this * o; }

  Phased conj() const {
    Phased r;
    for (auto& [k, c] : terms)
      r.terms.emplace(PhaseKey{-k.exp, k.rad}, coeff_ops<C>::conj(c));
    return r;
  }

  friend bool operator==(const Phased& a, const Phased& b) { return a.terms == b.terms; }
  friend bool operator!=(const Phased& a, const Phased& b) { return !(a == b); }

  std::complex<double> eval(const NumEnv& env) const {
    std::complex<double> z = 0;
    for (auto& [k, c] : terms) z += coeff_ops<C>::to_complex(c) * env.eval(k);
    return z;
  }

  // Sum of term magnitudes: an exact-zero detector and a sound residual bound
  // independent of atom values.
  double abs_bound() const {
    double s = 0;
    for (auto& [k, c] : terms) {
      (void)k;
      s += std::abs(coeff_ops<C>::to_complex(c));
    }
    return s;
  }
};

using ExactScalar = Phased<GaussRat>;
using NumScalar = Phased<std::complex<double>>;

inline double residual(const ExactScalar& a, const ExactScalar& b) {
  return (a - b).abs_bound();
}
inline double residual(const NumScalar& a, const NumScalar& b) {
  return (a - b).abs_bound();
}

/// Registry of time symbols; atoms 2m / 2m+1 carry a*T_m and b*T_m.
class TimeTable {
 public:
  int register_symbol(std::string label, double value) {
    for (auto& l : labels_)
      if (l == label)
        throw std::invalid_argument("time symbol already registered: " + label);
    labels_.push_back(std::move(label));
    values_.push_back(value);
    return static_cast<int>(labels_.size()) - 1;
  }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int m) const { return labels_.at(m); }
  double value(int m) const { return values_.at(m); }

  static int atom_a(int m) { return 2 * m; }
  static int atom_b(int m) { return 2 * m + 1; }

  /// Atom values for a foliation with numeric parameters (a, b).
  NumEnv env(double a, double b) const {
    NumEnv e;
    e.atoms.resize(2 * values_.size());
    for (size_t m = 0; m < values_.size(); ++m) {
      e.atoms[2 * m] = a * values_[m];
      e.atoms[2 * m + 1] = b * values_[m];
    }
    return e;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

using TimeTablePtr = std::shared_ptr<TimeTable>;

}  // namespace kron
