#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "kronspec/phase.hpp"

namespace kron {

enum class ArithMode { exact, numeric };

/// Parameters of the foliation: slope data a, b with a > 0, a^2 + b^2 = 1.
struct Foliation {
  ArithMode mode = ArithMode::exact;
  bool generic = true;  // treat b/a as irrational in formal-phase identities
  bool exact_pair = false;
  Rational ar, br;  // valid when exact_pair
  double a = 0, b = 0;
  TimeTablePtr times = std::make_shared<TimeTable>();

  /// a = p/r, b = q/r for a Pythagorean triple p^2 + q^2 = r^2.
  static Foliation pythagorean(long p, long q, ArithMode mode = ArithMode::exact,
                               bool generic = true) {
    Rational rr;
    if (!rational_sqrt(Rational(p) * p + Rational(q) * q, rr))
      throw std::invalid_argument("pythagorean: p^2 + q^2 is not a perfect square");
    Foliation f;
    f.mode = mode;
    f.generic = generic;
    f.exact_pair = true;
    f.ar = Rational(p) / rr;
    f.br = Rational(q) / rr;
    f.a = to_double(f.ar);
    f.b = to_double(f.br);
    f.validate();
    return f;
  }

  static Foliation numeric(double a, double b, bool generic = true) {
    Foliation f;
    f.mode = ArithMode::numeric;
    f.generic = generic;
    f.a = a;
    f.b = b;
    f.validate();
    return f;
  }

  void validate() const {
    if (exact_pair) {
      if (ar * ar + br * br != 1) throw std::invalid_argument("foliation: a^2 + b^2 != 1");
      if (ar <= 0) throw std::invalid_argument("foliation: a must be positive");
    } else {
      if (std::abs(a * a + b * b - 1.0) > 1e-12)
        throw std::invalid_argument("foliation: a^2 + b^2 != 1 within 1e-12");
      if (a <= 0) throw std::invalid_argument("foliation: a must be positive");
    }
  }

  int register_time(std::string label, double value) {
    return times->register_symbol(std::move(label), value);
  }

  NumEnv env() const { return times->env(a, b); }
};

/// Time point as a rational combination of registered symbols.
using TimeVec = std::map<int, Rational>;

inline TimeVec time_scale(const TimeVec& t, const Rational& q) {
  TimeVec r;
  if (q == 0) return r;
  for (auto& [m, c] : t) r.emplace(m, c * q);
  return r;
}
inline TimeVec time_add(const TimeVec& x, const TimeVec& y) {
  TimeVec r = x;
  for (auto& [m, c] : y) {
    auto [it, fresh] = r.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) r.erase(it);
    }
  }
  return r;
}

/// e^{i (k a + l b) t} as a formal exponent.
inline PhaseExp mode_phase(const TimeVec& t, long k, long l) {
  PhaseExp e;
  for (auto& [m, c] : t) {
    e.add(TimeTable::atom_a(m), c * k);
    e.add(TimeTable::atom_b(m), c * l);
  }
  return e;
}

struct MonoKey {
  TimeVec t;
  long k = 0, l = 0;
  PhaseExp phase;

  friend bool operator==(const MonoKey& x, const MonoKey& y) {
    return x.k == y.k && x.l == y.l && x.t == y.t && x.phase == y.phase;
  }
  friend bool operator<(const MonoKey& x, const MonoKey& y) {
    if (x.t != y.t) return x.t < y.t;
    if (x.k != y.k) return x.k < y.k;
    if (x.l != y.l) return x.l < y.l;
    return x.phase < y.phase;
  }
};

// Element of O(T^2) x| R in normal form: a finite sum of terms
// coeff * e^{i phase} * v_t u1^k u2^l, ordered v first as in the monomial
// basis. Terms with the same monomial but distinct formal phases stay
// separate; under generic parameters this normal form is unique.
class Element {
 public:
  std::map<MonoKey, GaussRat> terms;
  TimeTablePtr times;

  Element() = default;
  explicit Element(TimeTablePtr tt) : times(std::move(tt)) {}

  static Element zero(TimeTablePtr tt) { return Element(std::move(tt)); }
  static Element unit(TimeTablePtr tt) {
    return monomial(std::move(tt), GaussRat(1), {}, 0, 0);
  }
  static Element u1(TimeTablePtr tt, long power = 1) {
    return monomial(std::move(tt), GaussRat(1), {}, power, 0);
  }
  static Element u2(TimeTablePtr tt, long power = 1) {
    return monomial(std::move(tt), GaussRat(1), {}, 0, power);
  }
  static Element vt(TimeTablePtr tt, int symbol, Rational mult = Rational(1)) {
    TimeVec t;
    if (mult != 0) t.emplace(symbol, std::move(mult));
    return monomial(std::move(tt), GaussRat(1), std::move(t), 0, 0);
  }
  static Element monomial(TimeTablePtr tt, GaussRat coeff, TimeVec t, long k, long l,
                          PhaseExp phase = {}) {
    Element e(std::move(tt));
    e.add_term(MonoKey{std::move(t), k, l, std::move(phase)}, std::move(coeff));
    return e;
  }

  bool is_zero() const { return terms.empty(); }
  size_t size() const { return terms.size(); }

  Element& add_term(const MonoKey& key, const GaussRat& c) {
    if (c.is_zero()) return *this;
    auto [it, fresh] = terms.emplace(key, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
    return *this;
  }

  Element& operator+=(const Element& o) {
    check_registry(o);
    for (auto& [k, c] : o.terms) add_term(k, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    check_registry(o);
    for (auto& [k, c] : o.terms) add_term(k, -c);
    return *this;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  Element operator-() const {
    Element r(times);
    for (auto& [k, c] : terms) r.terms.emplace(k, -c);
    return r;
  }
  Element scaled(const GaussRat& s) const {
    Element r(times);
    if (s.is_zero()) return r;
    for (auto& [k, c] : terms) r.terms.emplace(k, c * s);
    return r;
  }

  void check_registry(const Element& o) const {
    if (times && o.times && times != o.times)
      throw std::invalid_argument("algebra: mixing elements over different time registries");
  }

  // v_t u1^k u2^l * v_s u1^m u2^n
  //   = e^{-i(k a + l b) s} v_{t+s} u1^{k+m} u2^{l+n}.
  friend Element operator*(const Element& x, const Element& y) {
    x.check_registry(y);
    Element r(x.times ? x.times : y.times);
    for (auto& [kx, cx] : x.terms)
      for (auto& [ky, cy] : y.terms) {
        MonoKey key;
        key.t = time_add(kx.t, ky.t);
        key.k = kx.k + ky.k;
        key.l = kx.l + ky.l;
        key.phase = kx.phase + ky.phase + (-mode_phase(ky.t, kx.k, kx.l));
        r.add_term(key, cx * cy);
      }
    return r;
  }
  Element& operator*=(const Element& o) { return *this = *this * o; }

  /// *-involution; unitary generators, phases negate, monomial inverts.
  Element star() const {
    Element r(times);
    for (auto& [key, c] : terms) {
      MonoKey s;
      s.t = time_scale(key.t, Rational(-1));
      s.k = -key.k;
      s.l = -key.l;
      s.phase = (-key.phase) + (-mode_phase(key.t, key.k, key.l));
      r.add_term(s, c.conj());
    }
    return r;
  }

  Element pow(long e) const {
    Element acc = unit(times), b = *this;
    if (e < 0) {
      // Inverses only exist termwise; a single monomial c e^{i phi} m has
      // inverse conj(c)/|c|^2 e^{-i phi} m^{-1} = star()/|c|^2.
      if (terms.size() != 1)
        throw std::domain_error("pow: negative power of a non-monomial element");
      GaussRat n2(terms.begin()->second.norm2());
      b = star().scaled(GaussRat(1) / n2);
      e = -e;
    }
    while (e) {
      if (e & 1) acc *= b;
      b *= b;
      e >>= 1;
    }
    return acc;
  }
};

/// Exact termwise equality of normal forms; only faithful for generic b/a.
inline bool equals_exact(const Element& x, const Element& y, const Foliation& f) {
  if (!f.generic)
    throw std::domain_error(
        "equals: non-generic parameters; distinct formal phases may coincide "
        "numerically, use numeric mode");
  x.check_registry(y);
  return x.terms == y.terms;
}

/// Numeric equality: phases evaluated at the registered symbol values.
inline bool equals_numeric(const Element& x, const Element& y, const Foliation& f,
                           double tol = 1e-12) {
  x.check_registry(y);
  NumEnv env = f.env();
  // group by bare monomial (t, k, l), sum coeff * phase numerically
  std::map<std::tuple<TimeVec, long, long>, std::complex<double>> acc;
  auto fold = [&](const Element& e, double sign) {
    for (auto& [key, c] : e.terms) {
      PhaseKey pk{key.phase, 0};
      acc[{key.t, key.k, key.l}] += sign * c.to_complex() * env.eval(pk);
    }
  };
  fold(x, 1.0);
  fold(y, -1.0);
  for (auto& [m, z] : acc) {
    (void)m;
    if (std::abs(z) > tol) return false;
  }
  return true;
}

inline bool equals(const Element& x, const Element& y, const Foliation& f,
                   double tol = 1e-12) {
  return f.mode == ArithMode::exact ? equals_exact(x, y, f) : equals_numeric(x, y, f, tol);
}

}  // namespace kron
