#pragma once

#include "kronspec/calculus.hpp"
#include "kronspec/spectral.hpp"

namespace kron {
namespace torus {

// ---------------------------------------------------------------------------
// The irrational rotation algebra triple (u v = e^{-2 pi i theta} v u) on the
// doubled GNS lattice e^{+-}_{kl}, sharing the block-operator machinery. The
// single phase atom carries 2 pi theta; sqrt(2 pi) factors live in the
// radical slot, so every relation check is exact.
// ---------------------------------------------------------------------------

constexpr int kThetaAtom = 0;

struct TorusParams {
  double theta = 0;
  bool generic = true;  // theta irrational: formal phase equality is faithful

  NumEnv env() const {
    NumEnv e;
    e.atoms = {2.0 * std::numbers::pi * theta};
    return e;
  }
};

/// Element of the polynomial torus algebra in normal form
/// coeff * e^{2 pi i p theta} u^m v^n.
struct TorusElement {
  struct Key {
    long m = 0, n = 0;
    Rational p;  // phase multiple of 2 pi theta
    friend bool operator<(const Key& a, const Key& b) {
      if (a.m != b.m) return a.m < b.m;
      if (a.n != b.n) return a.n < b.n;
      return a.p < b.p;
    }
    friend bool operator==(const Key& a, const Key& b) {
      return a.m == b.m && a.n == b.n && a.p == b.p;
    }
  };
  std::map<Key, GaussRat> terms;

  static TorusElement monomial(GaussRat c, long m, long n, Rational p = Rational(0)) {
    TorusElement e;
    if (!c.is_zero()) e.terms.emplace(Key{m, n, std::move(p)}, std::move(c));
    return e;
  }
  static TorusElement unit() { return monomial(GaussRat(1), 0, 0); }
  static TorusElement u(long power = 1) { return monomial(GaussRat(1), power, 0); }
  static TorusElement v(long power = 1) { return monomial(GaussRat(1), 0, power); }

  bool is_zero() const { return terms.empty(); }

  TorusElement& add_term(const Key& k, const GaussRat& c) {
    if (c.is_zero()) return *this;
    auto [it, fresh] = terms.emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
    return *this;
  }
  TorusElement& operator+=(const TorusElement& o) {
    for (auto& [k, c] : o.terms) add_term(k, c);
    return *this;
  }
  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }

  // v^n u^m = e^{2 pi i n m theta} u^m v^n
  friend TorusElement operator*(const TorusElement& x, const TorusElement& y) {
    TorusElement r;
    for (auto& [kx, cx] : x.terms)
      for (auto& [ky, cy] : y.terms)
        r.add_term(Key{kx.m + ky.m, kx.n + ky.n,
                       kx.p + ky.p + Rational(kx.n) * ky.m},
                   cx * cy);
    return r;
  }

  TorusElement star() const {
    TorusElement r;
    for (auto& [k, c] : terms)
      r.add_term(Key{-k.m, -k.n, -k.p + Rational(k.n) * k.m}, c.conj());
    return r;
  }

  /// Tracial state: the coefficient of the identity monomial.
  ExactScalar trace() const {
    ExactScalar t;
    for (auto& [k, c] : terms)
      if (k.m == 0 && k.n == 0) {
        PhaseExp e;
        e.add(kThetaAtom, k.p);
        t += ExactScalar(c) * ExactScalar::phase(e);
      }
    return t;
  }
};

using Op2 = BlockOp<ExactScalar, 2>;

inline ExactScalar theta_phase(Rational mult) {
  PhaseExp e;
  e.add(kThetaAtom, std::move(mult));
  return ExactScalar::phase(e);
}

/// pi(x): u shifts k, v shifts l with phase e^{2 pi i k theta} read at the
/// source k, both copies alike.
inline Op2 represent(const TorusElement& x) {
  Op2 op;
  for (auto& [key, coeff] : x.terms) {
    long m = key.m, n = key.n;
    Rational p = key.p;
    GaussRat c = coeff;
    op.blocks.push_back({m, n, [m, n, p, c](long k, long l) {
                           (void)l;
                           auto mat = mat_zero<ExactScalar, 2>();
                           PhaseExp e;
                           e.add(kThetaAtom, Rational(k) * n + p);
                           auto s = ExactScalar(c) * ExactScalar::phase(e);
                           mat[0][0] = s;
                           mat[1][1] = s;
                           return mat;
                         }});
  }
  return op;
}

/// D e^{+-}_{kl} = sqrt(2 pi)(+-ik + l) e^{-+}_{kl}.
inline Op2 dirac() {
  return Op2::single(0, 0, [](long k, long l) {
    auto m = mat_zero<ExactScalar, 2>();
    m[1][0] = ExactScalar(GaussRat(Rational(l), Rational(k)), PhaseKey{{}, 1});
    m[0][1] = ExactScalar(GaussRat(Rational(l), Rational(-k)), PhaseKey{{}, 1});
    return m;
  });
}

inline Op2 commutator_with(const TorusElement& x) {
  auto d = dirac();
  auto px = represent(x);
  return d.compose(px) - px.compose(d);
}

/// The derivations delta_1, delta_2 (symbols 2 pi i k, 2 pi i l) and
/// del = (delta_1 - i delta_2)/sqrt(2 pi) assembled as a block operator in
/// the off-diagonal corners; must coincide with D.
inline Op2 dirac_from_derivations() {
  return Op2::single(0, 0, [](long k, long l) {
    // (2 pi i k + 2 pi l) / sqrt(2 pi) = sqrt(2 pi) (l + ik)
    auto m = mat_zero<ExactScalar, 2>();
    GaussRat d1(Rational(0), Rational(k)), d2(Rational(0), Rational(l));
    GaussRat del = d1 - GaussRat(Rational(0), Rational(1)) * d2;  // ik + l
    m[1][0] = ExactScalar(del, PhaseKey{{}, 1});
    m[0][1] = ExactScalar(del.conj(), PhaseKey{{}, 1});
    return m;
  });
}

// ---------------------------------------------------------------------------
// Relation suite. (dudv) is verified in the form derived from (UV) by the
// Leibniz rule, du dv = -e^{-2 pi i theta} dv du; the displayed exponent in
// the source derivation has the opposite sign and fails as an operator
// identity.
// ---------------------------------------------------------------------------

inline std::vector<RelationReport> relation_suite(long window = 5) {
  std::vector<RelationReport> out;
  auto check = [&](std::string id, const Op2& lhs, const Op2& rhs, long margin) {
    out.push_back(make_report(std::move(id),
                              equal_on_window(lhs - rhs, Op2::zero(), window, margin)));
  };
  auto U = TorusElement::u(), V = TorusElement::v();
  auto Us = U.star(), Vs = V.star();
  auto du = commutator_with(U), dv = commutator_with(V);
  auto dus = commutator_with(Us), dvs = commutator_with(Vs);
  auto pi = [](const TorusElement& x) { return represent(x); };
  Rational one(1);

  // (U), (V): generators commute with their own differentials
  for (auto& [name, gen, dg] :
       std::vector<std::tuple<std::string, TorusElement, Op2>>{
           {"u du = du u", U, du},
           {"u* du = du u*", Us, du},
           {"u du* = du* u", U, dus},
           {"u* du* = du* u*", Us, dus},
           {"v dv = dv v", V, dv},
           {"v* dv = dv v*", Vs, dv},
           {"v dv* = dv* v", V, dvs},
           {"v* dv* = dv* v*", Vs, dvs}})
    check(name, pi(gen).compose(dg), dg.compose(pi(gen)), 2);

  // (UV), (U*V), (V*U): cross relations with their phase twists
  check("v du = e^{2 pi i theta} du v", pi(V).compose(du),
        du.compose(pi(V)).scaled(theta_phase(one)), 2);
  check("u dv = e^{-2 pi i theta} dv u", pi(U).compose(dv),
        dv.compose(pi(U)).scaled(theta_phase(-one)), 2);
  check("v du* = e^{-2 pi i theta} du* v", pi(V).compose(dus),
        dus.compose(pi(V)).scaled(theta_phase(-one)), 2);
  check("u* dv = e^{2 pi i theta} dv u*", pi(Us).compose(dv),
        dv.compose(pi(Us)).scaled(theta_phase(one)), 2);
  check("v* du = e^{-2 pi i theta} du v*", pi(Vs).compose(du),
        du.compose(pi(Vs)).scaled(theta_phase(-one)), 2);
  check("u dv* = e^{2 pi i theta} dv* u", pi(U).compose(dvs),
        dvs.compose(pi(U)).scaled(theta_phase(one)), 2);

  // (dudv), derived exponent
  check("du dv = -e^{-2 pi i theta} dv du", du.compose(dv),
        dv.compose(du).scaled(-theta_phase(-one)), 2);

  // two-form quotient: pi(d b) for the bimodule relation elements.
  // b = u du - du u differentiates to 2 du du; du du = 2 pi u^2 lands in the
  // represented algebra, and the mixed relations differentiate to zero.
  check("du du = 2 pi u^2", du.compose(du),
        represent(TorusElement::u(2)).scaled(ExactScalar(GaussRat(1), PhaseKey{{}, 2})), 2);
  check("dv dv = 2 pi v^2", dv.compose(dv),
        represent(TorusElement::v(2)).scaled(ExactScalar(GaussRat(1), PhaseKey{{}, 2})), 2);
  check("pi(d(v du - e^{2 pi i theta} du v)) = 0",
        dv.compose(du) + du.compose(dv).scaled(theta_phase(one)), Op2::zero(), 2);
  check("pi(d(u dv - e^{-2 pi i theta} dv u)) = 0",
        du.compose(dv) + dv.compose(du).scaled(theta_phase(-one)), Op2::zero(), 2);
  return out;
}

/// e^{+-} -> e^{+-}_{k+1,l+1} with coefficient -+ 2 pi i e^{2 pi i k theta}:
/// the sign depends on the copy while every represented algebra element acts
/// identically on both copies, so pi(a) du dv meets pi(O_theta) only at 0.
inline RelationReport two_form_block_pattern(long window = 5) {
  auto du = commutator_with(TorusElement::u());
  auto dv = commutator_with(TorusElement::v());
  auto frozen = Op2::single(1, 1, [](long k, long l) {
    (void)l;
    auto m = mat_zero<ExactScalar, 2>();
    PhaseExp e;
    e.add(kThetaAtom, Rational(k));
    m[0][0] = ExactScalar(GaussRat(Rational(0), Rational(-1)), PhaseKey{e, 2});
    m[1][1] = ExactScalar(GaussRat(Rational(0), Rational(1)), PhaseKey{e, 2});
    return m;
  });
  return make_report("du dv block pattern: -+ 2 pi i e^{2 pi i k theta}, copy-dependent",
                     equal_on_window(du.compose(dv), frozen, window, 2));
}

/// Freeness probe from the proof of the first-order claim: the coefficients
/// of p u^n v^{m+1} du + q u^{n+1} v^m dv acting on the two copies e^{+-}_{k0}
/// give the system (+-ip e^{2 pi i (k+1)(m+1) theta}, q e^{2 pi i k(m+1) theta});
/// the copy-dependent sign of [D,U] makes its determinant a nonzero phase, so
/// p = q = 0. (Scanning two distinct k on one copy alone is singular: the
/// k-dependence of the two columns cancels.)
inline bool freeness_two_term_probe(long n, long m, long k) {
  auto a1 = TorusElement::u(n) * TorusElement::v(m + 1);
  auto a2 = TorusElement::u(n + 1) * TorusElement::v(m);
  auto op1 = represent(a1).compose(commutator_with(TorusElement::u()));
  auto op2 = represent(a2).compose(commutator_with(TorusElement::v()));
  long win = std::labs(k) + std::labs(n) + std::labs(m) + 6;
  Mode plus{0, k, 0}, minus{1, k, 0};
  Mode tgt_p{1, k + n + 1, m + 1}, tgt_m{0, k + n + 1, m + 1};
  auto c11 = op1.apply(Section<ExactScalar>::basis(plus), win).coeff(tgt_p);
  auto c21 = op2.apply(Section<ExactScalar>::basis(plus), win).coeff(tgt_p);
  auto c12 = op1.apply(Section<ExactScalar>::basis(minus), win).coeff(tgt_m);
  auto c22 = op2.apply(Section<ExactScalar>::basis(minus), win).coeff(tgt_m);
  ExactScalar det = c11 * c22 - c12 * c21;
  return !det.is_zero();
}

/// The one-copy two-k system really is singular; kept as a regression guard
/// for the probe above.
inline bool one_copy_two_k_system_singular(long n, long m, long k1, long k2) {
  auto a1 = TorusElement::u(n) * TorusElement::v(m + 1);
  auto a2 = TorusElement::u(n + 1) * TorusElement::v(m);
  auto op1 = represent(a1).compose(commutator_with(TorusElement::u()));
  auto op2 = represent(a2).compose(commutator_with(TorusElement::v()));
  long win = std::labs(k1) + std::labs(k2) + std::labs(n) + std::labs(m) + 6;
  Mode tgt1{1, k1 + n + 1, m + 1}, tgt2{1, k2 + n + 1, m + 1};
  auto c11 = op1.apply(Section<ExactScalar>::basis(Mode{0, k1, 0}), win).coeff(tgt1);
  auto c21 = op2.apply(Section<ExactScalar>::basis(Mode{0, k1, 0}), win).coeff(tgt1);
  auto c12 = op1.apply(Section<ExactScalar>::basis(Mode{0, k2, 0}), win).coeff(tgt2);
  auto c22 = op2.apply(Section<ExactScalar>::basis(Mode{0, k2, 0}), win).coeff(tgt2);
  return (c11 * c22 - c12 * c21).is_zero();
}

/// Degree >= 3 torus words die in the quotient: du du = dv dv = 0 there and
/// du dv swaps against -e^{-2 pi i theta} dv du.
inline bool higher_words_vanish(const std::vector<int>& word /* 1 = du, 2 = dv */) {
  // normalize a phased combination of strings; strings sort with the twist
  std::map<std::vector<int>, ExactScalar> state{{word, ExactScalar::one()}};
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<int>, ExactScalar> next;
    for (auto& [s, c] : state) {
      bool done = true;
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == s[i + 1]) {
          done = false;  // quotient kill
          break;
        }
        if (s[i] > s[i + 1]) {
          auto t = s;
          std::swap(t[i], t[i + 1]);
          auto [it, fresh] = next.emplace(t, -theta_phase(Rational(1)) * c);
          if (!fresh) it->second += -theta_phase(Rational(1)) * c;
          done = false;
          changed = true;
          break;
        }
      }
      if (done) {
        auto [it, fresh] = next.emplace(s, c);
        if (!fresh) it->second += c;
      }
    }
    state.clear();
    for (auto& [s, c] : next)
      if (!c.is_zero()) state.emplace(s, c);
  }
  return state.empty();
}

inline WeylCount dimension_fit(double r_max) {
  return weyl_count(Foliation::pythagorean(3, 4), SpectrumKind::torus, r_max);
}

}  // namespace torus
}  // namespace kron
