#pragma once

#include <random>
#include <string>
#include <variant>

#include "kronspec/rep.hpp"

namespace kron {

struct RelationReport {
  std::string id;
  enum class Status { exact, within_tolerance, violated } status = Status::exact;
  double max_residual = 0;
  std::optional<Mode> witness;

  bool ok() const { return status != Status::violated; }
};

inline RelationReport make_report(std::string id, const CompareResult& cmp,
                                  double tol = 1e-10) {
  RelationReport r;
  r.id = std::move(id);
  r.max_residual = cmp.max_residual;
  r.witness = cmp.witness;
  r.status = cmp.exact ? RelationReport::Status::exact
             : cmp.max_residual <= tol ? RelationReport::Status::within_tolerance
                                       : RelationReport::Status::violated;
  return r;
}

// ---------------------------------------------------------------------------
// Universal forms. A form word is a product of algebra elements and
// differentials d(a); pi sends d(a) to the commutator with the chosen
// operator, so evaluation is a product of block operators.
// ---------------------------------------------------------------------------

struct Diff {
  Element a;
};
using FormItem = std::variant<Element, Diff>;
using FormWord = std::vector<FormItem>;

inline int form_degree(const FormWord& w) {
  int d = 0;
  for (auto& it : w)
    if (std::holds_alternative<Diff>(it)) ++d;
  return d;
}

template <class Traits>
typename FoliationRep<Traits>::Op pi_eval(const FoliationRep<Traits>& rep,
                                          const typename FoliationRep<Traits>::Op& op,
                                          const FormWord& w) {
  auto acc = FoliationRep<Traits>::Op::identity();
  for (auto& item : w) {
    if (std::holds_alternative<Element>(item))
      acc = acc.compose(rep.represent(std::get<Element>(item)));
    else
      acc = acc.compose(rep.commutator_with(op, std::get<Diff>(item).a));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// First-order relation suite for the linear signature operator. All
// identities are checked exactly over the phased-rational scalar field.
// ---------------------------------------------------------------------------

namespace detail {

inline int ensure_symbol(const Foliation& f) {
  if (f.times->size() == 0) f.times->register_symbol("t0", 0.7);
  return 0;
}

}  // namespace detail

/// The algebra-level defining relations.
inline std::vector<RelationReport> check_algebra_relations(const Foliation& f) {
  int t = detail::ensure_symbol(f);
  auto tt = f.times;
  auto u1 = Element::u1(tt), u2 = Element::u2(tt);
  auto vt = Element::vt(tt, t), vs = Element::vt(tt, t, Rational(1, 3));
  auto phase = [&](int atom) {
    PhaseExp e;
    e.add(atom, Rational(1));
    return Element::monomial(tt, GaussRat(1), {}, 0, 0, e);
  };
  std::vector<RelationReport> out;
  auto check = [&](std::string id, const Element& lhs, const Element& rhs) {
    RelationReport r;
    r.id = std::move(id);
    bool eq = f.generic ? equals_exact(lhs, rhs, f) : equals_numeric(lhs, rhs, f);
    r.status = eq ? RelationReport::Status::exact : RelationReport::Status::violated;
    if (!eq) r.max_residual = 1.0;
    out.push_back(std::move(r));
  };
  check("u1u2 = u2u1", u1 * u2, u2 * u1);
  check("vt u1 = e^{iat} u1 vt", vt * u1, phase(TimeTable::atom_a(t)) * (u1 * vt));
  check("vt u2 = e^{ibt} u2 vt", vt * u2, phase(TimeTable::atom_b(t)) * (u2 * vt));
  Element vsum = Element::monomial(tt, GaussRat(1), TimeVec{{t, Rational(4, 3)}}, 0, 0);
  check("vt vs = v_{t+s}", vt * vs, vsum);
  return out;
}

/// Commutator relations of the first-order operator with the generators,
/// including the squared-commutator identity [Q,U_j]^2 = U_j^2 (the sign is
/// +1 in the self-adjoint normalization used throughout).
inline std::vector<RelationReport> check_linear_relations(const ExactRep& rep,
                                                          long window = 6) {
  const Foliation& f = rep.params();
  int t = detail::ensure_symbol(f);
  auto tt = f.times;
  auto u1 = Element::u1(tt), u2 = Element::u2(tt);
  auto vt = Element::vt(tt, t);
  auto q = rep.assemble(OpKind::Qtilde);
  auto c1 = rep.commutator_with(q, u1), c2 = rep.commutator_with(q, u2);
  auto P = [&](int atom) {
    PhaseExp e;
    e.add(atom, Rational(1));
    return ExactScalar::phase(e);
  };

  std::vector<RelationReport> out;
  auto check = [&](std::string id, const ExactRep::Op& lhs, const ExactRep::Op& rhs,
                   long margin) {
    out.push_back(make_report(std::move(id), equal_on_window(lhs - rhs, ExactRep::Op::zero(),
                                                             window, margin)));
  };

  check("[Q,V_t] = 0", rep.commutator_with(q, vt), ExactRep::Op::zero(), 1);
  const Element* us[2] = {&u1, &u2};
  const ExactRep::Op* cs[2] = {&c1, &c2};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      check("U" + std::to_string(j + 1) + " [Q,U" + std::to_string(k + 1) +
                "] commute (ujk)",
            rep.represent(*us[j]).compose(*cs[k]), cs[k]->compose(rep.represent(*us[j])), 2);
  check("V_t [Q,U1] = e^{iat} [Q,U1] V_t (uvt)", rep.represent(vt).compose(c1),
        c1.compose(rep.represent(vt)).scaled(P(TimeTable::atom_a(t))), 2);
  check("V_t [Q,U2] = e^{ibt} [Q,U2] V_t (uvt)", rep.represent(vt).compose(c2),
        c2.compose(rep.represent(vt)).scaled(P(TimeTable::atom_b(t))), 2);
  check("[Q,U1][Q,U2] = -[Q,U2][Q,U1] (qu12)", c1.compose(c2), (c2.compose(c1)).scaled(
            ExactScalar(GaussRat(-1))), 2);
  for (int j = 0; j < 2; ++j)
    check("[Q,U" + std::to_string(j + 1) + "]^2 = U" + std::to_string(j + 1) + "^2",
          cs[j]->compose(*cs[j]), rep.represent(us[j]->pow(2)), 2);
  for (int j = 0; j < 2; ++j) {
    // unitarity reduction [Q,U*] = -U* [Q,U] U*
    auto ustar = rep.represent(us[j]->star());
    check("[Q,U" + std::to_string(j + 1) + "*] = -U* [Q,U] U*",
          rep.commutator_with(q, us[j]->star()),
          ustar.compose(*cs[j]).compose(ustar).scaled(ExactScalar(GaussRat(-1))), 2);
  }
  return out;
}

/// Bimodule relations of the first-order calculus: u_j du_k = du_k u_j,
/// v_t du_j with its phase twist, dv_t = 0 and du_1 du_2 = -du_2 du_1.
inline std::vector<RelationReport> check_bimodule_relations(const ExactRep& rep,
                                                            long window = 6) {
  const Foliation& f = rep.params();
  int t = detail::ensure_symbol(f);
  auto tt = f.times;
  auto u1 = Element::u1(tt), u2 = Element::u2(tt);
  auto vt = Element::vt(tt, t);
  auto q = rep.assemble(OpKind::Qtilde);
  auto c1 = rep.commutator_with(q, u1), c2 = rep.commutator_with(q, u2);
  auto P = [&](int atom) {
    PhaseExp e;
    e.add(atom, Rational(1));
    return ExactScalar::phase(e);
  };
  std::vector<RelationReport> out;
  auto check = [&](std::string id, const ExactRep::Op& lhs, const ExactRep::Op& rhs,
                   long margin) {
    out.push_back(make_report(std::move(id), equal_on_window(lhs - rhs, ExactRep::Op::zero(),
                                                             window, margin)));
  };
  const Element* us[2] = {&u1, &u2};
  const ExactRep::Op* cs[2] = {&c1, &c2};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      check("u" + std::to_string(j + 1) + " du" + std::to_string(k + 1) + " = du" +
                std::to_string(k + 1) + " u" + std::to_string(j + 1),
            rep.represent(*us[j]).compose(*cs[k]), cs[k]->compose(rep.represent(*us[j])), 2);
  check("v_t du1 = e^{iat} du1 v_t", rep.represent(vt).compose(c1),
        c1.compose(rep.represent(vt)).scaled(P(TimeTable::atom_a(t))), 2);
  check("v_t du2 = e^{ibt} du2 v_t", rep.represent(vt).compose(c2),
        c2.compose(rep.represent(vt)).scaled(P(TimeTable::atom_b(t))), 2);
  check("dv_t = 0", rep.commutator_with(q, vt), ExactRep::Op::zero(), 1);
  check("du1 du2 = -du2 du1", c1.compose(c2),
        c2.compose(c1).scaled(ExactScalar(GaussRat(-1))), 2);
  return out;
}

// ---------------------------------------------------------------------------
// Freeness certificates for the first-order calculus.
// ---------------------------------------------------------------------------

struct FreenessEvidence {
  long long checked = 0;
  bool all_pass = true;
  double min_abs = 1e300;   // numeric modulus of the worst determinant
  std::string note;
  std::optional<Mode> witness;
};

/// Omega^1: the 2x2 systems produced by acting a coefficient pair on a basis
/// frame. Each determinant is a single phase term of modulus exactly one
/// (= a^2 + b^2); any further term or a non-unit modulus is a failure.
inline FreenessEvidence freeness_omega1(const ExactRep& rep, long coeff_range = 2,
                                        long mode_range = 2) {
  if (coeff_range < 0 || mode_range < 0)
    throw std::invalid_argument("freeness_omega1: degenerate probe family");
  const Foliation& f = rep.params();
  int t = detail::ensure_symbol(f);
  auto tt = f.times;
  auto q = rep.assemble(OpKind::Qtilde);
  auto c1 = rep.commutator_with(q, Element::u1(tt));
  auto c2 = rep.commutator_with(q, Element::u2(tt));
  FreenessEvidence ev;
  long win = mode_range + coeff_range + 4;
  for (long i = -coeff_range; i <= coeff_range; ++i)
    for (long j = -coeff_range; j <= coeff_range; ++j)
      for (int with_time : {0, 1})
        for (long k = -mode_range; k <= mode_range; ++k)
          for (long l = -mode_range; l <= mode_range; ++l) {
            TimeVec tv1, tv2;
            if (with_time) {
              tv1.emplace(t, Rational(1, 2));
              tv2.emplace(t, Rational(-1, 3));
            }
            Element a1 = Element::monomial(tt, GaussRat(1), tv1, i, j);
            Element a2 = Element::monomial(tt, GaussRat(1), tv2, i + 1, j - 1);
            auto col1 = rep.represent(a1).compose(c1).apply(
                Section<ExactScalar>::basis(Mode{0, k, l}), win);
            auto col2 = rep.represent(a2).compose(c2).apply(
                Section<ExactScalar>::basis(Mode{0, k, l}), win);
            Mode m1{1, k + i + 1, l + j}, m2{2, k + i + 1, l + j};
            ExactScalar det = col1.coeff(m1) * col2.coeff(m2) -
                              col2.coeff(m1) * col1.coeff(m2);
            ++ev.checked;
            bool unit = det.is_single_phase() &&
                        det.terms.begin()->second.norm2() == 1;
            double mod = std::abs(det.eval(f.env()));
            ev.min_abs = std::min(ev.min_abs, mod);
            if (!unit) {
              ev.all_pass = false;
              ev.witness = Mode{0, k, l};
              ev.note = "determinant not a unit phase";
            }
          }
  return ev;
}

/// Omega^2: pi(a) [Q,U1][Q,U2] never meets the represented algebra. The
/// product keeps a strictly antidiagonal fibre pattern (components c -> 3-c)
/// while algebra elements act componentwise, so the overlap is forced to 0.
inline FreenessEvidence freeness_omega2(const ExactRep& rep, int n_random,
                                        unsigned seed, long window = 5) {
  if (n_random <= 0) throw std::invalid_argument("freeness_omega2: degenerate probe family");
  auto tt = rep.params().times;
  detail::ensure_symbol(rep.params());
  auto q = rep.assemble(OpKind::Qtilde);
  auto pi2 = rep.commutator_with(q, Element::u1(tt))
                 .compose(rep.commutator_with(q, Element::u2(tt)));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> deg(-2, 2), coin(0, 1);
  FreenessEvidence ev;
  for (int r = 0; r < n_random; ++r) {
    Element a(tt);
    int nterms = 1 + static_cast<int>(rng() % 3);
    for (int s = 0; s < nterms; ++s) {
      TimeVec tv;
      if (coin(rng)) tv.emplace(0, Rational(deg(rng), 2));
      GaussRat c(Rational(deg(rng)), Rational(deg(rng)));
      if (c.is_zero()) c = GaussRat(1);
      a += Element::monomial(tt, c, tv, deg(rng), deg(rng));
    }
    if (a.is_zero()) a = Element::u1(tt);  // terms may cancel
    auto op = rep.represent(a).compose(pi2);
    bool nonzero = false, clean = true;
    for (long k = -window + 3; k <= window - 3 && clean; ++k)
      for (long l = -window + 3; l <= window - 3 && clean; ++l)
        for (int comp = 0; comp < 4 && clean; ++comp) {
          auto img = op.apply(Section<ExactScalar>::basis(Mode{comp, k, l}), window);
          for (auto& [m, v] : img.c) {
            if (v.is_zero()) continue;
            nonzero = true;
            if (m.comp != 3 - comp) {
              clean = false;
              ev.witness = Mode{comp, k, l};
            }
          }
        }
    ++ev.checked;
    if (!clean || !nonzero) {
      ev.all_pass = false;
      if (ev.note.empty())
        ev.note = clean ? "product vanished for nonzero coefficient"
                        : "diagonal leakage in the two-form block pattern";
    }
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Degree >= 3 words: symbolic reduction in the quotient calculus, with a
// strict operator cross-check of the bookkeeping.
// ---------------------------------------------------------------------------

using DuWord = std::vector<std::variant<Element, int>>;  // int: 1 or 2
using ReducedForm = std::map<std::vector<int>, Element>;

namespace detail {

/// Move an algebra element left through a du-string; each du_r twists a
/// monomial v_t ... by e^{-i (a or b) t}.
inline Element pass_left(const Element& e, const std::vector<int>& dus) {
  Element out(e.times);
  for (auto& [key, c] : e.terms) {
    PhaseExp extra;
    for (int r : dus)
      for (auto& [m, q] : key.t)
        extra.add(r == 1 ? TimeTable::atom_a(m) : TimeTable::atom_b(m), -q);
    MonoKey nk = key;
    nk.phase = key.phase + extra;
    out.add_term(nk, c);
  }
  return out;
}

inline void add_reduced(ReducedForm& acc, std::vector<int> dus, Element left,
                        bool strict, const TimeTablePtr& tt) {
  // canonicalize: sort du indices with sign flips, collapse equal adjacent
  // pairs (du_j du_j = u_j^2 strictly, 0 in the quotient calculus)
  bool changed = true;
  GaussRat sign(1);
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < dus.size(); ++i) {
      if (dus[i] == dus[i + 1]) {
        if (!strict) return;  // quotient: the term dies
        Element usq = dus[i] == 1 ? Element::u1(tt, 2) : Element::u2(tt, 2);
        left = left * usq;  // u_j^2 commutes with every du
        dus.erase(dus.begin() + i, dus.begin() + i + 2);
        changed = true;
        break;
      }
      if (dus[i] > dus[i + 1]) {
        std::swap(dus[i], dus[i + 1]);
        sign = -sign;
        changed = true;
        break;
      }
    }
  }
  Element total = left.scaled(sign);
  if (total.is_zero()) return;
  auto [it, fresh] = acc.emplace(dus, total);
  if (!fresh) {
    it->second += total;
    if (it->second.is_zero()) acc.erase(it);
  }
}

}  // namespace detail

/// Reduce a word to sum_S (algebra element) * du-string S, S strictly
/// increasing. In the quotient calculus every word of degree >= 3 reduces to
/// zero; `strict` keeps du_j du_j = u_j^2 for the operator cross-check.
inline ReducedForm reduce_word(const DuWord& w, const TimeTablePtr& tt, bool strict) {
  ReducedForm state;
  state.emplace(std::vector<int>{}, Element::unit(tt));
  for (auto& item : w) {
    ReducedForm next;
    for (auto& [dus, left] : state) {
      if (std::holds_alternative<Element>(item)) {
        Element moved = detail::pass_left(std::get<Element>(item), dus);
        detail::add_reduced(next, dus, left * moved, strict, tt);
      } else {
        auto d2 = dus;
        d2.push_back(std::get<int>(item));
        detail::add_reduced(next, std::move(d2), left, strict, tt);
      }
    }
    state = std::move(next);
  }
  return state;
}

/// Quotient reduction; report is exact iff everything cancels.
inline RelationReport higher_degree_vanishing(const DuWord& w, const TimeTablePtr& tt) {
  RelationReport r;
  r.id = "degree-" + std::to_string([&] {
           int d = 0;
           for (auto& it : w)
             if (std::holds_alternative<int>(it)) ++d;
           return d;
         }()) +
         " word reduces to 0";
  auto red = reduce_word(w, tt, /*strict=*/false);
  r.status = red.empty() ? RelationReport::Status::exact : RelationReport::Status::violated;
  if (!red.empty()) r.max_residual = 1.0;
  return r;
}

/// Operator-level validation of the reduction bookkeeping: the strict
/// reduction must reproduce pi(word) exactly.
inline CompareResult reduction_cross_check(const ExactRep& rep, const DuWord& w) {
  auto tt = rep.params().times;
  auto q = rep.assemble(OpKind::Qtilde);
  ExactRep::Op cs[2] = {rep.commutator_with(q, Element::u1(tt)),
                        rep.commutator_with(q, Element::u2(tt))};
  auto word_op = ExactRep::Op::identity();
  long margin = 0;
  for (auto& item : w) {
    if (std::holds_alternative<Element>(item)) {
      const Element& e = std::get<Element>(item);
      word_op = word_op.compose(rep.represent(e));
      long s = 0;
      for (auto& [key, c] : e.terms) {
        (void)c;
        s = std::max({s, std::labs(key.k), std::labs(key.l)});
      }
      margin += s;
    } else {
      word_op = word_op.compose(cs[std::get<int>(item) - 1]);
      ++margin;
    }
  }
  margin += 3;  // reduced side may carry u_j^2 factors
  auto reduced_op = ExactRep::Op::zero();
  for (auto& [dus, left] : reduce_word(w, tt, /*strict=*/true)) {
    auto term = rep.represent(left);
    for (int r : dus) term = term.compose(cs[r - 1]);
    reduced_op += term;
  }
  return equal_on_window(word_op - reduced_op, ExactRep::Op::zero(), margin + 2, margin);
}

}  // namespace kron
