#pragma once

#include <random>

#include "kronspec/algebra.hpp"

namespace kron::testing {

/// Unit monomial carrying a pure formal phase e^{i q * atom}.
inline Element phase_unit(const TimeTablePtr& tt, int atom, Rational q) {
  PhaseExp e;
  e.add(atom, std::move(q));
  return Element::monomial(tt, GaussRat(1), {}, 0, 0, std::move(e));
}

inline GaussRat random_gauss(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-4, 4), den(1, 3);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

/// Random element: up to max_terms monomials with |k|,|l| <= 3 and times in
/// the rational span of the registered symbols.
inline Element random_element(const TimeTablePtr& tt, std::mt19937_64& rng,
                              int max_terms = 3) {
  std::uniform_int_distribution<long> deg(-3, 3), tc(-2, 2);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  Element e(tt);
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    TimeVec t;
    for (int m = 0; m < tt->size(); ++m) {
      long c = tc(rng);
      if (c) t.emplace(m, Rational(c, 2));
    }
    e += Element::monomial(tt, random_gauss(rng), std::move(t), deg(rng), deg(rng));
  }
  return e;
}

}  // namespace kron::testing
