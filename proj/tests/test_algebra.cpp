#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kronspec/algebra.hpp"

using namespace kron;
using kron::testing::phase_unit;
using kron::testing::random_element;

namespace {

struct Fixture {
  Foliation f = Foliation::pythagorean(3, 4);
  int T0, T1;
  Fixture() {
    T0 = f.register_time("T0", 0.7);
    T1 = f.register_time("T1", 1.3);
  }
  TimeTablePtr tt() const { return f.times; }
};

}  // namespace

TEST_CASE_METHOD(Fixture, "generator products are ordered into the monomial basis") {
  auto u1 = Element::u1(tt()), u2 = Element::u2(tt());

  SECTION("u1 * u2 is the (k,l) = (1,1) monomial with no phase") {
    Element p = u1 * u2;
    REQUIRE(p.size() == 1);
    auto& [key, c] = *p.terms.begin();
    CHECK(key.k == 1);
    CHECK(key.l == 1);
    CHECK(key.t.empty());
    CHECK(key.phase.is_zero());
    CHECK(c == GaussRat(1));
    CHECK(equals_exact(u1 * u2, u2 * u1, f));
  }

  SECTION("unit law") {
    auto one = Element::unit(tt());
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
      Element x = random_element(tt(), rng);
      CHECK(equals_exact(one * x, x, f));
      CHECK(equals_exact(x * one, x, f));
    }
  }

  SECTION("u1 * v_T picks up the phase -a T") {
    Element p = Element::u1(tt()) * Element::vt(tt(), T0);
    REQUIRE(p.size() == 1);
    auto& [key, c] = *p.terms.begin();
    CHECK(key.k == 1);
    CHECK(key.l == 0);
    REQUIRE(key.t.size() == 1);
    CHECK(key.t.at(T0) == 1);
    PhaseExp want;
    want.add(TimeTable::atom_a(T0), Rational(-1));
    CHECK(key.phase == want);
  }
}

TEST_CASE_METHOD(Fixture, "defining relations hold as normal-form identities") {
  auto u1 = Element::u1(tt()), u2 = Element::u2(tt());
  auto vT = Element::vt(tt(), T0), vS = Element::vt(tt(), T1);

  // V_t U_1 = e^{iat} U_1 V_t and the u2 twin
  CHECK(equals_exact(vT * u1, phase_unit(tt(), TimeTable::atom_a(T0), 1) * (u1 * vT), f));
  CHECK(equals_exact(vT * u2, phase_unit(tt(), TimeTable::atom_b(T0), 1) * (u2 * vT), f));
  // V_t V_s = V_{t+s}
  Element sum = Element::monomial(tt(), GaussRat(1),
                                  TimeVec{{T0, Rational(1)}, {T1, Rational(1)}}, 0, 0);
  CHECK(equals_exact(vT * vS, sum, f));
  CHECK(equals_exact(vT * vS, vS * vT, f));
}

TEST_CASE_METHOD(Fixture, "star is an involutive anti-homomorphism") {
  SECTION("star(u1) inverts the monomial") {
    Element s = Element::u1(tt()).star();
    REQUIRE(s.size() == 1);
    CHECK(s.terms.begin()->first.k == -1);
    CHECK(s.terms.begin()->first.phase.is_zero());
  }

  SECTION("star conjugates coefficients") {
    Element x = Element::vt(tt(), T0).scaled(GaussRat(0, 1));  // i v_T
    Element s = x.star();
    REQUIRE(s.size() == 1);
    auto& [key, c] = *s.terms.begin();
    CHECK(c == GaussRat(0, -1));
    CHECK(key.t.at(T0) == -1);
  }

  SECTION("star(u1 v_T) agrees with star(v_T) * star(u1)") {
    Element prod = Element::u1(tt()) * Element::vt(tt(), T0);
    Element lhs = prod.star();
    Element rhs = Element::vt(tt(), T0).star() * Element::u1(tt()).star();
    CHECK(equals_exact(lhs, rhs, f));
    // v_{-T} u1^{-1} is already in normal order: no residual phase
    REQUIRE(lhs.size() == 1);
    CHECK(lhs.terms.begin()->first.phase.is_zero());
    CHECK(lhs.terms.begin()->first.k == -1);
  }

  SECTION("randomized: star(star(x)) = x and star(xy) = star(y) star(x)") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
      Element x = random_element(tt(), rng), y = random_element(tt(), rng);
      CHECK(equals_exact(x.star().star(), x, f));
      CHECK(equals_exact((x * y).star(), y.star() * x.star(), f));
    }
  }
}

TEST_CASE_METHOD(Fixture, "multiplication is associative on random triples") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 30; ++i) {
    Element x = random_element(tt(), rng, 5);
    Element y = random_element(tt(), rng, 5);
    Element z = random_element(tt(), rng, 5);
    CHECK(equals_exact((x * y) * z, x * (y * z), f));
  }
}

TEST_CASE_METHOD(Fixture, "normal form is idempotent and zero-free") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    Element x = random_element(tt(), rng, 4);
    // re-inserting every term one by one reproduces the same map
    Element y(tt());
    for (auto& [k, c] : x.terms) {
      y.add_term(k, c);
      CHECK(!c.is_zero());
    }
    CHECK(x.terms == y.terms);
    Element diff = x - x;
    CHECK(diff.is_zero());
  }
}

TEST_CASE_METHOD(Fixture, "equality semantics") {
  auto u1 = Element::u1(tt()), u2 = Element::u2(tt());

  SECTION("distinct basis monomials differ") {
    CHECK_FALSE(equals_exact(u1, u2, f));
  }

  SECTION("exact equality refuses non-generic parameters") {
    Foliation ng = Foliation::pythagorean(3, 4, ArithMode::exact, /*generic=*/false);
    CHECK_THROWS_AS(equals_exact(Element::u1(ng.times), Element::u1(ng.times), ng),
                    std::domain_error);
  }

  SECTION("numeric equality evaluates phases") {
    Foliation nf = Foliation::numeric(3.0 / 5.0, 4.0 / 5.0);
    int T = nf.register_time("T", 0.9);
    auto v = Element::vt(nf.times, T);
    auto u = Element::u1(nf.times);
    CHECK(equals_numeric(v * u, phase_unit(nf.times, TimeTable::atom_a(T), 1) * (u * v), nf));
    CHECK_FALSE(equals_numeric(v * u, u * v, nf));
  }
}

TEST_CASE_METHOD(Fixture, "registry mixing is rejected") {
  Foliation other = Foliation::pythagorean(3, 4);
  other.register_time("S", 0.5);
  CHECK_THROWS_AS(Element::u1(tt()) * Element::u1(other.times), std::invalid_argument);
}

TEST_CASE_METHOD(Fixture, "monomial inverses via negative powers") {
  Element m = Element::monomial(tt(), GaussRat(0, 2), TimeVec{{T0, Rational(1)}}, 2, -1);
  Element p = m.pow(-1) * m;
  CHECK(equals_exact(p, Element::unit(tt()), f));
  CHECK_THROWS_AS((Element::u1(tt()) + Element::u2(tt())).pow(-1), std::domain_error);
}

TEST_CASE("pythagorean validation rejects non-triples") {
  CHECK_THROWS_AS(Foliation::pythagorean(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(Foliation::numeric(0.5, 0.5), std::invalid_argument);
}

TEST_CASE("time symbols must be distinct") {
  Foliation f = Foliation::pythagorean(3, 4);
  f.register_time("T", 0.5);
  CHECK_THROWS_AS(f.register_time("T", 0.9), std::invalid_argument);
}
