#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "kronspec/calculus.hpp"
#include "kronspec/dirac_calculus.hpp"
#include "kronspec/hankel.hpp"

using namespace kron;
using kron::testing::random_element;

namespace {

struct Fixture {
  Foliation f = Foliation::pythagorean(3, 4);
  int T0;
  ExactRep rep{[this] {
    T0 = f.register_time("T0", 0.7);
    return f;
  }()};
  TimeTablePtr tt() const { return rep.params().times; }
};

bool all_exact(const std::vector<RelationReport>& reports) {
  for (auto& r : reports)
    if (r.status != RelationReport::Status::exact) return false;
  return !reports.empty();
}

}  // namespace

TEST_CASE_METHOD(Fixture, "pi evaluation of universal forms") {
  auto q = rep.assemble(OpKind::Qtilde);

  SECTION("d(v_t) and d(1) evaluate to zero") {
    FormWord dv{Diff{Element::vt(tt(), T0)}};
    CHECK(equal_on_window(pi_eval(rep, q, dv), ExactRep::Op::zero(), 5, 1).exact);
    FormWord done{Diff{Element::unit(tt())}};
    CHECK(equal_on_window(pi_eval(rep, q, done), ExactRep::Op::zero(), 5, 1).exact);
  }

  SECTION("du1 du2 evaluates to the antidiagonal block") {
    FormWord w{Diff{Element::u1(tt())}, Diff{Element::u2(tt())}};
    auto frozen = ExactRep::Op::single(1, 1, [](long, long) {
      auto m = mat_zero<ExactScalar, 4>();
      m[3][0] = -ExactScalar::one();
      m[2][1] = -ExactScalar::one();
      m[1][2] = ExactScalar::one();
      m[0][3] = ExactScalar::one();
      return m;
    });
    CHECK(equal_on_window(pi_eval(rep, q, w), frozen, 6, 2).exact);
  }

  SECTION("Leibniz: d(xy) = dx y + x dy, first-order operator, exact") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 12; ++i) {
      Element x = random_element(tt(), rng), y = random_element(tt(), rng);
      auto lhs = pi_eval(rep, q, FormWord{Diff{x * y}});
      auto rhs = pi_eval(rep, q, FormWord{Diff{x}, Element(y)}) +
                 pi_eval(rep, q, FormWord{Element(x), Diff{y}});
      CHECK(equal_on_window(lhs - rhs, ExactRep::Op::zero(), 14, 13).exact);
    }
  }

  SECTION("Leibniz for the Dirac operator, numeric") {
    Foliation fn = Foliation::numeric(3.0 / 5.0, 4.0 / 5.0);
    int T = fn.register_time("T", 0.7);
    (void)T;
    NumericRep rn(fn);
    auto d = dirac_block(fn);
    std::mt19937_64 rng(32);
    for (int i = 0; i < 6; ++i) {
      Element x = random_element(fn.times, rng), y = random_element(fn.times, rng);
      auto lhs = pi_eval(rn, d, FormWord{Diff{x * y}});
      auto rhs = pi_eval(rn, d, FormWord{Diff{x}, Element(y)}) +
                 pi_eval(rn, d, FormWord{Element(x), Diff{y}});
      auto cmp = equal_on_window(lhs - rhs, NumericRep::Op::zero(), 14, 13);
      CHECK(cmp.max_residual < 1e-10);
    }
  }
}

TEST_CASE_METHOD(Fixture, "relation suites pass exactly") {
  CHECK(all_exact(check_algebra_relations(f)));
  CHECK(all_exact(check_linear_relations(rep)));
  CHECK(all_exact(check_bimodule_relations(rep)));
}

TEST_CASE_METHOD(Fixture, "tampered operator is caught with a witness") {
  ExactRep bad(f);
  bad.tamper_flip(0, 2);
  auto reports = check_linear_relations(bad);
  bool violated = false;
  for (auto& r : reports)
    if (r.status == RelationReport::Status::violated) {
      violated = true;
      CHECK(r.witness.has_value());
    }
  CHECK(violated);
}

TEST_CASE_METHOD(Fixture, "freeness certificates") {
  SECTION("one-form determinants are unit phases") {
    auto ev = freeness_omega1(rep, 1, 1);
    CHECK(ev.all_pass);
    CHECK(ev.checked == 9 * 9 * 2);
    CHECK(ev.min_abs == Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("two-form block pattern never meets the algebra") {
    auto ev = freeness_omega2(rep, 10, 45);
    CHECK(ev.all_pass);
    CHECK(ev.checked == 10);
  }

  SECTION("degenerate probe families are rejected") {
    CHECK_THROWS_AS(freeness_omega1(rep, -1, 2), std::invalid_argument);
    CHECK_THROWS_AS(freeness_omega2(rep, 0, 1), std::invalid_argument);
  }
}

TEST_CASE_METHOD(Fixture, "degree >= 3 words vanish in the quotient calculus") {
  auto u1 = Element::u1(tt()), u2 = Element::u2(tt());

  SECTION("named examples") {
    CHECK(higher_degree_vanishing(DuWord{1, 2, 1}, tt()).status ==
          RelationReport::Status::exact);
    CHECK(higher_degree_vanishing(DuWord{1, 1, 2}, tt()).status ==
          RelationReport::Status::exact);
    std::mt19937_64 rng(51);
    for (int i = 0; i < 5; ++i) {
      Element a = random_element(tt(), rng);
      CHECK(higher_degree_vanishing(DuWord{a, 2, 1, 2}, tt()).status ==
            RelationReport::Status::exact);
    }
  }

  SECTION("randomized degree-3 and degree-4 words with interleaved coefficients") {
    std::mt19937_64 rng(52);
    std::uniform_int_distribution<int> du(1, 2), deg(3, 4), coin(0, 1);
    for (int i = 0; i < 40; ++i) {
      DuWord w;
      int d = deg(rng);
      for (int j = 0; j < d; ++j) {
        if (coin(rng)) w.emplace_back(random_element(tt(), rng, 2));
        w.emplace_back(du(rng));
      }
      CHECK(higher_degree_vanishing(w, tt()).status == RelationReport::Status::exact);
    }
  }

  SECTION("strict reduction reproduces the operator product exactly") {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<int> du(1, 2), coin(0, 1);
    for (int i = 0; i < 6; ++i) {
      DuWord w;
      for (int j = 0; j < 3; ++j) {
        if (coin(rng)) w.emplace_back(random_element(tt(), rng, 2));
        w.emplace_back(du(rng));
      }
      CHECK(reduction_cross_check(rep, w).exact);
    }
    // and the two-form identity du_j du_j = u_j^2 itself
    CHECK(reduction_cross_check(rep, DuWord{1, 1}).exact);
    CHECK(reduction_cross_check(rep, DuWord{2, 2}).exact);
  }
}

TEST_CASE("dirac-side commutator table") {
  Foliation f = Foliation::pythagorean(3, 4);

  SECTION("closed form vs composed action over the probe grid") {
    auto r = check_dirac_commutator_table(f, 2);
    CHECK(r.status != RelationReport::Status::violated);
    CHECK(r.max_residual < 1e-10);
  }

  SECTION("plus-branch coefficient is the displayed closed form") {
    for (long k : {1L, 2L, 4L})
      for (long l : {1L, 3L}) {
        auto st = dirac_commutator_composed(f, 0, 0, 1, 0, k, l, 1, +1);
        REQUIRE(st.size() == 1);
        auto& [key, c] = *st.begin();
        CHECK(key == EtaKey{k + 1, l, 1, -1});
        auto want = (eta::w_fn(f, k + 1, l) - eta::w_fn(f, k, l)) /
                    mixed_gamma(f, k + 1, l, +1);
        CHECK(std::abs(c.eval(NumEnv{}) - want) < 1e-13);
      }
  }

  SECTION("[D,V_t] and the V_t twist relations hold exactly") {
    auto reports = check_dirac_relations(f);
    REQUIRE(reports.size() == 3);
    for (auto& r : reports) CHECK(r.status == RelationReport::Status::exact);
  }

  SECTION("kernel-crossing shifts on the minus branch are refused") {
    CHECK_THROWS_AS(dirac_commutator_composed(f, 0, 0, 1, 0, -1, 0, 1, -1),
                    std::domain_error);
  }
}

TEST_CASE("nonvanishing probes for the conjecture evidence") {
  Foliation f = Foliation::pythagorean(3, 4);

  SECTION("s = q = 1 over k = 1..10") {
    auto rep = conjecture_probe(f, 1, 1, 1, 10);
    CHECK(rep.evaluated == 10);
    CHECK(rep.min_raw > 0);
    CHECK(rep.min_normalized > 1e-8);
  }

  SECTION("q = 0 delegates to the h-function system") {
    auto rep = conjecture_probe(f, 1, 0, 3, 3);
    REQUIRE(rep.evaluated == 1);
    // the 1x1 system is w(k+1) - w(k) = h(k+1)
    CHECK(rep.min_raw ==
          Catch::Approx(std::abs(hankel::h_function(f, 4))).epsilon(1e-12));
  }

  SECTION("empty range is a vacuous pass") {
    auto rep = conjecture_probe(f, 2, 2, 5, 4);
    CHECK(rep.evaluated == 0);
  }

  SECTION("out-of-range orders are rejected") {
    CHECK_THROWS_AS(conjecture_probe(f, 5, 1, 1, 2), std::invalid_argument);
  }
}

TEST_CASE("unitarity reduction for the Dirac operator, numeric") {
  Foliation fn = Foliation::numeric(3.0 / 5.0, 4.0 / 5.0);
  NumericRep rn(fn);
  auto d = dirac_block(fn);
  for (auto gen : {Element::u1(fn.times), Element::u2(fn.times)}) {
    auto c = rn.commutator_with(d, gen);
    auto cstar = rn.commutator_with(d, gen.star());
    auto us = rn.represent(gen.star());
    auto rhs = us.compose(c).compose(us).scaled(NumScalar(std::complex<double>(-1, 0)));
    auto cmp = equal_on_window(cstar - rhs, NumericRep::Op::zero(), 8, 3);
    CHECK(cmp.max_residual < 1e-10);
  }
}
