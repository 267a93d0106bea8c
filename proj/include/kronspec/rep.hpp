#pragma once

#include <optional>

#include "kronspec/algebra.hpp"
#include "kronspec/block_op.hpp"

namespace kron {

struct ExactTraits {
  using Scalar = ExactScalar;
  static Scalar gauss(const GaussRat& g) { return Scalar(g); }
};
struct NumericTraits {
  using Scalar = NumScalar;
  static Scalar gauss(const GaussRat& g) { return Scalar(g.to_complex()); }
};

enum class DiffKind { dL, dH, dL_star, dH_star };
enum class OpKind { Qtilde, QL, QH, Qmixed };

// Representation of the crossed product and its geometric operators on the
// four-component mode lattice, L^2(T^2, E) = (+)^4 L^2(T^2).
//
// Conventions (one fixed normalization, used consistently everywhere):
//   e_{kl} differentiates as  d/dx -> i(ak + bl),  transverse -> i(al - bk),
// so the first-order signature operator acts as
//   Q e0_{kl} = i(ak+bl) e1 + i(al-bk) e2,  etc.,
// and  [Q, U1] e0_{kl} = i(a e1_{k+1,l} - b e2_{k+1,l}).
template <class Traits>
class FoliationRep {
 public:
  using S = typename Traits::Scalar;
  using Op = BlockOp<S, 4>;
  using M = Mat<S, 4>;

  explicit FoliationRep(Foliation f) : f_(std::move(f)) {
    if constexpr (std::is_same_v<Traits, ExactTraits>) {
      if (!f_.exact_pair)
        throw std::invalid_argument(
            "exact representation requires rational Pythagorean parameters");
    }
  }

  const Foliation& params() const { return f_; }

  /// Test hook: flip the sign of one entry of the assembled Qtilde fibre
  /// matrix (negative control for the verification suites).
  void tamper_flip(int row, int col) { tamper_ = std::make_pair(row, col); }

  // i(ak + bl) and i(al - bk), the mode symbols of the two derivatives.
  S mult_x(long k, long l) const {
    if constexpr (std::is_same_v<Traits, ExactTraits>)
      return S(GaussRat(Rational(0), f_.ar * k + f_.br * l));
    else
      return S(std::complex<double>(0.0, f_.a * k + f_.b * l));
  }
  S mult_y(long k, long l) const {
    if constexpr (std::is_same_v<Traits, ExactTraits>)
      return S(GaussRat(Rational(0), f_.ar * l - f_.br * k));
    else
      return S(std::complex<double>(0.0, f_.a * l - f_.b * k));
  }

  Op diff_op(DiffKind which) const {
    auto self = *this;
    return Op::single(0, 0, [self, which](long k, long l) {
      auto m = mat_zero<S, 4>();
      S mx = self.mult_x(k, l), my = self.mult_y(k, l);
      switch (which) {
        case DiffKind::dL:
          m[1][0] = mx;
          m[3][2] = mx;
          break;
        case DiffKind::dH:
          m[2][0] = my;
          m[3][1] = -my;
          break;
        case DiffKind::dL_star:
          m[0][1] = -mx;
          m[2][3] = -mx;
          break;
        case DiffKind::dH_star:
          m[0][2] = -my;
          m[1][3] = my;
          break;
      }
      return m;
    });
  }

  Op assemble(OpKind which) const {
    switch (which) {
      case OpKind::Qtilde: {
        auto self = *this;
        return Op::single(0, 0, [self](long k, long l) {
          auto m = mat_zero<S, 4>();
          S mx = self.mult_x(k, l), my = self.mult_y(k, l);
          m[1][0] = mx;
          m[3][2] = mx;
          m[2][0] = my;
          m[3][1] = -my;
          m[0][1] = -mx;
          m[2][3] = -mx;
          m[0][2] = -my;
          m[1][3] = my;
          if (self.tamper_) m[self.tamper_->first][self.tamper_->second] =
              -m[self.tamper_->first][self.tamper_->second];
          return m;
        });
      }
      case OpKind::QL: {
        Op dl = diff_op(DiffKind::dL), dls = diff_op(DiffKind::dL_star);
        return dl.compose(dls) - dls.compose(dl);
      }
      case OpKind::QH:
        return diff_op(DiffKind::dH) + diff_op(DiffKind::dH_star);
      case OpKind::Qmixed: {
        auto graded = assemble(OpKind::QL).compose(n_grading());
        return graded + assemble(OpKind::QH);
      }
    }
    throw std::invalid_argument("assemble: unknown operator");
  }

  /// (-1)^{N-degree}: +1 on {1, tau}, -1 on {nu, tau x nu}.
  Op n_grading() const {
    return Op::single(0, 0, [](long, long) {
      auto m = mat_id<S, 4>();
      m[2][2] = -S::one();
      m[3][3] = -S::one();
      return m;
    });
  }

  /// pi(x) as a block operator; v_t multiplies by its phase at the shifted
  /// mode, so pi(v_t u1^k u2^l) e_{k'l'} = e^{i((k'+k)a+(l'+l)b)t} e_{k'+k,l'+l}.
  Op represent(const Element& x) const {
    Op op;
    for (auto& [key, coeff] : x.terms) {
      S base = Traits::gauss(coeff) * S::phase(key.phase);
      TimeVec t = key.t;
      long dk = key.k, dl = key.l;
      op.blocks.push_back({dk, dl, [base, t, dk, dl](long k, long l) {
                             auto m = mat_zero<S, 4>();
                             S v = base * S::phase(mode_phase(t, k + dk, l + dl));
                             for (int i = 0; i < 4; ++i) m[i][i] = v;
                             return m;
                           }});
    }
    return op;
  }

  Op commutator_with(const Op& op, const Element& x) const {
    Op px = represent(x);
    return op.compose(px) - px.compose(op);
  }

  /// Direct action of an algebra element on a section (independent of the
  /// BlockOp route; the representation-property tests compare the two).
  Section<S> apply_element(const Element& x, const Section<S>& psi, long window) const {
    Section<S> out;
    out.leakage = psi.leakage;
    for (auto& [m, v] : psi.c)
      for (auto& [key, coeff] : x.terms) {
        Mode tgt{m.comp, m.k + key.k, m.l + key.l};
        S s = Traits::gauss(coeff) * S::phase(key.phase) *
              S::phase(mode_phase(key.t, tgt.k, tgt.l));
        out.add_windowed(tgt, s * v, window);
      }
    return out;
  }

 private:
  Foliation f_;
  std::optional<std::pair<int, int>> tamper_;
};

using ExactRep = FoliationRep<ExactTraits>;
using NumericRep = FoliationRep<NumericTraits>;

}  // namespace kron
