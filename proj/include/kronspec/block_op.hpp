#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kronspec/modes.hpp"

namespace kron {

template <class S, std::size_t N>
using Mat = std::array<std::array<S, N>, N>;

template <class S, std::size_t N>
Mat<S, N> mat_zero() {
  Mat<S, N> m;
  for (auto& row : m)
    for (auto& e : row) e = S::zero();
  return m;
}

template <class S, std::size_t N>
Mat<S, N> mat_id() {
  auto m = mat_zero<S, N>();
  for (std::size_t i = 0; i < N; ++i) m[i][i] = S::one();
  return m;
}

template <class S, std::size_t N>
Mat<S, N> mat_mul(const Mat<S, N>& a, const Mat<S, N>& b) {
  auto r = mat_zero<S, N>();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t t = 0; t < N; ++t) r[i][j] += a[i][t] * b[t][j];
  return r;
}

// Operator of the form  sum_blocks  (4x4 mode-dependent matrix) x (lattice
// shift). Every operator in play -- the algebra representation, the
// differentials, the signature operators, their commutators and products --
// has this shape, so composition stays closed and no dense algebra is needed
// until a cross-check asks for it.
template <class S, std::size_t N>
class BlockOp {
 public:
  using MatFn = std::function<Mat<S, N>(long, long)>;
  struct Block {
    long dk = 0, dl = 0;
    MatFn f;
  };

  std::vector<Block> blocks;

  BlockOp() = default;

  static BlockOp zero() { return {}; }
  static BlockOp identity() {
    return single(0, 0, [](long, long) { return mat_id<S, N>(); });
  }
  static BlockOp single(long dk, long dl, MatFn f) {
    BlockOp op;
    op.blocks.push_back({dk, dl, std::move(f)});
    return op;
  }

  bool empty() const { return blocks.empty(); }

  BlockOp& operator+=(const BlockOp& o) {
    blocks.insert(blocks.end(), o.blocks.begin(), o.blocks.end());
    return *this;
  }
  friend BlockOp operator+(BlockOp a, const BlockOp& b) { return a += b; }

  BlockOp operator-() const {
    BlockOp r = *this;
    for (auto& b : r.blocks) {
      auto f = b.f;
      b.f = [f](long k, long l) {
        auto m = f(k, l);
        for (auto& row : m)
          for (auto& e : row) e = -e;
        return m;
      };
    }
    return r;
  }
  friend BlockOp operator-(const BlockOp& a, const BlockOp& b) { return a + (-b); }

  BlockOp scaled(const S& s) const {
    BlockOp r = *this;
    for (auto& b : r.blocks) {
      auto f = b.f;
      b.f = [f, s](long k, long l) {
        auto m = f(k, l);
        for (auto& row : m)
          for (auto& e : row) e = e * s;
        return m;
      };
    }
    return r;
  }

  /// this after other (operator product this * other).
  BlockOp compose(const BlockOp& other) const {
    BlockOp r;
    for (const auto& a : blocks)
      for (const auto& b : other.blocks) {
        auto fa = a.f;
        auto fb = b.f;
        long bk = b.dk, bl = b.dl;
        r.blocks.push_back({a.dk + b.dk, a.dl + b.dl,
                            [fa, fb, bk, bl](long k, long l) {
                              return mat_mul(fa(k + bk, l + bl), fb(k, l));
                            }});
      }
    return r;
  }

  friend BlockOp commutator(const BlockOp& a, const BlockOp& b) {
    return a.compose(b) - b.compose(a);
  }

  Section<S> apply(const Section<S>& in, long window) const {
    Section<S> out;
    out.leakage = in.leakage;
    for (auto& [m, v] : in.c) {
      for (const auto& b : blocks) {
        Mat<S, N> mat = b.f(m.k, m.l);
        Mode tgt{0, m.k + b.dk, m.l + b.dl};
        for (std::size_t r = 0; r < N; ++r) {
          const S& e = mat[r][m.comp];
          if (e.is_zero()) continue;
          tgt.comp = r;
          out.add_windowed(tgt, e * v, window);
        }
      }
    }
    return out;
  }

  long max_shift() const {
    long s = 0;
    for (auto& b : blocks) s = std::max({s, std::labs(b.dk), std::labs(b.dl)});
    return s;
  }
};

struct CompareResult {
  bool exact = true;
  double max_residual = 0;
  std::optional<Mode> witness;

  bool within(double tol) const { return max_residual <= tol; }
};

/// Compare two operators on every basis mode of the interior window
/// |k|,|l| <= n - margin; `margin` must cover the total shift of both sides.
template <class S, std::size_t N>
CompareResult equal_on_window(const BlockOp<S, N>& a, const BlockOp<S, N>& b,
                              long n, long margin) {
  CompareResult res;
  long inner = n - margin;
  for (long k = -inner; k <= inner; ++k)
    for (long l = -inner; l <= inner; ++l)
      for (int comp = 0; comp < static_cast<int>(N); ++comp) {
        auto basis = Section<S>::basis(Mode{comp, k, l});
        auto va = a.apply(basis, n);
        auto vb = b.apply(basis, n);
        auto [d, dm] = va.max_diff(vb);
        (void)dm;
        if (d > 0) {
          res.exact = false;
          if (d > res.max_residual) {
            res.max_residual = d;
            res.witness = Mode{comp, k, l};
          }
        }
      }
  return res;
}

/// Dense matrix over the window basis, mostly for conjugate-transpose
/// cross-checks and the coordinate-triplet export.
template <class S, std::size_t N>
struct DenseOp {
  long n = 0;
  long dim = 0;
  std::vector<S> a;  // row-major dim x dim

  long index(const Mode& m) const {
    return ((m.k + n) * (2 * n + 1) + (m.l + n)) * N + m.comp;
  }
  Mode mode(long idx) const {
    int comp = static_cast<int>(idx % N);
    long cell = idx / N;
    long l = cell % (2 * n + 1) - n;
    long k = cell / (2 * n + 1) - n;
    return Mode{comp, k, l};
  }
  const S& at(long r, long c) const { return a[r * dim + c]; }
  S& at(long r, long c) { return a[r * dim + c]; }
};

template <class S, std::size_t N>
DenseOp<S, N> to_dense(const BlockOp<S, N>& op, long n, long max_dim = 6000) {
  if (n < 1) throw std::invalid_argument("to_dense: window radius must be >= 1");
  long dim = N * (2 * n + 1) * (2 * n + 1);
  if (dim > max_dim)
    throw std::length_error("to_dense: window of dimension " + std::to_string(dim) +
                            " exceeds the dense budget of " + std::to_string(max_dim));
  DenseOp<S, N> d;
  d.n = n;
  d.dim = dim;
  d.a.assign(static_cast<size_t>(dim) * dim, S::zero());
  for (long k = -n; k <= n; ++k)
    for (long l = -n; l <= n; ++l)
      for (int comp = 0; comp < static_cast<int>(N); ++comp) {
        Mode src{comp, k, l};
        auto out = op.apply(Section<S>::basis(src), n);
        for (auto& [m, v] : out.c) d.at(d.index(m), d.index(src)) = v;
      }
  return d;
}

}  // namespace kron
