#pragma once

#include <cmath>
#include <map>

#include "kronspec/phase.hpp"

namespace kron {

// Lattice mode with a fibre component. For the foliation bundle the
// components 0..3 are the frames {1, tau, nu, tau x nu}; the torus triple
// uses components 0..1 for the two GNS copies.
struct Mode {
  int comp = 0;
  long k = 0, l = 0;

  friend bool operator==(const Mode& a, const Mode& b) {
    return a.comp == b.comp && a.k == b.k && a.l == b.l;
  }
  friend bool operator<(const Mode& a, const Mode& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.l != b.l) return a.l < b.l;
    return a.comp < b.comp;
  }
};

inline bool in_window(const Mode& m, long n) {
  return std::labs(m.k) <= n && std::labs(m.l) <= n;
}

/// Finitely supported vector over modes; mass shifted out of the truncation
/// window is accumulated in `leakage` instead of wrapping around.
template <class S>
struct Section {
  std::map<Mode, S> c;
  double leakage = 0;

  Section() = default;
  static Section basis(const Mode& m) {
    Section s;
    s.c.emplace(m, S::one());
    return s;
  }

  bool is_zero() const { return c.empty(); }

  Section& add(const Mode& m, const S& v) {
    if (v.is_zero()) return *this;
    auto [it, fresh] = c.emplace(m, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
    return *this;
  }

  Section& add_windowed(const Mode& m, const S& v, long n) {
    if (v.is_zero()) return *this;
    if (!in_window(m, n)) {
      double a = v.abs_bound();
      leakage += a * a;
      return *this;
    }
    return add(m, v);
  }

  Section& operator+=(const Section& o) {
    for (auto& [m, v] : o.c) add(m, v);
    leakage += o.leakage;
    return *this;
  }
  Section& operator-=(const Section& o) {
    for (auto& [m, v] : o.c) add(m, -v);
    leakage += o.leakage;
    return *this;
  }
  friend Section operator-(Section a, const Section& b) { return a -= b; }
  friend Section operator+(Section a, const Section& b) { return a += b; }

  Section& scale(const S& s) {
    if (s.is_zero()) {
      c.clear();
      return *this;
    }
    for (auto& [m, v] : c) v *= s;
    return *this;
  }

  S coeff(const Mode& m) const {
    auto it = c.find(m);
    return it == c.end() ? S::zero() : it->second;
  }

  /// <this, other> with the standard conjugate-linear first slot.
  S inner(const Section& o) const {
    S acc = S::zero();
    for (auto& [m, v] : c) {
      auto it = o.c.find(m);
      if (it != o.c.end()) acc += v.conj() * it->second;
    }
    return acc;
  }

  double norm(const NumEnv& env) const {
    double s = 0;
    for (auto& [m, v] : c) {
      (void)m;
      s += std::norm(v.eval(env));
    }
    return std::sqrt(s);
  }

  /// Largest term magnitude of this - other, plus the mode attaining it.
  std::pair<double, Mode> max_diff(const Section& o) const {
    Section d = *this;
    d -= o;
    double worst = 0;
    Mode wm{};
    for (auto& [m, v] : d.c) {
      double a = v.abs_bound();
      if (a > worst) {
        worst = a;
        wm = m;
      }
    }
    return {worst, wm};
  }
};

}  // namespace kron
