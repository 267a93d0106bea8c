#pragma once

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "kronspec/calculus.hpp"
#include "kronspec/spectral.hpp"

namespace kron {

using nlohmann::json;

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Algebra elements: list of records
//   {t: [rational per symbol], k, l, re, im, phase: [rational per atom]}
// with rationals rendered as "p/q" strings.
// ---------------------------------------------------------------------------

inline json element_to_json(const Element& x) {
  int nsym = x.times ? x.times->size() : 0;
  json terms = json::array();
  for (auto& [key, c] : x.terms) {
    json rec;
    json tv = json::array();
    for (int m = 0; m < nsym; ++m) {
      auto it = key.t.find(m);
      tv.push_back(to_string(it == key.t.end() ? Rational(0) : it->second));
    }
    rec["t"] = tv;
    rec["k"] = key.k;
    rec["l"] = key.l;
    rec["re"] = to_string(c.re);
    rec["im"] = to_string(c.im);
    json ph = json::array();
    for (int a = 0; a < 2 * nsym; ++a) {
      auto it = key.phase.c.find(a);
      ph.push_back(to_string(it == key.phase.c.end() ? Rational(0) : it->second));
    }
    rec["phase"] = ph;
    terms.push_back(std::move(rec));
  }
  json out;
  out["schema"] = 1;
  json syms = json::array();
  for (int m = 0; m < nsym; ++m) syms.push_back(x.times->label(m));
  out["symbols"] = syms;
  out["terms"] = terms;
  return out;
}

inline Rational rational_from_string(const std::string& s) {
  return Rational(s);
}

inline Element element_from_json(const json& j, const TimeTablePtr& tt) {
  Element x(tt);
  for (auto& rec : j.at("terms")) {
    TimeVec t;
    auto tv = rec.at("t");
    for (size_t m = 0; m < tv.size(); ++m) {
      Rational q = rational_from_string(tv[m].get<std::string>());
      if (q != 0) t.emplace(static_cast<int>(m), q);
    }
    PhaseExp ph;
    auto pv = rec.at("phase");
    for (size_t a = 0; a < pv.size(); ++a)
      ph.add(static_cast<int>(a), rational_from_string(pv[a].get<std::string>()));
    GaussRat c(rational_from_string(rec.at("re").get<std::string>()),
               rational_from_string(rec.at("im").get<std::string>()));
    x.add_term(MonoKey{std::move(t), rec.at("k").get<long>(), rec.at("l").get<long>(),
                       std::move(ph)},
               c);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Dense operator export: coordinate triplets with the mode ordering in the
// header and a flag on rows whose source mode sits within one total shift of
// the window edge.
// ---------------------------------------------------------------------------

template <class S, std::size_t N>
void export_coordinate(std::ostream& os, const BlockOp<S, N>& op, long n,
                       const NumEnv& env) {
  auto d = to_dense(op, n);
  long s = op.max_shift();
  os << "# mode ordering: index = ((k+N)*(2N+1) + (l+N))*" << N
     << " + comp, N = " << n << ", comp in 0.." << N - 1 << "\n";
  os << "# columns: row col re im boundary\n";
  for (long r = 0; r < d.dim; ++r)
    for (long c = 0; c < d.dim; ++c) {
      auto z = d.at(r, c).eval(env);
      if (z == std::complex<double>(0, 0)) continue;
      Mode src = d.mode(c);
      bool boundary = std::labs(src.k) > n - s || std::labs(src.l) > n - s;
      os << r << " " << c << " " << fmt_double(z.real()) << " "
         << fmt_double(z.imag()) << " " << (boundary ? 1 : 0) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

inline const char* status_name(RelationReport::Status s) {
  switch (s) {
    case RelationReport::Status::exact:
      return "exact";
    case RelationReport::Status::within_tolerance:
      return "within-tolerance";
    case RelationReport::Status::violated:
      return "violated";
  }
  return "?";
}

inline json report_to_json(const RelationReport& r) {
  json j;
  j["id"] = r.id;
  j["status"] = status_name(r.status);
  j["max_residual"] = r.max_residual;
  if (r.witness)
    j["witness"] = {{"comp", r.witness->comp}, {"k", r.witness->k}, {"l", r.witness->l}};
  return j;
}

inline json weyl_to_json(const WeylCount& wc, const std::string& op_name) {
  json j;
  j["schema"] = 1;
  j["operator"] = op_name;
  j["R"] = wc.radii;
  j["N"] = wc.counts;
  j["exponent"] = wc.exponent;
  j["residual"] = wc.residual;
  j["constant"] = wc.constant;
  return j;
}

struct SpectrumRow {
  long k, l;
  int family, branch;
  double eigenvalue;
};

inline void write_spectrum_csv(std::ostream& os, std::vector<SpectrumRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return std::tie(a.k, a.l, a.family, a.branch) < std::tie(b.k, b.l, b.family, b.branch);
  });
  os << "k,l,family,branch,eigenvalue\n";
  for (auto& r : rows)
    os << r.k << "," << r.l << "," << r.family << "," << (r.branch > 0 ? "+" : "-") << ","
       << fmt_double(r.eigenvalue) << "\n";
}

inline json spectrum_to_json(std::vector<SpectrumRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return std::tie(a.k, a.l, a.family, a.branch) < std::tie(b.k, b.l, b.family, b.branch);
  });
  json arr = json::array();
  for (auto& r : rows)
    arr.push_back({{"k", r.k},
                   {"l", r.l},
                   {"family", r.family},
                   {"branch", r.branch > 0 ? "+" : "-"},
                   {"eigenvalue", r.eigenvalue}});
  json j;
  j["schema"] = 1;
  j["rows"] = arr;
  return j;
}

}  // namespace kron
