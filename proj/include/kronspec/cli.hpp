#pragma once

#include <iostream>

#include "kronspec/dirac_calculus.hpp"
#include "kronspec/hankel.hpp"
#include "kronspec/io.hpp"
#include "kronspec/torus.hpp"

namespace kron {
namespace cli {

struct RunConfig {
  bool has_pyth = false;
  long pyth_p = 3, pyth_q = 4;
  double a = 0, b = 0;  // used when no pythagorean pair is given
  bool has_ab = false;
  double theta = 0.3819660112501051;
  long n = 6;           // truncation radius
  double tol = 1e-10;
  double rmax = 60;
  std::string format = "csv";  // csv | json
  std::string mode = "exact";  // exact | numeric
  unsigned seed = 1;
  std::string out;  // empty = stdout
  int kmax = 3;     // hankel scan order bound
  long range = 10;  // hankel scan index range

  Foliation foliation() const {
    ArithMode m = mode == "numeric" ? ArithMode::numeric : ArithMode::exact;
    if (has_ab && !has_pyth) {
      if (m == ArithMode::exact)
        throw std::invalid_argument(
            "exact mode requires a rational pythagorean pair (--pyth p,q)");
      return Foliation::numeric(a, b);
    }
    return Foliation::pythagorean(pyth_p, pyth_q, m);
  }

  void validate() const {
    if (format != "csv" && format != "json")
      throw std::invalid_argument("format must be csv or json");
    if (mode != "exact" && mode != "numeric")
      throw std::invalid_argument("mode must be exact or numeric");
    if (n < 0) throw std::invalid_argument("truncation N must be >= 0");
    foliation();  // parameter invariants
  }
};

namespace detail {

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& get() { return *os; }
};

}  // namespace detail

/// Eigenvalue tables straight from the closed-form spectra.
inline int cmd_spectrum(const RunConfig& cfg, const std::string& op) {
  cfg.validate();
  Foliation f = cfg.has_pyth || !cfg.has_ab
                    ? Foliation::pythagorean(cfg.pyth_p, cfg.pyth_q, ArithMode::numeric)
                    : Foliation::numeric(cfg.a, cfg.b);
  std::vector<SpectrumRow> rows;
  long N = cfg.n;
  if (op == "linear") {
    for (long k = -N; k <= N; ++k)
      for (long l = -N; l <= N; ++l) {
        double lam = linear_lambda(f, k, l);
        for (int fam : {1, 2})
          for (int br : {+1, -1}) rows.push_back({k, l, fam, br, br * lam});
      }
  } else if (op == "mixed") {
    for (long k = -N; k <= N; ++k)
      for (long l = -N; l <= N; ++l) {
        double lam = mixed_lambda(f, k, l);
        for (int fam : {1, 2})
          for (int br : {+1, -1}) rows.push_back({k, l, fam, br, br * lam});
      }
  } else if (op == "dirac") {
    for (long k = -N; k <= N; ++k)
      for (long l = -N; l <= N; ++l) {
        double rt = std::sqrt(mixed_lambda(f, k, l));
        for (int fam : {1, 2})
          for (int br : {+1, -1}) rows.push_back({k, l, fam, br, br * rt});
      }
  } else if (op == "torus") {
    for (long k = -N; k <= N; ++k)
      for (long l = -N; l <= N; ++l) {
        double lam = std::sqrt(2 * std::numbers::pi * (k * k + l * l));
        for (int br : {+1, -1}) rows.push_back({k, l, 1, br, br * lam});
      }
  } else {
    std::cerr << "unknown operator: " << op << "\n";
    return 2;
  }
  detail::Sink sink(cfg.out);
  if (cfg.format == "csv")
    write_spectrum_csv(sink.get(), std::move(rows));
  else
    sink.get() << spectrum_to_json(std::move(rows)).dump(2) << "\n";
  return 0;
}

namespace detail {

inline void run_relations(const RunConfig& cfg, std::vector<RelationReport>& checks) {
  Foliation f = cfg.foliation();
  auto alg = check_algebra_relations(f);
  checks.insert(checks.end(), alg.begin(), alg.end());
  if (f.exact_pair) {
    ExactRep rep(f);
    auto lin = check_linear_relations(rep);
    checks.insert(checks.end(), lin.begin(), lin.end());
    auto bim = check_bimodule_relations(rep);
    checks.insert(checks.end(), bim.begin(), bim.end());
  }
  auto dir = check_dirac_relations(f);
  checks.insert(checks.end(), dir.begin(), dir.end());
}

inline void run_calculus(const RunConfig& cfg, std::vector<RelationReport>& checks) {
  Foliation f = cfg.foliation();
  ExactRep rep(f);

  auto ev1 = freeness_omega1(rep, 1, 1);
  RelationReport r1;
  r1.id = "one-form coefficient determinants are unit phases";
  r1.status = ev1.all_pass ? RelationReport::Status::exact
                           : RelationReport::Status::violated;
  r1.max_residual = ev1.all_pass ? 0.0 : 1.0;
  r1.witness = ev1.witness;
  checks.push_back(r1);

  auto ev2 = freeness_omega2(rep, 20, cfg.seed);
  RelationReport r2;
  r2.id = "two-form block pattern avoids the represented algebra";
  r2.status = ev2.all_pass ? RelationReport::Status::exact
                           : RelationReport::Status::violated;
  r2.max_residual = ev2.all_pass ? 0.0 : 1.0;
  r2.witness = ev2.witness;
  checks.push_back(r2);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> du(1, 2), coin(0, 1), deg(3, 4);
  bool all = true;
  for (int i = 0; i < 50; ++i) {
    DuWord w;
    int d = deg(rng);
    for (int j = 0; j < d; ++j) {
      if (coin(rng))
        w.emplace_back(Element::monomial(f.times, GaussRat(1 + (i % 3)), {},
                                         coin(rng), coin(rng)));
      w.emplace_back(du(rng));
    }
    all = all && higher_degree_vanishing(w, f.times).status ==
                     RelationReport::Status::exact;
  }
  RelationReport r3;
  r3.id = "degree >= 3 words reduce to zero";
  r3.status = all ? RelationReport::Status::exact : RelationReport::Status::violated;
  checks.push_back(r3);

  checks.push_back(check_dirac_commutator_table(f, 2));

  auto probe = conjecture_probe(f, 2, 2, 1, 6);
  RelationReport r4;
  r4.id = "free-generation probe determinants stay away from zero";
  r4.status = probe.min_normalized > cfg.tol ? RelationReport::Status::within_tolerance
                                             : RelationReport::Status::violated;
  r4.max_residual = probe.min_normalized;
  checks.push_back(r4);
}

inline void run_hankel(const RunConfig& cfg, std::vector<RelationReport>& checks,
                       json& extra) {
  Foliation f = cfg.foliation();
  auto scan = hankel::lemma3_scan(f, cfg.kmax, cfg.range, 500, cfg.seed);
  RelationReport r;
  r.id = "h-function determinant scan (normalized modulus)";
  r.status = scan.min_normalized > 1e-6 ? RelationReport::Status::within_tolerance
                                        : RelationReport::Status::violated;
  r.max_residual = scan.min_normalized;
  checks.push_back(r);
  extra["hankel_scan"] = {{"min_raw", scan.min_raw},
                          {"min_normalized", scan.min_normalized},
                          {"witness_rows", scan.witness},
                          {"evaluated", scan.evaluated}};

  bool binom = true;
  for (int rr = 1; rr <= 10; ++rr)
    for (int s = 0; s < rr; ++s)
      binom = binom && hankel::binomial_alternating_sum(rr, s) == 0;
  RelationReport rb;
  rb.id = "alternating binomial sums vanish below the order";
  rb.status = binom ? RelationReport::Status::exact : RelationReport::Status::violated;
  checks.push_back(rb);

  // classification smoke: a planted model and the h-function
  std::vector<GaussRat> vals;
  for (int i = 0; i < 6; ++i) {
    GaussRat b2(Rational(2));
    vals.push_back(b2.pow(i) * GaussRat(Rational(1 + i)));
  }
  auto model = hankel::classify(hankel::SeqSamples::from_exact(0, vals, 3));
  bool planted_ok = model.has_value() &&
                    model->kind == hankel::SeqModel::Kind::poly_exp &&
                    model->beta == GaussRat(2);
  std::vector<std::complex<double>> hs;
  for (long i = -static_cast<long>(cfg.range); i <= static_cast<long>(cfg.range); ++i)
    hs.push_back(hankel::h_function(f, i));
  bool h_neither = true;
  for (int k = 1; k <= cfg.kmax; ++k)
    h_neither = h_neither &&
                !hankel::classify(hankel::SeqSamples::from_numeric(-cfg.range, hs, k))
                     .has_value();
  RelationReport rc;
  rc.id = "classification: planted model recovered, h-function rejected";
  rc.status = planted_ok && h_neither ? RelationReport::Status::exact
                                      : RelationReport::Status::violated;
  checks.push_back(rc);
}

inline void run_torus(const RunConfig&, std::vector<RelationReport>& checks) {
  auto rel = torus::relation_suite();
  checks.insert(checks.end(), rel.begin(), rel.end());
  checks.push_back(torus::two_form_block_pattern());
  bool probes = true;
  for (long nn : {0L, 1L})
    for (long mm : {0L, 1L}) probes = probes && torus::freeness_two_term_probe(nn, mm, 1);
  RelationReport r;
  r.id = "torus freeness two-term probes";
  r.status = probes ? RelationReport::Status::exact : RelationReport::Status::violated;
  checks.push_back(r);
  bool words = torus::higher_words_vanish({1, 2, 1}) &&
               torus::higher_words_vanish({2, 1, 2}) &&
               torus::higher_words_vanish({1, 2, 1, 2});
  RelationReport rw;
  rw.id = "torus degree >= 3 words reduce to zero";
  rw.status = words ? RelationReport::Status::exact : RelationReport::Status::violated;
  checks.push_back(rw);
}

}  // namespace detail

/// Verification suites; exit 0 iff every check lands exact/within-tolerance.
inline int cmd_verify(const RunConfig& cfg, const std::string& suite) {
  cfg.validate();
  std::vector<RelationReport> checks;
  json extra;
  if (suite == "relations") {
    detail::run_relations(cfg, checks);
  } else if (suite == "calculus") {
    detail::run_calculus(cfg, checks);
  } else if (suite == "hankel") {
    detail::run_hankel(cfg, checks, extra);
  } else if (suite == "torus") {
    detail::run_torus(cfg, checks);
  } else if (suite == "all") {
    detail::run_relations(cfg, checks);
    detail::run_calculus(cfg, checks);
    detail::run_hankel(cfg, checks, extra);
    detail::run_torus(cfg, checks);
  } else {
    std::cerr << "unknown suite: " << suite << "\n";
    return 2;
  }
  bool pass = true;
  json arr = json::array();
  for (auto& r : checks) {
    pass = pass && r.ok();
    arr.push_back(report_to_json(r));
  }
  json out;
  out["schema"] = 1;
  out["suite"] = suite;
  out["mode"] = cfg.mode;
  out["checks"] = arr;
  if (!extra.is_null()) out["data"] = extra;
  out["pass"] = pass;
  detail::Sink sink(cfg.out);
  sink.get() << out.dump(2) << "\n";
  return pass ? 0 : 1;
}

/// Weyl-count dimension fits.
inline int cmd_dimension(const RunConfig& cfg, const std::string& op) {
  cfg.validate();
  if (cfg.rmax < 10) {
    std::cerr << "dimension: rmax must be >= 10\n";
    return 2;
  }
  Foliation f = cfg.has_pyth || !cfg.has_ab
                    ? Foliation::pythagorean(cfg.pyth_p, cfg.pyth_q, ArithMode::numeric)
                    : Foliation::numeric(cfg.a, cfg.b);
  SpectrumKind kind;
  if (op == "linear")
    kind = SpectrumKind::linear;
  else if (op == "dirac")
    kind = SpectrumKind::dirac;
  else if (op == "torus")
    kind = SpectrumKind::torus;
  else {
    std::cerr << "unknown operator: " << op << "\n";
    return 2;
  }
  auto wc = weyl_count(f, kind, cfg.rmax);
  detail::Sink sink(cfg.out);
  sink.get() << weyl_to_json(wc, op).dump(2) << "\n";
  return 0;
}

}  // namespace cli
}  // namespace kron
