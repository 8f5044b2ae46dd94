// Acceptance gate: twelve criteria, one [PASS]/[FAIL] line each, measured
// values inline. Exit code is the number of failed criteria. Criterion 12 is
// expected red: the fixture family's lambda_2 * k^2 product drifts past the
// 2x band at k = 24 when the clique size is pinned at 8; the line prints the
// four measured products so the drift is visible.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cspec/cut.hpp"
#include "cspec/dense.hpp"
#include "cspec/errors.hpp"
#include "cspec/generators.hpp"
#include "cspec/graph.hpp"
#include "cspec/oracle.hpp"
#include "cspec/spectral.hpp"

using namespace cspec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<double> dense_spectrum(const Graph& g) {
  return eigensolve_dense(normalized_laplacian_dense(g), false).values;
}

// ---- shared audit state: criteria 2-4 feed 6, criteria 2-5 and 7 feed 9 ----

struct AuditEntry {
  double value;
  double cap;
};
std::vector<AuditEntry> g_rayleigh_audit;
long long g_default_budget_violations = 0;
long g_audited_runs = 0;

void note_run(const RoundStats& s) {
  g_default_budget_violations += s.violations;
  ++g_audited_runs;
}

// lambda_n / lambda_2 runs iterate L (level 0, top lambda_n) or M (level 1,
// top exactly 2); the shift is zero there but carried anyway.
void audit_flat(const SpectralDiagnostics& d, double lambda_n_oracle) {
  for (const auto& e : d.rayleigh_log) {
    double top = e.level == 0 ? lambda_n_oracle : 2.0;
    g_rayleigh_audit.push_back({e.value, top + e.shift + 1e-4});
  }
}

// Cascade level j iterates M minus the run's own stored deflation prefix; the
// envelope is the dense top eigenvalue of that exact operator plus the shift.
void audit_cascade(const Graph& g, const SpectralDiagnostics& d) {
  DenseSymmetricMatrix L = normalized_laplacian_dense(g);
  int n = g.n();
  auto deflated_top = [&](int prefix) {
    DenseSymmetricMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = (i == j ? 2.0 : 0.0) - L.at(i, j);
    for (int t = 0; t < prefix; ++t)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m.at(i, j) -= d.stored_mu[t] * d.stored_vectors[t][i] * d.stored_vectors[t][j];
    return eigensolve_dense(m, false).values.back();
  };
  std::vector<double> top_by_level(d.stored_mu.size() + 2, 2.0);
  for (size_t j = 2; j < top_by_level.size(); ++j)
    top_by_level[j] = deflated_top((int)j - 1);
  for (const auto& e : d.rayleigh_log) {
    double top = e.level <= 1 ? 2.0 : top_by_level[e.level];
    g_rayleigh_audit.push_back({e.value, top + e.shift + 1e-4});
  }
}

// ---- criteria ----

Outcome c1_cheeger_sandwich() {
  std::vector<std::pair<std::string, Graph>> fx;
  for (int l : {2, 3, 4, 6, 8, 12, 16}) fx.emplace_back(fmt("K%d", l), gen_clique(l));
  for (int k : {3, 4, 6, 8, 12, 16}) fx.emplace_back(fmt("C%d", k), gen_cycle(k));
  for (int k : {2, 4, 8, 16}) fx.emplace_back(fmt("P%d", k), gen_path(k));
  for (int l : {3, 7, 15}) fx.emplace_back(fmt("star(%d)", l), gen_star(l));
  fx.emplace_back("barbell(4,3)", gen_barbell(4, 3));
  fx.emplace_back("barbell(6,4)", gen_barbell(6, 4));
  fx.emplace_back("cycle_clique(6,4)", gen_cycle_clique(6, 4));
  fx.emplace_back("cycle_clique(8,8)", gen_cycle_clique(8, 8));
  fx.emplace_back("cycle_two_cliques(6,4,3)", gen_cycle_two_cliques(6, 4, 3));
  fx.emplace_back("cycle_two_cliques(3,3,3)", gen_cycle_two_cliques(3, 3, 3));
  fx.emplace_back("path_clique_star(4,3)", gen_path_clique_star(4, 3));
  fx.emplace_back("bridged_cliques(3)", gen_bridged_cliques(3));
  fx.emplace_back("bridged_cliques(4)", gen_bridged_cliques(4));

  int ok = 0;
  double min_lo = 1e300, min_hi = 1e300;
  std::string worst;
  for (auto& [name, g] : fx) {
    if (g.n() > 16) return {false, "fixture " + name + " exceeds n=16"};
    CheegerReport r = cheeger_check(g);
    min_lo = std::min(min_lo, r.phi - r.lambda2 / 2.0);
    min_hi = std::min(min_hi, std::sqrt(2.0 * r.lambda2) - r.phi);
    if (r.ok())
      ++ok;
    else if (worst.empty())
      worst = name;
  }
  bool pass = ok == (int)fx.size() && (int)fx.size() >= 15;
  return {pass, fmt("%d/%zu fixtures n<=16 hold lambda_2/2 <= phi <= sqrt(2 lambda_2); "
                    "min slack lower %.4g upper %.4g%s",
                    ok, fx.size(), min_lo, min_hi,
                    worst.empty() ? "" : ("; first failure " + worst).c_str())};
}

struct EstimateFixture {
  std::string name;
  Graph g;
};

std::vector<EstimateFixture> sandwich_fixtures() {
  std::vector<EstimateFixture> v;
  v.push_back({"C8", gen_cycle(8)});
  v.push_back({"C32", gen_cycle(32)});
  v.push_back({"K8", gen_clique(8)});
  v.push_back({"P16", gen_path(16)});
  v.push_back({"barbell(6,4)", gen_barbell(6, 4)});
  v.push_back({"bridged_cliques(4)", gen_bridged_cliques(4)});
  return v;
}

Outcome c2_lambda2_sandwich() {
  double eps = 0.05;
  bool pass = true;
  std::string detail;
  for (auto& [name, g] : sandwich_fixtures()) {
    std::vector<double> sp = dense_spectrum(g);
    double l2 = sp[1], ln_ = sp.back();
    int hits = 0;
    for (int seed = 1; seed <= 20; ++seed) {
      SpectralConfig sc;
      sc.eps = eps;
      sc.seed = (std::uint64_t)seed;
      SpectralDiagnostics diag;
      EigenEstimate est = estimate_lambda_2(g, sc, &diag);
      note_run(est.stats);
      audit_flat(diag, ln_);
      if (est.value >= l2 - 1e-6 && est.value <= l2 + eps + 1e-6) ++hits;
    }
    pass = pass && hits >= 18;
    detail += fmt("%s %d/20 ", name.c_str(), hits);
  }
  return {pass, "lambda_2 in [oracle-1e-6, oracle+eps+1e-6], eps=0.05: " + detail};
}

Outcome c3_lambda_n() {
  double eps = 0.05;
  bool pass = true;
  std::string detail;
  for (auto& [name, g] : sandwich_fixtures()) {
    double ln_ = dense_spectrum(g).back();
    int hits = 0;
    for (int seed = 1; seed <= 20; ++seed) {
      SpectralConfig sc;
      sc.eps = eps;
      sc.seed = (std::uint64_t)seed;
      SpectralDiagnostics diag;
      EigenEstimate est = estimate_lambda_n(g, sc, &diag);
      note_run(est.stats);
      audit_flat(diag, ln_);
      if (est.value >= (1.0 - eps) * ln_ - 1e-6 && est.value <= ln_ + 1e-6) ++hits;
    }
    pass = pass && hits >= 18;
    detail += fmt("%s %d/20 ", name.c_str(), hits);
  }
  return {pass, "lambda_n in [(1-eps)oracle-1e-6, oracle+1e-6], eps=0.05: " + detail};
}

Outcome c4_smallest_k() {
  double eps = 0.1;
  int k = 3;
  bool pass = true;
  std::string detail;
  std::vector<EstimateFixture> fx;
  fx.push_back({"K8", gen_clique(8)});
  fx.push_back({"bridged_cliques(3)", gen_bridged_cliques(3)});
  fx.push_back({"C12", gen_cycle(12)});
  for (auto& [name, g] : fx) {
    std::vector<double> sp = dense_spectrum(g);
    int hits = 0;
    for (int seed = 1; seed <= 20; ++seed) {
      SpectralConfig sc;
      sc.eps = eps;
      sc.seed = (std::uint64_t)seed;
      SpectralDiagnostics diag;
      std::vector<EigenEstimate> es = estimate_smallest_k(g, k, sc, &diag);
      note_run(es.back().stats);
      audit_cascade(g, diag);
      bool all = true;
      for (int i = 0; i < k; ++i)
        all = all && es[i].value >= sp[i] - 1e-6 && es[i].value <= sp[i] + eps + 1e-6;
      if (all) ++hits;
    }
    pass = pass && hits >= 17;
    detail += fmt("%s %d/20 ", name.c_str(), hits);
  }
  return {pass, "per-index lambda_i in [oracle-1e-6, oracle+eps+1e-6], k=3 eps=0.1: " + detail};
}

Outcome c5_sparsest_cut() {
  bool pass = true;
  std::string detail;
  std::vector<EstimateFixture> fx;
  fx.push_back({"K4", gen_clique(4)});
  fx.push_back({"C4", gen_cycle(4)});
  fx.push_back({"bridged_cliques(4)", gen_bridged_cliques(4)});
  fx.push_back({"K8", gen_clique(8)});
  for (auto& [name, g] : fx) {
    double phi = brute_force_sparsest_cut(g).value;
    int hits = 0;
    for (int seed = 1; seed <= 20; ++seed) {
      CutConfig cfg;
      cfg.spectral.seed = (std::uint64_t)seed;
      CutEstimate est = estimate_sparsest_cut(g, cfg);
      note_run(est.stats);
      bool ok = est.guarantee_lo <= phi + 1e-12 && phi <= est.guarantee_hi + 1e-12 &&
                phi <= est.phi_tilde + 1e-12;
      if (ok) ++hits;
    }
    pass = pass && hits >= 18;
    detail += fmt("%s(phi=%.4g) %d/20 ", name.c_str(), phi, hits);
  }
  return {pass, "oracle phi inside [guarantee_lo, guarantee_hi] and phi <= phi_tilde: " + detail};
}

Outcome c6_no_overshoot() {
  double worst = -1e300;
  long bad = 0;
  for (const AuditEntry& e : g_rayleigh_audit) {
    worst = std::max(worst, e.value - e.cap);
    if (e.value > e.cap) ++bad;
  }
  bool pass = bad == 0 && !g_rayleigh_audit.empty();
  return {pass, fmt("%zu logged Rayleigh values from the runs above, %ld over their "
                    "operator-top envelope (+1e-4); worst value-cap %.3g",
                    g_rayleigh_audit.size(), bad, worst)};
}

Outcome c7_truncation_stability() {
  bool pass = true;
  std::string detail;
  struct Pair {
    std::string name;
    Graph g;
    bool top;  // lambda_n run, else lambda_2
  };
  std::vector<Pair> runs;
  runs.push_back({"C64/lambda_n", gen_cycle(64), true});
  runs.push_back({"K64/lambda_n", gen_clique(64), true});
  runs.push_back({"C64/lambda_2", gen_cycle(64), false});
  runs.push_back({"K64/lambda_2", gen_clique(64), false});
  for (auto& r : runs) {
    SpectralConfig sc;
    sc.seed = 1;
    EigenEstimate trunc = r.top ? estimate_lambda_n(r.g, sc) : estimate_lambda_2(r.g, sc);
    note_run(trunc.stats);
    sc.full_precision = true;
    EigenEstimate full = r.top ? estimate_lambda_n(r.g, sc) : estimate_lambda_2(r.g, sc);
    note_run(full.stats);
    // The measured Rayleigh quotient: the value itself for L, 2 - value for M.
    double a = r.top ? trunc.value : 2.0 - trunc.value;
    double b = r.top ? full.value : 2.0 - full.value;
    double rel = std::abs(a - b) / std::max(std::abs(b), 1e-30);
    pass = pass && rel <= 1e-3;
    detail += fmt("%s rel %.3g ", r.name.c_str(), rel);
  }
  return {pass, "paired truncated vs full-precision runs, same seed, rel <= 1e-3: " + detail};
}

Outcome c8_start_vector() {
  int n = 64;
  std::vector<std::vector<double>> dirs;
  std::vector<double> y(n, 0.0);
  y[0] = 1.0;
  dirs.push_back(y);
  dirs.push_back(std::vector<double>(n, 1.0 / 8.0));
  y.assign(n, 0.0);
  for (int i = 0; i < n; ++i) y[i] = (i % 2 ? -1.0 : 1.0) / 8.0;
  dirs.push_back(y);
  y.assign(n, 0.0);
  for (int i = 0; i < n / 2; ++i) y[i] = 1.0 / std::sqrt(32.0);
  dirs.push_back(y);
  y.resize(n);
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    y[i] = i - (n - 1) / 2.0;
    norm += y[i] * y[i];
  }
  for (double& v : y) v /= std::sqrt(norm);
  dirs.push_back(y);

  int trials = 10000;
  double min_freq = 1.0;
  for (const auto& dir : dirs) {
    int hit = 0;
    for (int seed = 1; seed <= trials; ++seed) {
      std::vector<double> x = sample_start_vector(n, (std::uint64_t)seed);
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += x[i] * dir[i];
      if (std::abs(dot) >= 0.5) ++hit;
    }
    min_freq = std::min(min_freq, hit / (double)trials);
  }
  bool pass = min_freq >= 3.0 / 16.0 - 0.02;
  return {pass, fmt("P[|<x,y>| >= 1/2] over 10^4 start vectors, 5 unit directions, n=64: "
                    "min freq %.4f vs bound %.4f",
                    min_freq, 3.0 / 16.0 - 0.02)};
}

Outcome c9_budget() {
  // Positive half: every default-budget run above finished with zero
  // violations. Negative half: one bit under the single-real width must
  // abort with exactly one violation error.
  Graph g = gen_cycle(8);
  TruncConfig tc = TruncConfig::make(default_iter_bits(8), 512);
  long tight = tc.mantissa_bits + tc.exponent_bits + 1 - 1;  // one under a real's width
  int errors = 0;
  long width = 0, budget = 0, round = 0;
  try {
    SpectralConfig sc;
    sc.budget_bits = tight;
    estimate_lambda_n(g, sc);
  } catch (const BudgetViolationError& e) {
    ++errors;
    width = e.width_bits();
    budget = e.budget_bits();
    round = e.round();
  }
  bool pass = g_default_budget_violations == 0 && g_audited_runs > 0 && errors == 1 &&
              budget == tight && width > tight && round >= 1;
  return {pass, fmt("%lld violations across %ld default-budget runs; tight budget %ld bits "
                    "aborted with %d error (width %ld, round %ld)",
                    g_default_budget_violations, g_audited_runs, tight, errors, width, round)};
}

Outcome c10_round_scaling() {
  double eps = 0.1;
  std::vector<int> sizes = {16, 32, 64, 128, 256};
  auto rounds_for = [&](const Graph& g) {
    SpectralConfig sc;
    sc.eps = eps;
    sc.seed = 1;
    return (double)estimate_lambda_n(g, sc).stats.rounds;
  };
  // Cycles: fit rounds = c * ln^2 n / eps, geometric-mean c, every point
  // within 2.5x of the fit.
  std::vector<double> cs;
  for (int n : sizes) cs.push_back(rounds_for(gen_cycle(n)) * eps / std::pow(std::log(n), 2));
  double logsum = 0.0;
  for (double c : cs) logsum += std::log(c);
  double cfit = std::exp(logsum / cs.size());
  double dev = 1.0;
  for (double c : cs) dev = std::max(dev, std::max(c / cfit, cfit / c));
  // Cliques: rounds / ln^2 n within 2x across the range.
  double lo = 1e300, hi = 0.0;
  for (int n : sizes) {
    double r = rounds_for(gen_clique(n)) / std::pow(std::log(n), 2);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  bool pass = dev <= 2.5 && hi / lo <= 2.0;
  return {pass, fmt("cycles n=16..256 eps=0.1: fit c=%.1f, max per-point deviation %.2fx "
                    "(<=2.5x); cliques rounds/ln^2 n spread %.2fx (<=2x)",
                    cfit, dev, hi / lo)};
}

Outcome c11_diameter_bound() {
  double worst = 0.0;
  std::string at;
  auto probe = [&](const std::string& name, const Graph& g, int k) {
    DiameterBound b = diameter_conductance_bound(g, k);
    if (b.ratio > worst) {
      worst = b.ratio;
      at = fmt("%s k=%d", name.c_str(), k);
    }
  };
  probe("K4", gen_clique(4), 2);
  probe("K8", gen_clique(8), 2);
  probe("C4", gen_cycle(4), 2);
  probe("C8", gen_cycle(8), 2);
  probe("C12", gen_cycle(12), 2);
  probe("C16", gen_cycle(16), 2);
  probe("star(8)", gen_star(8), 2);
  probe("barbell(6,4)", gen_barbell(6, 4), 2);
  probe("bridged_cliques(3)", gen_bridged_cliques(3), 2);
  probe("bridged_cliques(4)", gen_bridged_cliques(4), 2);
  probe("cycle_clique(6,4)", gen_cycle_clique(6, 4), 2);
  for (int n : {8, 16, 24, 32, 48, 64}) probe(fmt("P%d", n), gen_path(n), 2);
  probe("K8", gen_clique(8), 3);
  probe("C12", gen_cycle(12), 3);
  probe("cycle_two_cliques(3,3,3)", gen_cycle_two_cliques(3, 3, 3), 3);
  probe("bridged_cliques(3)", gen_bridged_cliques(3), 3);
  bool pass = worst <= 8.0;
  return {pass, fmt("max diameter*phi_k/(k ln n) = %.4f at %s (bound 8), paths up to n=64",
                    worst, at.c_str())};
}

Outcome c12_lower_bound_spectra() {
  std::vector<int> ks = {8, 12, 16, 24};
  std::vector<double> prod;
  for (int k : ks) prod.push_back(dense_spectrum(gen_cycle_clique(k, 8))[1] * k * k);
  double c = prod[0];
  bool pass = true;
  for (double p : prod) pass = pass && p >= 0.5 * c - 1e-12 && p <= 2.0 * c + 1e-12;
  std::string detail;
  for (size_t i = 0; i < ks.size(); ++i)
    detail += fmt("k=%d: %.4f ", ks[i], prod[i]);
  detail += fmt("; band [%.4f, %.4f] with c fitted at k=8", 0.5 * c, 2.0 * c);
  return {pass, "lambda_2(cycle_clique(k,8))*k^2: " + detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit_s;  // 0 = no runtime clause
  };
  std::vector<Criterion> cs = {
      {1, "Cheeger sandwich", c1_cheeger_sandwich, 10},
      {2, "lambda_2 sandwich", c2_lambda2_sandwich, 120},
      {3, "lambda_n window", c3_lambda_n, 60},
      {4, "k smallest", c4_smallest_k, 180},
      {5, "sparsest cut interval", c5_sparsest_cut, 120},
      {6, "Rayleigh no-overshoot audit", c6_no_overshoot, 0},
      {7, "truncation stability", c7_truncation_stability, 60},
      {8, "start-vector probability", c8_start_vector, 30},
      {9, "message budget", c9_budget, 0},
      {10, "round scaling", c10_round_scaling, 300},
      {11, "diameter-conductance bound", c11_diameter_bound, 30},
      {12, "lower-bound fixture spectra", c12_lower_bound_spectra, 30},
  };
  int failed = 0;
  for (auto& c : cs) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_s == 0 || secs < c.limit_s;
    bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] criterion %2d (%s): %s (%.1fs%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs,
                in_time ? "" : fmt(", over the %.0fs limit", c.limit_s).c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/12 criteria passed\n", 12 - failed);
  return failed;
}
