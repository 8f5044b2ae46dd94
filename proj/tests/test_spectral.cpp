#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cspec/dense.hpp"
#include "cspec/engine.hpp"
#include "cspec/errors.hpp"
#include "cspec/generators.hpp"
#include "cspec/oracle.hpp"
#include "cspec/spectral.hpp"

using namespace cspec;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double exact_lambda(const Graph& g, int index_from_low) {
  Spectrum s = eigensolve_dense(normalized_laplacian_dense(g), false);
  return s.values[index_from_low];
}

}  // namespace

TEST_CASE("schedule arithmetic at pinned sizes") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(8) == 3);
  CHECK(ceil_log2(9) == 4);

  CHECK(default_iter_bits(8) == 14);
  CHECK(default_iter_bits(64) == 20);
  CHECK(default_iter_bits(1 << 24) == 51);  // clamped

  SpectralConfig c;
  CHECK(sum_bits(c, 8) == 34);   // (96-2)/2 - 12 - 1
  CHECK(sum_bits(c, 64) == 51);  // clamped high
  CHECK(instance_count(c, 8) == 7);
  CHECK(instance_count(c, 256) == 17);
  CHECK(lambda_n_iterations(c, 8) == 167);   // ceil(4 ln8 / 0.05)
  CHECK(lambda_2_iterations(c, 8) == 333);   // ceil(4 ln8 / 0.025)
  CHECK(projection_period(c, 8) == 3);
  CHECK(projection_period(c, 2) == 1);

  c.eps = 0.5;
  CHECK(probe_rounds(c, 256) == 89);
  c.eps = 0.25;
  CHECK(probe_rounds(c, 8, 3) == 200);        // k scales the threshold
  CHECK(cascade_iterations(c, 8, 3) == 512);  // delta = eps^3/(20k) hits t_max

  c.t_max = 100;
  c.eps = 0.05;
  CHECK(lambda_n_iterations(c, 8) == 100);
}

TEST_CASE("start vectors are reproducible sign flips") {
  std::uint64_t s1 = instance_seed(1, 0, 3, 0);
  std::uint64_t s2 = instance_seed(1, 0, 3, 1);
  std::uint64_t s3 = instance_seed(1, 1, 3, 0);
  std::uint64_t s4 = instance_seed(2, 0, 3, 0);
  CHECK(s1 != s2);  // wave changes the stream
  CHECK(s1 != s3);  // level changes the stream
  CHECK(s1 != s4);  // root seed changes the stream

  std::vector<double> x = sample_start_vector(64, s1);
  REQUIRE(x.size() == 64);
  for (double v : x) CHECK(std::abs(v) == 1.0);
  CHECK(x == sample_start_vector(64, s1));
  CHECK(x != sample_start_vector(64, s2));

  // +/-1 entries should be roughly balanced across seeds.
  int excess = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    std::vector<double> y = sample_start_vector(64, instance_seed(s, 0, 0, 0));
    double mean = 0.0;
    for (double v : y) mean += v;
    if (std::abs(mean / 64.0) > 0.375) ++excess;  // 3 sigma
  }
  CHECK(excess <= 10);
}

TEST_CASE("rayleigh measurement of sqrt-degrees reads 2") {
  Graph g = gen_cycle_clique(6, 4);
  Engine e(g, EngineConfig{});
  AggregationTree t = bfs_tree(e, 0);
  TruncConfig c = TruncConfig::make(sum_bits(SpectralConfig{}, g.n()), 512);
  double r = rayleigh(e, t, sqrt_degrees(g), &c);
  CHECK(r == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r <= 2.0 + 1e-9);  // truncation never overshoots the quotient
}

TEST_CASE("rayleigh rejects a vanished vector") {
  Graph g = gen_cycle(4);
  EngineConfig cfg;
  cfg.budget_bits = 1024;  // full-precision probe payloads
  Engine e(g, cfg);
  AggregationTree t = bfs_tree(e, 0);
  CHECK_THROWS_AS(rayleigh(e, t, std::vector<double>(4, 0.0), nullptr), NumericError);
}

TEST_CASE("lambda_n estimates land in the one-sided window") {
  struct Case {
    Graph g;
    double ln;
  };
  for (auto& [g, ln] : {Case{gen_cycle(4), 2.0}, Case{gen_clique(4), 4.0 / 3.0},
                        Case{gen_path(3), 2.0}, Case{gen_star(8), 2.0}}) {
    SpectralConfig cfg;
    // Aggregation noise scales with the sum width, which the tiny default
    // budgets of n <= 8 graphs squeeze down to ~18 bits.
    double tol = std::ldexp(8.0, -sum_bits(cfg, g.n()));
    EigenEstimate est = estimate_lambda_n(g, cfg);
    CAPTURE(g.n());
    CHECK(est.which == "lambda_n");
    CHECK(est.index == g.n());
    CHECK(est.value >= (1.0 - cfg.eps) * ln - tol);
    CHECK(est.value <= ln + tol);
    CHECK_FALSE(est.early_exit);
    CHECK(est.stats.violations == 0);
    CHECK(est.stats.max_message_bits <= default_budget_bits(g.n()));
    REQUIRE((int)est.vector.size() == g.n());
    CHECK(norm(est.vector) == doctest::Approx(1.0).epsilon(1e-5));

    // The returned vector really attains the reported value.
    std::vector<double> lx = apply_laplacian(g, est.vector);
    CHECK(dot(est.vector, lx) == doctest::Approx(est.value).epsilon(1e-3));
  }
}

TEST_CASE("lambda_2 estimates sandwich the spectral gap") {
  for (const Graph& g : {gen_cycle(8), gen_clique(8), gen_cycle(12), gen_barbell(6, 4),
                         gen_star(8)}) {
    double l2 = exact_lambda(g, 1);
    SpectralConfig cfg;
    EigenEstimate est = estimate_lambda_2(g, cfg);
    CAPTURE(g.n());
    CHECK(est.which == "lambda_2");
    CHECK(est.index == 2);
    CHECK(est.value >= l2 - 1e-6);
    CHECK(est.value <= l2 + cfg.eps + 1e-6);
    CHECK_FALSE(est.early_exit);
    CHECK(est.stats.violations == 0);
    REQUIRE((int)est.vector.size() == g.n());
    CHECK(norm(est.vector) == doctest::Approx(1.0).epsilon(1e-9));
    // Reported vector is orthogonal-ish to sqrt(deg) and nearly attains the gap.
    std::vector<double> d = sqrt_degrees(g);
    double overlap = std::abs(dot(est.vector, d)) / norm(d);
    CHECK(overlap < 0.2);
  }
}

TEST_CASE("tiny complete graphs exhaust the gap search") {
  SpectralConfig cfg;
  CHECK_THROWS_AS(estimate_lambda_2(gen_clique(2), cfg), RestartExhaustedError);
}

TEST_CASE("high-diameter probe exits early with the fallback value") {
  Graph g = gen_path(128);
  SpectralConfig cfg;
  cfg.eps = 0.5;
  EigenEstimate est = estimate_lambda_2(g, cfg);
  CHECK(est.early_exit);
  CHECK(est.value == doctest::Approx(2.0 * cfg.eps));
  CHECK(est.vector.empty());
  CHECK(est.stats.rounds == probe_rounds(cfg, 128));
}

TEST_CASE("same seed reproduces the run; instance values ignore the cohort size") {
  Graph g = gen_cycle(12);
  SpectralConfig cfg;
  EigenEstimate a = estimate_lambda_2(g, cfg);
  EigenEstimate b = estimate_lambda_2(g, cfg);
  CHECK(a.value == b.value);
  CHECK(a.stats.rounds == b.stats.rounds);
  CHECK(a.instance_id == b.instance_id);

  // Shrinking c2 keeps the surviving instances' streams identical, so the
  // smaller cohort's winner can never beat the larger one.
  SpectralConfig small = cfg;
  small.c2 = 1;  // 3 instances instead of 8
  EigenEstimate c = estimate_lambda_2(g, small);
  CHECK(c.value >= a.value - 1e-12);  // max over mu shrinks, 2 - mu grows

  SpectralConfig cfg_n;
  EigenEstimate an = estimate_lambda_n(g, cfg_n);
  SpectralConfig small_n = cfg_n;
  small_n.c2 = 1;
  EigenEstimate cn = estimate_lambda_n(g, small_n);
  CHECK(cn.value <= an.value + 1e-12);  // max over fewer L-quotients
}

TEST_CASE("lambda_n beats the overlap guarantee whenever the draw is good") {
  // K4's top eigenspace is everything orthogonal to the constant vector, so
  // any noncollinear +/-1 draw overlaps it strongly; every seed must land.
  Graph g = gen_clique(4);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SpectralConfig cfg;
    cfg.seed = seed;
    EigenEstimate est = estimate_lambda_n(g, cfg);
    CHECK(est.value >= (1.0 - cfg.eps) * 4.0 / 3.0 - 1e-6);
  }
}

TEST_CASE("cascade level one is the exact null pair") {
  Graph g = gen_clique(4);
  SpectralConfig cfg;
  cfg.eps = 0.25;
  std::vector<EigenEstimate> est = estimate_smallest_k(g, 3, cfg);
  REQUIRE(est.size() == 3);
  CHECK(est[0].value == 0.0);
  CHECK(est[0].which == "lambda_1");
  CHECK(est[0].index == 1);
  REQUIRE(est[0].vector.size() == 4);
  for (double v : est[0].vector) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));

  double tol = std::ldexp(8.0, -sum_bits(cfg, 4));
  for (int j = 1; j < 3; ++j) {
    CHECK(est[j].value >= 4.0 / 3.0 - tol);
    CHECK(est[j].value <= 4.0 / 3.0 + cfg.eps + tol);
    CHECK(est[j].index == j + 1);
    CHECK_FALSE(est[j].low_mu);
  }
}

TEST_CASE("cascade on two bridged triangles matches the oracle per index") {
  Graph g = gen_bridged_cliques(3);
  Spectrum s = eigensolve_dense(normalized_laplacian_dense(g), false);
  SpectralConfig cfg;
  cfg.eps = 0.25;
  cfg.seed = 3;
  std::vector<EigenEstimate> est = estimate_smallest_k(g, 3, cfg);
  REQUIRE(est.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CAPTURE(j);
    CHECK(est[j].value >= s.values[j] - 1e-6);
    CHECK(est[j].value <= s.values[j] + cfg.eps + 1e-6);
  }
}

TEST_CASE("cascade stored vectors stay orthonormal") {
  Graph g = gen_clique(8);
  SpectralConfig cfg;
  cfg.eps = 0.25;
  SpectralDiagnostics diag;
  std::vector<EigenEstimate> est = estimate_smallest_k(g, 3, cfg, &diag);
  REQUIRE(diag.stored_vectors.size() == 3);
  REQUIRE(diag.stored_mu.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(norm(diag.stored_vectors[i]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(diag.stored_mu[i] >= 0.0);
    CHECK(diag.stored_mu[i] <= 2.0);
    for (int j = 0; j < i; ++j)
      CHECK(std::abs(dot(diag.stored_vectors[i], diag.stored_vectors[j])) < 1e-6);
  }
  CHECK(diag.stored_mu[0] == doctest::Approx(2.0).epsilon(1e-6));  // sqrt-deg pair
}

TEST_CASE("k2 deflation reports the top-of-spectrum gap with the low signal flag") {
  Graph g = gen_clique(2);
  SpectralConfig cfg;
  cfg.eps = 0.25;
  std::vector<EigenEstimate> est = estimate_smallest_k(g, 2, cfg);
  REQUIRE(est.size() == 2);
  CHECK(est[0].value == 0.0);
  // A 32-bit budget only leaves 10-bit sums, so the quotient is coarse.
  CHECK(est[1].value == doctest::Approx(2.0).epsilon(std::ldexp(8.0, -sum_bits(cfg, 2))));
  CHECK(est[1].low_mu);  // deflated residual was pure shift
}

TEST_CASE("cascade validates its arity") {
  SpectralConfig cfg;
  CHECK_THROWS_AS(estimate_smallest_k(gen_clique(4), 0, cfg), InvalidArgumentError);
  CHECK_THROWS_AS(estimate_smallest_k(gen_clique(4), 5, cfg), InvalidArgumentError);
  std::vector<EigenEstimate> one = estimate_smallest_k(gen_clique(4), 1, cfg);
  REQUIRE(one.size() == 1);
  CHECK(one[0].value == 0.0);
}

TEST_CASE("config validation rejects out-of-range knobs") {
  Graph g = gen_cycle(8);
  SpectralConfig cfg;
  cfg.eps = 0.0;
  CHECK_THROWS_AS(estimate_lambda_2(g, cfg), InvalidArgumentError);
  cfg.eps = 2.5;
  CHECK_THROWS_AS(estimate_lambda_2(g, cfg), InvalidArgumentError);
  cfg = SpectralConfig{};
  cfg.mantissa_bits = 3;
  CHECK_THROWS_AS(estimate_lambda_n(g, cfg), InvalidArgumentError);
  cfg = SpectralConfig{};
  cfg.t_max = 0;
  CHECK_THROWS_AS(estimate_lambda_n(g, cfg), InvalidArgumentError);
  cfg = SpectralConfig{};
  cfg.max_restart_waves = -1;
  CHECK_THROWS_AS(estimate_lambda_n(g, cfg), InvalidArgumentError);
  CHECK_THROWS_AS(estimate_lambda_2(Graph(1, {}, true), SpectralConfig{}),
                  InvalidArgumentError);
}

TEST_CASE("diagnostics log stays inside the oracle envelope") {
  Graph g = gen_cycle(8);  // lambda_n = 2 exactly
  SpectralConfig cfg;
  SpectralDiagnostics diag;
  estimate_lambda_n(g, cfg, &diag);
  CHECK_FALSE(diag.rayleigh_log.empty());
  for (const auto& e : diag.rayleigh_log) {
    CHECK(e.level == 0);
    CHECK(e.shift == 0.0);
    CHECK(e.value <= 2.0 + 1e-4);
  }

  SpectralDiagnostics d2;
  estimate_lambda_2(g, cfg, &d2);
  bool saw_level1 = false;
  for (const auto& e : d2.rayleigh_log) {
    if (e.level == 1) saw_level1 = true;
    CHECK(e.value <= 2.0 + 1e-4);  // M-quotients never exceed mu_n = 2
  }
  CHECK(saw_level1);
  CHECK_FALSE(d2.projection_deltas.empty());
  for (double delta : d2.projection_deltas) CHECK(delta <= 0.01);
}

TEST_CASE("truncated and full-precision runs agree to a relative 1e-3") {
  // n = 64 so the default budget holds two full 64-bit payloads per message.
  Graph g = gen_cycle(64);
  SpectralConfig cfg;
  cfg.eps = 0.1;
  cfg.seed = 11;
  EigenEstimate t = estimate_lambda_2(g, cfg);
  SpectralConfig fp = cfg;
  fp.full_precision = true;
  EigenEstimate f = estimate_lambda_2(g, fp);
  CHECK(std::abs(t.value - f.value) <= 1e-3 * std::max(f.value, 1e-12));
}

TEST_CASE("explicit mantissa width overrides the derived one") {
  Graph g = gen_cycle(8);
  SpectralConfig cfg;
  cfg.mantissa_bits = 6;
  EigenEstimate small = estimate_lambda_2(g, cfg);
  // 6-bit mantissas drift harder between projections, so the lower side only
  // holds up to the coarse truncation scale.
  double l2 = exact_lambda(g, 1);
  CHECK(small.value >= l2 - 0.02);
  CHECK(small.value <= l2 + cfg.eps + 0.02);
  CHECK(small.stats.violations == 0);
}
