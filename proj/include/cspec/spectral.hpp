#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspec/engine.hpp"
#include "cspec/graph.hpp"

namespace cspec {

struct SpectralConfig {
  double eps = 0.05;
  std::uint64_t seed = 1;
  double c1 = 4.0;  // iteration count multiplier
  double c2 = 3.0;  // instance count multiplier
  double c3 = 8.0;  // diameter probe threshold multiplier
  double c4 = 1.0;  // re-projection period multiplier
  long t_max = 512;
  long budget_bits = 0;   // 0 picks the engine default 32*ceil(log2 n)
  int mantissa_bits = 0;  // iteration message width; 0 picks 2*ceil(log2 n) + 8
  long max_rounds = 4000000;
  bool full_precision = false;  // reference mode: no message truncation
  int max_restart_waves = 3;
};

// Derived schedule quantities, shared with tests and the CLI.
int ceil_log2(long n);
int default_iter_bits(int n);
int sum_bits(const SpectralConfig& c, int n);         // aggregation partial width
long instance_count(const SpectralConfig& c, int n);  // R
long lambda_n_iterations(const SpectralConfig& c, int n);
long lambda_2_iterations(const SpectralConfig& c, int n);
long cascade_iterations(const SpectralConfig& c, int n, int k);
long probe_rounds(const SpectralConfig& c, int n, int k = 1);
long projection_period(const SpectralConfig& c, int n);  // P

// Seed derivation used for every start vector; exposed so tests can
// reconstruct the exact vectors a run drew.
std::uint64_t instance_seed(std::uint64_t seed, int level, int instance, int wave);

// Entry v is +1 or -1 from a per-vertex hash of (seed, v); no communication.
std::vector<double> sample_start_vector(int n, std::uint64_t seed);

struct EigenEstimate {
  double value = 0.0;
  std::string which;  // "lambda_n", "lambda_2", "lambda_<i>"
  int index = 0;      // i for lambda_i; n for lambda_n
  std::vector<double> vector;  // unit norm; empty on early exit
  RoundStats stats;   // engine totals when this estimate completed
  int instance_id = -1;
  bool early_exit = false;
  int restarts = 0;
  bool low_mu = false;  // cascade level recovered mu below eps
};

struct SpectralDiagnostics {
  struct RayleighEntry {
    int level;  // 0 = lambda_n run (matrix L), 1 = lambda_2 run (matrix M),
                // j >= 2 = deflation cascade level j
    int instance;
    double shift;  // identity shift present in the measured operator
    double value;
  };
  std::vector<RayleighEntry> rayleigh_log;
  // |<x, vhat_n>| / ||x|| observed at scheduled re-projections (fresh restarts
  // excluded); empirical form of the bounded-error-growth claim.
  std::vector<double> projection_deltas;
  std::vector<double> stored_mu;                     // cascade deflation data
  std::vector<std::vector<double>> stored_vectors;
};

// Rayleigh quotient of M = 2I - L at x: one multiply round plus a two-stream
// pipelined sum; the value every vertex learns. Throws NumericError if x
// vanished.
double rayleigh(Engine& e, const AggregationTree& t, const std::vector<double>& x,
                const TruncConfig* sum_cfg);

// Max of R independent truncated power-iteration instances on L.
// (1-eps)*lambda_n <= value <= lambda_n w.h.p.
EigenEstimate estimate_lambda_n(const Graph& g, const SpectralConfig& cfg,
                                SpectralDiagnostics* diag = nullptr);

// Deflated power iteration on M = 2I - L orthogonally to sqrt(deg), with
// re-projection and renormalization every P iterations. value = 2 - max
// Rayleigh; lambda_2 <= value <= lambda_2 + eps w.h.p. A diameter probe may
// exit early with value 2*eps and no vector.
EigenEstimate estimate_lambda_2(const Graph& g, const SpectralConfig& cfg,
                                SpectralDiagnostics* diag = nullptr);

// Sequential deflation cascade for the k smallest eigenvalues. Level 1 is the
// exact null vector; each later level runs the power method on
// M - sum mu_i v_i v_i^T + eps*I and subtracts the shift at the end.
std::vector<EigenEstimate> estimate_smallest_k(const Graph& g, int k, const SpectralConfig& cfg,
                                               SpectralDiagnostics* diag = nullptr);

}  // namespace cspec
