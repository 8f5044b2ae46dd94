#pragma once

#include <vector>

#include "cspec/graph.hpp"
#include "cspec/spectral.hpp"

namespace cspec {

// One probe of the exponential search: the conductance guess, the eigenvalue
// estimate bought at that guess's accuracy, and whether the guess stood.
struct SearchStep {
  double guess = 0.0;
  double lambda = 0.0;
  bool accepted = false;
};

struct CutEstimate {
  double phi_tilde = 0.0;
  int k = 2;
  double lambda_used = 0.0;
  double guarantee_lo = 0.0;  // certified interval containing the true value
  double guarantee_hi = 0.0;
  RoundStats stats;  // summed over every engine run the search consumed
  std::vector<SearchStep> search_trace;
  bool early_exit = false;
  int restarts = 0;
};

struct CutConfig {
  SpectralConfig spectral;    // eps is overwritten per search guess
  double c_ho = 1.0;          // higher-order Cheeger constant for k-way output
  double delta_coef = 0.005;  // eigenvalue accuracy bought per guess
  double search_floor = 0.0;  // 0 picks 1/n^3
};

// Exponential search over guesses 1/2, 1/4, ... with eigenvalue accuracy
// 0.005 * guess; accepts once sqrt(2 * lambda_2 estimate) >= guess. Output
// lands in [phi, sqrt(2.01 phi)] w.h.p.
CutEstimate estimate_sparsest_cut(const Graph& g, const CutConfig& cfg);

// Single eigenvalue call at accuracy eps^2/2; output in [phi, sqrt(2 phi) + eps]
// w.h.p. eps in (0, 1).
CutEstimate estimate_sparsest_cut_additive(const Graph& g, double eps, const CutConfig& cfg);

// k-way value via the deflation cascade: phi_k_tilde = c_ho * k^2 *
// sqrt(lambda_k estimate + eps), with eps tied to the conductance guess by the
// same exponential search (or fixed_eps > 0 to pin it).
CutEstimate estimate_k_way(const Graph& g, int k, const CutConfig& cfg, double fixed_eps = 0.0);

struct DiameterBound {
  int diameter = 0;
  double phi_k = 0.0;
  double ratio = 0.0;  // diameter * phi_k / (k * ln n)
};

// Exact check of the small-diameter consequence of conductance: computes the
// ratio that the theory bounds by a constant. Oracle-scale graphs only
// (brute-force conductance underneath).
DiameterBound diameter_conductance_bound(const Graph& g, int k);

}  // namespace cspec
