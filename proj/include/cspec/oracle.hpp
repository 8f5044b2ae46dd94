#pragma once

#include "cspec/dense.hpp"
#include "cspec/graph.hpp"

namespace cspec {

struct CutResult {
  CutSet cut;
  double value = 0.0;
};

// Exact sparsest cut by enumerating one representative of each complementary
// subset pair (the side avoiding vertex n-1), n <= 24. Ties resolve to the
// smallest membership bitmask (bit v = vertex v).
CutResult brute_force_sparsest_cut(const Graph& g);

// Exact phi_k: min over assignments of vertices to {unassigned, 1..k}, all k
// classes non-empty, of max_i w(V_i, complement)/vol(V_i). Parts need not
// cover V. n <= 12, 2 <= k <= 4.
double brute_force_k_way(const Graph& g, int k);

struct CheegerReport {
  double lambda2 = 0.0;
  double phi = 0.0;
  bool lower_ok = false;  // lambda2/2 <= phi
  bool upper_ok = false;  // phi <= sqrt(2*lambda2)
  bool ok() const { return lower_ok && upper_ok; }
};

// Both Cheeger inequalities from the exact oracles, tolerance 1e-9.
CheegerReport cheeger_check(const Graph& g);

}  // namespace cspec
