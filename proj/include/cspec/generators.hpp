#pragma once

#include "cspec/graph.hpp"

namespace cspec {

// All generators produce unit-weight graphs. Composite families attach parts
// with a single unit-weight bridge edge; vertex counts below are exact.

Graph gen_cycle(int k);   // C_k, k >= 3
Graph gen_clique(int l);  // K_l, l >= 2
Graph gen_path(int k);    // P_k on k vertices, k >= 2
Graph gen_star(int l);    // center 0 plus l leaves, l >= 2 -> l+1 vertices

// Cycle C_k (vertices 0..k-1) + disjoint K_l, bridge from cycle position 0.
// n = k + l.
Graph gen_cycle_clique(int k, int l);

// As above plus a second clique K_l2 bridged at cycle position floor(k/2).
// n = k + l + l2.
Graph gen_cycle_two_cliques(int k, int l, int l2);

// Path on D-2 vertices with K_N bridged to each end. n = D - 2 + 2N, D >= 3.
Graph gen_barbell(int D, int N);

// Path on D vertices, K_N bridged to one end, an N-vertex star (center plus
// N-1 leaves) bridged center-to-path at the other end. n = D + 2N.
Graph gen_path_clique_star(int D, int N);

// Two K_m joined by one bridge edge. n = 2m.
Graph gen_bridged_cliques(int m);

// Dispatch by family name ("cycle", "clique", ...). params must carry the
// exact arity for the family.
Graph generate(const std::string& family, const std::vector<long>& params);

}  // namespace cspec
