#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cspec/errors.hpp"

namespace cspec {

struct Neighbor {
  int to;
  double weight;
};

// Weighted undirected graph with vertices 0..n-1. Invariants enforced at
// construction: no self-loops, no duplicate edges, positive weights, and
// (unless oracle_mode) connectivity and strictly positive degrees.
// Adjacency lists are sorted by neighbor id; this ordering is load-bearing
// for deterministic simulation (inbox order, BFS parent tie-breaks).
class Graph {
public:
  // edges as (u, v, w) triples; n fixed up front.
  Graph(int n, const std::vector<std::tuple<int, int, double>>& edges, bool oracle_mode = false);

  // Parses the text edge-list format: first non-comment line "n m", then m
  // lines "u v [w]" (w defaults to 1). '#' starts a comment.
  static Graph parse(std::string_view text, bool oracle_mode = false);

  // Canonical text form: sorted "u v w" lines, weights at 10 significant digits.
  std::string write() const;

  int n() const { return n_; }
  int m() const { return m_; }
  bool oracle_mode() const { return oracle_mode_; }
  bool connected() const { return connected_; }

  const std::vector<Neighbor>& neighbors(int v) const { return adj_[v]; }
  double degree(int v) const { return degree_[v]; }
  // Sum of all degrees = 2 * total edge weight.
  double total_degree() const { return total_degree_; }

  // weight(u,v), 0 if not adjacent. O(log deg).
  double edge_weight(int u, int v) const;

private:
  int n_;
  int m_;
  bool oracle_mode_;
  bool connected_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<double> degree_;
  double total_degree_;
};

// A vertex subset, kept as a sorted id list.
struct CutSet {
  std::vector<int> members;
};

// Vol(S): sum of degrees over S.
double volume(const Graph& g, const CutSet& s);

// Cut weight / min(Vol(S), Vol(V\S)). S must be a proper non-empty subset.
double sparsity(const Graph& g, const CutSet& s);

// Cut weight / Vol(S), the per-part form used by the k-way objective
// (no complement minimum).
double part_sparsity(const Graph& g, const CutSet& s);

// y = M x with M = 2I - L, i.e. y_v = x_v + sum_u w(u,v)/sqrt(deg u * deg v) * x_u.
// Purely local per vertex given neighbor values; full double precision.
std::vector<double> apply_m(const Graph& g, const std::vector<double>& x);

// y = L x = x - Deg^{-1/2} A Deg^{-1/2} x.
std::vector<double> apply_laplacian(const Graph& g, const std::vector<double>& x);

// sqrt(deg) entrywise, the null vector of L (unnormalized).
std::vector<double> sqrt_degrees(const Graph& g);

// Hop eccentricity of v (unweighted BFS) and hop diameter.
int eccentricity(const Graph& g, int v);
int hop_diameter(const Graph& g);

}  // namespace cspec
