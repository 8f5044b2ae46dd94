#include "cspec/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "cspec/errors.hpp"

namespace cspec {

CutResult brute_force_sparsest_cut(const Graph& g) {
  int n = g.n();
  if (n > 24) throw SizeLimitError("sparsest cut enumeration limited to n <= 24, got " +
                                   std::to_string(n));
  if (n < 2) throw InvalidArgumentError("need at least 2 vertices");
  double total = g.total_degree();

  // Gray-code walk over subsets of {0..n-2}; one vertex toggles per step, so
  // cut weight and volume update in O(deg).
  std::vector<char> in(n, 0);
  double cut = 0.0, vol = 0.0;
  double best = -1.0;
  std::uint32_t best_mask = 0, prev = 0;
  std::uint64_t last = (1ULL << (n - 1)) - 1;
  for (std::uint64_t i = 1; i <= last; ++i) {
    auto mask = (std::uint32_t)(i ^ (i >> 1));
    int v = std::countr_zero((std::uint32_t)(mask ^ prev));
    prev = mask;
    bool entering = !in[v];
    in[v] = entering;
    vol += entering ? g.degree(v) : -g.degree(v);
    for (const auto& nb : g.neighbors(v)) {
      bool nbr_in = in[nb.to];
      if (entering)
        cut += nbr_in ? -nb.weight : nb.weight;
      else
        cut += nbr_in ? nb.weight : -nb.weight;
    }
    double denom = std::min(vol, total - vol);
    if (denom <= 0.0) continue;
    double val = cut / denom;
    if (best < 0.0 || val < best || (val == best && mask < best_mask)) {
      best = val;
      best_mask = mask;
    }
  }

  CutResult r;
  r.value = best;
  for (int v = 0; v < n; ++v)
    if (best_mask >> v & 1) r.cut.members.push_back(v);
  return r;
}

namespace {

struct KWayState {
  const Graph& g;
  int n, k;
  std::vector<int> label;    // 0 = unassigned
  std::vector<double> cut;   // per part 1..k
  std::vector<double> vol;
  std::vector<int> count;
  double best = -1.0;

  explicit KWayState(const Graph& graph, int parts)
      : g(graph), n(graph.n()), k(parts), label(graph.n(), 0), cut(parts + 1, 0.0),
        vol(parts + 1, 0.0), count(parts + 1, 0) {}

  void assign(int v, int lv, double sgn) {
    label[v] = sgn > 0 ? lv : 0;
    if (lv == 0) return;
    vol[lv] += sgn * g.degree(v);
    count[lv] += sgn > 0 ? 1 : -1;
    for (const auto& nb : g.neighbors(v)) {
      int lu = nb.to > v ? 0 : label[nb.to];  // later vertices count as outside
      if (lu == lv)
        cut[lv] -= sgn * nb.weight;  // edge becomes internal
      else
        cut[lv] += sgn * nb.weight;  // crossing for lv; lu's count is unaffected
    }
  }

  void recurse(int v, int max_used) {
    if (v == n) {
      for (int j = 1; j <= k; ++j)
        if (count[j] == 0) return;
      double worst = 0.0;
      for (int j = 1; j <= k; ++j) worst = std::max(worst, cut[j] / vol[j]);
      if (best < 0.0 || worst < best) best = worst;
      return;
    }
    if (max_used + (n - v) < k) return;  // cannot fill remaining classes
    int top = std::min(max_used + 1, k);
    for (int lv = 0; lv <= top; ++lv) {
      assign(v, lv, 1.0);
      recurse(v + 1, std::max(max_used, lv));
      assign(v, lv, -1.0);
    }
  }
};

}  // namespace

double brute_force_k_way(const Graph& g, int k) {
  if (g.n() > 12)
    throw SizeLimitError("k-way enumeration limited to n <= 12, got " + std::to_string(g.n()));
  if (k < 2 || k > 4) throw InvalidArgumentError("k must be in [2, 4]");
  if (g.n() < k) throw InvalidArgumentError("need at least k vertices");
  KWayState st(g, k);
  st.recurse(0, 0);
  return st.best;
}

CheegerReport cheeger_check(const Graph& g) {
  CheegerReport r;
  Spectrum sp = eigensolve_dense(normalized_laplacian_dense(g), false);
  r.lambda2 = sp.values.at(1);
  r.phi = brute_force_sparsest_cut(g).value;
  r.lower_ok = r.lambda2 / 2.0 <= r.phi + 1e-9;
  r.upper_ok = r.phi <= std::sqrt(2.0 * r.lambda2) + 1e-9;
  return r;
}

}  // namespace cspec
