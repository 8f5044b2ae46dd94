#include "cspec/cut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cspec/errors.hpp"
#include "cspec/oracle.hpp"

namespace cspec {

namespace {

void accumulate(RoundStats& agg, const RoundStats& s) {
  agg.rounds += s.rounds;
  agg.max_message_bits = std::max(agg.max_message_bits, s.max_message_bits);
  agg.total_bits += s.total_bits;
  agg.violations += s.violations;
}

void require_connected(const Graph& g) {
  if (!g.connected()) throw InvalidArgumentError("conductance needs a connected graph");
}

double floor_of(const CutConfig& cfg, int n) {
  if (cfg.search_floor > 0.0) return cfg.search_floor;
  double nn = (double)n;
  return 1.0 / (nn * nn * nn);
}

// Minimum sparsity over prefixes of BFS discovery order from vertex 0: an
// upper bound on phi, exact on paths where the optimal cut is contiguous.
double sweep_phi(const Graph& g) {
  int n = g.n();
  std::vector<int> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  order.push_back(0);
  seen[0] = 1;
  for (size_t h = 0; h < order.size(); ++h)
    for (const Neighbor& nb : g.neighbors(order[h]))
      if (!seen[nb.to]) {
        seen[nb.to] = 1;
        order.push_back(nb.to);
      }
  double best = std::numeric_limits<double>::infinity();
  CutSet s;
  for (int i = 0; i + 1 < n; ++i) {
    s.members.push_back(order[i]);
    best = std::min(best, sparsity(g, s));
  }
  return best;
}

}  // namespace

CutEstimate estimate_sparsest_cut(const Graph& g, const CutConfig& cfg) {
  require_connected(g);
  if (cfg.delta_coef <= 0.0) throw InvalidArgumentError("delta_coef must be positive");
  CutEstimate out;
  out.k = 2;
  double lo_guess = floor_of(cfg, g.n());

  for (double guess = 0.5;; guess *= 0.5) {
    if (guess < lo_guess)
      throw NumericError("conductance search exhausted below its floor; the graph "
                         "behaves as if disconnected");
    SpectralConfig sc = cfg.spectral;
    sc.eps = cfg.delta_coef * guess;
    EigenEstimate est = estimate_lambda_2(g, sc);
    accumulate(out.stats, est.stats);
    out.restarts += est.restarts;
    double phi = std::sqrt(2.0 * std::max(0.0, est.value));
    bool accept = phi >= guess;
    out.search_trace.push_back({guess, est.value, accept});
    if (!accept) continue;
    out.phi_tilde = phi;
    out.lambda_used = est.value;
    out.early_exit = est.early_exit;
    out.guarantee_lo = est.early_exit ? 0.0 : std::max(0.0, (est.value - sc.eps) / 2.0);
    out.guarantee_hi = phi;
    return out;
  }
}

CutEstimate estimate_sparsest_cut_additive(const Graph& g, double eps, const CutConfig& cfg) {
  require_connected(g);
  if (!(eps > 0.0) || eps >= 1.0) throw InvalidArgumentError("eps must be in (0, 1)");
  SpectralConfig sc = cfg.spectral;
  sc.eps = eps * eps / 2.0;
  EigenEstimate est = estimate_lambda_2(g, sc);

  CutEstimate out;
  out.k = 2;
  out.stats = est.stats;
  out.restarts = est.restarts;
  out.early_exit = est.early_exit;
  out.phi_tilde = std::sqrt(2.0 * std::max(0.0, est.value));
  out.lambda_used = est.value;
  out.guarantee_lo = est.early_exit ? 0.0 : std::max(0.0, (est.value - sc.eps) / 2.0);
  out.guarantee_hi = out.phi_tilde;
  return out;
}

CutEstimate estimate_k_way(const Graph& g, int k, const CutConfig& cfg, double fixed_eps) {
  require_connected(g);
  if (k < 2 || k > 8) throw InvalidArgumentError("k must be in [2, 8]");
  if (cfg.c_ho <= 0.0) throw InvalidArgumentError("c_ho must be positive");
  CutEstimate out;
  out.k = k;
  double scale = cfg.c_ho * (double)k * (double)k;
  double lo_guess = floor_of(cfg, g.n());

  auto probe = [&](double eps) {
    SpectralConfig sc = cfg.spectral;
    sc.eps = eps;
    std::vector<EigenEstimate> est = estimate_smallest_k(g, k, sc);
    const EigenEstimate& top = est.back();
    accumulate(out.stats, top.stats);
    for (const EigenEstimate& e : est) out.restarts += e.restarts;
    return top;
  };

  auto finish = [&](const EigenEstimate& top, double eps) {
    out.phi_tilde = scale * std::sqrt(std::max(0.0, top.value) + eps);
    out.lambda_used = top.value;
    out.early_exit = top.early_exit;
    out.guarantee_lo = top.early_exit ? 0.0 : std::max(0.0, (top.value - eps) / 2.0);
    out.guarantee_hi = out.phi_tilde;
  };

  if (fixed_eps > 0.0) {
    EigenEstimate top = probe(fixed_eps);
    out.search_trace.push_back({fixed_eps, top.value, true});
    finish(top, fixed_eps);
    return out;
  }

  for (double guess = 0.5;; guess *= 0.5) {
    if (guess < lo_guess)
      throw NumericError("conductance search exhausted below its floor; the graph "
                         "behaves as if disconnected");
    EigenEstimate top = probe(guess);
    double phi = scale * std::sqrt(std::max(0.0, top.value) + guess);
    bool accept = phi >= guess;
    out.search_trace.push_back({guess, top.value, accept});
    if (!accept) continue;
    finish(top, guess);
    return out;
  }
}

DiameterBound diameter_conductance_bound(const Graph& g, int k) {
  require_connected(g);
  if (k < 2) throw InvalidArgumentError("k must be at least 2");
  DiameterBound b;
  if (k == 2)
    b.phi_k = g.n() <= 24 ? brute_force_sparsest_cut(g).value : sweep_phi(g);
  else
    b.phi_k = brute_force_k_way(g, k);
  b.diameter = hop_diameter(g);
  double denom = (double)k * std::log((double)g.n());
  if (!(denom > 0.0)) throw InvalidArgumentError("need at least two vertices");
  b.ratio = (double)b.diameter * b.phi_k / denom;
  return b;
}

}  // namespace cspec
