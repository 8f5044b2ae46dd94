#include "cspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cspec/errors.hpp"

namespace cspec {

namespace {

// splitmix64 finalizer over a combined word; statistically independent bits
// for distinct (a, b) pairs.
std::uint64_t mix_bits(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void validate(const SpectralConfig& c) {
  if (!(c.eps > 0.0) || c.eps > 2.0) throw InvalidArgumentError("eps must be in (0, 2]");
  if (c.c1 <= 0 || c.c2 <= 0 || c.c3 <= 0 || c.c4 <= 0)
    throw InvalidArgumentError("schedule constants must be positive");
  if (c.t_max < 1) throw InvalidArgumentError("t_max must be at least 1");
  if (c.mantissa_bits != 0 && (c.mantissa_bits < 4 || c.mantissa_bits > 51))
    throw InvalidArgumentError("mantissa_bits must be 0 or in [4, 51]");
  if (c.budget_bits < 0) throw InvalidArgumentError("budget_bits must be nonnegative");
  if (c.max_rounds < 1) throw InvalidArgumentError("max_rounds must be at least 1");
  if (c.max_restart_waves < 0) throw InvalidArgumentError("max_restart_waves must be nonnegative");
}

void require_positive_degrees(const Graph& g) {
  for (int v = 0; v < g.n(); ++v)
    if (!(g.degree(v) > 0.0))
      throw InvalidArgumentError("vertex " + std::to_string(v) + " has zero degree");
}

long capped_ceil(double x, long cap) {
  double w = std::ceil(x);
  if (w < 1.0) return 1;
  if (w >= (double)cap) return cap;
  return (long)w;
}

int iter_width(const SpectralConfig& c, int n) {
  return c.mantissa_bits != 0 ? c.mantissa_bits : default_iter_bits(n);
}

// The two message widths plus null-on-full-precision accessors. Pointers
// reference the owning object, so instances stay put on the stack.
struct WidthSet {
  TruncConfig iter, sum;
  bool full;

  WidthSet(const SpectralConfig& c, int n)
      : iter(TruncConfig::make(iter_width(c, n), c.t_max)),
        sum(TruncConfig::make(sum_bits(c, n), c.t_max)),
        full(c.full_precision) {}

  const TruncConfig* ic() const { return full ? nullptr : &iter; }
  const TruncConfig* sc() const { return full ? nullptr : &sum; }
};

// x as the wire carries it: what every product stream must be built from so
// the measured quotient is an exact Rayleigh quotient of one vector.
std::vector<double> held_broadcast(const std::vector<double>& x, const TruncConfig* cfg) {
  if (!cfg) return x;
  std::vector<double> t(x.size());
  for (size_t v = 0; v < x.size(); ++v) t[v] = truncate(x[v], *cfg);
  return t;
}

void log_rayleigh(SpectralDiagnostics* d, int level, int instance, double shift, double value) {
  if (d) d->rayleigh_log.push_back({level, instance, shift, value});
}

// Restart bookkeeping for one cohort of power-iteration instances.
struct Cohort {
  int n;
  std::uint64_t seed;
  int level;
  int max_waves;
  std::vector<std::vector<double>> x;
  std::vector<int> wave;
  std::vector<char> alive;
  int restarts = 0;

  Cohort(int n_, long r, int level_, std::uint64_t seed_, int max_waves_)
      : n(n_), seed(seed_), level(level_), max_waves(max_waves_) {
    x.resize(r);
    wave.assign(r, 0);
    alive.assign(r, 1);
    for (long i = 0; i < r; ++i) x[i] = sample_start_vector(n, instance_seed(seed, level, (int)i, 0));
  }

  // Draws the next wave's start vector, or retires the instance for good.
  bool revive(int r) {
    if (wave[r] >= max_waves) {
      alive[r] = 0;
      x[r].assign(n, 0.0);
      return false;
    }
    ++wave[r];
    ++restarts;
    x[r] = sample_start_vector(n, instance_seed(seed, level, r, wave[r]));
    return true;
  }

  std::vector<int> alive_ids() const {
    std::vector<int> ids;
    for (size_t r = 0; r < alive.size(); ++r)
      if (alive[r]) ids.push_back((int)r);
    return ids;
  }
};

// Subtree minimum of (vertex id with x != 0) convergecast up the tree, then
// the sign at that vertex broadcast back down; fixes the reported vector's
// orientation without revealing anything wider than an id per message.
struct FirstSignProgram : VertexProgram {
  const Graph* g;
  const AggregationTree* t;
  int idw;
  std::vector<int> cand, csign, kids_left, down_sign;
  std::vector<char> fired, relay_pending;
  bool root_done = false;
  int final_sign = 1;

  FirstSignProgram(const Graph& graph, const AggregationTree& tree, const std::vector<double>& x)
      : g(&graph), t(&tree) {
    int n = graph.n();
    idw = std::max(1, ceil_log2((long)n + 1));
    cand.assign(n, n);
    csign.assign(n, 1);
    for (int v = 0; v < n; ++v)
      if (x[v] != 0.0) {
        cand[v] = v;
        csign[v] = x[v] > 0.0 ? 1 : -1;
      }
    kids_left.resize(n);
    for (int v = 0; v < n; ++v) kids_left[v] = (int)tree.children[v].size();
    down_sign.assign(n, 1);
    fired.assign(n, 0);
    relay_pending.assign(n, 0);
  }

  Message send(int v, long) override {
    Message m;
    bool up = v != t->root && !fired[v] && kids_left[v] == 0;
    bool down = false;
    int dsign = 1;
    if (v == t->root) {
      if (!root_done && kids_left[v] == 0) {
        root_done = true;
        final_sign = csign[v];
        down = true;
        dsign = final_sign;
      }
    } else if (relay_pending[v]) {
      relay_pending[v] = 0;
      down = true;
      dsign = down_sign[v];
    }
    if (!up && !down) return m;
    m.put_bits((std::uint64_t)(up ? 1 : 0) | (down ? 2 : 0), 2);
    if (up) {
      fired[v] = 1;
      m.put_bits((std::uint64_t)cand[v], idw);
      m.put_bits(csign[v] > 0 ? 1 : 0, 1);
    }
    if (down) m.put_bits(dsign > 0 ? 1 : 0, 1);
    return m;
  }

  void receive(int v, long, const std::vector<const Message*>& inbox) override {
    const auto& nbs = g->neighbors(v);
    for (size_t i = 0; i < inbox.size(); ++i) {
      const Message* m = inbox[i];
      if (m->empty()) continue;
      std::uint64_t flags = m->bits(0);
      int slot = 1;
      if (flags & 1) {
        if (t->parent[nbs[i].to] == v) {
          int id = (int)m->bits(slot);
          int sgn = m->bits(slot + 1) ? 1 : -1;
          if (id < cand[v]) {
            cand[v] = id;
            csign[v] = sgn;
          }
          --kids_left[v];
        }
        slot += 2;
      }
      if ((flags & 2) && t->parent[v] == nbs[i].to) {
        down_sign[v] = m->bits(slot) ? 1 : -1;
        if (!t->children[v].empty()) relay_pending[v] = 1;
      }
    }
  }
};

// Flips x so its first nonzero entry is positive; charges ~2*height rounds.
void fix_sign(Engine& e, const AggregationTree& t, std::vector<double>& x) {
  FirstSignProgram p(e.graph(), t, x);
  e.run_rounds(p, 2L * std::max(1, t.height));
  if (p.final_sign < 0)
    for (double& v : x) v = -v;
}

// Relative weight along sqrt(deg) too small to iterate on; anything below is
// truncation debris rather than signal.
bool degenerate(double proj2, double n2) {
  return !(n2 > 0.0) || !std::isfinite(n2) || !(proj2 > n2 * 1e-28);
}

}  // namespace

int ceil_log2(long n) {
  int lg = 0;
  while ((1L << lg) < n) ++lg;
  return lg;
}

int default_iter_bits(int n) { return std::clamp(2 * ceil_log2(n) + 8, 4, 51); }

int sum_bits(const SpectralConfig& c, int n) {
  long budget = c.budget_bits > 0 ? c.budget_bits : default_budget_bits(n);
  int eb = TruncConfig::make(4, c.t_max).exponent_bits;
  // Two reals plus the two flag bits per aggregation message must fit:
  // 2 * (b + eb + 1) + 2 <= budget.
  long raw = (budget - 2) / 2 - eb - 1;
  long lo = iter_width(c, n);
  return (int)std::clamp(raw, lo, 51L);
}

long instance_count(const SpectralConfig& c, int n) {
  return capped_ceil(c.c2 * std::log((double)n), std::numeric_limits<long>::max() / 4);
}

long lambda_n_iterations(const SpectralConfig& c, int n) {
  return capped_ceil(c.c1 * std::log((double)n) / c.eps, c.t_max);
}

long lambda_2_iterations(const SpectralConfig& c, int n) {
  return capped_ceil(c.c1 * std::log((double)n) / (c.eps / 2.0), c.t_max);
}

long cascade_iterations(const SpectralConfig& c, int n, int k) {
  double delta = c.eps * c.eps * c.eps / (20.0 * k);
  return capped_ceil(c.c1 * std::log((double)n) / delta, c.t_max);
}

long probe_rounds(const SpectralConfig& c, int n, int k) {
  return capped_ceil(c.c3 * k * std::log((double)n) / c.eps,
                     std::numeric_limits<long>::max() / 4);
}

long projection_period(const SpectralConfig& c, int n) {
  return capped_ceil(c.c4 * std::log((double)n), std::numeric_limits<long>::max() / 4);
}

std::uint64_t instance_seed(std::uint64_t seed, int level, int instance, int wave) {
  std::uint64_t s = mix_bits(seed, (std::uint64_t)level);
  s = mix_bits(s, (std::uint64_t)instance);
  return mix_bits(s, (std::uint64_t)wave);
}

std::vector<double> sample_start_vector(int n, std::uint64_t seed) {
  std::vector<double> x(n);
  for (int v = 0; v < n; ++v) x[v] = (mix_bits(seed, (std::uint64_t)v) & 1) ? 1.0 : -1.0;
  return x;
}

double rayleigh(Engine& e, const AggregationTree& t, const std::vector<double>& x,
                const TruncConfig* sum_cfg) {
  std::vector<double> xt = held_broadcast(x, sum_cfg);
  std::vector<double> y = matvec_round(e, MatKind::MTwoMinusL, x, sum_cfg);
  int n = e.graph().n();
  std::vector<std::vector<double>> streams(2, std::vector<double>(n));
  for (int v = 0; v < n; ++v) {
    streams[0][v] = xt[v] * y[v];
    streams[1][v] = xt[v] * xt[v];
  }
  std::vector<double> tot = pipelined_sums(e, t, streams, sum_cfg);
  if (!(tot[1] > 0.0) || !std::isfinite(tot[0] / tot[1]))
    throw NumericError("rayleigh quotient of a vanished vector");
  return tot[0] / tot[1];
}

EigenEstimate estimate_lambda_n(const Graph& g, const SpectralConfig& cfg,
                                SpectralDiagnostics* diag) {
  validate(cfg);
  int n = g.n();
  if (n < 2) throw InvalidArgumentError("estimator needs at least two vertices");
  require_positive_degrees(g);

  Engine e(g, {cfg.budget_bits, cfg.max_rounds});
  WidthSet w(cfg, n);
  AggregationTree tree = bfs_tree(e, 0);
  long T = lambda_n_iterations(cfg, n);
  long R = instance_count(cfg, n);

  Cohort co(n, R, 0, cfg.seed, cfg.max_restart_waves);
  double best = -std::numeric_limits<double>::infinity();
  int winner = -1;
  std::vector<double> best_vec;

  std::vector<int> pend(R);
  for (long r = 0; r < R; ++r) pend[r] = (int)r;
  while (!pend.empty()) {
    // Halving every step keeps iterate magnitudes inside the exponent range
    // (eigenvalues of L/2 lie in [0, 1]); Rayleigh quotients ignore scale.
    for (long t = 0; t < T; ++t)
      for (int r : pend) {
        std::vector<double> y = matvec_round(e, MatKind::Laplacian, co.x[r], w.ic());
        for (int v = 0; v < n; ++v) co.x[r][v] = 0.5 * y[v];
      }

    std::vector<std::vector<double>> streams;
    streams.reserve(2 * pend.size());
    for (int r : pend) {
      std::vector<double> xt = held_broadcast(co.x[r], w.sc());
      std::vector<double> y = matvec_round(e, MatKind::Laplacian, co.x[r], w.sc());
      std::vector<double> num(n), den(n);
      for (int v = 0; v < n; ++v) {
        num[v] = xt[v] * y[v];
        den[v] = xt[v] * xt[v];
      }
      streams.push_back(std::move(num));
      streams.push_back(std::move(den));
    }
    std::vector<double> tot = pipelined_sums(e, tree, streams, w.sc());

    std::vector<int> next;
    for (size_t i = 0; i < pend.size(); ++i) {
      int r = pend[i];
      double num = tot[2 * i], den = tot[2 * i + 1];
      if (!(den > 0.0) || !std::isfinite(num / den)) {
        if (co.revive(r)) next.push_back(r);
        continue;
      }
      double val = num / den;
      log_rayleigh(diag, 0, r, 0.0, val);
      if (val > best) {
        best = val;
        winner = r;
        double inv = 1.0 / std::sqrt(den);
        best_vec = co.x[r];
        for (double& xv : best_vec) xv *= inv;
      }
    }
    pend.swap(next);
  }

  if (winner < 0) throw RestartExhaustedError("every top-eigenvalue instance vanished");
  EigenEstimate out;
  out.value = std::clamp(best, 0.0, 2.0);
  out.which = "lambda_n";
  out.index = n;
  out.vector = std::move(best_vec);
  out.stats = e.stats();
  out.instance_id = winner;
  out.restarts = co.restarts;
  return out;
}

EigenEstimate estimate_lambda_2(const Graph& g, const SpectralConfig& cfg,
                                SpectralDiagnostics* diag) {
  validate(cfg);
  int n = g.n();
  if (n < 2) throw InvalidArgumentError("estimator needs at least two vertices");
  require_positive_degrees(g);

  Engine e(g, {cfg.budget_bits, cfg.max_rounds});
  EigenEstimate out;
  out.which = "lambda_2";
  out.index = 2;

  if (diameter_probe(e, probe_rounds(cfg, n, 1)) == ProbeVerdict::Exceeds) {
    out.value = 2.0 * cfg.eps;
    out.early_exit = true;
    out.stats = e.stats();
    return out;
  }

  WidthSet w(cfg, n);
  AggregationTree tree = bfs_tree(e, 0);
  long T = lambda_2_iterations(cfg, n);
  long R = instance_count(cfg, n);
  long P = projection_period(cfg, n);
  std::vector<double> sqd = sqrt_degrees(g);

  Cohort co(n, R, 1, cfg.seed, cfg.max_restart_waves);
  std::vector<char> projected_once(R, 0);

  // One batch carries the degree sum and every instance's sqrt(deg)
  // component; each instance then projects and normalizes locally
  // (||x0||^2 = n is known, the entries are all +-1).
  std::vector<std::vector<double>> streams;
  streams.reserve(R + 1);
  {
    std::vector<double> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
    streams.push_back(std::move(deg));
  }
  for (long r = 0; r < R; ++r) {
    std::vector<double> s(n);
    for (int v = 0; v < n; ++v) s[v] = co.x[r][v] * sqd[v];
    streams.push_back(std::move(s));
  }
  std::vector<double> tot = pipelined_sums(e, tree, streams, w.sc());
  double two_w = tot[0];
  if (!(two_w > 0.0)) throw NumericError("total degree vanished in aggregation");

  auto project_normalize = [&](int r, double s, double n2) {
    double coef = s / two_w;
    double inv = 1.0 / std::sqrt(n2 - s * s / two_w);
    for (int v = 0; v < n; ++v) co.x[r][v] = (co.x[r][v] - coef * sqd[v]) * inv;
    projected_once[r] = 1;
  };

  for (long r = 0; r < R; ++r) {
    double s = tot[1 + r];
    double p2 = (double)n - s * s / two_w;
    if (degenerate(p2, (double)n)) {
      if (co.revive(r)) {
        double inv = 1.0 / std::sqrt((double)n);
        for (int v = 0; v < n; ++v) co.x[r][v] *= inv;
        projected_once[r] = 0;
      }
    } else {
      project_normalize(r, s, (double)n);
    }
  }

  auto checkpoint = [&](bool allow_revive) {
    std::vector<int> ids = co.alive_ids();
    if (ids.empty()) return;
    std::vector<std::vector<double>> st;
    st.reserve(2 * ids.size());
    for (int r : ids) {
      std::vector<double> a(n), b(n);
      for (int v = 0; v < n; ++v) {
        a[v] = co.x[r][v] * sqd[v];
        b[v] = co.x[r][v] * co.x[r][v];
      }
      st.push_back(std::move(a));
      st.push_back(std::move(b));
    }
    std::vector<double> res = pipelined_sums(e, tree, st, w.sc());
    for (size_t i = 0; i < ids.size(); ++i) {
      int r = ids[i];
      double s = res[2 * i], n2 = res[2 * i + 1];
      double p2 = n2 - s * s / two_w;
      if (degenerate(p2, n2) || !std::isfinite(s)) {
        if (allow_revive) {
          if (co.revive(r)) {
            double inv = 1.0 / std::sqrt((double)n);
            for (int v = 0; v < n; ++v) co.x[r][v] *= inv;
            projected_once[r] = 0;
          }
        } else {
          co.alive[r] = 0;
        }
        continue;
      }
      if (projected_once[r] && diag)
        diag->projection_deltas.push_back(std::abs(s) / (std::sqrt(two_w) * std::sqrt(n2)));
      project_normalize(r, s, n2);
    }
  };

  for (long t = 1; t <= T; ++t) {
    std::vector<int> ids = co.alive_ids();
    if (ids.empty()) break;
    for (int r : ids) co.x[r] = matvec_round(e, MatKind::MTwoMinusL, co.x[r], w.ic());
    if (P > 0 && t % P == 0 && t != T) checkpoint(true);
  }

  // The measurement projection: degenerate instances are dropped rather than
  // revived, a fresh vector measured with zero iterations says nothing.
  checkpoint(false);
  std::vector<int> ids = co.alive_ids();
  if (ids.empty())
    throw RestartExhaustedError("every spectral-gap instance degenerated; the graph's "
                                "gap is at the top of the spectrum");

  std::vector<std::vector<double>> fin;
  fin.reserve(2 * ids.size());
  std::vector<std::vector<double>> ys(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    int r = ids[i];
    std::vector<double> xt = held_broadcast(co.x[r], w.sc());
    ys[i] = matvec_round(e, MatKind::MTwoMinusL, co.x[r], w.sc());
    std::vector<double> num(n), den(n);
    for (int v = 0; v < n; ++v) {
      num[v] = xt[v] * ys[i][v];
      den[v] = xt[v] * xt[v];
    }
    fin.push_back(std::move(num));
    fin.push_back(std::move(den));
  }
  std::vector<double> res = pipelined_sums(e, tree, fin, w.sc());

  double best = -std::numeric_limits<double>::infinity();
  int winner = -1;
  double winner_den = 0.0;
  for (size_t i = 0; i < ids.size(); ++i) {
    double num = res[2 * i], den = res[2 * i + 1];
    if (!(den > 0.0) || !std::isfinite(num / den)) continue;
    double val = num / den;
    log_rayleigh(diag, 1, ids[i], 0.0, val);
    if (val > best) {
      best = val;
      winner = ids[i];
      winner_den = den;
    }
  }
  if (winner < 0) throw RestartExhaustedError("no spectral-gap instance survived measurement");

  out.value = std::clamp(2.0 - best, 0.0, 2.0);
  out.vector = co.x[winner];
  double inv = 1.0 / std::sqrt(winner_den);
  for (double& xv : out.vector) xv *= inv;
  out.stats = e.stats();
  out.instance_id = winner;
  out.restarts = co.restarts;
  return out;
}

std::vector<EigenEstimate> estimate_smallest_k(const Graph& g, int k, const SpectralConfig& cfg,
                                               SpectralDiagnostics* diag) {
  validate(cfg);
  int n = g.n();
  if (n < 2) throw InvalidArgumentError("estimator needs at least two vertices");
  if (k < 1) throw InvalidArgumentError("k must be at least 1");
  if (k > n) throw InvalidArgumentError("k exceeds the vertex count");
  require_positive_degrees(g);

  Engine e(g, {cfg.budget_bits, cfg.max_rounds});
  std::vector<EigenEstimate> out;

  if (diameter_probe(e, probe_rounds(cfg, n, k)) == ProbeVerdict::Exceeds) {
    for (int i = 1; i <= k; ++i) {
      EigenEstimate est;
      est.value = cfg.eps;
      est.which = "lambda_" + std::to_string(i);
      est.index = i;
      est.early_exit = true;
      est.stats = e.stats();
      out.push_back(std::move(est));
    }
    return out;
  }

  WidthSet w(cfg, n);
  AggregationTree tree = bfs_tree(e, 0);
  long R = instance_count(cfg, n);
  double shift = cfg.eps;
  std::vector<double> sqd = sqrt_degrees(g);

  // Level 1 is free: the null direction of L is sqrt(deg) and only its
  // normalization 2W = sum of degrees needs the wire.
  std::vector<double> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
  double two_w = convergecast_sum(e, tree, deg, w.sc());
  if (!(two_w > 0.0)) throw NumericError("total degree vanished in aggregation");
  std::vector<double> vhat(n);
  double inv_root = 1.0 / std::sqrt(two_w);
  for (int v = 0; v < n; ++v) vhat[v] = sqd[v] * inv_root;

  std::vector<double> mu = {2.0};
  std::vector<std::vector<double>> stored = {vhat};
  {
    EigenEstimate est;
    est.value = 0.0;
    est.which = "lambda_1";
    est.index = 1;
    est.vector = vhat;
    est.stats = e.stats();
    out.push_back(std::move(est));
  }

  for (int j = 2; j <= k; ++j) {
    long T = cascade_iterations(cfg, n, k);
    Cohort co(n, R, j, cfg.seed, cfg.max_restart_waves);

    for (long t = 1; t <= T; ++t) {
      std::vector<int> ids = co.alive_ids();
      if (ids.empty()) break;

      // Batch: deflation coefficients against every stored vector plus the
      // squared norm, per instance, in instance-major order.
      std::vector<std::vector<double>> st;
      st.reserve(ids.size() * (size_t)j);
      for (int r : ids) {
        for (int i = 0; i < j - 1; ++i) {
          std::vector<double> c(n);
          for (int v = 0; v < n; ++v) c[v] = co.x[r][v] * stored[i][v];
          st.push_back(std::move(c));
        }
        std::vector<double> n2(n);
        for (int v = 0; v < n; ++v) n2[v] = co.x[r][v] * co.x[r][v];
        st.push_back(std::move(n2));
      }
      std::vector<double> res = pipelined_sums(e, tree, st, w.sc());

      std::vector<int> step;
      std::vector<std::vector<double>> coef;
      std::vector<double> norms;
      for (size_t i = 0; i < ids.size(); ++i) {
        int r = ids[i];
        const double* row = res.data() + i * (size_t)j;
        double n2 = row[j - 1];
        double span = 0.0;
        for (int d = 0; d < j - 1; ++d) span += row[d] * row[d];
        // Dead if the norm vanished or nothing is left outside the stored
        // span; the deflated operator cannot regrow a vanished residual.
        if (!(n2 > 0.0) || !std::isfinite(n2) || n2 < 1e-290 ||
            !(n2 - span > n2 * 1e-28)) {
          // Replacement skips one multiply; its own coefficients arrive with
          // the next batch.
          co.revive(r);
          continue;
        }
        step.push_back(r);
        coef.emplace_back(row, row + (j - 1));
        norms.push_back(n2);
      }

      std::vector<std::vector<double>> ys(step.size());
      for (size_t i = 0; i < step.size(); ++i)
        ys[i] = matvec_round(e, MatKind::MTwoMinusL, co.x[step[i]], w.ic());
      for (size_t i = 0; i < step.size(); ++i) {
        int r = step[i];
        double inv = 1.0 / std::sqrt(norms[i]);
        for (int v = 0; v < n; ++v) {
          double q = ys[i][v] + shift * co.x[r][v];
          for (int d = 0; d < j - 1; ++d) q -= mu[d] * coef[i][d] * stored[d][v];
          co.x[r][v] = q * inv;
        }
      }
    }

    std::vector<int> ids = co.alive_ids();
    if (ids.empty())
      throw RestartExhaustedError("deflation level " + std::to_string(j) +
                                  " exhausted its restarts");

    // Measurement: coefficients first, then one multiply at the wide width,
    // then the quotient pieces; all over the same broadcast-held vector.
    std::vector<std::vector<double>> stc;
    stc.reserve(ids.size() * (size_t)(j - 1));
    for (int r : ids)
      for (int i = 0; i < j - 1; ++i) {
        std::vector<double> c(n);
        for (int v = 0; v < n; ++v) c[v] = co.x[r][v] * stored[i][v];
        stc.push_back(std::move(c));
      }
    std::vector<double> cres;
    if (j > 1 && !stc.empty()) cres = pipelined_sums(e, tree, stc, w.sc());

    std::vector<std::vector<double>> stq;
    stq.reserve(2 * ids.size());
    for (int r : ids) {
      std::vector<double> xt = held_broadcast(co.x[r], w.sc());
      std::vector<double> y = matvec_round(e, MatKind::MTwoMinusL, co.x[r], w.sc());
      std::vector<double> num(n), den(n);
      for (int v = 0; v < n; ++v) {
        num[v] = xt[v] * y[v];
        den[v] = xt[v] * xt[v];
      }
      stq.push_back(std::move(num));
      stq.push_back(std::move(den));
    }
    std::vector<double> qres = pipelined_sums(e, tree, stq, w.sc());

    double best = -std::numeric_limits<double>::infinity();
    int winner = -1;
    double winner_den = 0.0;
    for (size_t i = 0; i < ids.size(); ++i) {
      double num = qres[2 * i], den = qres[2 * i + 1];
      if (!(den > 0.0) || !std::isfinite(num / den)) continue;
      double defl = 0.0, span = 0.0;
      for (int d = 0; d < j - 1; ++d) {
        double c = cres[i * (size_t)(j - 1) + d];
        defl += mu[d] * c * c;
        span += c * c;
      }
      double val = (num - defl + shift * den) / den;
      log_rayleigh(diag, j, ids[i], shift, val);
      // A revived instance that was never projected can sit entirely inside
      // the stored span; it cannot be re-orthonormalized, so it cannot win.
      if (1.0 - span / den <= 1e-9) continue;
      if (val > best) {
        best = val;
        winner = ids[i];
        winner_den = den;
      }
    }
    if (winner < 0)
      throw RestartExhaustedError("deflation level " + std::to_string(j) +
                                  " lost every instance at measurement");

    double mu_raw = best - shift;
    bool low = mu_raw < cfg.eps;

    std::vector<double> vn = co.x[winner];
    double invw = 1.0 / std::sqrt(winner_den);
    for (double& xv : vn) xv *= invw;

    // Stored vectors must be an orthonormal family or later levels deflate
    // the wrong operator; re-orthonormalize before storing.
    std::vector<std::vector<double>> stg;
    stg.reserve(j - 1);
    for (int i = 0; i < j - 1; ++i) {
      std::vector<double> c(n);
      for (int v = 0; v < n; ++v) c[v] = vn[v] * stored[i][v];
      stg.push_back(std::move(c));
    }
    std::vector<double> gres = pipelined_sums(e, tree, stg, w.sc());
    double drop = 0.0;
    for (int i = 0; i < j - 1; ++i) drop += gres[i] * gres[i];
    double u2 = 1.0 - drop;
    if (!(u2 > 1e-12))
      throw NumericError("level " + std::to_string(j) +
                         " winner collapsed under re-orthonormalization");
    double invu = 1.0 / std::sqrt(u2);
    for (int v = 0; v < n; ++v) {
      double q = vn[v];
      for (int i = 0; i < j - 1; ++i) q -= gres[i] * stored[i][v];
      vn[v] = q * invu;
    }
    fix_sign(e, tree, vn);

    // The deflation weight for later levels is re-measured on the stored
    // vector itself; the shifted raw maximum only prices this level.
    double mu_store;
    {
      std::vector<double> xt = held_broadcast(vn, w.sc());
      std::vector<double> y = matvec_round(e, MatKind::MTwoMinusL, vn, w.sc());
      std::vector<std::vector<double>> sm(2, std::vector<double>(n));
      for (int v = 0; v < n; ++v) {
        sm[0][v] = xt[v] * y[v];
        sm[1][v] = xt[v] * xt[v];
      }
      std::vector<double> mres = pipelined_sums(e, tree, sm, w.sc());
      if (!(mres[1] > 0.0) || !std::isfinite(mres[0] / mres[1]))
        throw NumericError("stored-vector weight measurement vanished");
      double val = mres[0] / mres[1];
      log_rayleigh(diag, j, winner, 0.0, val);
      mu_store = std::clamp(val, 0.0, 2.0);
    }
    mu.push_back(mu_store);
    stored.push_back(vn);

    EigenEstimate est;
    est.value = std::clamp(2.0 - mu_raw, 0.0, 2.0);
    est.which = "lambda_" + std::to_string(j);
    est.index = j;
    est.vector = vn;
    est.stats = e.stats();
    est.instance_id = winner;
    est.restarts = co.restarts;
    est.low_mu = low;
    out.push_back(std::move(est));
  }

  if (diag) {
    diag->stored_mu = mu;
    diag->stored_vectors = stored;
  }
  return out;
}

}  // namespace cspec
