#include "cspec/engine.hpp"

#include <cmath>
#include <deque>
#include <string>

namespace cspec {

void Message::put_real(double x, const TruncConfig& cfg) {
  TruncatedReal t = encode(x, cfg);
  slots_.push_back({true, t.decode(), 0, t.bit_width(cfg)});
  width_ += slots_.back().width;
  ++reals_;
}

void Message::put_full(double x) {
  slots_.push_back({true, x, 0, 64});
  width_ += 64;
  ++reals_;
}

void Message::put_bits(std::uint64_t bits, int width) {
  if (width < 1 || width > 64) throw InvalidArgumentError("bit field width must be in [1, 64]");
  slots_.push_back({false, 0.0, bits, width});
  width_ += width;
}

double Message::real(int i) const {
  int seen = 0;
  for (const auto& s : slots_)
    if (s.is_real && seen++ == i) return s.value;
  throw InvalidArgumentError("no real slot " + std::to_string(i));
}

std::uint64_t Message::bits(int i) const {
  int seen = 0;
  for (const auto& s : slots_)
    if (!s.is_real && seen++ == i) return s.raw;
  throw InvalidArgumentError("no bit-field slot " + std::to_string(i));
}

long default_budget_bits(int n) {
  int lg = 0;
  while ((1L << lg) < n) ++lg;
  return 32L * std::max(1, lg);
}

Engine::Engine(const Graph& g, EngineConfig cfg) : g_(&g), cfg_(cfg) {
  budget_ = cfg.budget_bits > 0 ? cfg.budget_bits : default_budget_bits(g.n());
  outbox_.resize(g.n());
  inbox_.resize(g.n());
  for (int v = 0; v < g.n(); ++v) {
    inbox_[v].reserve(g.neighbors(v).size());
    for (const auto& nb : g.neighbors(v)) inbox_[v].push_back(&outbox_[nb.to]);
  }
}

void Engine::one_round(VertexProgram& p) {
  if (stats_.rounds >= cfg_.max_rounds)
    throw MaxRoundsError("round limit " + std::to_string(cfg_.max_rounds) + " reached");
  long round = stats_.rounds;
  for (int v = 0; v < g_->n(); ++v) outbox_[v] = p.send(v, round);
  for (int v = 0; v < g_->n(); ++v) {
    long w = outbox_[v].width_bits();
    if (w > stats_.max_message_bits) stats_.max_message_bits = w;
    stats_.total_bits += (long long)w * (long long)g_->neighbors(v).size();
    if (w > budget_) {
      ++stats_.violations;
      ++stats_.rounds;
      throw BudgetViolationError(v, stats_.rounds, w, budget_);
    }
  }
  ++stats_.rounds;
  for (int v = 0; v < g_->n(); ++v) p.receive(v, round, inbox_[v]);
}

long Engine::run(VertexProgram& p, const std::function<bool()>& stop) {
  long executed = 0;
  while (!stop()) {
    one_round(p);
    ++executed;
  }
  return executed;
}

void Engine::run_rounds(VertexProgram& p, long rounds) {
  for (long i = 0; i < rounds; ++i) one_round(p);
}

namespace {

// Layered flooding: a vertex claims in the round matching its depth; the
// first claiming neighbor in adjacency order becomes the parent.
struct BfsProgram : VertexProgram {
  const Graph* g;
  std::vector<int> depth, parent;
  int reached = 0;
  long base;  // engine rounds already spent before this program started

  BfsProgram(const Graph& graph, int root, long base_round)
      : g(&graph), depth(graph.n(), -1), parent(graph.n(), -1), base(base_round) {
    depth[root] = 0;
    reached = 1;
  }

  Message send(int v, long round) override {
    Message m;
    if (depth[v] == (int)(round - base)) m.put_bits(1, 1);
    return m;
  }

  void receive(int v, long, const std::vector<const Message*>& inbox) override {
    if (depth[v] >= 0) return;
    const auto& nbs = g->neighbors(v);
    for (size_t i = 0; i < inbox.size(); ++i) {
      if (inbox[i]->empty()) continue;
      parent[v] = nbs[i].to;
      depth[v] = depth[parent[v]] + 1;
      ++reached;
      return;
    }
  }
};

}  // namespace

AggregationTree bfs_tree(Engine& e, int root) {
  const Graph& g = e.graph();
  if (root < 0 || root >= g.n()) throw InvalidArgumentError("root out of range");
  BfsProgram p(g, root, e.stats().rounds);
  int before = p.reached;
  while (p.reached < g.n()) {
    e.run_rounds(p, 1);
    if (p.reached == before) throw DisconnectedError("bfs cannot reach every vertex");
    before = p.reached;
  }
  AggregationTree t;
  t.root = root;
  t.parent = p.parent;
  t.depth = p.depth;
  t.children.resize(g.n());
  for (int v = 0; v < g.n(); ++v) {
    if (p.depth[v] > t.height) t.height = p.depth[v];
    if (p.parent[v] >= 0) t.children[p.parent[v]].push_back(v);
  }
  return t;
}

ProbeVerdict diameter_probe(Engine& e, long threshold) {
  if (threshold < 1) throw InvalidArgumentError("probe threshold must be >= 1");
  BfsProgram p(e.graph(), 0, e.stats().rounds);
  e.run_rounds(p, threshold);
  return p.reached == e.graph().n() ? ProbeVerdict::AtMost : ProbeVerdict::Exceeds;
}

namespace {

// Streams fire bottom-up in index order, one per round per vertex, as soon as
// all children have reported; the root turns each completed sum around and
// the totals ride down the tree. A message carries two flag bits, then at
// most one up-partial and one down-total.
struct PipeProgram : VertexProgram {
  const Graph* g;
  const AggregationTree* t;
  const TruncConfig* cfg;
  int streams;
  std::vector<std::vector<double>> acc, totals;
  std::vector<std::vector<int>> reported;       // per vertex, per stream
  std::vector<std::vector<int>> child_count;    // per vertex, per neighbor slot
  std::vector<int> up_next, down_got;
  std::vector<std::deque<double>> relayq;

  PipeProgram(const Graph& graph, const AggregationTree& tree,
              const std::vector<std::vector<double>>& values, const TruncConfig* c)
      : g(&graph), t(&tree), cfg(c), streams((int)values.size()) {
    int n = graph.n();
    acc.assign(n, std::vector<double>(streams, 0.0));
    totals.assign(n, std::vector<double>(streams, 0.0));
    reported.assign(n, std::vector<int>(streams, 0));
    child_count.assign(n, {});
    for (int v = 0; v < n; ++v) {
      child_count[v].assign(graph.neighbors(v).size(), 0);
      for (int s = 0; s < streams; ++s) acc[v][s] = values[s][v];
    }
    up_next.assign(n, 0);
    down_got.assign(n, 0);
    relayq.resize(n);
  }

  bool stream_complete(int v, int s) const {
    return reported[v][s] == (int)t->children[v].size();
  }

  Message send(int v, long) override {
    Message m;
    bool is_root = v == t->root;
    bool up = !is_root && up_next[v] < streams && stream_complete(v, up_next[v]);
    bool down = false;
    double down_val = 0.0;
    if (is_root) {
      int s = down_got[v];
      if (s < streams && stream_complete(v, s)) {
        down = true;
        down_val = acc[v][s];
      }
    } else if (!relayq[v].empty() && !t->children[v].empty()) {
      down = true;
      down_val = relayq[v].front();
      relayq[v].pop_front();
    } else if (!relayq[v].empty()) {
      relayq[v].pop_front();  // leaf: nothing below to feed
    }
    if (!up && !down) return m;
    m.put_bits((std::uint64_t)(up ? 1 : 0) | (down ? 2 : 0), 2);
    if (up) {
      double p = acc[v][up_next[v]++];
      cfg ? m.put_real(p, *cfg) : m.put_full(p);
    }
    if (down) {
      cfg ? m.put_real(down_val, *cfg) : m.put_full(down_val);
      if (is_root) totals[v][down_got[v]++] = cfg ? encode(down_val, *cfg).decode() : down_val;
    }
    return m;
  }

  void receive(int v, long, const std::vector<const Message*>& inbox) override {
    const auto& nbs = g->neighbors(v);
    for (size_t i = 0; i < inbox.size(); ++i) {
      const Message* m = inbox[i];
      if (m->empty()) continue;
      std::uint64_t flags = m->bits(0);
      int slot = 0;
      if (flags & 1) {
        if (t->parent[nbs[i].to] == v) {
          int s = child_count[v][i]++;
          acc[v][s] += m->real(slot);
          ++reported[v][s];
        }
        ++slot;
      }
      if ((flags & 2) && t->parent[v] == nbs[i].to) {
        int s = down_got[v]++;
        totals[v][s] = m->real(slot);
        relayq[v].push_back(totals[v][s]);
      }
    }
  }
};

}  // namespace

std::vector<double> pipelined_sums(Engine& e, const AggregationTree& t,
                                   const std::vector<std::vector<double>>& values,
                                   const TruncConfig* sum_cfg) {
  int n = e.graph().n();
  if (values.empty()) throw InvalidArgumentError("need at least one stream");
  for (const auto& v : values)
    if ((int)v.size() != n) throw InvalidArgumentError("stream length must equal vertex count");
  PipeProgram p(e.graph(), t, values, sum_cfg);
  long rounds = 2L * t.height + (long)values.size() - 1;
  e.run_rounds(p, rounds);
  for (int v = 0; v < n; ++v)
    if (p.down_got[v] != (int)values.size())
      throw NumericError("aggregation schedule left vertex " + std::to_string(v) + " short");
  return p.totals[t.root];
}

double convergecast_sum(Engine& e, const AggregationTree& t, const std::vector<double>& values,
                        const TruncConfig* sum_cfg) {
  return pipelined_sums(e, t, {values}, sum_cfg)[0];
}

namespace {

struct MatvecProgram : VertexProgram {
  const Graph* g;
  MatKind kind;
  const std::vector<double>* x;
  const TruncConfig* cfg;
  std::vector<double> isd;   // 1/sqrt(deg)
  std::vector<double> sent;  // value actually broadcast (post-truncation)
  std::vector<double> y;

  MatvecProgram(const Graph& graph, MatKind k, const std::vector<double>& vec,
                const TruncConfig* c)
      : g(&graph), kind(k), x(&vec), cfg(c), isd(graph.n()), sent(graph.n(), 0.0),
        y(graph.n(), 0.0) {
    for (int v = 0; v < graph.n(); ++v) isd[v] = 1.0 / std::sqrt(graph.degree(v));
  }

  Message send(int v, long) override {
    Message m;
    if (cfg)
      m.put_real((*x)[v], *cfg);
    else
      m.put_full((*x)[v]);
    sent[v] = m.real(0);
    return m;
  }

  void receive(int v, long, const std::vector<const Message*>& inbox) override {
    const auto& nbs = g->neighbors(v);
    double s = 0.0;
    for (size_t i = 0; i < inbox.size(); ++i)
      s += nbs[i].weight * isd[v] * isd[nbs[i].to] * inbox[i]->real(0);
    y[v] = kind == MatKind::MTwoMinusL ? sent[v] + s : sent[v] - s;
  }
};

}  // namespace

std::vector<double> matvec_round(Engine& e, MatKind kind, const std::vector<double>& x,
                                 const TruncConfig* iter_cfg) {
  if ((int)x.size() != e.graph().n())
    throw InvalidArgumentError("vector length must equal vertex count");
  MatvecProgram p(e.graph(), kind, x, iter_cfg);
  e.run_rounds(p, 1);
  return p.y;
}

}  // namespace cspec
