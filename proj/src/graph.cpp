#include "cspec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <tuple>

namespace cspec {

Graph::Graph(int n, const std::vector<std::tuple<int, int, double>>& edges, bool oracle_mode)
    : n_(n), m_(0), oracle_mode_(oracle_mode), connected_(false) {
  if (n < 1) throw InvalidArgumentError("graph needs at least one vertex");
  adj_.assign(n, {});
  degree_.assign(n, 0.0);
  for (const auto& [u, v, w] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ParseError("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
    if (u == v) throw ParseError("self-loop at vertex " + std::to_string(u));
    if (!(w > 0.0) || !std::isfinite(w))
      throw ParseError("edge weight must be positive and finite");
    adj_[u].push_back({v, w});
    adj_[v].push_back({u, w});
    degree_[u] += w;
    degree_[v] += w;
    ++m_;
  }
  for (int v = 0; v < n; ++v) {
    auto& a = adj_[v];
    std::sort(a.begin(), a.end(), [](const Neighbor& x, const Neighbor& y) { return x.to < y.to; });
    for (size_t i = 1; i < a.size(); ++i)
      if (a[i].to == a[i - 1].to)
        throw ParseError("duplicate edge " + std::to_string(v) + "-" + std::to_string(a[i].to));
  }
  total_degree_ = 0.0;
  for (double d : degree_) total_degree_ += d;

  // connectivity via BFS from 0
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const auto& nb : adj_[v])
      if (!seen[nb.to]) {
        seen[nb.to] = 1;
        ++reached;
        q.push(nb.to);
      }
  }
  connected_ = (reached == n);
  if (!oracle_mode_) {
    if (!connected_) throw DisconnectedError("graph is disconnected (use oracle mode to allow)");
    for (int v = 0; v < n; ++v)
      if (degree_[v] <= 0.0)
        throw DisconnectedError("vertex " + std::to_string(v) + " has zero degree");
  }
}

Graph Graph::parse(std::string_view text, bool oracle_mode) {
  std::vector<std::tuple<int, int, double>> edges;
  int n = -1, m = -1;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::string s(line);
    std::istringstream iss(s);
    if (n < 0) {
      if (!(iss >> n >> m)) {
        std::string tok;
        std::istringstream probe(s);
        if (probe >> tok) throw ParseError("expected header \"n m\"", lineno);
        n = -1;  // blank/comment line before header
        continue;
      }
      if (n < 1 || m < 0) throw ParseError("invalid header values", lineno);
      continue;
    }
    int u, v;
    if (!(iss >> u >> v)) {
      std::string tok;
      std::istringstream probe(s);
      if (probe >> tok) throw ParseError("expected edge \"u v [w]\"", lineno);
      continue;
    }
    double w = 1.0;
    if (iss >> w) {
      // explicit weight
    } else {
      w = 1.0;
    }
    std::string trailing;
    // (extra tokens after the weight are tolerated as long as numeric parse succeeded)
    try {
      edges.emplace_back(u, v, w);
    } catch (...) {
      throw ParseError("bad edge", lineno);
    }
  }
  if (n < 0) throw ParseError("missing header \"n m\"");
  if ((int)edges.size() != m)
    throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  return Graph(n, edges, oracle_mode);
}

std::string Graph::write() const {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d %d\n", n_, m_);
  out += buf;
  for (int u = 0; u < n_; ++u)
    for (const auto& nb : adj_[u])
      if (nb.to > u) {
        std::snprintf(buf, sizeof buf, "%d %d %.10g\n", u, nb.to, nb.weight);
        out += buf;
      }
  return out;
}

double Graph::edge_weight(int u, int v) const {
  const auto& a = adj_[u];
  auto it = std::lower_bound(a.begin(), a.end(), v,
                             [](const Neighbor& nb, int target) { return nb.to < target; });
  if (it != a.end() && it->to == v) return it->weight;
  return 0.0;
}

static std::vector<char> membership(const Graph& g, const CutSet& s) {
  std::vector<char> in(g.n(), 0);
  for (int v : s.members) {
    if (v < 0 || v >= g.n()) throw InvalidArgumentError("cut member out of range");
    if (in[v]) throw InvalidArgumentError("duplicate cut member");
    in[v] = 1;
  }
  return in;
}

double volume(const Graph& g, const CutSet& s) {
  double vol = 0.0;
  auto in = membership(g, s);
  for (int v = 0; v < g.n(); ++v)
    if (in[v]) vol += g.degree(v);
  return vol;
}

static double cut_weight(const Graph& g, const std::vector<char>& in) {
  double cut = 0.0;
  for (int u = 0; u < g.n(); ++u)
    if (in[u])
      for (const auto& nb : g.neighbors(u))
        if (!in[nb.to]) cut += nb.weight;
  return cut;
}

double sparsity(const Graph& g, const CutSet& s) {
  auto in = membership(g, s);
  if (s.members.empty() || (int)s.members.size() == g.n())
    throw InvalidArgumentError("sparsity needs a proper non-empty subset");
  double vol = 0.0;
  for (int v = 0; v < g.n(); ++v)
    if (in[v]) vol += g.degree(v);
  double volc = g.total_degree() - vol;
  return cut_weight(g, in) / std::min(vol, volc);
}

double part_sparsity(const Graph& g, const CutSet& s) {
  auto in = membership(g, s);
  if (s.members.empty()) throw InvalidArgumentError("part is empty");
  double vol = 0.0;
  for (int v : s.members) vol += g.degree(v);
  if (vol <= 0.0) throw NumericError("part has zero volume");
  return cut_weight(g, in) / vol;
}

std::vector<double> apply_m(const Graph& g, const std::vector<double>& x) {
  if ((int)x.size() != g.n()) throw InvalidArgumentError("vector length mismatch");
  std::vector<double> y(g.n());
  for (int v = 0; v < g.n(); ++v) {
    double acc = x[v];
    double dv = g.degree(v);
    for (const auto& nb : g.neighbors(v))
      acc += nb.weight / std::sqrt(dv * g.degree(nb.to)) * x[nb.to];
    y[v] = acc;
  }
  return y;
}

std::vector<double> apply_laplacian(const Graph& g, const std::vector<double>& x) {
  if ((int)x.size() != g.n()) throw InvalidArgumentError("vector length mismatch");
  std::vector<double> y(g.n());
  for (int v = 0; v < g.n(); ++v) {
    double acc = x[v];
    double dv = g.degree(v);
    for (const auto& nb : g.neighbors(v))
      acc -= nb.weight / std::sqrt(dv * g.degree(nb.to)) * x[nb.to];
    y[v] = acc;
  }
  return y;
}

std::vector<double> sqrt_degrees(const Graph& g) {
  std::vector<double> s(g.n());
  for (int v = 0; v < g.n(); ++v) {
    if (g.degree(v) <= 0.0) throw NumericError("vertex " + std::to_string(v) + " has zero degree");
    s[v] = std::sqrt(g.degree(v));
  }
  return s;
}

static std::vector<int> bfs_depths(const Graph& g, int root) {
  std::vector<int> depth(g.n(), -1);
  std::queue<int> q;
  depth[root] = 0;
  q.push(root);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const auto& nb : g.neighbors(v))
      if (depth[nb.to] < 0) {
        depth[nb.to] = depth[v] + 1;
        q.push(nb.to);
      }
  }
  return depth;
}

int eccentricity(const Graph& g, int v) {
  auto d = bfs_depths(g, v);
  int ecc = 0;
  for (int x : d) {
    if (x < 0) throw DisconnectedError("eccentricity undefined on a disconnected graph");
    ecc = std::max(ecc, x);
  }
  return ecc;
}

int hop_diameter(const Graph& g) {
  int d = 0;
  for (int v = 0; v < g.n(); ++v) d = std::max(d, eccentricity(g, v));
  return d;
}

}  // namespace cspec
