#include "cspec/generators.hpp"

#include <tuple>

namespace cspec {

using EdgeList = std::vector<std::tuple<int, int, double>>;

static void add_clique(EdgeList& e, int base, int size) {
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j) e.emplace_back(base + i, base + j, 1.0);
}

Graph gen_cycle(int k) {
  if (k < 3) throw InvalidArgumentError("cycle needs k >= 3");
  EdgeList e;
  for (int i = 0; i < k; ++i) e.emplace_back(i, (i + 1) % k, 1.0);
  return Graph(k, e);
}

Graph gen_clique(int l) {
  if (l < 2) throw InvalidArgumentError("clique needs l >= 2");
  EdgeList e;
  add_clique(e, 0, l);
  return Graph(l, e);
}

Graph gen_path(int k) {
  if (k < 2) throw InvalidArgumentError("path needs k >= 2");
  EdgeList e;
  for (int i = 0; i + 1 < k; ++i) e.emplace_back(i, i + 1, 1.0);
  return Graph(k, e);
}

Graph gen_star(int l) {
  if (l < 2) throw InvalidArgumentError("star needs l >= 2 leaves");
  EdgeList e;
  for (int i = 1; i <= l; ++i) e.emplace_back(0, i, 1.0);
  return Graph(l + 1, e);
}

Graph gen_cycle_clique(int k, int l) {
  if (k < 3) throw InvalidArgumentError("cycle part needs k >= 3");
  if (l < 2) throw InvalidArgumentError("clique part needs l >= 2");
  EdgeList e;
  for (int i = 0; i < k; ++i) e.emplace_back(i, (i + 1) % k, 1.0);
  add_clique(e, k, l);
  e.emplace_back(0, k, 1.0);
  return Graph(k + l, e);
}

Graph gen_cycle_two_cliques(int k, int l, int l2) {
  if (k < 3) throw InvalidArgumentError("cycle part needs k >= 3");
  if (l < 2 || l2 < 2) throw InvalidArgumentError("clique parts need size >= 2");
  EdgeList e;
  for (int i = 0; i < k; ++i) e.emplace_back(i, (i + 1) % k, 1.0);
  add_clique(e, k, l);
  add_clique(e, k + l, l2);
  e.emplace_back(0, k, 1.0);
  e.emplace_back(k / 2, k + l, 1.0);
  return Graph(k + l + l2, e);
}

Graph gen_barbell(int D, int N) {
  if (D < 3) throw InvalidArgumentError("barbell needs D >= 3");
  if (N < 2) throw InvalidArgumentError("barbell needs N >= 2");
  int plen = D - 2;  // path vertices 0..plen-1
  EdgeList e;
  for (int i = 0; i + 1 < plen; ++i) e.emplace_back(i, i + 1, 1.0);
  int a = plen, b = plen + N;
  add_clique(e, a, N);
  add_clique(e, b, N);
  e.emplace_back(0, a, 1.0);
  e.emplace_back(plen - 1, b, 1.0);
  return Graph(plen + 2 * N, e);
}

Graph gen_path_clique_star(int D, int N) {
  if (D < 2) throw InvalidArgumentError("path part needs D >= 2");
  if (N < 2) throw InvalidArgumentError("attachments need N >= 2");
  EdgeList e;
  for (int i = 0; i + 1 < D; ++i) e.emplace_back(i, i + 1, 1.0);
  int cl = D, sc = D + N;  // clique base, star center
  add_clique(e, cl, N);
  for (int i = 1; i < N; ++i) e.emplace_back(sc, sc + i, 1.0);
  e.emplace_back(0, cl, 1.0);
  e.emplace_back(D - 1, sc, 1.0);
  return Graph(D + 2 * N, e);
}

Graph gen_bridged_cliques(int m) {
  if (m < 2) throw InvalidArgumentError("bridged cliques need m >= 2");
  EdgeList e;
  add_clique(e, 0, m);
  add_clique(e, m, m);
  e.emplace_back(0, m, 1.0);
  return Graph(2 * m, e);
}

Graph generate(const std::string& family, const std::vector<long>& params) {
  auto need = [&](size_t k) {
    if (params.size() != k)
      throw InvalidArgumentError("family \"" + family + "\" takes " + std::to_string(k) +
                                 " parameter(s)");
  };
  if (family == "cycle") { need(1); return gen_cycle((int)params[0]); }
  if (family == "clique") { need(1); return gen_clique((int)params[0]); }
  if (family == "path") { need(1); return gen_path((int)params[0]); }
  if (family == "star") { need(1); return gen_star((int)params[0]); }
  if (family == "cycle_clique") { need(2); return gen_cycle_clique((int)params[0], (int)params[1]); }
  if (family == "cycle_two_cliques") {
    need(3);
    return gen_cycle_two_cliques((int)params[0], (int)params[1], (int)params[2]);
  }
  if (family == "barbell") { need(2); return gen_barbell((int)params[0], (int)params[1]); }
  if (family == "path_clique_star") {
    need(2);
    return gen_path_clique_star((int)params[0], (int)params[1]);
  }
  if (family == "bridged_cliques") { need(1); return gen_bridged_cliques((int)params[0]); }
  throw InvalidArgumentError("unknown graph family \"" + family + "\"");
}

}  // namespace cspec
