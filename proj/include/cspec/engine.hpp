#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cspec/graph.hpp"
#include "cspec/trunc.hpp"

namespace cspec {

// Broadcast payload. Reals are truncated at put time and charged their exact
// serialized width; raw bit fields carry small protocol counters. Slot order
// is the wire order.
class Message {
 public:
  void put_real(double x, const TruncConfig& cfg);
  void put_full(double x);  // untruncated 64-bit payload, for reference runs
  void put_bits(std::uint64_t bits, int width);

  int width_bits() const { return width_; }
  bool empty() const { return slots_.empty(); }
  int real_count() const { return reals_; }

  double real(int i) const;          // i-th real slot
  std::uint64_t bits(int i) const;   // i-th bit-field slot

 private:
  struct Slot {
    bool is_real;
    double value;
    std::uint64_t raw;
    int width;
  };
  std::vector<Slot> slots_;
  int width_ = 0;
  int reals_ = 0;
};

// One identical message per vertex per round, delivered to every neighbor.
// Inbox order matches g.neighbors(v).
class VertexProgram {
 public:
  virtual ~VertexProgram() = default;
  virtual Message send(int v, long round) = 0;
  virtual void receive(int v, long round, const std::vector<const Message*>& inbox) = 0;
};

struct RoundStats {
  long rounds = 0;
  long max_message_bits = 0;
  long long total_bits = 0;  // message width times receiver count, summed
  long violations = 0;
};

struct EngineConfig {
  long budget_bits = 0;  // 0 picks the default 32*ceil(log2 n)
  long max_rounds = 4000000;
};

long default_budget_bits(int n);

class Engine {
 public:
  explicit Engine(const Graph& g, EngineConfig cfg = {});

  const Graph& graph() const { return *g_; }
  long budget_bits() const { return budget_; }
  RoundStats& stats() { return stats_; }
  const RoundStats& stats() const { return stats_; }

  // Runs p until stop() says so (checked before each round). Returns rounds
  // executed. stop is simulator-side control only; vertex programs never see
  // global state.
  long run(VertexProgram& p, const std::function<bool()>& stop);
  void run_rounds(VertexProgram& p, long rounds);

 private:
  void one_round(VertexProgram& p);

  const Graph* g_;
  EngineConfig cfg_;
  long budget_ = 0;
  RoundStats stats_;
  std::vector<Message> outbox_;
  std::vector<std::vector<const Message*>> inbox_;  // fixed wiring into outbox_
};

struct AggregationTree {
  int root = 0;
  std::vector<int> parent;  // -1 at root
  std::vector<int> depth;
  std::vector<std::vector<int>> children;
  int height = 0;  // eccentricity of root
};

// BFS layer by layer; parent = lowest-id neighbor in the previous layer.
// Charges eccentricity(root) rounds.
AggregationTree bfs_tree(Engine& e, int root = 0);

enum class ProbeVerdict { AtMost, Exceeds };

// BFS from vertex 0 run for exactly `threshold` rounds; Exceeds if anyone is
// still unreached. One-sided up to the eccentricity/diameter factor 2.
ProbeVerdict diameter_probe(Engine& e, long threshold);

// All R sums (values[s] summed over vertices) known at every vertex after
// exactly 2*height + R - 1 rounds. Partials and totals travel as truncated
// reals at sum_cfg width (null means full precision); a vertex's message
// carries at most one up-partial and one down-total plus two flag bits.
std::vector<double> pipelined_sums(Engine& e, const AggregationTree& t,
                                   const std::vector<std::vector<double>>& values,
                                   const TruncConfig* sum_cfg);

double convergecast_sum(Engine& e, const AggregationTree& t, const std::vector<double>& values,
                        const TruncConfig* sum_cfg);

enum class MatKind { MTwoMinusL, Laplacian };

// One round: broadcast x_v, combine neighbor values with the normalized
// adjacency weights. iter_cfg null means full-precision messages.
std::vector<double> matvec_round(Engine& e, MatKind kind, const std::vector<double>& x,
                                 const TruncConfig* iter_cfg);

}  // namespace cspec
