#include "congest_spectral.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "cspec/cut.hpp"
#include "cspec/dense.hpp"
#include "cspec/errors.hpp"
#include "cspec/generators.hpp"
#include "cspec/jsonio.hpp"
#include "cspec/oracle.hpp"
#include "cspec/spectral.hpp"

struct cs_graph {
  cspec::Graph g;
};

namespace {

thread_local std::string t_last_error;

cs_status fail(cs_status s, const char* what) {
  t_last_error = what;
  return s;
}

template <typename F>
cs_status guarded(F&& f) {
  try {
    f();
    return CS_OK;
  } catch (const cspec::ParseError& e) {
    return fail(CS_ERR_PARSE, e.what());
  } catch (const cspec::DisconnectedError& e) {
    return fail(CS_ERR_DISCONNECTED, e.what());
  } catch (const cspec::SizeLimitError& e) {
    return fail(CS_ERR_SIZE_LIMIT, e.what());
  } catch (const cspec::BudgetViolationError& e) {
    return fail(CS_ERR_BUDGET_VIOLATION, e.what());
  } catch (const cspec::RestartExhaustedError& e) {
    return fail(CS_ERR_RESTART_EXHAUSTED, e.what());
  } catch (const cspec::MaxRoundsError& e) {
    return fail(CS_ERR_MAX_ROUNDS, e.what());
  } catch (const cspec::NumericError& e) {
    return fail(CS_ERR_NUMERIC, e.what());
  } catch (const cspec::InvalidArgumentError& e) {
    return fail(CS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(CS_ERR_UNKNOWN, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* p = (char*)std::malloc(s.size() + 1);
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

cspec::SpectralConfig to_spectral(const cs_options& o) {
  cspec::SpectralConfig c;
  c.eps = o.eps;
  c.seed = o.seed;
  c.c1 = o.c1;
  c.c2 = o.c2;
  c.c3 = o.c3;
  c.c4 = o.c4;
  c.t_max = o.t_max;
  c.budget_bits = o.budget_bits;
  c.mantissa_bits = o.mantissa_bits;
  c.max_rounds = o.max_rounds;
  c.full_precision = o.full_precision != 0;
  c.max_restart_waves = o.max_restart_waves;
  return c;
}

cspec::CutConfig to_cut(const cs_options& o) {
  cspec::CutConfig c;
  c.spectral = to_spectral(o);
  c.c_ho = o.c_ho;
  c.delta_coef = o.delta_coef;
  c.search_floor = o.search_floor;
  return c;
}

cspec::Json eigen_json(const cspec::EigenEstimate& e, double eps, long instances) {
  cspec::Json j = cspec::Json::object();
  j.put("which", cspec::Json::string(e.which));
  j.put("value", cspec::Json::number(e.value));
  j.put("eps", cspec::Json::number(eps));
  j.put("rounds", cspec::Json::integer(e.stats.rounds));
  j.put("instances", cspec::Json::integer(instances));
  j.put("early_exit", cspec::Json::boolean(e.early_exit));
  j.put("restarts", cspec::Json::integer(e.restarts));
  j.put("index", cspec::Json::integer(e.index));
  j.put("low_mu", cspec::Json::boolean(e.low_mu));
  j.put("max_message_bits", cspec::Json::integer(e.stats.max_message_bits));
  j.put("total_bits", cspec::Json::integer(e.stats.total_bits));
  return j;
}

cspec::Json cut_json(const cspec::CutEstimate& c) {
  cspec::Json j = cspec::Json::object();
  j.put("phi_tilde", cspec::Json::number(c.phi_tilde));
  j.put("k", cspec::Json::integer(c.k));
  j.put("lambda_used", cspec::Json::number(c.lambda_used));
  cspec::Json iv = cspec::Json::array();
  iv.add(cspec::Json::number(c.guarantee_lo));
  iv.add(cspec::Json::number(c.guarantee_hi));
  j.put("guarantee", std::move(iv));
  cspec::Json tr = cspec::Json::array();
  for (const cspec::SearchStep& s : c.search_trace) {
    cspec::Json e = cspec::Json::object();
    e.put("guess", cspec::Json::number(s.guess));
    e.put("lambda", cspec::Json::number(s.lambda));
    e.put("accepted", cspec::Json::boolean(s.accepted));
    tr.add(std::move(e));
  }
  j.put("search_trace", std::move(tr));
  j.put("rounds_total", cspec::Json::integer(c.stats.rounds));
  j.put("early_exit", cspec::Json::boolean(c.early_exit));
  j.put("restarts", cspec::Json::integer(c.restarts));
  j.put("max_message_bits", cspec::Json::integer(c.stats.max_message_bits));
  j.put("total_bits", cspec::Json::integer(c.stats.total_bits));
  return j;
}

}  // namespace

extern "C" {

const char* cs_status_name(cs_status s) {
  switch (s) {
    case CS_OK: return "CS_OK";
    case CS_ERR_INVALID_ARGUMENT: return "CS_ERR_INVALID_ARGUMENT";
    case CS_ERR_PARSE: return "CS_ERR_PARSE";
    case CS_ERR_DISCONNECTED: return "CS_ERR_DISCONNECTED";
    case CS_ERR_SIZE_LIMIT: return "CS_ERR_SIZE_LIMIT";
    case CS_ERR_NUMERIC: return "CS_ERR_NUMERIC";
    case CS_ERR_BUDGET_VIOLATION: return "CS_ERR_BUDGET_VIOLATION";
    case CS_ERR_RESTART_EXHAUSTED: return "CS_ERR_RESTART_EXHAUSTED";
    case CS_ERR_MAX_ROUNDS: return "CS_ERR_MAX_ROUNDS";
    case CS_ERR_UNKNOWN: return "CS_ERR_UNKNOWN";
  }
  return "CS_ERR_UNKNOWN";
}

const char* cs_last_error(void) { return t_last_error.c_str(); }

cs_status cs_graph_parse(const char* text, int oracle_mode, cs_graph** out) {
  if (!text || !out) return fail(CS_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cs_graph{cspec::Graph::parse(text, oracle_mode != 0)}; });
}

cs_status cs_graph_generate(const char* family, const long* params, int n_params,
                            cs_graph** out) {
  if (!family || !out || (n_params > 0 && !params) || n_params < 0)
    return fail(CS_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<long> p(params, params + n_params);
    *out = new cs_graph{cspec::generate(family, p)};
  });
}

cs_status cs_graph_write(const cs_graph* g, char** out_text) {
  if (!g || !out_text) return fail(CS_ERR_INVALID_ARGUMENT, "null argument");
  *out_text = nullptr;
  return guarded([&] { *out_text = dup_string(g->g.write()); });
}

int cs_graph_vertex_count(const cs_graph* g) { return g ? g->g.n() : -1; }

int cs_graph_edge_count(const cs_graph* g) { return g ? g->g.m() : -1; }

void cs_graph_free(cs_graph* g) { delete g; }

void cs_options_init(cs_options* o) {
  if (!o) return;
  o->eps = 0.05;
  o->seed = 1;
  o->c1 = 4.0;
  o->c2 = 3.0;
  o->c3 = 8.0;
  o->c4 = 1.0;
  o->t_max = 512;
  o->budget_bits = 0;
  o->mantissa_bits = 0;
  o->max_rounds = 4000000;
  o->full_precision = 0;
  o->max_restart_waves = 3;
  o->c_ho = 1.0;
  o->delta_coef = 0.005;
  o->search_floor = 0.0;
  o->k = 2;
  o->fixed_eps = 0.0;
}

cs_status cs_estimate(const cs_graph* g, const char* target, const cs_options* o,
                      char** out_json) {
  if (!g || !target || !o || !out_json) return fail(CS_ERR_INVALID_ARGUMENT, "null argument");
  *out_json = nullptr;
  return guarded([&] {
    std::string t = target;
    cspec::SpectralConfig sc = to_spectral(*o);
    long inst = cspec::instance_count(sc, g->g.n());
    if (t == "lambda_n") {
      cspec::EigenEstimate e = cspec::estimate_lambda_n(g->g, sc);
      *out_json = dup_string(eigen_json(e, sc.eps, inst).dump());
    } else if (t == "lambda_2") {
      cspec::EigenEstimate e = cspec::estimate_lambda_2(g->g, sc);
      *out_json = dup_string(eigen_json(e, sc.eps, inst).dump());
    } else if (t == "lambda_k") {
      std::vector<cspec::EigenEstimate> es = cspec::estimate_smallest_k(g->g, o->k, sc);
      const cspec::EigenEstimate& last = es.back();
      cspec::Json j = cspec::Json::object();
      j.put("which", cspec::Json::string("lambda_k"));
      j.put("value", cspec::Json::number(last.value));
      j.put("eps", cspec::Json::number(sc.eps));
      j.put("rounds", cspec::Json::integer(last.stats.rounds));
      j.put("instances", cspec::Json::integer(inst));
      j.put("early_exit", cspec::Json::boolean(last.early_exit));
      int restarts = 0;
      for (const cspec::EigenEstimate& e : es) restarts += e.restarts;
      j.put("restarts", cspec::Json::integer(restarts));
      j.put("k", cspec::Json::integer(o->k));
      cspec::Json vals = cspec::Json::array();
      for (const cspec::EigenEstimate& e : es) vals.add(cspec::Json::number(e.value));
      j.put("values", std::move(vals));
      j.put("max_message_bits", cspec::Json::integer(last.stats.max_message_bits));
      j.put("total_bits", cspec::Json::integer(last.stats.total_bits));
      *out_json = dup_string(j.dump());
    } else if (t == "phi") {
      *out_json = dup_string(cut_json(cspec::estimate_sparsest_cut(g->g, to_cut(*o))).dump());
    } else if (t == "phi_additive") {
      *out_json = dup_string(
          cut_json(cspec::estimate_sparsest_cut_additive(g->g, o->eps, to_cut(*o))).dump());
    } else if (t == "phi_k") {
      *out_json = dup_string(
          cut_json(cspec::estimate_k_way(g->g, o->k, to_cut(*o), o->fixed_eps)).dump());
    } else {
      throw cspec::InvalidArgumentError("unknown estimate target \"" + t + "\"");
    }
  });
}

cs_status cs_exact(const cs_graph* g, int k, char** out_json) {
  if (!g || !out_json) return fail(CS_ERR_INVALID_ARGUMENT, "null argument");
  *out_json = nullptr;
  return guarded([&] {
    const cspec::Graph& gr = g->g;
    int n = gr.n();
    if (n > 512) throw cspec::SizeLimitError("spectrum oracle is limited to 512 vertices");
    if (k != 0 && (k < 2 || k > 4))
      throw cspec::InvalidArgumentError("k must be 0 (skip) or in [2, 4]");

    cspec::Spectrum sp =
        cspec::eigensolve_dense(cspec::normalized_laplacian_dense(gr), false);
    cspec::Json j = cspec::Json::object();
    cspec::Json lam = cspec::Json::array();
    for (double v : sp.values) lam.add(cspec::Json::number(v));
    j.put("lambda", std::move(lam));

    if (n <= 24) {
      j.put("phi", cspec::Json::number(cspec::brute_force_sparsest_cut(gr).value));
      j.put("cheeger_ok", cspec::Json::boolean(cspec::cheeger_check(gr).ok()));
    } else {
      j.put("phi", cspec::Json::null());
      j.put("cheeger_ok", cspec::Json::null());
    }
    if (k >= 2) {
      cspec::Json pk = cspec::Json::object();
      pk.put("k", cspec::Json::integer(k));
      pk.put("value", cspec::Json::number(cspec::brute_force_k_way(gr, k)));
      j.put("phi_k", std::move(pk));
    }
    *out_json = dup_string(j.dump());
  });
}

void cs_string_free(char* s) { std::free(s); }

}  // extern "C"
