// Command-line front end. Links the C API only; everything it knows about a
// run arrives as a JSON payload string, which it embeds verbatim so result
// bytes match across invocations with identical flags.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "congest_spectral.h"

namespace {

struct GraphHandle {
  cs_graph* g = nullptr;
  ~GraphHandle() { cs_graph_free(g); }
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) {
    std::cerr << "cannot open " << path << "\n";
    std::exit(1);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

[[noreturn]] void die(cs_status s) {
  std::cerr << cs_status_name(s) << ": " << cs_last_error() << "\n";
  int code = 1;
  if (s == CS_ERR_BUDGET_VIOLATION) code = 2;
  if (s == CS_ERR_RESTART_EXHAUSTED) code = 3;
  std::exit(code);
}

void check(cs_status s) {
  if (s != CS_OK) die(s);
}

std::string take(char* p) {
  std::string s = p ? p : "";
  cs_string_free(p);
  return s;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

struct EstimateFlags {
  std::string graph_path;
  std::string target = "lambda_2";
  double eps = 0.05;
  unsigned long long seed = 1;
  long budget_bits = 0;
  int mantissa = 0;
  long max_rounds = 4000000;
  int k = 2;
  bool additive = false;
  bool full_precision = false;
  bool with_oracle = false;
  double fixed_eps = 0.0;
};

cs_options to_options(const EstimateFlags& f) {
  cs_options o;
  cs_options_init(&o);
  o.eps = f.eps;
  o.seed = f.seed;
  o.budget_bits = f.budget_bits;
  o.mantissa_bits = f.mantissa;
  o.max_rounds = f.max_rounds;
  o.k = f.k;
  o.full_precision = f.full_precision ? 1 : 0;
  o.fixed_eps = f.fixed_eps;
  return o;
}

int run_gen(const std::string& family, const std::vector<long>& params,
            const std::string& out_path) {
  GraphHandle h;
  check(cs_graph_generate(family.c_str(), params.data(), (int)params.size(), &h.g));
  char* text = nullptr;
  check(cs_graph_write(h.g, &text));
  std::string body = take(text);
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    f << body;
  }
  return 0;
}

int run_exact(const std::string& path, int k) {
  GraphHandle h;
  std::string text = slurp(path);
  check(cs_graph_parse(text.c_str(), 1, &h.g));
  char* json = nullptr;
  check(cs_exact(h.g, k, &json));
  std::cout << take(json) << "\n";
  return 0;
}

int run_estimate(const EstimateFlags& f, const std::string& command_echo) {
  GraphHandle h;
  std::string text = slurp(f.graph_path);
  check(cs_graph_parse(text.c_str(), 0, &h.g));
  cs_options o = to_options(f);
  std::string target = f.target;
  if (target == "phi" && f.additive) target = "phi_additive";

  auto t0 = std::chrono::steady_clock::now();
  char* payload = nullptr;
  check(cs_estimate(h.g, target.c_str(), &o, &payload));
  std::string result = take(payload);
  long wall_ms = (long)std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();

  std::string oracle = "null";
  if (f.with_oracle) {
    int ok = (target == "lambda_k" || target == "phi_k") && f.k <= 4 ? f.k : 0;
    char* oj = nullptr;
    if (cs_exact(h.g, ok, &oj) == CS_OK) oracle = take(oj);
  }

  std::cout << "{\"command\":" << quote(command_echo) << ",\"graph\":{\"file\":"
            << quote(f.graph_path) << ",\"n\":" << cs_graph_vertex_count(h.g)
            << ",\"m\":" << cs_graph_edge_count(h.g) << "},\"config\":{\"target\":"
            << quote(target) << ",\"eps\":" << fmt(f.eps) << ",\"seed\":" << f.seed
            << ",\"budget_bits\":" << f.budget_bits << ",\"mantissa_bits\":" << f.mantissa
            << ",\"k\":" << f.k << ",\"full_precision\":" << (f.full_precision ? "true" : "false")
            << ",\"max_rounds\":" << f.max_rounds << "},\"result\":" << result
            << ",\"oracle\":" << oracle << ",\"wall_ms\":" << wall_ms << "}\n";
  return 0;
}

std::vector<long> parse_sizes(const std::string& spec) {
  std::vector<long> out;
  auto dots = spec.find("..");
  if (dots != std::string::npos) {
    long a = std::stol(spec.substr(0, dots));
    long b = std::stol(spec.substr(dots + 2));
    for (long n = a; n <= b; n *= 2) out.push_back(n);
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
  return out;
}

int run_bench(const std::string& family, const std::string& sizes, double eps, int seeds,
              const std::string& target, const std::string& out_path) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    os = &file;
  }
  *os << "n,eps,seed,rounds,bits,value,oracle_value,sandwich_ok\n";

  for (long n : parse_sizes(sizes)) {
    GraphHandle h;
    long params[1] = {n};
    check(cs_graph_generate(family.c_str(), params, 1, &h.g));

    double oracle = std::nan("");
    if (n <= 512) {
      char* oj = nullptr;
      check(cs_exact(h.g, 0, &oj));
      auto j = nlohmann::json::parse(take(oj));
      int nv = cs_graph_vertex_count(h.g);
      oracle = target == "lambda_n" ? j["lambda"][nv - 1].get<double>()
                                    : j["lambda"][1].get<double>();
    }

    for (int seed = 1; seed <= seeds; ++seed) {
      cs_options o;
      cs_options_init(&o);
      o.eps = eps;
      o.seed = (uint64_t)seed;
      char* pj = nullptr;
      check(cs_estimate(h.g, target.c_str(), &o, &pj));
      auto j = nlohmann::json::parse(take(pj));
      double value = j["value"].get<double>();
      long rounds = j["rounds"].get<long>();
      long bits = j["max_message_bits"].get<long>();
      bool sandwich;
      if (target == "lambda_n")
        sandwich = value >= (1.0 - eps) * oracle - 1e-6 && value <= oracle + 1e-6;
      else
        sandwich = value >= oracle - 1e-6 && value <= oracle + eps + 1e-6;
      *os << n << "," << fmt(eps) << "," << seed << "," << rounds << "," << bits << ","
          << fmt(value) << "," << fmt(oracle) << "," << (sandwich ? 1 : 0) << "\n";
    }
  }
  return 0;
}

// Bundled-fixture invariant suite driven purely through the C interface.
int run_verify() {
  int fails = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    if (!ok) ++fails;
  };
  auto gen = [&](const char* family, std::vector<long> params) {
    cs_graph* g = nullptr;
    check(cs_graph_generate(family, params.data(), (int)params.size(), &g));
    return g;
  };
  auto exact_of = [&](cs_graph* g, int k) {
    char* j = nullptr;
    check(cs_exact(g, k, &j));
    return nlohmann::json::parse(take(j));
  };

  {
    struct Fam {
      const char* name;
      std::vector<long> params;
      int n;
    };
    std::vector<Fam> fams = {
        {"cycle", {8}, 8},         {"clique", {6}, 6},
        {"path", {9}, 9},          {"star", {5}, 6},
        {"cycle_clique", {6, 4}, 10}, {"cycle_two_cliques", {6, 4, 3}, 13},
        {"barbell", {6, 4}, 12},   {"path_clique_star", {4, 3}, 10},
        {"bridged_cliques", {4}, 8}};
    bool ok = true;
    for (const Fam& f : fams) {
      GraphHandle h;
      h.g = gen(f.name, f.params);
      if (cs_graph_vertex_count(h.g) != f.n) ok = false;
      char* t1 = nullptr;
      check(cs_graph_write(h.g, &t1));
      std::string text = take(t1);
      GraphHandle h2;
      check(cs_graph_parse(text.c_str(), 0, &h2.g));
      char* t2 = nullptr;
      check(cs_graph_write(h2.g, &t2));
      if (take(t2) != text) ok = false;
    }
    report("generators: vertex counts and write/parse round-trip", ok);
  }

  {
    GraphHandle h;
    h.g = gen("clique", {4});
    auto j = exact_of(h.g, 0);
    bool ok = std::abs(j["lambda"][0].get<double>()) < 1e-8 &&
              std::abs(j["lambda"][1].get<double>() - 4.0 / 3.0) < 1e-8 &&
              std::abs(j["lambda"][3].get<double>() - 4.0 / 3.0) < 1e-8 &&
              std::abs(j["phi"].get<double>() - 2.0 / 3.0) < 1e-9 &&
              j["cheeger_ok"].get<bool>();
    report("exact: K4 spectrum {0, 4/3, 4/3, 4/3}, phi 2/3, Cheeger", ok);
  }

  {
    GraphHandle h;
    h.g = gen("cycle", {4});
    auto j = exact_of(h.g, 0);
    bool ok = std::abs(j["lambda"][0].get<double>()) < 1e-8 &&
              std::abs(j["lambda"][1].get<double>() - 1.0) < 1e-8 &&
              std::abs(j["lambda"][2].get<double>() - 1.0) < 1e-8 &&
              std::abs(j["lambda"][3].get<double>() - 2.0) < 1e-8 &&
              std::abs(j["phi"].get<double>() - 0.5) < 1e-9;
    report("exact: C4 spectrum {0, 1, 1, 2}, phi 1/2", ok);
  }

  {
    bool ok = true;
    std::vector<std::pair<const char*, std::vector<long>>> fixtures = {
        {"cycle", {8}},   {"clique", {8}},       {"path", {10}},
        {"star", {7}},    {"barbell", {6, 4}},   {"bridged_cliques", {4}},
        {"cycle_clique", {8, 4}}};
    for (auto& [fam, params] : fixtures) {
      GraphHandle h;
      h.g = gen(fam, params);
      if (!exact_of(h.g, 0)["cheeger_ok"].get<bool>()) ok = false;
    }
    report("exact: Cheeger sandwich on fixture family", ok);
  }

  {
    GraphHandle h;
    h.g = gen("clique", {8});
    double ln = exact_of(h.g, 0)["lambda"][7].get<double>();
    cs_options o;
    cs_options_init(&o);
    char* pj = nullptr;
    check(cs_estimate(h.g, "lambda_n", &o, &pj));
    double v = nlohmann::json::parse(take(pj))["value"].get<double>();
    report("estimate: lambda_n on K8 within [(1-eps) lambda_n, lambda_n]",
           v >= (1.0 - o.eps) * ln - 1e-6 && v <= ln + 1e-6);
  }

  {
    GraphHandle h;
    h.g = gen("cycle", {8});
    double l2 = exact_of(h.g, 0)["lambda"][1].get<double>();
    cs_options o;
    cs_options_init(&o);
    char* pj = nullptr;
    check(cs_estimate(h.g, "lambda_2", &o, &pj));
    double v = nlohmann::json::parse(take(pj))["value"].get<double>();
    report("estimate: lambda_2 on C8 within [lambda_2, lambda_2 + eps]",
           v >= l2 - 1e-6 && v <= l2 + o.eps + 1e-6);
  }

  {
    GraphHandle h;
    h.g = gen("clique", {8});
    auto oracle = exact_of(h.g, 0);
    cs_options o;
    cs_options_init(&o);
    o.eps = 0.25;
    o.k = 3;
    char* pj = nullptr;
    check(cs_estimate(h.g, "lambda_k", &o, &pj));
    auto j = nlohmann::json::parse(take(pj));
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      double est = j["values"][i].get<double>();
      double ex = oracle["lambda"][i].get<double>();
      if (est < ex - 1e-6 || est > ex + o.eps + 1e-6) ok = false;
    }
    report("estimate: three smallest on K8, per-index sandwich", ok);
  }

  {
    GraphHandle h;
    h.g = gen("clique", {4});
    cs_options o;
    cs_options_init(&o);
    char* pj = nullptr;
    check(cs_estimate(h.g, "phi", &o, &pj));
    auto j = nlohmann::json::parse(take(pj));
    double phi = 2.0 / 3.0;
    bool ok = j["guarantee"][0].get<double>() <= phi + 1e-9 &&
              j["guarantee"][1].get<double>() >= phi - 1e-9 &&
              j["phi_tilde"].get<double>() >= phi - 1e-6;
    report("estimate: sparsest-cut interval brackets phi(K4) = 2/3", ok);
  }

  {
    GraphHandle h;
    h.g = gen("cycle", {12});
    cs_options o;
    cs_options_init(&o);
    char *a = nullptr, *b = nullptr;
    check(cs_estimate(h.g, "lambda_2", &o, &a));
    check(cs_estimate(h.g, "lambda_2", &o, &b));
    std::string sa = take(a), sb = take(b);
    report("determinism: identical flags give identical payload bytes", sa == sb);
  }

  {
    cs_graph* g = nullptr;
    long one = 1;
    bool ok = cs_graph_generate("clique", &one, 1, &g) == CS_ERR_INVALID_ARGUMENT;
    ok = ok && cs_graph_parse("2 1\n0 0 1\n", 0, &g) == CS_ERR_PARSE;
    ok = ok && cs_graph_parse("4 2\n0 1 1\n2 3 1\n", 0, &g) == CS_ERR_DISCONNECTED;
    GraphHandle h;
    h.g = gen("cycle", {8});
    cs_options o;
    cs_options_init(&o);
    o.eps = 3.0;
    char* pj = nullptr;
    ok = ok && cs_estimate(h.g, "lambda_2", &o, &pj) == CS_ERR_INVALID_ARGUMENT;
    report("errors: parameter floor, self-loop, disconnected, eps range", ok);
  }

  {
    GraphHandle h;
    h.g = gen("cycle", {8});
    cs_options o;
    cs_options_init(&o);
    o.budget_bits = 20;
    char* pj = nullptr;
    report("errors: tight budget aborts with a violation",
           cs_estimate(h.g, "lambda_2", &o, &pj) == CS_ERR_BUDGET_VIOLATION);
  }

  std::cout << (fails == 0 ? "verify: all checks passed\n"
                           : "verify: " + std::to_string(fails) + " check(s) failed\n");
  return fails == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"congest-spectral workbench: fixtures, oracles, distributed estimates"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a fixture graph as edge-list text");
  std::string gen_family, gen_out;
  std::vector<long> gen_params;
  gen->add_option("family", gen_family, "graph family name")->required();
  gen->add_option("params", gen_params, "family parameters");
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  auto* exact = app.add_subcommand("exact", "exact spectrum and conductance oracles");
  std::string exact_path;
  int exact_k = 0;
  exact->add_option("graph", exact_path, "edge-list file, or - for stdin")->required();
  exact->add_option("--k", exact_k, "also compute brute-force phi_k (2..4)");

  auto* est = app.add_subcommand("estimate", "distributed estimation run");
  EstimateFlags ef;
  est->add_option("graph", ef.graph_path, "edge-list file, or - for stdin")->required();
  est->add_option("--target", ef.target, "lambda_n | lambda_2 | lambda_k | phi | phi_k")
      ->required();
  est->add_option("--eps", ef.eps, "target accuracy");
  est->add_option("--seed", ef.seed, "run seed")->envname("CONGEST_SPECTRAL_SEED");
  est->add_option("--budget-bits", ef.budget_bits, "message budget (0 = default)");
  est->add_option("--mantissa", ef.mantissa, "iteration mantissa bits (0 = default)");
  est->add_option("--max-rounds", ef.max_rounds, "round ceiling");
  est->add_option("--k", ef.k, "arity for lambda_k / phi_k");
  est->add_flag("--additive", ef.additive, "additive sparsest-cut variant");
  est->add_flag("--full-precision", ef.full_precision, "untruncated reference messages");
  est->add_flag("--oracle", ef.with_oracle, "attach the exact-oracle payload");
  est->add_option("--fixed-eps", ef.fixed_eps, "pin the phi_k inner accuracy");

  auto* bench = app.add_subcommand("bench", "sweep sizes and seeds, emit CSV");
  std::string b_family = "cycle", b_sizes = "16..256", b_target = "lambda_2", b_out;
  double b_eps = 0.1;
  int b_seeds = 3;
  bench->add_option("--family", b_family, "graph family");
  bench->add_option("--sizes", b_sizes, "a..b doubling, or comma list");
  bench->add_option("--eps", b_eps, "target accuracy");
  bench->add_option("--seeds", b_seeds, "seeds per size");
  bench->add_option("--target", b_target, "lambda_2 | lambda_n");
  bench->add_option("-o,--output", b_out, "CSV file (default stdout)");

  app.add_subcommand("verify", "run the bundled fixture invariant suite");

  CLI11_PARSE(app, argc, argv);

  std::ostringstream echo;
  for (int i = 1; i < argc; ++i) echo << (i > 1 ? " " : "") << argv[i];

  if (gen->parsed()) return run_gen(gen_family, gen_params, gen_out);
  if (exact->parsed()) return run_exact(exact_path, exact_k);
  if (est->parsed()) return run_estimate(ef, echo.str());
  if (bench->parsed()) return run_bench(b_family, b_sizes, b_eps, b_seeds, b_target, b_out);
  return run_verify();
}
