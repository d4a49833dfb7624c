#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bnmap/benchgen.hpp"
#include "bnmap/decomposition.hpp"
#include "bnmap/gadgets.hpp"
#include "bnmap/io.hpp"
#include "bnmap/map_solver.hpp"
#include "bnmap/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitZeroEvidence = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

bnmap::Network load_validated(const std::string& path) {
  bnmap::Network net = bnmap::parse_network(read_file(path));
  auto report = bnmap::validate_network(net);
  if (!report.ok) {
    for (const auto& v : report.violations) std::cerr << v << "\n";
    throw std::invalid_argument("network failed validation");
  }
  return net;
}

void print_assignment(const bnmap::Network& net,
                      const bnmap::Instantiation& asg) {
  for (const auto& [var, state] : asg.items())
    std::cout << "map." << net.variables[var].name << "=" << state << "\n";
}

int default_threads() {
  if (const char* env = std::getenv("BNMAP_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

struct SolveArgs {
  std::string net_path, query_path;
  std::string solver = "exact";
  std::string backend = "f64";
  std::string mode = "mult";
  double epsilon = 0.1;
  double timeout = 0;  // seconds, 0 = none
};

int run_solve(const SolveArgs& a) {
  bnmap::Network net = load_validated(a.net_path);
  bnmap::Query query = bnmap::parse_query(read_file(a.query_path), net);
  bnmap::Deadline deadline;
  if (a.timeout > 0)
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(a.timeout));

  bnmap::Instantiation assignment;
  double value = 0;
  bnmap::Rational value_rational;
  bool have_rational = false;

  if (a.solver == "oracle") {
    auto res = bnmap::brute_force_map(net, query);
    assignment = res.assignment;
    value_rational = res.value;
    value = res.value.get_d();
    have_rational = true;
    std::cout << "solver=oracle\n";
  } else if (a.solver == "exact") {
    auto ad = bnmap::decompose_for(net, query, bnmap::Heuristic::MinFill);
    bnmap::SolveOptions opts;
    opts.deadline = deadline;
    std::cout << "solver=exact\nbackend=" << a.backend << "\n";
    if (a.backend == "rational") {
      auto sol = bnmap::solve_map<bnmap::Rational>(net, ad, query, opts);
      assignment = sol.assignment;
      value_rational = sol.value;
      value = sol.value.get_d();
      have_rational = true;
      std::cout << "avg_pareto=" << sol.stats.avg_pareto() << "\n"
                << "avg_dim=" << sol.stats.avg_dim() << "\n";
    } else {
      auto sol = bnmap::solve_map<double>(net, ad, query, opts);
      assignment = sol.assignment;
      value = sol.value;
      std::cout << "avg_pareto=" << sol.stats.avg_pareto() << "\n"
                << "avg_dim=" << sol.stats.avg_dim() << "\n";
    }
  } else if (a.solver == "approx") {
    if (a.backend == "rational")
      throw std::invalid_argument("approx solver requires the f64 backend");
    auto ad = bnmap::decompose_for(net, query, bnmap::Heuristic::MinFill);
    auto mode = a.mode == "add" ? bnmap::Lattice::Mode::Additive
                                : bnmap::Lattice::Mode::Multiplicative;
    auto res = bnmap::solve_map_approx(net, ad, query, a.epsilon, mode, deadline);
    assignment = res.solution.assignment;
    value = res.solution.value;
    std::cout << "solver=approx\nmode=" << a.mode << "\n"
              << "epsilon=" << a.epsilon << "\n"
              << "lower_bound=" << res.guarantee.lower_bound_claimed << "\n"
              << "avg_pareto=" << res.solution.stats.avg_pareto() << "\n"
              << "avg_dim=" << res.solution.stats.avg_dim() << "\n";
  } else {
    throw std::invalid_argument("unknown solver: " + a.solver);
  }

  std::cout << "value=" << std::setprecision(17) << value << "\n";
  if (have_rational)
    std::cout << "value_rational=" << bnmap::rational_token(value_rational)
              << "\n";
  print_assignment(net, assignment);
  if (query.threshold) {
    std::cout << "threshold=" << bnmap::rational_token(*query.threshold)
              << "\n";
    bool exceeds = have_rational ? (value_rational > *query.threshold)
                                 : (value > query.threshold->get_d());
    std::cout << "exceeds_threshold=" << (exceeds ? "true" : "false") << "\n";
  }
  std::cout << "status=ok\n";
  return kExitOk;
}

bnmap::PartitionInstance parse_partition_file(const std::string& text) {
  bnmap::PartitionInstance inst;
  std::istringstream in(text);
  long long v;
  while (in >> v) inst.s.push_back(v);
  if (inst.s.empty())
    throw std::invalid_argument("empty partition instance");
  return inst;
}

// Lines of two nonzero integers (1-based, negative = negated literal).
// Optional leading `vars <m>` line; otherwise m = max index used.
bnmap::Max2SatInstance parse_max2sat_file(const std::string& text) {
  bnmap::Max2SatInstance inst;
  std::istringstream in(text);
  std::string line;
  int max_var = 0;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "vars") {
      ls >> inst.m;
      continue;
    }
    int l1 = std::stoi(first), l2 = 0;
    if (!(ls >> l2) || l1 == 0 || l2 == 0)
      throw std::invalid_argument("bad clause line: " + line);
    bnmap::Literal a{std::abs(l1) - 1, l1 > 0};
    bnmap::Literal b{std::abs(l2) - 1, l2 > 0};
    inst.clauses.emplace_back(a, b);
    max_var = std::max({max_var, std::abs(l1), std::abs(l2)});
  }
  if (inst.m == 0) inst.m = max_var;
  inst.validate();
  return inst;
}

void emit_artifact(const bnmap::GadgetArtifact& art, const std::string& dir,
                   const std::string& stem) {
  write_file(dir + "/" + stem + ".bnm", bnmap::serialize_network(art.network));
  write_file(dir + "/" + stem + ".qry",
             bnmap::serialize_query(art.query, art.network));
  write_file(dir + "/" + stem + ".cert", "certificate " + art.certificate + "\n");
  std::cout << "net=" << dir << "/" << stem << ".bnm\n"
            << "query=" << dir << "/" << stem << ".qry\n"
            << "certificate=" << dir << "/" << stem << ".cert\n";
}

bnmap::SolverChoice parse_solver_choice(const nlohmann::json& j) {
  bnmap::SolverChoice sc;
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "exact") sc.kind = bnmap::SolverChoice::Kind::Exact;
    else if (s == "oracle") sc.kind = bnmap::SolverChoice::Kind::Oracle;
    else throw std::invalid_argument("unknown solver: " + s);
    return sc;
  }
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "exact") sc.kind = bnmap::SolverChoice::Kind::Exact;
  else if (kind == "oracle") sc.kind = bnmap::SolverChoice::Kind::Oracle;
  else if (kind == "approx") {
    sc.kind = bnmap::SolverChoice::Kind::Approx;
    sc.epsilon = j.value("epsilon", 0.01);
    sc.additive = j.value("mode", "add") == "add";
  } else {
    throw std::invalid_argument("unknown solver kind: " + kind);
  }
  return sc;
}

int run_bench(const std::string& suite_path, const std::string& out_path,
              int threads) {
  auto j = nlohmann::json::parse(read_file(suite_path));
  std::vector<bnmap::SuiteSpec> specs;
  for (const auto& js : j.at("suites")) {
    bnmap::SuiteSpec spec;
    spec.family = bnmap::parse_family(js.at("family").get<std::string>());
    spec.base_size = js.at("base_size").get<int>();
    spec.max_card = js.value("max_card", 2);
    spec.seed = js.value("seed", 0ull);
    spec.query_count = js.value("count", 1);
    specs.push_back(spec);
  }
  std::vector<bnmap::SolverChoice> solvers;
  for (const auto& js : j.at("solvers")) solvers.push_back(parse_solver_choice(js));
  double timeout = j.value("timeout", 60.0);
  if (j.contains("threads")) threads = j["threads"].get<int>();

  auto records = bnmap::run_suite(specs, solvers, timeout, threads);
  write_file(out_path, bnmap::emit_csv(records));
  write_file(out_path + ".md", bnmap::emit_markdown(records));
  std::cout << "records=" << records.size() << "\n"
            << "csv=" << out_path << "\n"
            << "report=" << out_path << ".md\n"
            << "status=ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP inference for discrete Bayesian networks"};
  app.require_subcommand(1);
  int threads = default_threads();
  app.add_option("--threads", threads, "worker threads for bench");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "solve a MAP query");
  solve->add_option("--net", sa.net_path)->required();
  solve->add_option("--query", sa.query_path)->required();
  solve->add_option("--solver", sa.solver)
      ->check(CLI::IsMember({"exact", "approx", "oracle"}));
  solve->add_option("--backend", sa.backend)
      ->check(CLI::IsMember({"f64", "rational"}));
  solve->add_option("--epsilon", sa.epsilon);
  solve->add_option("--mode", sa.mode)->check(CLI::IsMember({"mult", "add"}));
  solve->add_option("--timeout", sa.timeout);

  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);

  std::string g_family = "poly", g_out = ".";
  int g_size = 10, g_card = 2, g_count = 1;
  std::uint64_t g_seed = 0;
  auto* gen_random = gen->add_subcommand("random", "random benchmark instances");
  gen_random->add_option("--family", g_family);
  gen_random->add_option("--size", g_size);
  gen_random->add_option("--max-card", g_card);
  gen_random->add_option("--seed", g_seed);
  gen_random->add_option("--count", g_count);
  gen_random->add_option("--out", g_out)->required();

  std::string gg_kind, gg_in, gg_out = ".";
  int gg_q = 1;
  auto* gen_gadget = gen->add_subcommand("gadget", "certified hard instances");
  gen_gadget
      ->add_option("kind", gg_kind)
      ->required()
      ->check(CLI::IsMember({"partition-polytree", "partition-hmm", "max2sat"}));
  gen_gadget->add_option("--in", gg_in)->required();
  gen_gadget->add_option("--q", gg_q);
  gen_gadget->add_option("--out", gg_out);

  std::string b_suite, b_out = "bench.csv";
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", b_suite)->required();
  bench->add_option("--out", b_out);

  std::string c_net;
  auto* check = app.add_subcommand("check", "validate a network file");
  check->add_option("--net", c_net)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return run_solve(sa);
    if (*gen_random) {
      bnmap::SuiteSpec spec;
      spec.family = bnmap::parse_family(g_family);
      spec.base_size = g_size;
      spec.max_card = g_card;
      spec.seed = g_seed;
      spec.query_count = g_count;
      for (int i = 0; i < g_count; ++i) {
        auto [net, query] = bnmap::gen_random_instance(spec, i);
        std::string stem = spec.label() + "." + std::to_string(i);
        write_file(g_out + "/" + stem + ".bnm", bnmap::serialize_network(net));
        write_file(g_out + "/" + stem + ".qry",
                   bnmap::serialize_query(query, net));
        std::cout << "instance=" << g_out << "/" << stem << ".bnm\n";
      }
      std::cout << "status=ok\n";
      return kExitOk;
    }
    if (*gen_gadget) {
      bnmap::GadgetArtifact art;
      if (gg_kind == "partition-polytree")
        art = bnmap::partition_to_polytree(parse_partition_file(read_file(gg_in)));
      else if (gg_kind == "partition-hmm")
        art = bnmap::partition_to_hmm(parse_partition_file(read_file(gg_in)));
      else if (gg_q > 1)
        art = bnmap::amplify(parse_max2sat_file(read_file(gg_in)), gg_q);
      else
        art = bnmap::max2sat_to_naivebayes(parse_max2sat_file(read_file(gg_in)));
      emit_artifact(art, gg_out, gg_kind);
      std::cout << "status=ok\n";
      return kExitOk;
    }
    if (*bench) return run_bench(b_suite, b_out, threads);
    if (*check) {
      bnmap::Network net = bnmap::parse_network(read_file(c_net));
      auto report = bnmap::validate_network(net);
      for (const auto& v : report.violations) std::cout << "violation=" << v << "\n";
      std::cout << "valid=" << (report.ok ? "true" : "false") << "\n";
      return report.ok ? kExitOk : kExitValidation;
    }
  } catch (const bnmap::ZeroEvidenceError& e) {
    std::cerr << e.what() << "\n";
    return kExitZeroEvidence;
  } catch (const bnmap::TimeoutError& e) {
    std::cerr << e.what() << "\n";
    return kExitTimeout;
  } catch (const bnmap::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
