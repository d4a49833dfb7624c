#include "bnmap/benchgen.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bnmap/decomposition.hpp"
#include "bnmap/map_solver.hpp"
#include "bnmap/oracle.hpp"

namespace bnmap {

Family parse_family(const std::string& name) {
  if (name == "poly") return Family::Poly;
  if (name == "rand") return Family::Rand;
  if (name == "rand-tw4") return Family::RandTw4;
  if (name == "rand-tw8") return Family::RandTw8;
  if (name == "alarm-like") return Family::AlarmLike;
  if (name == "insurance-like") return Family::InsuranceLike;
  throw std::invalid_argument("unknown family: " + name);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Poly: return "poly";
    case Family::Rand: return "rand";
    case Family::RandTw4: return "rand-tw4";
    case Family::RandTw8: return "rand-tw8";
    case Family::AlarmLike: return "alarm-like";
    case Family::InsuranceLike: return "insurance-like";
  }
  return "?";
}

std::string SuiteSpec::label() const {
  std::ostringstream os;
  os << family_name(family) << "." << base_size << ".c" << max_card;
  return os.str();
}

namespace {

int draw_card(std::mt19937_64& rng, int max_card) {
  if (max_card <= 2) return 2;
  return std::uniform_int_distribution<int>(2, max_card)(rng);
}

// row entries proportional to exponential deviates, quantized to a
// positive-integer grid so rows sum to exactly 1 in rationals
std::vector<Rational> sample_row(std::mt19937_64& rng, int card) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<long> w(card);
  long total = 0;
  for (int i = 0; i < card; ++i) {
    double u = unif(rng);
    if (u <= 0.0) u = 1e-12;
    double e = -std::log(u);
    w[i] = std::max<long>(1, std::lround(e * 4096.0));
    total += w[i];
  }
  std::vector<Rational> row(card);
  for (int i = 0; i < card; ++i) {
    row[i] = Rational(w[i], static_cast<unsigned long>(total));
    row[i].canonicalize();
  }
  return row;
}

void fill_cpt(Network& net, int var, std::mt19937_64& rng) {
  long long rows = net.row_count(var);
  net.cpts[var].clear();
  for (long long r = 0; r < rows; ++r) {
    auto row = sample_row(rng, net.cardinality(var));
    net.cpts[var].insert(net.cpts[var].end(), row.begin(), row.end());
  }
}

void uniform_cpt(Network& net, int var) {
  int card = net.cardinality(var);
  Rational u(1, static_cast<unsigned long>(card));
  u.canonicalize();
  net.cpts[var].assign(card, u);
}

int add_node(Network& net, int card) {
  int id = net.num_vars();
  net.variables.push_back({id, "v" + std::to_string(id), card});
  net.parents.emplace_back();
  net.cpts.emplace_back();
  return id;
}

void build_base(Network& net, const SuiteSpec& spec, std::mt19937_64& rng) {
  int n = spec.base_size;
  int max_card = spec.max_card;
  if (spec.family == Family::AlarmLike) max_card = std::min(max_card, 4);
  if (spec.family == Family::InsuranceLike) max_card = std::min(max_card, 5);
  for (int i = 0; i < n; ++i) add_node(net, draw_card(rng, max_card));

  switch (spec.family) {
    case Family::Poly: {
      // random undirected tree, each edge randomly oriented; the skeleton
      // stays a tree, so the result is a polytree
      for (int i = 1; i < n; ++i) {
        int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
        if (std::uniform_int_distribution<int>(0, 1)(rng))
          net.parents[i].push_back(j);
        else
          net.parents[j].push_back(i);
      }
      break;
    }
    case Family::Rand:
    case Family::AlarmLike:
    case Family::InsuranceLike: {
      int max_parents = spec.family == Family::Rand ? 3 : 2;
      for (int i = 1; i < n; ++i) {
        int k = std::uniform_int_distribution<int>(0, std::min(i, max_parents))(rng);
        std::vector<int> pool(i);
        for (int j = 0; j < i; ++j) pool[j] = j;
        std::shuffle(pool.begin(), pool.end(), rng);
        net.parents[i].assign(pool.begin(), pool.begin() + k);
        std::sort(net.parents[i].begin(), net.parents[i].end());
      }
      break;
    }
    case Family::RandTw4:
    case Family::RandTw8: {
      // random partial k-tree: every node's parents are a subset of an
      // existing k-clique, which caps the moral width by construction
      int k = spec.family == Family::RandTw4 ? 4 : 8;
      std::vector<std::vector<int>> cliques;
      int seedn = std::min(n, k + 1);
      std::vector<int> first;
      for (int i = 0; i < seedn; ++i) {
        net.parents[i] = first;
        first.push_back(i);
      }
      cliques.push_back(first);
      for (int i = seedn; i < n; ++i) {
        const auto& cl =
            cliques[std::uniform_int_distribution<std::size_t>(0, cliques.size() - 1)(rng)];
        std::vector<int> pool = cl;
        std::shuffle(pool.begin(), pool.end(), rng);
        int cnt = std::uniform_int_distribution<int>(1, static_cast<int>(pool.size()))(rng);
        net.parents[i].assign(pool.begin(), pool.begin() + cnt);
        std::sort(net.parents[i].begin(), net.parents[i].end());
        // the new node plus its parents form a clique to extend later
        std::vector<int> next(net.parents[i]);
        next.push_back(i);
        while (static_cast<int>(next.size()) > k)
          next.erase(next.begin() +
                     std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng));
        cliques.push_back(next);
      }
      break;
    }
  }
  for (int i = 0; i < n; ++i) fill_cpt(net, i, rng);
}

}  // namespace

std::pair<Network, Query> gen_random_instance(const SuiteSpec& spec,
                                              int instance_index) {
  if (spec.base_size < 1) throw std::invalid_argument("base_size < 1");
  if (spec.max_card < 2 || spec.max_card > 5)
    throw std::invalid_argument("max_card must be in 2..5");
  std::mt19937_64 rng(spec.seed + 0x9e3779b97f4a7c15ull *
                                      static_cast<std::uint64_t>(instance_index + 1));
  Network net;
  build_base(net, spec, rng);
  const int n = spec.base_size;

  // extreme nodes of the base net: roots and leaves
  std::vector<char> has_child(n, 0);
  for (int i = 0; i < n; ++i)
    for (int p : net.parents[i]) has_child[p] = 1;
  std::vector<int> extremes;
  for (int i = 0; i < n; ++i)
    if (net.parents[i].empty() || !has_child[i]) extremes.push_back(i);

  Query query;
  for (int i = 0; i < n; ++i) {
    int mid = add_node(net, draw_card(rng, spec.max_card));
    uniform_cpt(net, mid);
    int target =
        extremes[std::uniform_int_distribution<std::size_t>(0, extremes.size() - 1)(rng)];
    net.parents[target].push_back(mid);
    fill_cpt(net, target, rng);  // arity changed, resample
    query.map_vars.push_back(mid);
  }
  std::sort(query.map_vars.begin(), query.map_vars.end());
  return {std::move(net), std::move(query)};
}

double search_space_log2(const Network& net, const Query& query) {
  double total = 0;
  for (int v : query.map_vars)
    total += std::log2(static_cast<double>(net.cardinality(v)));
  return total;
}

std::string ss_bucket(double log2_size) {
  if (log2_size < 10.0) return "0-10";
  if (log2_size < 20.0) return "10-20";
  if (log2_size < 40.0) return "20-40";
  return ">40";
}

std::string SolverChoice::name() const {
  switch (kind) {
    case Kind::Exact: return "exact";
    case Kind::Oracle: return "oracle";
    case Kind::Approx: {
      std::ostringstream os;
      os << "approx(" << epsilon << (additive ? ",add)" : ",mult)");
      return os.str();
    }
  }
  return "?";
}

std::string RunRecord::csv_row() const {
  std::ostringstream os;
  os << suite << "," << instance << "," << ss_log2 << "," << solver << ","
     << status << "," << ms << "," << value << "," << avg_pareto << ","
     << avg_dim;
  return os.str();
}

namespace {

RunRecord run_one(const Network& net, const Query& query,
                  const SuiteSpec& spec, int instance,
                  const SolverChoice& sc, double timeout_seconds) {
  RunRecord rec;
  rec.suite = spec.label();
  rec.instance = instance;
  rec.ss_log2 = search_space_log2(net, query);
  rec.solver = sc.name();
  auto start = std::chrono::steady_clock::now();
  Deadline deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(timeout_seconds));
  try {
    switch (sc.kind) {
      case SolverChoice::Kind::Exact: {
        auto ad = decompose_for(net, query, Heuristic::MinFill);
        SolveOptions opts;
        opts.deadline = deadline;
        auto sol = solve_map<double>(net, ad, query, opts);
        rec.value = sol.value;
        rec.avg_pareto = sol.stats.avg_pareto();
        rec.avg_dim = sol.stats.avg_dim();
        rec.status = "ok";
        break;
      }
      case SolverChoice::Kind::Approx: {
        auto ad = decompose_for(net, query, Heuristic::MinFill);
        auto mode = sc.additive ? Lattice::Mode::Additive
                                : Lattice::Mode::Multiplicative;
        auto res = solve_map_approx(net, ad, query, sc.epsilon, mode, deadline);
        rec.value = res.solution.value;
        rec.avg_pareto = res.solution.stats.avg_pareto();
        rec.avg_dim = res.solution.stats.avg_dim();
        rec.status = "ok";
        break;
      }
      case SolverChoice::Kind::Oracle: {
        auto res = brute_force_map(net, query);
        rec.value = res.value.get_d();
        rec.status = "ok";
        break;
      }
    }
  } catch (const TimeoutError&) {
    rec.status = "timeout";
  } catch (const OracleGuardError&) {
    rec.status = "skipped";
  } catch (const std::exception&) {
    rec.status = "error";
  }
  rec.ms = std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
               .count();
  return rec;
}

}  // namespace

std::vector<RunRecord> run_suite(const std::vector<SuiteSpec>& specs,
                                 const std::vector<SolverChoice>& solvers,
                                 double timeout_seconds, int threads) {
  struct Task {
    const SuiteSpec* spec;
    int instance;
  };
  std::vector<Task> tasks;
  for (const auto& spec : specs)
    for (int i = 0; i < spec.query_count; ++i) tasks.push_back({&spec, i});

  std::vector<std::vector<RunRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& t = tasks[idx];
      auto [net, query] = gen_random_instance(*t.spec, t.instance);
      for (const auto& sc : solvers)
        results[idx].push_back(
            run_one(net, query, *t.spec, t.instance, sc, timeout_seconds));
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<RunRecord> out;
  for (auto& group : results)
    for (auto& rec : group) out.push_back(std::move(rec));
  std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.suite, a.instance, a.solver) <
           std::tie(b.suite, b.instance, b.solver);
  });
  return out;
}

std::string emit_csv(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << "suite,instance,ss_log2,solver,status,ms,value,avg_pareto,avg_dim\n";
  for (const auto& r : records) os << r.csv_row() << "\n";
  return os.str();
}

std::string emit_markdown(const std::vector<RunRecord>& records) {
  struct Agg {
    int total = 0, ok = 0;
    double ms = 0, pareto = 0, dim = 0;
  };
  std::map<std::tuple<std::string, std::string, std::string>, Agg> agg;
  for (const auto& r : records) {
    Agg& a = agg[{r.suite, ss_bucket(r.ss_log2), r.solver}];
    a.total += 1;
    if (r.status == "ok") {
      a.ok += 1;
      a.ms += r.ms;
      a.pareto += r.avg_pareto;
      a.dim += r.avg_dim;
    }
  }
  std::ostringstream os;
  os << "| suite | ss | solver | #Q | ok | mean ms | avg pareto | avg dim |\n";
  os << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& [key, a] : agg) {
    const auto& [suite, bucket, solver] = key;
    os << "| " << suite << " | " << bucket << " | " << solver << " | "
       << a.total << " | " << a.ok << " | ";
    if (a.ok > 0)
      os << a.ms / a.ok << " | " << a.pareto / a.ok << " | " << a.dim / a.ok;
    else
      os << "- | - | -";
    os << " |\n";
  }
  return os.str();
}

}  // namespace bnmap
