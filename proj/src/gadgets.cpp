#include "bnmap/gadgets.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace bnmap {

namespace {

Rational pow2_neg(int k) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(k));
  Rational r(1, d);
  r.canonicalize();
  return r;
}

int add_var(Network& net, const std::string& name, int card) {
  int id = net.num_vars();
  net.variables.push_back({id, name, card});
  net.parents.emplace_back();
  net.cpts.emplace_back();
  return id;
}

std::string rat(const Rational& r) { return rational_token(r); }

}  // namespace

int PartitionInstance::b() const {
  int total = 0;
  for (long long v : s) {
    if (v < 1) throw std::domain_error("partition entries must be positive");
    total += std::bit_width(static_cast<unsigned long long>(v));
  }
  return total;
}

long long PartitionInstance::total() const {
  long long t = 0;
  for (long long v : s) t += v;
  return t;
}

Rational PartitionInstance::half_sum() const {
  Rational h(static_cast<long>(total()), 2u);
  h.canonicalize();
  return h;
}

void Max2SatInstance::validate() const {
  if (m < 1) throw std::domain_error("2CNF needs at least one variable");
  if (clauses.empty()) throw std::domain_error("2CNF needs at least one clause");
  for (const auto& [a, c] : clauses) {
    if (a.var == c.var)
      throw std::domain_error("clause variables must be distinct");
    if (a.var < 0 || a.var >= m || c.var < 0 || c.var >= m)
      throw std::domain_error("clause variable out of range");
  }
}

GadgetArtifact partition_to_polytree(const PartitionInstance& inst) {
  const int m = inst.m();
  if (m < 1) throw std::domain_error("partition needs at least one element");
  const int b = inst.b();
  const Rational S = inst.half_sum();

  std::vector<Rational> t(m);
  for (int i = 0; i < m; ++i) {
    Rational v = Rational(static_cast<long>(inst.s[i])) / S;
    v.canonicalize();
    t[i] = dyadic_pow2_up(v, 4 * b + 3).to_rational();
  }

  GadgetArtifact art;
  Network& net = art.network;
  const Rational half(1, 2);
  // X block: uniform binary roots; state 0 is "true"
  for (int i = 1; i <= m; ++i) {
    int id = add_var(net, "X" + std::to_string(i), 2);
    net.cpts[id] = {half, half};
  }
  // Y chain: Y0 pinned true, Yi true iff Yi-1 true, thinned by t_i when
  // Xi is true
  int y_prev = add_var(net, "Y0", 2);
  net.cpts[y_prev] = {Rational(1), Rational(0)};
  for (int i = 1; i <= m; ++i) {
    int id = add_var(net, "Y" + std::to_string(i), 2);
    net.parents[id] = {i - 1, y_prev};  // (Xi, Yi-1)
    net.cpts[id] = {
        t[i - 1], 1 - t[i - 1],          // x true,  y_prev true
        Rational(0), Rational(1),        // x true,  y_prev false
        Rational(1), Rational(0),        // x false, y_prev true
        Rational(0), Rational(1),        // x false, y_prev false
    };
    y_prev = id;
  }
  // E block: observed sensors of X
  for (int i = 1; i <= m; ++i) {
    int id = add_var(net, "E" + std::to_string(i), 2);
    net.parents[id] = {i - 1};
    net.cpts[id] = {t[i - 1], 1 - t[i - 1], Rational(1), Rational(0)};
  }

  for (int i = 0; i < m; ++i) art.query.map_vars.push_back(i);
  for (int i = 1; i <= m; ++i) art.query.evidence.set(2 * m + i, 0);
  art.query.evidence.set(2 * m, 1);  // Ym false

  // threshold r = a'(1-a') / 2^m with a' an up-rounding of 2^{-1+2^{-3b}}
  Rational e = Rational(-1) + pow2_neg(3 * b);
  e.canonicalize();
  Rational a = pow2_up_dyadic_exp(e, 3 * b + 2).to_rational();
  Rational r = a * (1 - a) * pow2_neg(m);
  r.canonicalize();
  art.query.threshold = r;

  std::ostringstream cert;
  cert << "partition-polytree m=" << m << " b=" << b
       << " threshold=" << rat(r) << " decision=value-gt-threshold";
  art.certificate = cert.str();
  return art;
}

GadgetArtifact max2sat_to_naivebayes(const Max2SatInstance& inst) {
  inst.validate();
  const int m = inst.m;
  const int mp = inst.m_prime();
  const Rational half(1, 2);

  GadgetArtifact art;
  Network& net = art.network;
  int c_id = add_var(net, "C", 2 * mp);
  net.cpts[c_id].assign(2 * mp, Rational(1, 2 * mp));
  for (auto& e : net.cpts[c_id]) e.canonicalize();

  // state 2(i-1) of C picks clause i's smaller-index literal, 2(i-1)+1 the
  // larger one
  std::vector<std::pair<Literal, Literal>> norm = inst.clauses;
  for (auto& [l, r] : norm)
    if (l.var > r.var) std::swap(l, r);

  int y0 = add_var(net, "Y0", 2);
  net.parents[y0] = {c_id};
  for (int i = 0; i < mp; ++i) {
    net.cpts[y0].insert(net.cpts[y0].end(), {Rational(1), Rational(0)});
    net.cpts[y0].insert(net.cpts[y0].end(), {half, half});
  }

  for (int j = 1; j <= m; ++j) {
    int id = add_var(net, "Y" + std::to_string(j), 2);
    net.parents[id] = {c_id};
    const int vj = j - 1;
    for (int i = 0; i < mp; ++i) {
      const Literal& L = norm[i].first;
      const Literal& R = norm[i].second;
      Rational pL = half, pR = half;  // p(y_j true | c_iL), ... | c_iR)
      if (L.var == vj) {
        pL = L.positive ? 1 : 0;
        pR = 1 - pL;
      } else if (R.var == vj) {
        pR = R.positive ? 1 : 0;
      }
      net.cpts[id].insert(net.cpts[id].end(), {pL, 1 - pL});
      net.cpts[id].insert(net.cpts[id].end(), {pR, 1 - pR});
    }
  }

  for (int j = 0; j <= m; ++j) art.query.map_vars.push_back(1 + j);

  std::ostringstream cert;
  cert << "max2sat-naivebayes m=" << m << " mprime=" << mp
       << " value=k/(2^m*mprime)";
  art.certificate = cert.str();
  return art;
}

GadgetArtifact amplify(const Max2SatInstance& inst, int q) {
  if (q < 1) throw std::domain_error("amplify requires q >= 1");
  GadgetArtifact base = max2sat_to_naivebayes(inst);
  const int m = inst.m;
  const int mp = inst.m_prime();

  GadgetArtifact art;
  Network& net = art.network;
  int d_id = add_var(net, "D", 2);
  net.cpts[d_id] = {Rational(1), Rational(0)};

  Rational unif(1, 2 * mp);
  unif.canonicalize();
  for (int t = 1; t <= q; ++t) {
    std::string suf = "_" + std::to_string(t);
    int c_id = add_var(net, "C" + suf, 2 * mp);
    net.parents[c_id] = {d_id};
    // uniform under both parent states
    net.cpts[c_id].assign(2 * (2 * mp), unif);
    for (int j = 0; j <= m; ++j) {
      int base_id = 1 + j;  // Yj in the base network
      int id = add_var(net, "Y" + std::to_string(j) + suf, 2);
      net.parents[id] = {c_id};
      net.cpts[id] = base.network.cpts[base_id];
      art.query.map_vars.push_back(id);
    }
  }
  std::sort(art.query.map_vars.begin(), art.query.map_vars.end());

  std::ostringstream cert;
  cert << "max2sat-amplified m=" << m << " mprime=" << mp << " q=" << q
       << " value=(k/(2^m*mprime))^q";
  art.certificate = cert.str();
  return art;
}

GadgetArtifact partition_to_hmm(const PartitionInstance& inst) {
  const int m = inst.m();
  if (m < 1) throw std::domain_error("partition needs at least one element");
  if (inst.total() % 2 != 0)
    throw std::domain_error("half-sum must be an integer");
  const long long S = inst.total() / 2;
  if (S < 2) throw std::domain_error("half-sum must be at least 2");
  const int b = inst.b();

  std::vector<Rational> t(m);
  for (int i = 0; i < m; ++i) {
    Rational v(static_cast<long>(inst.s[i]), static_cast<unsigned long>(S));
    v.canonicalize();
    t[i] = dyadic_pow2_up(v, 6 * b + 3).to_rational();
  }

  GadgetArtifact art;
  Network& net = art.network;
  const Rational half(1, 2);
  const Rational third(1, 3);
  int d_prev = add_var(net, "D0", 3);
  net.cpts[d_prev] = {third, third, third};
  for (int i = 1; i <= m; ++i) {
    const Rational& ti = t[i - 1];
    int x = add_var(net, "X" + std::to_string(i), 5);
    net.parents[x] = {d_prev};
    net.cpts[x] = {
        half, Rational(0), Rational(0), half, Rational(0),  // d true
        Rational(0), half, half, Rational(0), Rational(0),  // d false
        Rational(0), Rational(0), Rational(0), Rational(0), Rational(1),
    };
    int y = add_var(net, "Y" + std::to_string(i), 2);
    net.parents[y] = {x};
    net.cpts[y] = {
        Rational(1), Rational(0),  // x1
        Rational(1), Rational(0),  // x2
        Rational(0), Rational(1),  // x3
        Rational(0), Rational(1),  // x4
        half, half,                // x5
    };
    int d = add_var(net, "D" + std::to_string(i), 3);
    net.parents[d] = {x};
    net.cpts[d] = {
        ti, Rational(0), 1 - ti,           // x1
        Rational(0), Rational(1), Rational(0),  // x2
        Rational(0), ti, 1 - ti,           // x3
        Rational(1), Rational(0), Rational(0),  // x4
        Rational(0), Rational(0), Rational(1),  // x5
    };
    art.query.map_vars.push_back(y);
    d_prev = d;
  }
  art.query.evidence.set(d_prev, 2);  // D_m at its neutral third state

  // r = (1/2^m) (1 - a/3) with a an up-rounding of 2^{2^{-5b}}
  Rational a = pow2_up_dyadic_exp(pow2_neg(5 * b), 5 * b + 3).to_rational();
  Rational r = pow2_neg(m) * (1 - a * third);
  r.canonicalize();
  art.query.threshold = r;

  std::ostringstream cert;
  cert << "partition-hmm m=" << m << " b=" << b << " threshold=" << rat(r)
       << " decision=value-gt-threshold";
  art.certificate = cert.str();
  return art;
}

bool even_partition_exists(const PartitionInstance& inst) {
  long long total = inst.total();
  if (total % 2 != 0) return false;
  long long target = total / 2;
  std::vector<char> reach(target + 1, 0);
  reach[0] = 1;
  for (long long v : inst.s)
    for (long long s = target; s >= v; --s)
      if (reach[s - v]) reach[s] = 1;
  return reach[target] != 0;
}

int max_sat_count(const Max2SatInstance& inst) {
  inst.validate();
  if (inst.m > 24) throw std::domain_error("max_sat_count limited to m <= 24");
  int best = 0;
  for (unsigned long long mask = 0; mask < (1ull << inst.m); ++mask) {
    int k = 0;
    for (const auto& [a, c] : inst.clauses) {
      bool av = ((mask >> a.var) & 1) != 0;
      bool cv = ((mask >> c.var) & 1) != 0;
      if ((av == a.positive) || (cv == c.positive)) ++k;
    }
    best = std::max(best, k);
  }
  return best;
}

Rational naivebayes_optimum(const Max2SatInstance& inst) {
  int k = max_sat_count(inst);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(inst.m));
  den *= inst.m_prime();
  Rational r(mpz_class(k), den);
  r.canonicalize();
  return r;
}

}  // namespace bnmap
