#include "bnmap/lattice.hpp"

namespace bnmap {
namespace {

// log2 of a positive rational, safe for values far outside double range.
double log2_rational(const Rational& q) {
  signed long ne, de;
  const double nm = mpz_get_d_2exp(&ne, mpq_numref(q.get_mpq_t()));
  const double dm = mpz_get_d_2exp(&de, mpq_denref(q.get_mpq_t()));
  return (std::log2(nm) + ne) - (std::log2(dm) + de);
}

}  // namespace

Rational lattice_floor(const Network& net) {
  Rational min_entry = 1;
  for (const auto& cpt : net.cpts)
    for (const Rational& e : cpt)
      if (e > 0 && e < min_entry) min_entry = e;
  return rational_pow(min_entry, static_cast<unsigned long>(net.num_vars()));
}

Lattice Lattice::make(const Network& net, const AnnotatedDecomposition& ad,
                      const Rational& epsilon, Mode mode) {
  if (epsilon <= 0 || epsilon > 1)
    throw std::invalid_argument("epsilon must be in (0,1]");
  Lattice lat;
  lat.epsilon = epsilon;
  lat.mode = mode;
  lat.w_prime = ad.width + 1;
  lat.n_prime = ad.base.num_clusters();
  lat.floor_value = lattice_floor(net);

  const double eps = epsilon.get_d();
  const double per_coord = eps / (2.0 * lat.w_prime * lat.n_prime);
  lat.log_rho = std::log1p(per_coord);
  lat.step = per_coord;
  const double log_floor = log2_rational(lat.floor_value) * std::log(2.0);
  lat.floor_bucket =
      static_cast<long long>(std::floor(log_floor / lat.log_rho));
  return lat;
}

std::vector<long long> bucket_coords(const std::vector<double>& vec,
                                     const Lattice& lat) {
  std::vector<long long> coords(vec.size());
  for (std::size_t i = 0; i < vec.size(); ++i) {
    const double e = vec[i];
    if (e <= 0) {
      coords[i] = -1;  // dedicated zero bin; zeros only merge with zeros
      continue;
    }
    if (lat.mode == Lattice::Mode::Multiplicative) {
      long long b = static_cast<long long>(std::floor(std::log(e) / lat.log_rho));
      coords[i] = std::max(b, lat.floor_bucket);
    } else {
      coords[i] = static_cast<long long>(std::floor(e / lat.step));
    }
  }
  return coords;
}

void reduce_pareto(ParetoSet<double>& set, const Lattice& lat) {
  for (auto& [key, group] : set.groups()) {
    std::map<std::vector<long long>, std::size_t> kept;  // bucket -> slot
    std::vector<Candidate<double>> out;
    for (auto& cand : group) {
      auto coords = bucket_coords(cand.vec, lat);
      auto [it, inserted] = kept.try_emplace(std::move(coords), out.size());
      if (inserted) {
        out.push_back(std::move(cand));
        continue;
      }
      Candidate<double>& cur = out[it->second];
      const double cand_sum =
          std::accumulate(cand.vec.begin(), cand.vec.end(), 0.0);
      const double cur_sum =
          std::accumulate(cur.vec.begin(), cur.vec.end(), 0.0);
      if (cand_sum > cur_sum ||
          (cand_sum == cur_sum && cand.processed_map < cur.processed_map))
        cur = std::move(cand);
    }
    group = std::move(out);
  }
}

}  // namespace bnmap
