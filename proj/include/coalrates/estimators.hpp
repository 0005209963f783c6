#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coalrates/model.hpp"
#include "coalrates/random.hpp"

namespace coalrates {

enum class MethodId : int { ML = 0, GLASS_MT, RSTAR, STAR, MDC, STEAC, SC };

inline constexpr std::array<MethodId, 7> kAllMethods = {
    MethodId::ML,   MethodId::GLASS_MT, MethodId::RSTAR, MethodId::STAR,
    MethodId::MDC,  MethodId::STEAC,    MethodId::SC};

// Method groups sharing a decay rate: G1 = {ML, GLASS_MT},
// G2 = {RSTAR, STAR, MDC}, G3 = {STEAC, SC}.
enum class MethodGroup : int { GLASS = 1, RSTAR = 2, STEAC = 3 };

inline MethodGroup group_of(MethodId m) {
  switch (m) {
    case MethodId::ML:
    case MethodId::GLASS_MT: return MethodGroup::GLASS;
    case MethodId::RSTAR:
    case MethodId::STAR:
    case MethodId::MDC: return MethodGroup::RSTAR;
    case MethodId::STEAC:
    case MethodId::SC: return MethodGroup::STEAC;
  }
  throw std::logic_error("bad method id");
}

inline std::string method_name(MethodId m) {
  switch (m) {
    case MethodId::ML: return "ml";
    case MethodId::GLASS_MT: return "glass";
    case MethodId::RSTAR: return "rstar";
    case MethodId::STAR: return "star";
    case MethodId::MDC: return "mdc";
    case MethodId::STEAC: return "steac";
    case MethodId::SC: return "sc";
  }
  throw std::logic_error("bad method id");
}

inline std::optional<MethodId> method_from_name(const std::string& s) {
  if (s == "glass" || s == "glass_mt" || s == "mt") return MethodId::GLASS_MT;
  for (MethodId m : kAllMethods)
    if (method_name(m) == s) return m;
  return std::nullopt;
}

struct Estimate {
  Topology topology = Topology::AB_C;
  std::optional<double> tau_cherry;  // set by GLASS/MT and ML only
  std::optional<double> tau_root;
  bool tie = false;
};

// Dedicated random stream for tie resolution. Every method draws at most
// once per decision, and only when the argmin/argmax set has more than
// one element, so methods sharing a stream resolve identical tie sets
// identically.
class TieBreaker {
 public:
  explicit TieBreaker(std::uint64_t seed) : rng_(seed) {}

  // pick uniformly among `candidates` (enum order); no draw when unique
  Topology pick(const std::vector<Topology>& candidates, bool* tied) {
    if (candidates.size() == 1) {
      if (tied) *tied = false;
      return candidates[0];
    }
    if (tied) *tied = true;
    return candidates[rng_.uniform_index(candidates.size())];
  }

 private:
  Xoshiro256pp rng_;
};

namespace detail {

// argmin set under exact double comparison; statistics are accumulated in
// locus order so equal inputs give bit-identical values
inline std::vector<Topology> argmin_set(const std::array<double, 3>& stat) {
  double best = std::min({stat[0], stat[1], stat[2]});
  std::vector<Topology> out;
  for (Topology t : kAllTopologies)
    if (stat[static_cast<int>(t)] == best) out.push_back(t);
  return out;
}

inline std::vector<Topology> argmax_set(const std::array<double, 3>& stat) {
  double best = std::max({stat[0], stat[1], stat[2]});
  std::vector<Topology> out;
  for (Topology t : kAllTopologies)
    if (stat[static_cast<int>(t)] == best) out.push_back(t);
  return out;
}

inline std::array<double, 3> topology_counts(
    const std::vector<GeneTree3>& gene_trees) {
  std::array<double, 3> counts = {0.0, 0.0, 0.0};
  for (const auto& g : gene_trees) counts[static_cast<int>(g.topology)] += 1.0;
  return counts;
}

}  // namespace detail

// GLASS / Maximum Tree: distance matrix of minimum coalescence times
// across loci; the cherry is the pair with the smallest entry.
inline Estimate glass_mt(const std::vector<GeneTree3>& gene_trees,
                         TieBreaker& tie) {
  std::array<double, 3> dmin;
  dmin.fill(std::numeric_limits<double>::infinity());
  for (const auto& g : gene_trees)
    for (TaxonPair pair : kAllTopologies) {
      double d = pairwise_time(g, pair);
      if (d < dmin[static_cast<int>(pair)]) dmin[static_cast<int>(pair)] = d;
    }
  Estimate e;
  e.topology = tie.pick(detail::argmin_set(dmin), &e.tie);
  double other = std::numeric_limits<double>::infinity();
  for (Topology t : kAllTopologies)
    if (t != e.topology) other = std::min(other, dmin[static_cast<int>(t)]);
  e.tau_cherry = dmin[static_cast<int>(e.topology)];
  e.tau_root = other;
  return e;
}

// Maximum likelihood. For each candidate topology the likelihood exponent
// is monotone increasing in the divergence times, so the optimum sits at
// the largest times consistent with every locus (the Maximum Tree times):
// root = min over loci of the coalescence times involving the outgroup,
// cherry = min(min cherry time, root).
inline Estimate ml(const std::vector<GeneTree3>& gene_trees, TieBreaker& tie,
                   bool validate_grid = false) {
  std::array<double, 3> ll;
  std::array<double, 3> cherry_time, root_time;
  for (Topology cand : kAllTopologies) {
    const int i = static_cast<int>(cand);
    double dmin_cherry = std::numeric_limits<double>::infinity();
    double dmin_out = std::numeric_limits<double>::infinity();
    for (const auto& g : gene_trees) {
      dmin_cherry = std::min(dmin_cherry, pairwise_time(g, cand));
      for (TaxonPair pair : kAllTopologies)
        if (pair != cand) dmin_out = std::min(dmin_out, pairwise_time(g, pair));
    }
    root_time[i] = dmin_out;
    cherry_time[i] = std::min(dmin_cherry, dmin_out);
    SpeciesTree3 cand_tree(cherry_time[i], root_time[i], cand);
    ll[i] = log_likelihood(gene_trees, cand_tree);
    if (validate_grid) {
      // brute-force guard: shrinking either divergence time must not
      // improve the likelihood
      for (double f1 : {0.5, 0.8, 0.95})
        for (double f2 : {0.5, 0.8, 0.95}) {
          SpeciesTree3 alt(cherry_time[i] * f1,
                           std::max(cherry_time[i] * f1, root_time[i] * f2),
                           cand);
          ll[i] = std::max(ll[i], log_likelihood(gene_trees, alt));
        }
    }
  }
  Estimate e;
  e.topology = tie.pick(detail::argmax_set(ll), &e.tie);
  e.tau_cherry = cherry_time[static_cast<int>(e.topology)];
  e.tau_root = root_time[static_cast<int>(e.topology)];
  return e;
}

// R* consensus: plurality topology.
inline Estimate rstar(const std::vector<GeneTree3>& gene_trees,
                      TieBreaker& tie) {
  Estimate e;
  e.topology = tie.pick(detail::argmax_set(detail::topology_counts(gene_trees)),
                        &e.tie);
  return e;
}

// STAR: average rank distances; the cherry MRCA has rank 1, the root
// rank 2, and the distance doubles the rank.
inline Estimate star(const std::vector<GeneTree3>& gene_trees,
                     TieBreaker& tie) {
  std::array<double, 3> ranksum = {0.0, 0.0, 0.0};
  for (const auto& g : gene_trees)
    for (TaxonPair pair : kAllTopologies)
      ranksum[static_cast<int>(pair)] += (pair == g.topology ? 2.0 : 4.0);
  Estimate e;
  e.topology = tie.pick(detail::argmin_set(ranksum), &e.tie);
  return e;
}

// MDC: each locus whose topology disagrees with the candidate species
// tree forces exactly one extra lineage through the internal branch.
inline Estimate mdc(const std::vector<GeneTree3>& gene_trees,
                    TieBreaker& tie) {
  auto counts = detail::topology_counts(gene_trees);
  const double L = static_cast<double>(gene_trees.size());
  std::array<double, 3> cost;
  for (int i = 0; i < 3; ++i) cost[i] = L - counts[i];
  Estimate e;
  e.topology = tie.pick(detail::argmin_set(cost), &e.tie);
  return e;
}

// STEAC / SC: smallest average pairwise coalescence time. The two methods
// differ only with multiple alleles per population; with one allele they
// coincide, so both MethodIds dispatch here.
inline Estimate steac_sc(const std::vector<GeneTree3>& gene_trees,
                         TieBreaker& tie) {
  std::array<double, 3> dsum = {0.0, 0.0, 0.0};
  for (const auto& g : gene_trees)
    for (TaxonPair pair : kAllTopologies)
      dsum[static_cast<int>(pair)] += pairwise_time(g, pair);
  Estimate e;
  e.topology = tie.pick(detail::argmin_set(dsum), &e.tie);
  return e;
}

inline Estimate estimate(MethodId m, const std::vector<GeneTree3>& gene_trees,
                         TieBreaker& tie) {
  if (gene_trees.empty())
    throw std::invalid_argument("estimator needs at least one locus");
  switch (m) {
    case MethodId::ML: return ml(gene_trees, tie);
    case MethodId::GLASS_MT: return glass_mt(gene_trees, tie);
    case MethodId::RSTAR: return rstar(gene_trees, tie);
    case MethodId::STAR: return star(gene_trees, tie);
    case MethodId::MDC: return mdc(gene_trees, tie);
    case MethodId::STEAC:
    case MethodId::SC: return steac_sc(gene_trees, tie);
  }
  throw std::logic_error("bad method id");
}

}  // namespace coalrates
