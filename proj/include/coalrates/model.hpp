#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalrates/random.hpp"

namespace coalrates {

enum class Taxon : int { A = 0, B = 1, C = 2 };

// Rooted triple topologies, named by the cherry pair. The enum order is
// the total order used everywhere (serialization, tie enumeration).
enum class Topology : int { AB_C = 0, AC_B = 1, BC_A = 2 };

inline constexpr std::array<Topology, 3> kAllTopologies = {
    Topology::AB_C, Topology::AC_B, Topology::BC_A};

// An unordered pair of taxa is identified with the topology whose cherry
// it is: {A,B} <-> AB|C, {A,C} <-> AC|B, {B,C} <-> BC|A.
using TaxonPair = Topology;

inline TaxonPair make_pair(Taxon x, Taxon y) {
  if (x == y) throw std::invalid_argument("taxon pair needs distinct taxa");
  int s = static_cast<int>(x) + static_cast<int>(y);
  // A+B=1 -> AB_C, A+C=2 -> AC_B, B+C=3 -> BC_A
  return static_cast<TaxonPair>(s - 1);
}

inline Taxon outgroup(Topology t) {
  // the taxon not in the cherry
  switch (t) {
    case Topology::AB_C: return Taxon::C;
    case Topology::AC_B: return Taxon::B;
    case Topology::BC_A: return Taxon::A;
  }
  throw std::logic_error("bad topology");
}

inline std::string topology_name(Topology t) {
  switch (t) {
    case Topology::AB_C: return "AB_C";
    case Topology::AC_B: return "AC_B";
    case Topology::BC_A: return "BC_A";
  }
  throw std::logic_error("bad topology");
}

inline std::optional<Topology> topology_from_name(const std::string& s) {
  for (Topology t : kAllTopologies)
    if (topology_name(t) == s) return t;
  return std::nullopt;
}

// Apply a permutation of taxa to a topology. perm[i] is the image of
// taxon i.
inline Topology permute(Topology t, const std::array<Taxon, 3>& perm) {
  Taxon out = perm[static_cast<int>(outgroup(t))];
  switch (out) {
    case Taxon::C: return Topology::AB_C;
    case Taxon::B: return Topology::AC_B;
    case Taxon::A: return Topology::BC_A;
  }
  throw std::logic_error("bad permutation");
}

// Three-taxon ultrametric species phylogeny. Times are absolute, backwards
// from the present, in coalescent units (N generations).
struct SpeciesTree3 {
  double tau_ab = 0.0;   // divergence of the cherry pair
  double tau_abc = 0.0;  // root divergence
  Topology topology = Topology::AB_C;

  SpeciesTree3() = default;
  SpeciesTree3(double cherry, double root, Topology top = Topology::AB_C)
      : tau_ab(cherry), tau_abc(root), topology(top) {
    if (!(tau_ab >= 0.0) || !(tau_abc >= tau_ab))
      throw std::invalid_argument("species tree needs 0 <= tau_ab <= tau_abc");
  }

  double internal_branch() const { return tau_abc - tau_ab; }
  // probability the cherry lineages coalesce in the internal branch
  double p_coalesce() const { return -std::expm1(-internal_branch()); }
};

// One sampled locus: rooted triple plus the two coalescence times.
// `failed` records the incomplete-lineage-sorting event: the cherry
// lineages did not coalesce in their shared ancestral branch.
struct GeneTree3 {
  Topology topology = Topology::AB_C;
  double t1 = 0.0;  // first (more recent) coalescence
  double t2 = 0.0;  // root coalescence
  bool failed = false;
};

// Time to the most recent common ancestor of the pair: t1 for the cherry,
// t2 for the other two pairs (ultrametricity).
inline double pairwise_time(const GeneTree3& g, TaxonPair pair) {
  return pair == g.topology ? g.t1 : g.t2;
}

// Draw one locus under the multispecies coalescent. With probability
// p = 1 - e^{-t} the cherry lineages coalesce inside the internal branch
// (time = truncated exponential), and the remaining pair coalesces an
// Exp(1) above the root. Otherwise all three lineages enter the root
// population: topology uniform, first coalescence Exp(mean 1/3), root
// Exp(1) later.
inline GeneTree3 sample_gene_tree(const SpeciesTree3& species,
                                  Xoshiro256pp& rng) {
  const double t = species.internal_branch();
  const double p = species.p_coalesce();
  GeneTree3 g;
  if (rng.uniform() < p) {
    g.failed = false;
    g.topology = species.topology;
    g.t1 = species.tau_ab + rng.truncated_exponential(t);
    g.t2 = species.tau_abc + rng.exponential();
  } else {
    g.failed = true;
    g.topology = kAllTopologies[rng.uniform_index(3)];
    g.t1 = species.tau_abc + rng.exponential() / 3.0;
    g.t2 = g.t1 + rng.exponential();
  }
  return g;
}

// Per-population bookkeeping for one locus: how many lineages enter and
// exit each population and where each coalescence lands.
struct PopulationSchedule {
  int entering = 0;
  int exiting = 0;
  std::vector<double> coalescence_times;
};

struct LineageSchedule {
  // order: A, B, C, cherry ancestor, root
  std::array<PopulationSchedule, 5> pops;
  PopulationSchedule& leaf(int i) { return pops[i]; }
  PopulationSchedule& internal() { return pops[3]; }
  PopulationSchedule& root() { return pops[4]; }
  const PopulationSchedule& internal() const { return pops[3]; }
  const PopulationSchedule& root() const { return pops[4]; }
};

// Assign each coalescence of g to a population of `species`, or nullopt
// when the gene tree is inconsistent with the species divergence times
// (a coalescence between lineages that are not yet in a common
// population).
inline std::optional<LineageSchedule> try_build_schedule(
    const GeneTree3& g, const SpeciesTree3& species) {
  if (!(g.t1 <= g.t2)) return std::nullopt;
  const bool cherry_match = g.topology == species.topology;
  // first coalescence: in the internal branch iff it is between the
  // species cherry pair and falls inside [tau_ab, tau_abc)
  bool first_in_internal;
  if (g.t1 < species.tau_ab) return std::nullopt;
  if (g.t1 < species.tau_abc) {
    if (!cherry_match) return std::nullopt;
    first_in_internal = true;
  } else {
    first_in_internal = false;
  }
  if (g.t2 < species.tau_abc) return std::nullopt;

  LineageSchedule s;
  for (int i = 0; i < 3; ++i) {
    s.leaf(i).entering = 1;
    s.leaf(i).exiting = 1;
  }
  s.internal().entering = 2;
  if (first_in_internal) {
    s.internal().exiting = 1;
    s.internal().coalescence_times.push_back(g.t1);
    s.root().entering = 2;
    s.root().coalescence_times.push_back(g.t2);
  } else {
    s.internal().exiting = 2;
    s.root().entering = 3;
    s.root().coalescence_times.push_back(g.t1);
    s.root().coalescence_times.push_back(g.t2);
  }
  s.root().exiting = 1;
  return s;
}

inline LineageSchedule build_schedule(const GeneTree3& g,
                                      const SpeciesTree3& species) {
  auto s = try_build_schedule(g, species);
  if (!s)
    throw std::invalid_argument(
        "gene tree inconsistent with species divergence times");
  return *s;
}

// Log-likelihood of one locus: the coalescent exponent
// -sum over populations, over inter-event intervals with k lineages, of
// C(k,2) * (interval length). Rates are unit in coalescent units so there
// is no per-event prefactor. Inconsistent gene tree -> -infinity.
inline double log_likelihood_one(const GeneTree3& g,
                                 const SpeciesTree3& species) {
  auto sched = try_build_schedule(g, species);
  if (!sched) return -std::numeric_limits<double>::infinity();
  double exponent = 0.0;
  // internal branch, [tau_ab, tau_abc)
  {
    const auto& pop = sched->internal();
    if (pop.exiting == 1) {
      exponent -= (g.t1 - species.tau_ab);  // 2 lineages until t1
    } else {
      exponent -= (species.tau_abc - species.tau_ab);  // 2 lineages throughout
    }
  }
  // root population, [tau_abc, infinity)
  {
    const auto& pop = sched->root();
    int k = pop.entering;
    double prev = species.tau_abc;
    for (double c : pop.coalescence_times) {
      exponent -= 0.5 * k * (k - 1) * (c - prev);
      prev = c;
      --k;
    }
  }
  return exponent;
}

inline double log_likelihood(const std::vector<GeneTree3>& gene_trees,
                             const SpeciesTree3& species) {
  double sum = 0.0;
  for (const auto& g : gene_trees) sum += log_likelihood_one(g, species);
  return sum;
}

}  // namespace coalrates
