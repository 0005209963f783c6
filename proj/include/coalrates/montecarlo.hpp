#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coalrates/estimators.hpp"
#include "coalrates/model.hpp"

namespace coalrates {

struct ExperimentConfig {
  SpeciesTree3 species;
  int loci = 1;
  long replicates = 1;
  std::vector<MethodId> methods;
  std::uint64_t master_seed = 0;
};

// 95% Wilson score interval for failures/n.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};
Interval wilson_interval(long failures, long n, double z = 1.959963984540054);

struct McResult {
  MethodId method = MethodId::GLASS_MT;
  long failures = 0;
  long replicates = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  bool rate_defined = false;  // false when failures == 0
  double empirical_rate = 0.0;  // -ln(p_hat) / L
};

// One replicate: sample cfg.loci gene trees, run every requested method
// on the same dataset, record which methods picked the wrong topology.
// Seeds derive from (master_seed, replicate) so replicates are
// independent tasks with a deterministic outcome.
std::vector<bool> replicate_failures(const ExperimentConfig& cfg,
                                     long replicate);

// OpenMP over replicates; bit-identical to run_experiment_serial for any
// thread count (integer failure counts, per-replicate seeding).
std::vector<McResult> run_experiment(const ExperimentConfig& cfg);
std::vector<McResult> run_experiment_serial(const ExperimentConfig& cfg);

// Exact failure probability of ML/GLASS/MT: (2/3) e^{-tL}.
double exact_glass_failure(double t, int loci);

// Exact failure probability of R*/STAR/MDC by multinomial enumeration of
// the per-topology locus counts, with tie weights 1/2 (two-way tie
// involving the true topology) and 2/3 (three-way) matching the uniform
// tie-break. Enumeration is limited to loci <= 30.
double exact_rstar_failure(double t, int loci);

struct DominationReport {
  long replicates = 0;
  long glass_successes = 0;
  long rstar_successes = 0;
  long steac_successes = 0;
  // paired per-replicate differences glass - other
  double diff_rstar_mean = 0.0;
  double diff_rstar_se = 0.0;
  double diff_steac_mean = 0.0;
  double diff_steac_se = 0.0;
  // any successful locus on a replicate forces the GLASS estimate to be
  // correct; true iff that held on every replicate
  bool subevent_exact = true;
};

DominationReport domination_test(double t, int loci, long replicates,
                                 std::uint64_t seed);

struct RateTrendPoint {
  int loci = 0;
  long failures = 0;
  bool rate_defined = false;
  double empirical_rate = 0.0;
};

std::vector<RateTrendPoint> empirical_rate_trend(MethodId method, double t,
                                                 const std::vector<int>& loci_list,
                                                 long replicates,
                                                 std::uint64_t seed);

}  // namespace coalrates
