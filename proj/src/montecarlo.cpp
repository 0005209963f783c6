#include "coalrates/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coalrates {

namespace {
constexpr std::uint64_t kGeneStream = 0x67656e65ULL;  // gene-tree sampling
constexpr std::uint64_t kTieStream = 0x74696573ULL;   // tie resolution

std::vector<GeneTree3> sample_replicate(const SpeciesTree3& species, int loci,
                                        std::uint64_t master, long replicate) {
  Xoshiro256pp rng(derive_seed(master, static_cast<std::uint64_t>(replicate),
                               kGeneStream));
  std::vector<GeneTree3> trees;
  trees.reserve(loci);
  for (int i = 0; i < loci; ++i) trees.push_back(sample_gene_tree(species, rng));
  return trees;
}

std::vector<McResult> reduce_results(const ExperimentConfig& cfg,
                                     const std::vector<long>& failures) {
  std::vector<McResult> out;
  out.reserve(cfg.methods.size());
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    McResult r;
    r.method = cfg.methods[m];
    r.failures = failures[m];
    r.replicates = cfg.replicates;
    r.p_hat = double(r.failures) / double(r.replicates);
    auto ci = wilson_interval(r.failures, r.replicates);
    r.ci_low = ci.lo;
    r.ci_high = ci.hi;
    r.rate_defined = r.failures > 0;
    if (r.rate_defined) r.empirical_rate = -std::log(r.p_hat) / cfg.loci;
    out.push_back(r);
  }
  return out;
}
}  // namespace

Interval wilson_interval(long failures, long n, double z) {
  const double phat = double(failures) / double(n);
  const double z2n = z * z / double(n);
  const double center = phat + 0.5 * z2n;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / double(n) + 0.25 * z2n / double(n));
  const double denom = 1.0 + z2n;
  Interval ci;
  ci.lo = failures == 0 ? 0.0 : std::max(0.0, (center - half) / denom);
  ci.hi = failures == n ? 1.0 : std::min(1.0, (center + half) / denom);
  return ci;
}

std::vector<bool> replicate_failures(const ExperimentConfig& cfg,
                                     long replicate) {
  auto trees =
      sample_replicate(cfg.species, cfg.loci, cfg.master_seed, replicate);
  // every method sees the same tie stream so paired comparisons share one
  // tie resolution per coincident tie set
  const std::uint64_t tie_seed = derive_seed(
      cfg.master_seed, static_cast<std::uint64_t>(replicate), kTieStream);
  std::vector<bool> failed(cfg.methods.size());
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    TieBreaker tie(tie_seed);
    failed[m] =
        estimate(cfg.methods[m], trees, tie).topology != cfg.species.topology;
  }
  return failed;
}

std::vector<McResult> run_experiment_serial(const ExperimentConfig& cfg) {
  if (cfg.loci < 1 || cfg.replicates < 1 || cfg.methods.empty())
    throw std::invalid_argument("experiment needs loci >= 1, replicates >= 1, methods");
  std::vector<long> failures(cfg.methods.size(), 0);
  for (long r = 0; r < cfg.replicates; ++r) {
    auto failed = replicate_failures(cfg, r);
    for (std::size_t m = 0; m < failed.size(); ++m)
      if (failed[m]) ++failures[m];
  }
  return reduce_results(cfg, failures);
}

std::vector<McResult> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.loci < 1 || cfg.replicates < 1 || cfg.methods.empty())
    throw std::invalid_argument("experiment needs loci >= 1, replicates >= 1, methods");
  const std::size_t nm = cfg.methods.size();
  std::vector<long> failures(nm, 0);
#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<long> local(nm, 0);
#pragma omp for schedule(static)
    for (long r = 0; r < cfg.replicates; ++r) {
      auto failed = replicate_failures(cfg, r);
      for (std::size_t m = 0; m < nm; ++m)
        if (failed[m]) ++local[m];
    }
#pragma omp critical
    for (std::size_t m = 0; m < nm; ++m) failures[m] += local[m];
  }
#else
  for (long r = 0; r < cfg.replicates; ++r) {
    auto failed = replicate_failures(cfg, r);
    for (std::size_t m = 0; m < nm; ++m)
      if (failed[m]) ++failures[m];
  }
#endif
  return reduce_results(cfg, failures);
}

double exact_glass_failure(double t, int loci) {
  if (!(t >= 0.0) || loci < 1)
    throw std::invalid_argument("need t >= 0 and loci >= 1");
  return (2.0 / 3.0) * std::exp(-t * loci);
}

double exact_rstar_failure(double t, int loci) {
  if (!(t >= 0.0) || loci < 1)
    throw std::invalid_argument("need t >= 0 and loci >= 1");
  if (loci > 30)
    throw std::invalid_argument("exact_rstar_failure: enumeration limited to loci <= 30");
  const int L = loci;
  // per-locus topology probabilities: the true cherry also wins when the
  // internal-branch coalescence happens
  const double q_other = std::exp(-t) / 3.0;
  const double q_true = 1.0 - 2.0 * q_other;
  const double log_q_other =
      q_other > 0.0 ? std::log(q_other) : -std::numeric_limits<double>::infinity();
  const double log_q_true = std::log(q_true);
  double total = 0.0;
  for (int n_ac = 0; n_ac <= L; ++n_ac) {
    for (int n_bc = 0; n_bc + n_ac <= L; ++n_bc) {
      const int n_ab = L - n_ac - n_bc;
      const int n_wrong = n_ac + n_bc;
      if (n_wrong > 0 && q_other == 0.0) continue;
      double fail_weight;
      const int top = std::max(n_ac, n_bc);
      if (n_ab > top) {
        continue;  // clear plurality for the truth
      } else if (n_ab < top) {
        fail_weight = 1.0;
      } else {
        // tie involving the true topology
        const bool three_way = n_ab == n_ac && n_ab == n_bc;
        fail_weight = three_way ? 2.0 / 3.0 : 0.5;
      }
      double logw = std::lgamma(L + 1.0) - std::lgamma(n_ab + 1.0) -
                    std::lgamma(n_ac + 1.0) - std::lgamma(n_bc + 1.0) +
                    n_ab * log_q_true;
      if (n_wrong > 0) logw += n_wrong * log_q_other;
      total += fail_weight * std::exp(logw);
    }
  }
  return total;
}

DominationReport domination_test(double t, int loci, long replicates,
                                 std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.species = SpeciesTree3(0.0, t);
  cfg.loci = loci;
  cfg.replicates = replicates;
  cfg.methods = {MethodId::GLASS_MT, MethodId::RSTAR, MethodId::STEAC};
  cfg.master_seed = seed;

  DominationReport rep;
  rep.replicates = replicates;
  long sum_dr = 0, sum_dr2 = 0;  // paired glass - rstar differences
  long sum_ds = 0, sum_ds2 = 0;
  bool subevent_ok = true;
#ifdef _OPENMP
#pragma omp parallel reduction(+ : sum_dr, sum_dr2, sum_ds, sum_ds2) \
    reduction(&& : subevent_ok)
  {
    long g = 0, r = 0, s = 0;
#pragma omp for schedule(static)
    for (long i = 0; i < replicates; ++i) {
#else
  {
    long g = 0, r = 0, s = 0;
    for (long i = 0; i < replicates; ++i) {
#endif
      auto trees = sample_replicate(cfg.species, loci, seed, i);
      bool any_success_locus = false;
      for (const auto& gt : trees) any_success_locus |= !gt.failed;
      const std::uint64_t tie_seed = derive_seed(seed, i, kTieStream);
      TieBreaker tg(tie_seed), tr(tie_seed), ts(tie_seed);
      const bool glass_ok =
          glass_mt(trees, tg).topology == cfg.species.topology;
      const bool rstar_ok = rstar(trees, tr).topology == cfg.species.topology;
      const bool steac_ok =
          steac_sc(trees, ts).topology == cfg.species.topology;
      if (any_success_locus && !glass_ok) subevent_ok = false;
      g += glass_ok;
      r += rstar_ok;
      s += steac_ok;
      const long dr = long(glass_ok) - long(rstar_ok);
      const long ds = long(glass_ok) - long(steac_ok);
      sum_dr += dr;
      sum_dr2 += dr * dr;
      sum_ds += ds;
      sum_ds2 += ds * ds;
    }
#ifdef _OPENMP
#pragma omp critical
#endif
    {
      rep.glass_successes += g;
      rep.rstar_successes += r;
      rep.steac_successes += s;
    }
  }
  rep.subevent_exact = subevent_ok;
  const double n = double(replicates);
  rep.diff_rstar_mean = sum_dr / n;
  rep.diff_steac_mean = sum_ds / n;
  const double var_r =
      (sum_dr2 / n - rep.diff_rstar_mean * rep.diff_rstar_mean) * n / (n - 1.0);
  const double var_s =
      (sum_ds2 / n - rep.diff_steac_mean * rep.diff_steac_mean) * n / (n - 1.0);
  rep.diff_rstar_se = std::sqrt(std::max(0.0, var_r) / n);
  rep.diff_steac_se = std::sqrt(std::max(0.0, var_s) / n);
  return rep;
}

std::vector<RateTrendPoint> empirical_rate_trend(
    MethodId method, double t, const std::vector<int>& loci_list,
    long replicates, std::uint64_t seed) {
  std::vector<RateTrendPoint> out;
  for (std::size_t i = 0; i < loci_list.size(); ++i) {
    ExperimentConfig cfg;
    cfg.species = SpeciesTree3(0.0, t);
    cfg.loci = loci_list[i];
    cfg.replicates = replicates;
    cfg.methods = {method};
    cfg.master_seed = splitmix64(seed + i);
    auto res = run_experiment(cfg).front();
    RateTrendPoint pt;
    pt.loci = cfg.loci;
    pt.failures = res.failures;
    pt.rate_defined = res.rate_defined;
    pt.empirical_rate = res.empirical_rate;
    out.push_back(pt);
  }
  return out;
}

}  // namespace coalrates
