// Timing comparison of the serial reference replicate loop against the
// OpenMP kernel, and a consistency check that both count the same
// failures.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coalrates/montecarlo.hpp"

using namespace coalrates;

int main(int argc, char** argv) {
  long replicates = argc > 1 ? std::atol(argv[1]) : 200000;
  ExperimentConfig cfg;
  cfg.species = SpeciesTree3(0.0, 0.2);
  cfg.loci = 30;
  cfg.replicates = replicates;
  cfg.methods = {MethodId::GLASS_MT, MethodId::RSTAR, MethodId::STEAC,
                 MethodId::ML};
  cfg.master_seed = 42;

  auto time_run = [&](auto&& fn, const char* label,
                      std::vector<McResult>& out) {
    auto start = std::chrono::steady_clock::now();
    out = fn(cfg);
    auto stop = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(stop - start).count();
    std::printf("%-10s %10.3f s  %12.0f replicates/s\n", label, secs,
                replicates / secs);
    return secs;
  };

  std::vector<McResult> serial, parallel;
  double ts = time_run(run_experiment_serial, "serial", serial);
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  double tp = time_run(run_experiment, "openmp", parallel);
  std::printf("threads=%d  speedup=%.2fx\n", threads, ts / tp);

  for (std::size_t i = 0; i < serial.size(); ++i) {
    if (serial[i].failures != parallel[i].failures) {
      std::printf("MISMATCH: method %s serial=%ld parallel=%ld\n",
                  method_name(serial[i].method).c_str(), serial[i].failures,
                  parallel[i].failures);
      return 1;
    }
  }
  std::printf("serial and openmp failure counts identical\n");
  return 0;
}
