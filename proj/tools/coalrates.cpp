#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coalrates/io.hpp"
#include "coalrates/montecarlo.hpp"
#include "coalrates/rate_functions.hpp"
#include "coalrates/svg.hpp"

namespace {

constexpr const char* kVersion = "coalrates 1.0.0";

using nlohmann::json;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

void write_manifest(const std::string& out_path, int argc, char** argv,
                    const json& params) {
  json m;
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  m["command_line"] = cmd;
  m["version"] = kVersion;
  m["timestamp"] = iso_timestamp();
  m["parameters"] = params;
  m["seed_scheme"] = "splitmix64(splitmix64(splitmix64(master) ^ replicate) ^ stream)";
  coalrates::write_file(out_path + ".manifest.json", m.dump(2) + "\n");
}

std::string strip_extension(const std::string& path) {
  auto pos = path.rfind('.');
  auto slash = path.rfind('/');
  if (pos == std::string::npos || (slash != std::string::npos && pos < slash))
    return path;
  return path.substr(0, pos);
}

void emit_rate_outputs(const std::string& out_path, double t_min, double t_max,
                       int steps, bool with_asymptotes,
                       const std::string& title) {
  auto curve = coalrates::rate_curve(t_min, t_max, steps);
  coalrates::write_file(out_path, coalrates::rate_curve_csv(curve));

  std::vector<double> ts, g, r, s, ar_s, ar_l, as_s, as_l;
  for (const auto& pt : curve) {
    ts.push_back(pt.t);
    g.push_back(pt.alpha_glass);
    r.push_back(pt.alpha_rstar);
    s.push_back(pt.alpha_steac);
    ar_s.push_back(coalrates::asymptote(coalrates::MethodGroup::RSTAR, pt.t,
                                        coalrates::Regime::Small));
    ar_l.push_back(coalrates::asymptote(coalrates::MethodGroup::RSTAR, pt.t,
                                        coalrates::Regime::Large));
    as_s.push_back(coalrates::asymptote(coalrates::MethodGroup::STEAC, pt.t,
                                        coalrates::Regime::Small));
    as_l.push_back(pt.t > 0.0
                       ? coalrates::asymptote(coalrates::MethodGroup::STEAC,
                                              pt.t, coalrates::Regime::Large)
                       : 0.0);
  }
  coalrates::SvgChart chart(title, "internal branch length t", "decay rate");
  chart.add_series("ML / GLASS / MT", ts, g, "#1f77b4");
  chart.add_series("R* / STAR / MDC", ts, r, "#d62728");
  chart.add_series("STEAC / SC", ts, s, "#2ca02c");
  if (with_asymptotes) {
    const bool small_regime = t_max <= 0.5;
    if (small_regime) {
      chart.add_series("R* small-t", ts, ar_s, "#d62728", true);
      chart.add_series("STEAC small-t", ts, as_s, "#2ca02c", true);
    } else {
      chart.add_series("R* large-t", ts, ar_l, "#d62728", true);
      chart.add_series("STEAC large-t", ts, as_l, "#2ca02c", true);
    }
  }
  coalrates::write_file(strip_extension(out_path) + ".svg", chart.render());
}

int run_validate(const std::string& suite, std::uint64_t seed) {
  using namespace coalrates;
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };

  if (suite == "equivalences" || suite == "all") {
    Xoshiro256pp rng(splitmix64(seed) ^ 0x657175ULL);
    bool ok = true;
    for (int i = 0; i < 1000 && ok; ++i) {
      double t = 2.0 * rng.uniform();
      int L = 1 + int(rng.uniform_index(200));
      SpeciesTree3 sp(0.0, t);
      std::vector<GeneTree3> trees;
      for (int l = 0; l < L; ++l) trees.push_back(sample_gene_tree(sp, rng));
      std::uint64_t ts = rng();
      TieBreaker t1(ts), t2(ts), t3(ts), t4(ts), t5(ts), t6(ts), t7(ts),
          t8(ts);
      ok = ok && star(trees, t1).topology == rstar(trees, t2).topology;
      ok = ok && mdc(trees, t3).topology == rstar(trees, t4).topology;
      ok = ok && ml(trees, t5).topology == glass_mt(trees, t6).topology;
      ok = ok && estimate(MethodId::SC, trees, t7).topology ==
                     estimate(MethodId::STEAC, trees, t8).topology;
    }
    check("equivalences: STAR=R*, MDC=R*, ML=GLASS, SC=STEAC over 1000 datasets", ok);
  }
  if (suite == "oracles" || suite == "all") {
    ExperimentConfig cfg;
    cfg.species = SpeciesTree3(0.0, 0.05);
    cfg.loci = 20;
    cfg.replicates = 200000;
    cfg.methods = {MethodId::GLASS_MT};
    cfg.master_seed = seed;
    auto res = run_experiment(cfg).front();
    double exact = exact_glass_failure(0.05, 20);
    auto ci = wilson_interval(res.failures, res.replicates, 2.5758293035489004);
    check("oracles: MC glass within Wilson 99% of exact",
          exact >= ci.lo && exact <= ci.hi);

    cfg.species = SpeciesTree3(0.0, 0.3);
    cfg.methods = {MethodId::RSTAR};
    res = run_experiment(cfg).front();
    exact = exact_rstar_failure(0.3, 20);
    ci = wilson_interval(res.failures, res.replicates, 2.5758293035489004);
    check("oracles: MC rstar within Wilson 99% of exact",
          exact >= ci.lo && exact <= ci.hi);
  }
  if (suite == "rates" || suite == "all") {
    bool ok = true;
    for (int i = 0; i < 30; ++i) {
      double t = std::pow(10.0, -3.0 + 5.0 * i / 29.0);
      auto rs = alpha_steac(t);
      ok = ok &&
           std::abs(steac_fixed_point_map(rs.s_star, t) - rs.s_star) < 1e-10;
      ok = ok && std::abs(steac_mgf_prime(rs.s_star, t) /
                          steac_mgf(rs.s_star, t)) < 1e-9;
      auto rr = alpha_rstar(t);
      ok = ok && std::abs(rstar_mgf_prime(rr.s_star, t) /
                              rstar_mgf(rr.s_star, t) -
                          1.0) < 1e-9;
    }
    check("rates: fixed-point and stationarity residuals on log grid", ok);
  }
  if (suite == "domination" || suite == "all") {
    auto rep = domination_test(0.2, 30, 100000, seed);
    check("domination: exact sub-event (successful locus => GLASS correct)",
          rep.subevent_exact);
    check("domination: GLASS >= R* within 3 sigma",
          rep.diff_rstar_mean >= -3.0 * rep.diff_rstar_se);
    check("domination: GLASS >= STEAC within 3 sigma",
          rep.diff_steac_mean >= -3.0 * rep.diff_steac_se);
  }
  std::cout << (failures == 0 ? "all checks passed" : "checks FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("COALRATES_THREADS")) {
#ifdef _OPENMP
    int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
#else
    (void)env;
#endif
  }

  CLI::App app{"three-taxon coalescent decay rates and simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // rates / figure
  double t_min = 0.005, t_max = 1.0, t = 0.1;
  int steps = 200, figure_no = 1, loci = 100;
  long replicates = 100000;
  std::uint64_t seed = 1;
  bool with_asymptotes = false;
  std::string out_path, methods_arg = "glass,rstar,steac", suite = "all";

  auto* rates = app.add_subcommand("rates", "decay-rate curves (CSV + SVG)");
  rates->add_option("--t-min", t_min, "grid start");
  rates->add_option("--t-max", t_max, "grid end");
  rates->add_option("--steps", steps, "grid points");
  rates->add_option("--out", out_path, "output CSV path")->required();
  rates->add_flag("--with-asymptotes", with_asymptotes,
                  "overlay dotted asymptote curves");

  auto* figure = app.add_subcommand("figure", "preset rate figures 1-3");
  figure->add_option("number", figure_no, "figure number (1, 2 or 3)")
      ->required()
      ->check(CLI::Range(1, 3));
  figure->add_option("--out", out_path, "output CSV path");
  figure->add_option("--steps", steps, "grid points");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo failure rates");
  simulate->add_option("--t", t, "internal branch length")->required();
  simulate->add_option("--L", loci, "loci per replicate")->required();
  simulate->add_option("--replicates", replicates, "replicate count");
  simulate->add_option("--methods", methods_arg, "comma-separated methods");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--out", out_path, "output CSV path");

  auto* validate = app.add_subcommand("validate", "run validation suites");
  validate->add_option("--suite", suite,
                       "equivalences|oracles|rates|domination|all")
      ->check(CLI::IsMember(
          {"equivalences", "oracles", "rates", "domination", "all"}));
  validate->add_option("--seed", seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (rates->parsed()) {
      emit_rate_outputs(out_path, t_min, t_max, steps, with_asymptotes,
                        "Decay rates");
      write_manifest(out_path, argc, argv,
                     json{{"t_min", t_min},
                          {"t_max", t_max},
                          {"steps", steps},
                          {"with_asymptotes", with_asymptotes}});
    } else if (figure->parsed()) {
      if (out_path.empty())
        out_path = "figure" + std::to_string(figure_no) + ".csv";
      switch (figure_no) {
        case 1:
          t_min = 1.0 / steps;
          t_max = 1.0;
          with_asymptotes = false;
          break;
        case 2:
          t_min = 0.1 / steps;
          t_max = 0.1;
          with_asymptotes = true;
          break;
        default:
          t_min = 1.0;
          t_max = 100.0;
          with_asymptotes = true;
          break;
      }
      emit_rate_outputs(out_path, t_min, t_max, steps, with_asymptotes,
                        "Decay rates (figure " + std::to_string(figure_no) + ")");
      write_manifest(out_path, argc, argv,
                     json{{"figure", figure_no},
                          {"t_min", t_min},
                          {"t_max", t_max},
                          {"steps", steps},
                          {"with_asymptotes", with_asymptotes}});
    } else if (simulate->parsed()) {
      coalrates::ExperimentConfig cfg;
      cfg.species = coalrates::SpeciesTree3(0.0, t);
      cfg.loci = loci;
      cfg.replicates = replicates;
      cfg.master_seed = seed;
      std::stringstream ms(methods_arg);
      std::string name;
      while (std::getline(ms, name, ',')) {
        auto m = coalrates::method_from_name(name);
        if (!m) {
          std::cerr << "unknown method '" << name
                    << "'; valid: ml, glass, rstar, star, mdc, steac, sc\n";
          return 2;
        }
        cfg.methods.push_back(*m);
      }
      if (cfg.methods.empty()) {
        std::cerr << "no methods given\n";
        return 2;
      }
      auto results = coalrates::run_experiment(cfg);
      std::string csv = coalrates::experiment_report_csv(cfg, results);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        coalrates::write_file(out_path, csv);
        write_manifest(out_path, argc, argv,
                       json{{"t", t},
                            {"L", loci},
                            {"replicates", replicates},
                            {"methods", methods_arg},
                            {"seed", seed}});
      }
    } else if (validate->parsed()) {
      return run_validate(suite, seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
