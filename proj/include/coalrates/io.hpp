#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coalrates/estimators.hpp"
#include "coalrates/model.hpp"
#include "coalrates/montecarlo.hpp"
#include "coalrates/rate_functions.hpp"

namespace coalrates {

// All CSV output: '.' decimal separator, LF line endings, header row,
// numbers at full double round-trip precision.
inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline std::string gene_trees_csv(const std::vector<GeneTree3>& trees) {
  std::string out = "topology,t1,t2,failed\n";
  for (const auto& g : trees) {
    out += topology_name(g.topology);
    out += ',';
    out += format_double(g.t1);
    out += ',';
    out += format_double(g.t2);
    out += ',';
    out += g.failed ? "true" : "false";
    out += '\n';
  }
  return out;
}

inline std::vector<GeneTree3> parse_gene_trees_csv(std::istream& in) {
  std::vector<GeneTree3> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string topo, t1, t2, failed;
    std::getline(ls, topo, ',');
    std::getline(ls, t1, ',');
    std::getline(ls, t2, ',');
    std::getline(ls, failed, ',');
    auto t = topology_from_name(topo);
    if (!t) throw std::runtime_error("bad topology in gene-tree CSV: " + topo);
    GeneTree3 g;
    g.topology = *t;
    g.t1 = std::stod(t1);
    g.t2 = std::stod(t2);
    g.failed = failed == "true" || failed == "1";
    out.push_back(g);
  }
  return out;
}

inline std::string estimate_csv_row(MethodId m, const Estimate& e) {
  std::string out = method_name(m);
  out += ',';
  out += topology_name(e.topology);
  out += ',';
  if (e.tau_cherry) out += format_double(*e.tau_cherry);
  out += ',';
  if (e.tau_root) out += format_double(*e.tau_root);
  out += ',';
  out += e.tie ? "true" : "false";
  return out;
}

inline std::string rate_curve_csv(const std::vector<RatePoint>& curve) {
  std::string out =
      "t,alpha_glass,alpha_rstar,alpha_steac,s_star_rstar,s_star_steac,"
      "asym_rstar_small,asym_rstar_large,asym_steac_small,asym_steac_large\n";
  for (const auto& pt : curve) {
    out += format_double(pt.t);
    out += ',' + format_double(pt.alpha_glass);
    out += ',' + format_double(pt.alpha_rstar);
    out += ',' + format_double(pt.alpha_steac);
    out += ',' + format_double(pt.s_star_rstar);
    out += ',' + format_double(pt.s_star_steac);
    out += ',' + format_double(asymptote(MethodGroup::RSTAR, pt.t, Regime::Small));
    out += ',' + format_double(asymptote(MethodGroup::RSTAR, pt.t, Regime::Large));
    out += ',' + format_double(asymptote(MethodGroup::STEAC, pt.t, Regime::Small));
    out += ',' +
           format_double(pt.t > 0.0
                             ? asymptote(MethodGroup::STEAC, pt.t, Regime::Large)
                             : 0.0);
    out += '\n';
  }
  return out;
}

inline std::string experiment_report_csv(const ExperimentConfig& cfg,
                                         const std::vector<McResult>& results) {
  std::string out =
      "method,t,L,replicates,failures,p_hat,ci_low,ci_high,empirical_rate,"
      "analytic_rate,seed\n";
  const double t = cfg.species.internal_branch();
  for (const auto& r : results) {
    double analytic;
    switch (group_of(r.method)) {
      case MethodGroup::GLASS: analytic = alpha_glass(t); break;
      case MethodGroup::RSTAR: analytic = alpha_rstar(t).rate; break;
      default: analytic = alpha_steac(t).rate; break;
    }
    out += method_name(r.method);
    out += ',' + format_double(t);
    out += ',' + std::to_string(cfg.loci);
    out += ',' + std::to_string(r.replicates);
    out += ',' + std::to_string(r.failures);
    out += ',' + format_double(r.p_hat);
    out += ',' + format_double(r.ci_low);
    out += ',' + format_double(r.ci_high);
    out += ',';
    if (r.rate_defined) out += format_double(r.empirical_rate);
    out += ',' + format_double(analytic);
    out += ',' + std::to_string(cfg.master_seed);
    out += '\n';
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace coalrates
