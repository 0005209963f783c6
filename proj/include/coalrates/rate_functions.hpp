#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalrates/estimators.hpp"
#include "coalrates/root_solve.hpp"

namespace coalrates {

struct RatePoint {
  double t = 0.0;
  double alpha_glass = 0.0;
  double alpha_rstar = 0.0;
  double alpha_steac = 0.0;
  double s_star_rstar = 0.0;
  double s_star_steac = 0.0;
};

struct RateWithTilt {
  double rate = 0.0;
  double s_star = 0.0;
};

namespace detail {
inline void require_nonneg(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("branch length must be >= 0");
}
}  // namespace detail

// Decay rate of ML/GLASS/MT: exactly the internal branch length.
inline double alpha_glass(double t) {
  detail::require_nonneg(t);
  return t;
}

// R*/STAR/MDC MGF of 2*f_AC + f_BC (locus fails with the wrong topology
// AC|B or BC|A with weight W_p = (1-p)/3 each):
//   phi(s) = (p + W_p) + W_p (e^s + e^{2s})
inline double rstar_mgf(double s, double t) {
  const double wp = std::exp(-t) / 3.0;
  return (1.0 - 2.0 * wp) + wp * (std::exp(s) + std::exp(2.0 * s));
}
inline double rstar_mgf_prime(double s, double t) {
  const double wp = std::exp(-t) / 3.0;
  return wp * (std::exp(s) + 2.0 * std::exp(2.0 * s));
}

// Decay rate of R*/STAR/MDC, closed form:
//   -ln( 2 sqrt(W_p (p + W_p)) + W_p ),  W_p = e^{-t}/3
// with the tilt e^{s*} = sqrt((p + W_p)/W_p).
inline RateWithTilt alpha_rstar(double t) {
  detail::require_nonneg(t);
  if (t == 0.0) return {0.0, 0.0};
  const double wp = std::exp(-t) / 3.0;
  const double p_plus_wp = 1.0 - 2.0 * wp;  // p + W_p
  RateWithTilt r;
  r.s_star = 0.5 * std::log(p_plus_wp / wp);
  r.rate = -std::log(2.0 * std::sqrt(wp * p_plus_wp) + wp);
  return r;
}

// STEAC/SC MGF of d_AB - d_AC:
//   phi(s) = (3 e^{-st} - s^2 e^{-t}) / (3 (1 - s^2)),  |s| < 1
inline double steac_mgf(double s, double t) {
  return (3.0 * std::exp(-s * t) - s * s * std::exp(-t)) /
         (3.0 * (1.0 - s * s));
}
inline double steac_mgf_prime(double s, double t) {
  const double num =
      (18.0 * s - 9.0 * t * (1.0 - s * s)) * std::exp(-s * t) -
      6.0 * s * std::exp(-t);
  const double den = 9.0 * (1.0 - s * s) * (1.0 - s * s);
  return num / den;
}

// Fixed-point map for the STEAC tilt: s = F_t(s) on (0,1).
inline double steac_fixed_point_map(double s, double t) {
  return 0.5 * (6.0 * s - 3.0 * t * (1.0 - s * s)) * std::exp((1.0 - s) * t);
}

// G(sigma) = 3 e^sigma - 1 - 3 sigma e^sigma; its positive root sigma*
// fixes the STEAC large-t additive constant sigma* - ln 2.
inline double sigma_star_defect(double sigma) {
  return 3.0 * std::exp(sigma) * (1.0 - sigma) - 1.0;
}

inline double solve_sigma_star() {
  // G(0) = 2 > 0, strictly decreasing, G(2) < 0
  return bisect([](double s) { return sigma_star_defect(s); }, 1e-12, 2.0);
}

namespace detail {

// F_t(s) - s has the sign of h(s) = 6s - 3t(1 - s^2) - 2 s e^{-(1-s)t},
// which is overflow-free for every t; bisect h instead of F_t - s.
inline double steac_defect(double s, double t) {
  return 6.0 * s - 3.0 * t * (1.0 - s * s) -
         2.0 * s * std::exp(-(1.0 - s) * t);
}

// large-t route: substitute u = 1/t, sigma = (1-s)t; the fixed point
// becomes u = G(sigma) / (3 sigma e^sigma - sigma - (3/2) sigma^2 e^sigma)
// with sigma in (0, sigma*), strictly decreasing in sigma.
inline double sigma_fixed_point_defect(double sigma, double u) {
  const double es = std::exp(sigma);
  const double num = 3.0 * es - 1.0 - 3.0 * sigma * es;
  const double den = 3.0 * sigma * es - sigma - 1.5 * sigma * sigma * es;
  return num / den - u;
}

}  // namespace detail

// t > 30: e^{(1-s)t} in F_t is numerically fragile near s = 0, and s*
// crowds 1; the sigma-coordinate form stays well conditioned.
inline constexpr double kSteacLargeTSwitch = 30.0;

// Solve the STEAC tilt s* in (0,1) for a given t > 0.
inline double solve_steac_tilt(double t, bool force_direct = false) {
  const double s_hi = 1.0 - 1e-14;
  if (t <= kSteacLargeTSwitch || force_direct) {
    return bisect([t](double s) { return detail::steac_defect(s, t); }, 1e-300,
                  s_hi);
  }
  const double sigma_star = solve_sigma_star();
  double sigma =
      bisect([u = 1.0 / t](double sg) {
        return detail::sigma_fixed_point_defect(sg, u);
      },
             1e-12, sigma_star - 1e-12);
  return 1.0 - sigma / t;
}

// -ln phi(s) evaluated through sigma = (1-s)t:
//   -ln phi = s t - ln(3 - s^2 e^{-sigma}) + ln(3 (1 - s^2))
// exact for all t and immune to e^{-st} underflow at large t.
inline double steac_rate_at(double s, double t) {
  const double sigma = (1.0 - s) * t;
  return s * t - std::log(3.0 - s * s * std::exp(-sigma)) +
         std::log(3.0 * (1.0 - s * s));
}

inline RateWithTilt alpha_steac(double t, bool force_direct = false) {
  detail::require_nonneg(t);
  if (t == 0.0) return {0.0, 0.0};
  RateWithTilt r;
  r.s_star = solve_steac_tilt(t, force_direct);
  if (!(r.s_star > 0.0 && r.s_star < 1.0))
    throw std::runtime_error("STEAC tilt solver left (0,1)");
  r.rate = steac_rate_at(r.s_star, t);
  return r;
}

// Generic Chernoff engine: for i.i.d. Y with MGF phi and threshold y,
// the decay rate of P[sum Y > yL] is y s* - ln phi(s*) where s* > 0
// solves phi'(s)/phi(s) = y.
struct MgfSpec {
  std::function<double(double)> phi;
  std::function<double(double)> phi_prime;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  double threshold = 0.0;  // y
};

inline RateWithTilt chernoff_rate(const MgfSpec& m) {
  const double mean = m.phi_prime(0.0) / m.phi(0.0);
  if (!(m.threshold > mean))
    throw std::invalid_argument("chernoff_rate: threshold must exceed E[Y]");
  auto g = [&](double s) { return m.phi_prime(s) / m.phi(s) - m.threshold; };
  // bracket upward from 0
  double lo = 0.0;
  double hi;
  if (std::isfinite(m.domain_hi)) {
    // creep toward the domain edge until the tilted mean exceeds y
    double gap = 1e-12 * std::max(1.0, std::abs(m.domain_hi));
    hi = m.domain_hi - gap;
    while (hi > lo && !(g(hi) > 0.0)) {
      gap *= 0.25;
      hi = m.domain_hi - gap;
      if (gap < 1e-300)
        throw std::invalid_argument(
            "chernoff_rate: no bracket inside MGF domain");
    }
    if (!(hi > lo))
      throw std::invalid_argument("chernoff_rate: no bracket inside MGF domain");
  } else {
    hi = 1.0;
    int k = 0;
    while (g(hi) <= 0.0) {
      hi *= 2.0;
      if (++k > 200 || !std::isfinite(m.phi(hi)))
        throw std::invalid_argument("chernoff_rate: no finite-MGF bracket");
    }
  }
  RateWithTilt r;
  r.s_star = bisect(g, lo, hi);
  r.rate = m.threshold * r.s_star - std::log(m.phi(r.s_star));
  return r;
}

inline MgfSpec rstar_mgf_spec(double t) {
  MgfSpec m;
  m.phi = [t](double s) { return rstar_mgf(s, t); };
  m.phi_prime = [t](double s) { return rstar_mgf_prime(s, t); };
  m.threshold = 1.0;
  return m;
}

inline MgfSpec steac_mgf_spec(double t) {
  MgfSpec m;
  m.phi = [t](double s) { return steac_mgf(s, t); };
  m.phi_prime = [t](double s) { return steac_mgf_prime(s, t); };
  m.domain_lo = -1.0;
  m.domain_hi = 1.0;
  m.threshold = 0.0;
  return m;
}

enum class Regime { Small, Large };

// Leading asymptotics of the decay rates.
inline double asymptote(MethodGroup group, double t, Regime regime) {
  detail::require_nonneg(t);
  switch (group) {
    case MethodGroup::GLASS:
      return t;
    case MethodGroup::RSTAR:
      return regime == Regime::Small ? 0.75 * t * t
                                     : 0.5 * t - 0.5 * std::log(4.0 / 3.0);
    case MethodGroup::STEAC:
      return regime == Regime::Small
                 ? 0.375 * t * t
                 : t - std::log(t) - (solve_sigma_star() - std::log(2.0));
  }
  throw std::logic_error("bad method group");
}

inline std::vector<RatePoint> rate_curve(double t_min, double t_max,
                                         int steps) {
  if (!(t_min >= 0.0) || !(t_min < t_max) || steps < 2)
    throw std::invalid_argument("rate_curve: need 0 <= t_min < t_max, steps >= 2");
  std::vector<RatePoint> out;
  out.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    RatePoint pt;
    pt.t = t_min + (t_max - t_min) * i / (steps - 1);
    pt.alpha_glass = alpha_glass(pt.t);
    auto r = alpha_rstar(pt.t);
    pt.alpha_rstar = r.rate;
    pt.s_star_rstar = r.s_star;
    auto s = alpha_steac(pt.t);
    pt.alpha_steac = s.rate;
    pt.s_star_steac = s.s_star;
    out.push_back(pt);
  }
  return out;
}

// t where the R* and STEAC rates cross (R* ahead below, STEAC above).
inline double rate_crossover(double lo = 0.5, double hi = 5.0) {
  auto diff = [](double t) {
    return alpha_rstar(t).rate - alpha_steac(t).rate;
  };
  return bisect(diff, lo, hi);
}

}  // namespace coalrates
