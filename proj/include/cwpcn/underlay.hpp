#pragma once

// Underlay spectrum sharing: the secondary network keeps the aggregate
// interference it lands on the PR below a cap gamma during both phases.  The
// WET phase is throttled through p_c = min(gamma/h_ap_pr, p_max); the WIT
// phase through sum_i h_cu_pr[i] * e[i] <= (1 - tau) * gamma.
//
// For fixed tau the inner problem is a fractional knapsack: spend the
// interference budget on users in decreasing order of slope/h_cu_pr.  At most
// one user ends up strictly between its bounds, and the budget walk lands
// exactly on the closed-form split points of the piecewise rate rbar.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "cwpcn/core.hpp"
#include "cwpcn/golden_section.hpp"

namespace cwpcn {

// Inner/outer problem data for a fixed WET power.  slopes[i] is the uplink
// SNR per unit energy, q[i] the per-unit-time harvest of user i.
struct UnderlayProblem {
  NetworkInstance inst;
  GammaItc gamma;
  std::vector<double> slopes;
  std::vector<double> q;
  double tau_min = 0.0;
};

struct InnerSolution {
  std::vector<double> e;
  double rate = 0.0;
  bool itc_tight = false;
  int fractional_index = -1;  // original index of the one split user, or -1
};

struct TauSearchResult {
  double tau = 0.0;
  double rate = 0.0;
};

struct SolveResult {
  double tau = 0.0;
  std::vector<double> e;
  double throughput = 0.0;
  double primary_rate = 0.0;
  double p_c = 0.0;     // WET power the H-AP used
  double gamma0 = 0.0;  // overlay only: interference level the search settled on
};

// Budget-spending order: decreasing slope/h_cu_pr, with zero-cost users
// (h_cu_pr == 0) first, steepest slope first among them.  Ties keep ascending
// original index.
inline std::vector<std::size_t> priority_order(const std::vector<double>& slopes,
                                               const std::vector<double>& h_cu_pr) {
  std::vector<std::size_t> ord(slopes.size());
  std::iota(ord.begin(), ord.end(), std::size_t{0});
  std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
    const bool za = h_cu_pr[a] == 0.0, zb = h_cu_pr[b] == 0.0;
    if (za != zb) return za;
    if (za) return slopes[a] > slopes[b];
    // slopes[a]/h[a] > slopes[b]/h[b], cross-multiplied
    return slopes[a] * h_cu_pr[b] > slopes[b] * h_cu_pr[a];
  });
  return ord;
}

// Optimal energies for fixed tau_bar in (0,1): walk the priority order,
// filling each user to tau_bar * q[i] while the interference budget
// (1 - tau_bar) * gamma lasts.  The first user the budget cannot cover gets
// the remainder; everyone after gets nothing.
inline InnerSolution solve_inner(const UnderlayProblem& prob, double tau_bar,
                                 const std::vector<std::size_t>& order) {
  if (!(tau_bar > 0.0 && tau_bar < 1.0))
    throw std::invalid_argument("solve_inner: tau_bar must lie in (0,1)");
  const std::size_t k = prob.slopes.size();
  InnerSolution sol;
  sol.e.assign(k, 0.0);

  if (prob.gamma.unconstrained) {
    for (std::size_t i = 0; i < k; ++i) sol.e[i] = tau_bar * prob.q[i];
    sol.rate = secondary_throughput(tau_bar, sol.e, prob.slopes);
    return sol;
  }

  const double budget0 = (1.0 - tau_bar) * prob.gamma.gamma;
  double budget = budget0;
  bool truncated = false;
  for (std::size_t pos = 0; pos < k; ++pos) {
    const std::size_t i = order[pos];
    const double cap = tau_bar * prob.q[i];
    const double cost = prob.inst.h_cu_pr[i] * cap;
    if (truncated) continue;  // budget gone, e stays 0
    if (cost <= budget) {
      sol.e[i] = cap;
      budget -= cost;
    } else {
      // cost > budget >= 0 and therefore h_cu_pr[i] > 0
      const double ei = budget / prob.inst.h_cu_pr[i];
      if (ei < cap) {
        sol.e[i] = ei;
        if (ei > 0.0) sol.fractional_index = static_cast<int>(i);
      } else {
        sol.e[i] = cap;  // division rounded up to the cap: treat as full
      }
      budget = 0.0;
      truncated = true;
    }
  }
  sol.itc_tight = truncated || budget <= 1e-12 * budget0;
  sol.rate = secondary_throughput(tau_bar, sol.e, prob.slopes);
  return sol;
}

inline InnerSolution solve_inner(const UnderlayProblem& prob, double tau_bar) {
  return solve_inner(prob, tau_bar, priority_order(prob.slopes, prob.inst.h_cu_pr));
}

// Throughput of the inner optimum as an explicit function of tau_bar, written
// out from the closed form rather than through solve_inner.  Tests pin the
// two routes against each other.  Defined on [0,1] with limit value 0 at both
// ends.
inline double rbar(const UnderlayProblem& prob, double tau_bar,
                   const std::vector<std::size_t>& order) {
  if (!(tau_bar >= 0.0 && tau_bar <= 1.0))
    throw std::invalid_argument("rbar: tau_bar must lie in [0,1]");
  if (tau_bar <= 0.0 || tau_bar >= 1.0) return 0.0;
  const std::size_t k = prob.slopes.size();
  const double om = 1.0 - tau_bar;

  double hq_total = 0.0;
  for (std::size_t i = 0; i < k; ++i) hq_total += prob.inst.h_cu_pr[i] * prob.q[i];

  // everyone full iff tau_bar <= gamma / (gamma + sum h*q), cross-multiplied
  if (prob.gamma.unconstrained || tau_bar * hq_total <= om * prob.gamma.gamma) {
    double a = 0.0;
    for (std::size_t i = 0; i < k; ++i) a += prob.slopes[i] * prob.q[i];
    if (a <= 0.0) return 0.0;
    return om * log2p1(tau_bar / om * a);
  }

  // marginal user: smallest m with tau_bar * sum_{i<=m} h*q > (1-tau_bar)*gamma
  const double rhs = om * prob.gamma.gamma;
  double chq = 0.0;   // cumulative h*q over the full users
  double cgq = 0.0;   // cumulative slope*q over the full users
  std::size_t m = k;  // order position of the marginal user
  for (std::size_t pos = 0; pos < k; ++pos) {
    const std::size_t i = order[pos];
    const double hq = prob.inst.h_cu_pr[i] * prob.q[i];
    if (tau_bar * (chq + hq) > rhs) {
      m = pos;
      break;
    }
    chq += hq;
    cgq += prob.slopes[i] * prob.q[i];
  }
  // m < k is guaranteed: tau_bar * hq_total > rhs above
  const std::size_t im = order[m];
  const double s = tau_bar * cgq +
                   prob.slopes[im] / prob.inst.h_cu_pr[im] * (rhs - tau_bar * chq);
  if (s <= 0.0) return 0.0;
  return om * log2p1(s / om);
}

inline double rbar(const UnderlayProblem& prob, double tau_bar) {
  return rbar(prob, tau_bar, priority_order(prob.slopes, prob.inst.h_cu_pr));
}

// Outer search over tau in [tau_min, 1].  rbar is unimodal there but kinked
// at the regime breakpoints, so golden-section rather than a Newton scheme.
inline TauSearchResult maximize_tau(const UnderlayProblem& prob) {
  if (!(prob.tau_min >= 0.0 && prob.tau_min <= 1.0))
    throw std::invalid_argument("maximize_tau: tau_min must lie in [0,1]");
  double a = 0.0;
  for (std::size_t i = 0; i < prob.slopes.size(); ++i) a += prob.slopes[i] * prob.q[i];
  if (a <= 0.0) return TauSearchResult{prob.tau_min, 0.0};

  const auto order = priority_order(prob.slopes, prob.inst.h_cu_pr);
  const auto r = golden_section_maximize(
      [&](double t) { return rbar(prob, t, order); }, prob.tau_min, 1.0, 1e-9, 200);
  return TauSearchResult{r.x, r.value};
}

// Full underlay design: WET power from the ITC, harvest, then the outer/inner
// search.  gamma.unconstrained recovers the stand-alone network optimum.
inline SolveResult solve_p1(const NetworkInstance& inst, const GammaItc& gamma) {
  inst.validate();
  UnderlayProblem prob;
  prob.inst = inst;
  prob.gamma = gamma;
  prob.slopes = effective_gains(inst).gamma;
  prob.q = harvested_power(inst, underlay_ap_power(inst, gamma));
  prob.tau_min = 0.0;

  const TauSearchResult top = maximize_tau(prob);
  SolveResult res;
  res.tau = top.tau;
  res.p_c = underlay_ap_power(inst, gamma);
  if (top.tau > 0.0 && top.tau < 1.0) {
    InnerSolution inner = solve_inner(prob, top.tau);
    res.e = std::move(inner.e);
    res.throughput = inner.rate;
  } else {
    res.e.assign(inst.k, 0.0);
    res.throughput = 0.0;
  }
  res.primary_rate = primary_rate_underlay(inst, res.tau, res.e, res.p_c);
  return res;
}

}  // namespace cwpcn
