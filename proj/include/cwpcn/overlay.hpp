#pragma once

// Overlay spectrum sharing: the H-AP spends its whole WET phase relaying the
// primary signal at p_max (the PR then sees two coherent copies, rate r1) and
// in exchange the primary tolerates the secondary uplink as long as its own
// average rate stays above a floor r_bar.
//
// The design search runs over a virtual interference temperature gamma0: for
// each gamma0 the WIT-phase primary rate is pinned at r2(gamma0), the rate
// floor turns into a lower bound tau_floor on the WET fraction, and what is
// left is an underlay-shaped problem with cap gamma0 and interference-free
// slopes.  The outer scan over gamma0 is bounded, but the objective is not
// concave in gamma0, so it is sampled on a hybrid grid before refinement.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "cwpcn/core.hpp"
#include "cwpcn/golden_section.hpp"
#include "cwpcn/underlay.hpp"

namespace cwpcn {

struct OverlayProblem {
  NetworkInstance inst;
  double r_bar = 0.0;   // primary rate floor [bits/s/Hz]
  double r1_val = 0.0;  // relay-boosted WET-phase primary rate
  std::vector<double> slopes;  // interference-free uplink slopes
  std::vector<double> q;       // harvest at p_c = p_max
};

// Throws InfeasibleError when the floor exceeds the relay ceiling: even
// tau = 1 cannot reach r_bar then.
inline OverlayProblem make_overlay_problem(const NetworkInstance& inst, double r_bar) {
  inst.validate();
  if (!(r_bar >= 0.0) || !std::isfinite(r_bar))
    throw std::invalid_argument("make_overlay_problem: r_bar must be finite and >= 0");
  OverlayProblem prob;
  prob.inst = inst;
  prob.r_bar = r_bar;
  prob.r1_val = r1(inst);
  if (r_bar > prob.r1_val)
    throw InfeasibleError("overlay: primary rate floor exceeds the relay ceiling r1");
  prob.slopes = effective_gains(inst).gamma_hat;
  prob.q = harvested_power(inst, inst.p_max);
  return prob;
}

struct TildeTau {
  double tau = 0.0;
  bool degenerate = false;  // nothing to harvest or nothing to send: a = 0
};

// Unconstrained optimum of f(tau) = (1-tau) * log2(1 + tau/(1-tau) * a).
// Stationarity reduces to z*ln(z) - z + 1 = a with z = 1 + tau/(1-tau)*a;
// the left side is increasing and convex on z > 1, so Newton from z0 = a + 2
// descends monotonically onto the unique root.
inline TildeTau tilde_tau_k(double a) {
  if (!(a >= 0.0) || !std::isfinite(a))
    throw std::invalid_argument("tilde_tau_k: a must be finite and >= 0");
  if (a <= 0.0) return TildeTau{0.0, true};
  double z = a + 2.0;
  for (int it = 0; it < 100; ++it) {
    const double g = z * std::log(z) - z + 1.0 - a;
    const double dg = std::log(z);
    const double step = g / dg;
    z -= step;
    if (z <= 1.0) z = 1.0 + 1e-16;  // convexity makes this unreachable; guard fp
    if (std::abs(step) <= 1e-15 * z) break;
  }
  return TildeTau{(z - 1.0) / (a + z - 1.0), false};
}

inline TildeTau tilde_tau_k(const OverlayProblem& prob) {
  double a = 0.0;
  for (std::size_t i = 0; i < prob.slopes.size(); ++i) a += prob.slopes[i] * prob.q[i];
  return tilde_tau_k(a);
}

// Smallest WET fraction that keeps the primary at r_bar when the WIT-phase
// interference is pinned at gamma0: tau*r1 + (1-tau)*r2(gamma0) >= r_bar.
inline double overlay_tau_floor(const OverlayProblem& prob, double gamma0) {
  const double r2v = r2(prob.inst, gamma0);
  if (prob.r_bar <= r2v) return 0.0;
  if (prob.r1_val <= r2v)
    throw InfeasibleError("overlay: rate floor unreachable at this gamma0");
  const double t = (prob.r_bar - r2v) / (prob.r1_val - r2v);
  return std::min(std::max(t, 0.0), 1.0);
}

// Best design with the WIT interference budget pinned at gamma0.  This is the
// underlay machinery with interference-free slopes, cap gamma0 and the rate
// floor folded into tau_min.
inline SolveResult solve_p2a(const OverlayProblem& prob, double gamma0) {
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0))
    throw std::invalid_argument("solve_p2a: gamma0 must be finite and >= 0");
  UnderlayProblem up;
  up.inst = prob.inst;
  up.gamma = GammaItc::bounded(gamma0);
  up.slopes = prob.slopes;
  up.q = prob.q;
  up.tau_min = overlay_tau_floor(prob, gamma0);

  const TauSearchResult top = maximize_tau(up);
  SolveResult res;
  res.tau = top.tau;
  res.p_c = prob.inst.p_max;
  res.gamma0 = gamma0;
  if (top.tau > 0.0 && top.tau < 1.0) {
    InnerSolution inner = solve_inner(up, top.tau);
    res.e = std::move(inner.e);
    res.throughput = inner.rate;
  } else {
    res.e.assign(prob.inst.k, 0.0);
    res.throughput = 0.0;
  }
  res.primary_rate = primary_rate_overlay(prob.inst, res.tau, res.e);
  return res;
}

// Does the budget gamma0 get used up at the corresponding optimum?  True iff
// the optimal WET fraction reaches the all-users-full threshold
// gamma0 / (gamma0 + sum h*q), by the peak position or by the rate floor.
inline bool gamma0_feasible_set_check(const OverlayProblem& prob, double gamma0) {
  double hq = 0.0;
  for (std::size_t i = 0; i < prob.inst.k; ++i)
    hq += prob.inst.h_cu_pr[i] * prob.q[i];
  if (hq == 0.0) return gamma0 == 0.0;  // users land no interference at all
  const double threshold = gamma0 / (gamma0 + hq);
  if (tilde_tau_k(prob).tau >= threshold) return true;
  return overlay_tau_floor(prob, gamma0) >= threshold;
}

// Upper end of the gamma0 range worth searching.  Past
// max(tt/(1-tt), rho/(1-rho)) * sum h*q the per-gamma0 optimum stops
// changing: the budget can cover every user at both the peak WET fraction and
// the worst-case rate-floor fraction rho = r_bar/r1.  rho == 1 makes the
// second factor diverge; 1e6 * (noise_pr + g*P_p) stands in, far past the
// point where r2 has flattened to zero.
inline double gamma0_upper_bound(const OverlayProblem& prob) {
  double hq = 0.0;
  for (std::size_t i = 0; i < prob.inst.k; ++i)
    hq += prob.inst.h_cu_pr[i] * prob.q[i];
  if (hq == 0.0) return 0.0;
  const double tt = tilde_tau_k(prob).tau;
  const double x1 = tt / (1.0 - tt);
  const double rho = prob.r1_val > 0.0 ? prob.r_bar / prob.r1_val : 0.0;
  if (rho >= 1.0) {
    const double cap =
        1e6 * (prob.inst.noise_pr + prob.inst.g_pt_pr * prob.inst.p_primary);
    return std::max(x1 * hq, cap);
  }
  return std::max(x1, rho / (1.0 - rho)) * hq;
}

struct Gamma0Search {
  double upper_bound = 0.0;
  double tilde_tau = 0.0;
  double best_gamma0 = 0.0;
  std::vector<std::pair<double, double>> samples;  // (gamma0, rate), ascending
};

struct SolveP2Options {
  int grid_points = 512;           // hybrid grid size before refinement
  double refine_tol_factor = 1e-12;  // golden tolerance, relative to the bracket
};

// Full overlay design: scan gamma0 on a geometric+linear hybrid grid over
// [0, upper], then golden-refine between the neighbors of the strongest few
// well-separated samples.  The per-gamma0 rate is not concave and can spike
// where the interior tau optimum meets the rising rate-floor boundary, so the
// refinement works each candidate bracket to relative precision: a kink's
// one-sided value error scales with the final bracket width.  Ties keep the
// smaller gamma0.
inline SolveResult solve_p2(const NetworkInstance& inst, double r_bar,
                            Gamma0Search* trace = nullptr,
                            const SolveP2Options& opts = SolveP2Options{}) {
  const OverlayProblem prob = make_overlay_problem(inst, r_bar);
  const double upper = gamma0_upper_bound(prob);

  Gamma0Search search;
  search.upper_bound = upper;
  search.tilde_tau = tilde_tau_k(prob).tau;

  std::vector<double> grid;
  grid.push_back(0.0);
  if (upper > 0.0) {
    const int n = std::max(opts.grid_points, 2);
    const int ngeo = n / 2;
    const int nlin = n - ngeo;
    // geometric tail reaching down 8 decades below upper
    for (int j = 0; j < ngeo; ++j)
      grid.push_back(upper * std::pow(1e-8, static_cast<double>(ngeo - j) / ngeo));
    for (int j = 1; j <= nlin; ++j)
      grid.push_back(upper * static_cast<double>(j) / nlin);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  std::size_t best_idx = 0;
  double best_rate = -1.0;
  search.samples.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double rate = solve_p2a(prob, grid[j]).throughput;
    search.samples.emplace_back(grid[j], rate);
    if (rate > best_rate) {
      best_rate = rate;
      best_idx = j;
    }
  }

  double best_gamma0 = grid[best_idx];
  if (upper > 0.0) {
    // strongest samples first, at least two cells apart so the brackets differ
    std::vector<std::size_t> order(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (search.samples[a].second != search.samples[b].second)
        return search.samples[a].second > search.samples[b].second;
      return a < b;
    });
    std::vector<std::size_t> picked;
    for (std::size_t j : order) {
      bool close = false;
      for (std::size_t p : picked)
        close = close || (j > p ? j - p : p - j) < 2;
      if (close) continue;
      picked.push_back(j);
      if (picked.size() == 3) break;
    }
    for (std::size_t j : picked) {
      const double lo = j > 0 ? grid[j - 1] : grid[j];
      const double hi = j + 1 < grid.size() ? grid[j + 1] : grid[j];
      if (!(hi > lo)) continue;
      const auto refined = golden_section_maximize(
          [&](double g0) { return solve_p2a(prob, g0).throughput; }, lo, hi,
          opts.refine_tol_factor * hi, 200);
      if (refined.value > best_rate) {
        best_rate = refined.value;
        best_gamma0 = refined.x;
      }
    }
  }

  search.best_gamma0 = best_gamma0;
  if (trace) *trace = std::move(search);
  return solve_p2a(prob, best_gamma0);
}

}  // namespace cwpcn
