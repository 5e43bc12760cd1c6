#pragma once

// Independent checks for the analytic solvers.
//
// grid_maximize searches the raw (tau, e) box directly, testing feasibility
// from the constraint definitions (budget inversion only, no optimality
// structure), so it cannot inherit a solver bug.  Three things keep it sharp
// enough to certify 1e-4 agreement: for fixed tau the objective is increasing
// in the weighted energy sum, so the last user's energy is pushed to the
// budget in closed form and the log is taken once per tau slice; every tau
// slice additionally sweeps the box/budget corner patterns, which pins the
// slice value exactly because a linear objective peaks on a corner; and the
// winning cells are re-gridded over +-3 cell windows for a few stages, which
// matters because the tau optimum often sits on a kink where one-sided error
// decays only linearly in the cell width.
//
// verify_kkt reconstructs multipliers for the fixed-tau energy problem and
// reports scale-normalized residuals.  Slopes can span 1e8 across instances,
// so every term is expressed on a unit scale before thresholds mean anything.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <vector>

#include "cwpcn/core.hpp"
#include "cwpcn/underlay.hpp"

namespace cwpcn {

enum class OracleModel { P1, P2 };

struct OracleResult {
  Allocation alloc;
  double throughput = 0.0;
  double primary_rate = 0.0;
  bool certified = true;  // false when the multistart fallback ran (k > 3)
};

struct OracleOptions {
  int stages = 5;      // zoom passes over the winning cell
  double tau_lo = 0.0;  // clip of the tau axis, for constrained variants
  double tau_hi = 1.0;
  std::uint64_t seed = 0x2545f4914f6cdd1dULL;  // multistart fallback only
  int multistarts = 24;
};

namespace oracle_detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SearchPoint {
  double tau = 0.0;
  std::vector<double> e;
  double value = -1.0;  // -1 marks "nothing feasible seen"
};

struct SliceRecord {
  double value = -1.0;  // best over the phi grid at this tau, -1 if infeasible
  double tau = 0.0;
  std::vector<double> phi;
};

// Largest weighted-energy budget sum_i h_cu_pr[i]*e[i] admissible at this
// tau.  Negative return marks the whole tau slice infeasible; kInf marks no
// cap at all.
template <typename BudgetFn>
void grid_stage(const std::vector<double>& slopes, const std::vector<double>& q,
                const std::vector<double>& hpr, BudgetFn&& budget, double tau_lo,
                double tau_hi, const std::vector<double>& phi_lo,
                const std::vector<double>& phi_hi, int res, SearchPoint& best,
                std::vector<double>* best_phi,
                std::vector<SliceRecord>* slices = nullptr) {
  const std::size_t k = slopes.size();
  const std::size_t nfree = k == 0 ? 0 : k - 1;
  std::vector<double> phi(nfree, 0.0);
  std::vector<double> e(k, 0.0);
  std::vector<double> slice_e(k, 0.0);
  std::vector<double> slice_phi(nfree, 0.0);

  if (slices) slices->assign(res, SliceRecord{});
  for (int ti = 0; ti < res; ++ti) {
    const double tau =
        res == 1 ? tau_lo : tau_lo + (tau_hi - tau_lo) * ti / (res - 1);
    if (slices) (*slices)[ti].tau = tau;
    const double cap_budget = budget(tau);
    if (cap_budget < 0.0) continue;

    double slice_w = -1.0;
    bool slice_found = false;

    // depth-first over the free axes; breaks early once the budget is spent
    // because e grows with phi
    auto descend = [&](auto&& self, std::size_t ax, double spent, double wsum) -> void {
      if (ax == nfree) {
        double w = wsum;
        if (k > 0) {
          const std::size_t last = k - 1;
          const double cap = tau * q[last];
          double el;
          if (cap_budget == kInf || hpr[last] == 0.0) {
            el = cap;
          } else {
            el = std::min(cap, std::max(0.0, (cap_budget - spent) / hpr[last]));
          }
          e[last] = el;
          w += slopes[last] * el;
        }
        if (w > slice_w) {
          slice_w = w;
          slice_found = true;
          slice_e = e;
          slice_phi = phi;
        }
        return;
      }
      for (int j = 0; j < res; ++j) {
        const double f =
            res == 1 ? phi_lo[ax]
                     : phi_lo[ax] + (phi_hi[ax] - phi_lo[ax]) * j / (res - 1);
        const double ei = f * tau * q[ax];
        const double sp = spent + hpr[ax] * ei;
        if (sp > cap_budget) break;
        phi[ax] = f;
        e[ax] = ei;
        self(self, ax + 1, sp, wsum + slopes[ax] * ei);
      }
    };
    descend(descend, 0, 0.0, 0.0);

    // corner sweep: each user at 0 or its cap, at most one axis pushed onto
    // the budget plane.  The slice objective is linear in e, so its true
    // optimum is one of these patterns; the phi grid alone can miss it when
    // the windows have zoomed onto a different shoulder.
    for (std::size_t split = 0; split <= k; ++split) {
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        if (split < k && (mask & (1u << split))) continue;
        double spent = 0.0, w = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          e[i] = (mask & (1u << i)) ? tau * q[i] : 0.0;
          spent += hpr[i] * e[i];
          w += slopes[i] * e[i];
        }
        if (spent > cap_budget) continue;
        if (split < k && hpr[split] > 0.0 && cap_budget != kInf) {
          e[split] = std::min(tau * q[split],
                              std::max(0.0, (cap_budget - spent) / hpr[split]));
          w += slopes[split] * e[split];
        } else if (split < k) {
          continue;  // budget cannot pin a costless user; masks cover it
        }
        if (w > slice_w) {
          slice_w = w;
          slice_found = true;
          slice_e = e;
          for (std::size_t ax = 0; ax < nfree; ++ax) {
            const double cap = tau * q[ax];
            slice_phi[ax] = cap > 0.0 ? std::clamp(e[ax] / cap, 0.0, 1.0) : 0.0;
          }
        }
      }
    }

    if (!slice_found) continue;
    const double value = (slice_w <= 0.0 || tau >= 1.0)
                             ? 0.0
                             : (1.0 - tau) * log2p1(slice_w / (1.0 - tau));
    if (slices) {
      (*slices)[ti].value = value;
      (*slices)[ti].phi = slice_phi;
    }
    if (value > best.value) {
      best.value = value;
      best.tau = tau;
      best.e = slice_e;
      if (best_phi) *best_phi = slice_phi;
    }
  }
}

// Exhaustive multi-stage search, k <= 3.  The per-tau slice curve is usually
// unimodal but not always: a box/budget corner puts a kink next to a separate
// interior basin, and whichever wins the coarse scan by a hair is not
// reliably the true optimum.  So the opening scan keeps every slice, and the
// shrinking zoom runs from the strongest few well-separated basins instead of
// the single winner.
template <typename BudgetFn>
SearchPoint grid_full(const std::vector<double>& slopes, const std::vector<double>& q,
                      const std::vector<double>& hpr, BudgetFn&& budget,
                      double tau_lo, double tau_hi, int res, int stages) {
  const std::size_t nfree = slopes.empty() ? 0 : slopes.size() - 1;
  SearchPoint best;
  std::vector<double> scan_phi(nfree, 0.0);
  std::vector<SliceRecord> slices;
  {
    const std::vector<double> flo(nfree, 0.0), fhi(nfree, 1.0);
    grid_stage(slopes, q, hpr, budget, tau_lo, tau_hi, flo, fhi, res, best,
               &scan_phi, &slices);
  }
  if (best.value < 0.0) return best;  // nothing feasible anywhere

  // local maxima of the slice curve, strongest first, at least 3 cells apart
  std::vector<int> maxima;
  for (int i = 0; i < res; ++i) {
    if (slices[i].value < 0.0) continue;
    const double l = i > 0 ? slices[i - 1].value : -1.0;
    const double r = i + 1 < res ? slices[i + 1].value : -1.0;
    if (slices[i].value >= l && slices[i].value >= r) maxima.push_back(i);
  }
  std::sort(maxima.begin(), maxima.end(), [&](int a, int b) {
    return slices[a].value > slices[b].value;
  });
  std::vector<int> picked;
  for (int c : maxima) {
    bool close = false;
    for (int p : picked) close = close || std::abs(c - p) < 3;
    if (close) continue;
    picked.push_back(c);
    if (picked.size() == 3) break;
  }

  for (int c : picked) {
    const double tcell = (tau_hi - tau_lo) / (res - 1);
    double tlo = std::max(tau_lo, slices[c].tau - 3.0 * tcell);
    double thi = std::min(tau_hi, slices[c].tau + 3.0 * tcell);
    std::vector<double> flo(nfree), fhi(nfree);
    for (std::size_t ax = 0; ax < nfree; ++ax) {
      flo[ax] = std::max(0.0, slices[c].phi[ax] - 3.0 / (res - 1));
      fhi[ax] = std::min(1.0, slices[c].phi[ax] + 3.0 / (res - 1));
    }
    std::vector<double> stage_phi(nfree, 0.0);
    for (int s = 1; s < stages; ++s) {
      SearchPoint stage_best;
      grid_stage(slopes, q, hpr, budget, tlo, thi, flo, fhi, res, stage_best,
                 &stage_phi);
      if (stage_best.value < 0.0) break;
      if (stage_best.value > best.value) best = stage_best;
      // +-3 cells around the stage winner; the margin tolerates diagonal
      // creep along correlated (tau, phi) ridges between stages
      const double tw = 3.0 * (thi - tlo) / (res - 1);
      tlo = std::max(tau_lo, stage_best.tau - tw);
      thi = std::min(tau_hi, stage_best.tau + tw);
      for (std::size_t ax = 0; ax < nfree; ++ax) {
        const double w = 3.0 * (fhi[ax] - flo[ax]) / (res - 1);
        flo[ax] = std::max(0.0, stage_phi[ax] - w);
        fhi[ax] = std::min(1.0, stage_phi[ax] + w);
      }
    }
  }
  return best;
}

// Non-certifying fallback for k > 3: random restarts plus a shrinking local
// search in (tau, phi) space, with the last axis still solved exactly.
template <typename BudgetFn>
SearchPoint multistart(const std::vector<double>& slopes, const std::vector<double>& q,
                       const std::vector<double>& hpr, BudgetFn&& budget,
                       double tau_lo, double tau_hi, std::uint64_t seed,
                       int starts) {
  const std::size_t k = slopes.size();
  const std::size_t nfree = k == 0 ? 0 : k - 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> e(k, 0.0);
  auto evaluate = [&](double tau, const std::vector<double>& phi) -> double {
    const double cap_budget = budget(tau);
    if (cap_budget < 0.0) return -1.0;
    double spent = 0.0, w = 0.0;
    for (std::size_t i = 0; i < nfree; ++i) {
      e[i] = phi[i] * tau * q[i];
      spent += hpr[i] * e[i];
      w += slopes[i] * e[i];
    }
    if (spent > cap_budget) {
      // uniform pullback onto the budget face keeps the point comparable
      const double scale = spent > 0.0 ? cap_budget / spent : 0.0;
      spent = 0.0;
      w = 0.0;
      for (std::size_t i = 0; i < nfree; ++i) {
        e[i] *= scale;
        spent += hpr[i] * e[i];
        w += slopes[i] * e[i];
      }
    }
    if (k > 0) {
      const std::size_t last = k - 1;
      const double cap = tau * q[last];
      double el;
      if (cap_budget == kInf || hpr[last] == 0.0) {
        el = cap;
      } else {
        el = std::min(cap, std::max(0.0, (cap_budget - spent) / hpr[last]));
      }
      e[last] = el;
      w += slopes[last] * el;
    }
    if (w <= 0.0 || tau >= 1.0) return 0.0;
    return (1.0 - tau) * log2p1(w / (1.0 - tau));
  };

  SearchPoint best;
  std::vector<double> cur_phi(nfree, 0.0), cand_phi(nfree, 0.0), best_phi(nfree, 0.0);
  double best_tau_store = tau_lo;

  for (int s = 0; s < starts; ++s) {
    double tau;
    if (s < 9) {
      tau = tau_lo + (tau_hi - tau_lo) * (s + 1) / 10.0;  // fixed seeds
      std::fill(cur_phi.begin(), cur_phi.end(), 1.0);
    } else {
      tau = tau_lo + (tau_hi - tau_lo) * unit(rng);
      for (auto& f : cur_phi) f = unit(rng);
    }
    double cur_val = evaluate(tau, cur_phi);
    double cur_tau = tau;

    double radius = 0.3;
    for (int round = 0; round < 70; ++round) {
      for (int c = 0; c < 24; ++c) {
        const double t = std::clamp(
            cur_tau + radius * (tau_hi - tau_lo) * (2.0 * unit(rng) - 1.0), tau_lo,
            tau_hi);
        for (std::size_t i = 0; i < nfree; ++i)
          cand_phi[i] = std::clamp(cur_phi[i] + radius * (2.0 * unit(rng) - 1.0),
                                   0.0, 1.0);
        const double v = evaluate(t, cand_phi);
        if (v > cur_val) {
          cur_val = v;
          cur_tau = t;
          cur_phi = cand_phi;
        }
      }
      radius *= 0.85;
    }
    if (cur_val > best.value) {
      best.value = cur_val;
      best_tau_store = cur_tau;
      best_phi = cur_phi;
    }
  }

  best.tau = best_tau_store;
  evaluate(best_tau_store, best_phi);  // rebuild e for the winner
  best.e = e;
  if (best.value < 0.0) best.e.assign(k, 0.0);
  return best;
}

template <typename BudgetFn>
SearchPoint search(const std::vector<double>& slopes, const std::vector<double>& q,
                   const std::vector<double>& hpr, BudgetFn&& budget, int resolution,
                   const OracleOptions& opts, bool* certified) {
  if (slopes.size() <= 3) {
    if (certified) *certified = true;
    return grid_full(slopes, q, hpr, budget, opts.tau_lo, opts.tau_hi, resolution,
                     opts.stages);
  }
  if (certified) *certified = false;
  return multistart(slopes, q, hpr, budget, opts.tau_lo, opts.tau_hi, opts.seed,
                    opts.multistarts);
}

}  // namespace oracle_detail

// Largest WIT-phase aggregate interference sum h_cu_pr[i]*e[i] that keeps the
// overlay primary rate at r_bar for a given tau; negative when even zero
// interference is not enough.  Pure constraint inversion.
inline double overlay_interference_cap(const NetworkInstance& inst, double r_bar,
                                       double tau) {
  const double deficit = r_bar - tau * r1(inst);
  if (deficit <= 0.0) return oracle_detail::kInf;
  if (tau >= 1.0) return -1.0;
  const double need = std::exp2(deficit / (1.0 - tau)) - 1.0;
  if (need <= 0.0) return oracle_detail::kInf;
  const double sig = inst.g_pt_pr * inst.p_primary;
  return (1.0 - tau) * (sig / need - inst.noise_pr);
}

// Brute-force reference optimum.  For P1 `param` is the interference cap in
// watts; for P2 it is the primary rate floor.  k <= 3 gets the exhaustive
// zoomed grid (certified); larger k falls back to multistart local search.
inline OracleResult grid_maximize(const NetworkInstance& inst, OracleModel model,
                                  double param, int resolution,
                                  const OracleOptions& opts = OracleOptions{}) {
  inst.validate();
  if (resolution < 4)
    throw std::invalid_argument("grid_maximize: resolution must be >= 4");

  OracleResult res;
  oracle_detail::SearchPoint pt;
  if (model == OracleModel::P1) {
    if (!(param >= 0.0) || !std::isfinite(param))
      throw std::invalid_argument("grid_maximize: P1 cap must be finite and >= 0");
    const double p_c = underlay_ap_power(inst, param);
    const std::vector<double> q = harvested_power(inst, p_c);
    const std::vector<double> slopes = effective_gains(inst).gamma;
    auto budget = [&](double tau) { return (1.0 - tau) * param; };
    pt = oracle_detail::search(slopes, q, inst.h_cu_pr, budget, resolution, opts,
                               &res.certified);
    res.alloc.tau = pt.tau;
    res.alloc.e = pt.e;
    res.throughput = std::max(pt.value, 0.0);
    res.primary_rate = primary_rate_underlay(inst, pt.tau, pt.e, p_c);
  } else {
    if (param > r1(inst))
      throw InfeasibleError("grid_maximize: rate floor exceeds the relay ceiling r1");
    const std::vector<double> q = harvested_power(inst, inst.p_max);
    const std::vector<double> slopes = effective_gains(inst).gamma_hat;
    auto budget = [&](double tau) {
      return overlay_interference_cap(inst, param, tau);
    };
    pt = oracle_detail::search(slopes, q, inst.h_cu_pr, budget, resolution, opts,
                               &res.certified);
    if (pt.value < 0.0) {  // only tau = 1 feasible, off-grid safeguard
      pt.tau = 1.0;
      pt.e.assign(inst.k, 0.0);
      pt.value = 0.0;
    }
    res.alloc.tau = pt.tau;
    res.alloc.e = pt.e;
    res.throughput = std::max(pt.value, 0.0);
    res.primary_rate = primary_rate_overlay(inst, pt.tau, pt.e);
  }
  return res;
}

// Underlay oracle honoring an unconstrained cap.
inline OracleResult grid_maximize(const NetworkInstance& inst, const GammaItc& gamma,
                                  int resolution,
                                  const OracleOptions& opts = OracleOptions{}) {
  if (!gamma.unconstrained)
    return grid_maximize(inst, OracleModel::P1, gamma.gamma, resolution, opts);
  inst.validate();
  OracleResult res;
  const std::vector<double> q = harvested_power(inst, inst.p_max);
  const std::vector<double> slopes = effective_gains(inst).gamma;
  auto budget = [&](double) { return oracle_detail::kInf; };
  oracle_detail::SearchPoint pt = oracle_detail::search(
      slopes, q, inst.h_cu_pr, budget, resolution, opts, &res.certified);
  res.alloc.tau = pt.tau;
  res.alloc.e = pt.e;
  res.throughput = std::max(pt.value, 0.0);
  res.primary_rate = primary_rate_underlay(inst, pt.tau, pt.e, inst.p_max);
  return res;
}

// Multiplier reconstruction for the fixed-tau energy problem
//   max sum slopes[i]*e[i]  s.t.  0 <= e[i] <= tau*q[i],
//                                 sum h_cu_pr[i]*e[i] <= (1-tau)*gamma.
// Residuals are reported on a normalized scale: slopes divided by their max,
// cross gains by theirs, energies by their caps.  max_residual < 1e-6 is what
// an exact optimum produces; a misordered or rescaled allocation lands orders
// of magnitude higher.
struct KktReport {
  double lambda = 0.0;            // budget multiplier (raw scale)
  std::vector<double> mu;         // upper-bound multipliers (raw scale)
  std::vector<double> nu;         // lower-bound multipliers (raw scale)
  std::vector<double> stationarity;  // normalized, per user
  std::vector<double> comp_upper;    // mu-side complementary slackness
  std::vector<double> comp_lower;    // nu-side complementary slackness
  double comp_budget = 0.0;          // lambda * budget slack
  double feas_box = 0.0;             // worst box violation
  double feas_budget = 0.0;          // budget violation
  bool dual_consistent = true;
  double max_residual = 0.0;
};

inline KktReport verify_kkt(const UnderlayProblem& prob, double tau_bar,
                            const std::vector<double>& e) {
  if (!(tau_bar > 0.0 && tau_bar < 1.0))
    throw std::invalid_argument("verify_kkt: tau_bar must lie in (0,1)");
  const std::size_t k = prob.slopes.size();
  if (e.size() != k)
    throw std::invalid_argument("verify_kkt: e must have length k");

  KktReport rep;
  rep.mu.assign(k, 0.0);
  rep.nu.assign(k, 0.0);
  rep.stationarity.assign(k, 0.0);
  rep.comp_upper.assign(k, 0.0);
  rep.comp_lower.assign(k, 0.0);

  double s_gamma = 0.0, s_h = 0.0, cap_weight = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    s_gamma = std::max(s_gamma, prob.slopes[i]);
    s_h = std::max(s_h, prob.inst.h_cu_pr[i]);
    cap_weight += prob.inst.h_cu_pr[i] * tau_bar * prob.q[i];
  }
  if (s_gamma == 0.0) s_gamma = 1.0;
  if (s_h == 0.0) s_h = 1.0;

  const bool unconstrained = prob.gamma.unconstrained;
  const double budget = unconstrained ? 0.0 : (1.0 - tau_bar) * prob.gamma.gamma;
  const double budget_scale = std::max(budget, cap_weight);

  // classify against the caps
  constexpr double kClassTol = 1e-9;
  enum Cls { kZero, kFull, kFrac };
  std::vector<Cls> cls(k);
  int frac = -1;
  double spent = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double cap = tau_bar * prob.q[i];
    spent += prob.inst.h_cu_pr[i] * e[i];
    if (e[i] <= kClassTol * cap || cap <= 0.0) {
      cls[i] = kZero;
    } else if (e[i] >= cap * (1.0 - kClassTol)) {
      cls[i] = kFull;
    } else {
      cls[i] = kFrac;
      if (frac < 0) frac = static_cast<int>(i);
    }
  }
  const double slack = unconstrained ? oracle_detail::kInf : budget - spent;

  // budget multiplier: pinned by a split user, zero under slack, otherwise
  // the smallest value the zeroed users tolerate
  if (frac >= 0) {
    if (prob.inst.h_cu_pr[frac] > 0.0) {
      rep.lambda = prob.slopes[frac] / prob.inst.h_cu_pr[frac];
    } else {
      rep.dual_consistent = false;  // a free user must sit at a bound
      rep.lambda = 0.0;
    }
  } else if (unconstrained || slack > kClassTol * budget_scale) {
    rep.lambda = 0.0;
  } else {
    double lo = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (cls[i] == kZero && prob.inst.h_cu_pr[i] > 0.0)
        lo = std::max(lo, prob.slopes[i] / prob.inst.h_cu_pr[i]);
    rep.lambda = lo;
  }

  for (std::size_t i = 0; i < k; ++i) {
    const double lh = rep.lambda * prob.inst.h_cu_pr[i];
    if (cls[i] == kFull) {
      rep.mu[i] = std::max(0.0, prob.slopes[i] - lh);
    } else if (cls[i] == kZero) {
      rep.nu[i] = std::max(0.0, lh - prob.slopes[i]);
    }
    // a split user keeps both box multipliers at zero
  }

  const double lam_n = rep.lambda * s_h / s_gamma;
  double worst = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double cap = tau_bar * prob.q[i];
    const double en = cap > 0.0 ? e[i] / cap : 0.0;
    const double st = std::abs(prob.slopes[i] + rep.nu[i] - rep.mu[i] -
                               rep.lambda * prob.inst.h_cu_pr[i]) /
                      s_gamma;
    rep.stationarity[i] = st;
    rep.comp_upper[i] = (rep.mu[i] / s_gamma) * std::max(0.0, 1.0 - en);
    rep.comp_lower[i] = (rep.nu[i] / s_gamma) * std::max(0.0, en);
    rep.feas_box = std::max({rep.feas_box, cap > 0.0 ? (e[i] - cap) / cap : e[i],
                             -e[i] / (cap > 0.0 ? cap : 1.0)});
    worst = std::max({worst, st, rep.comp_upper[i], rep.comp_lower[i]});
  }
  if (!unconstrained && budget_scale > 0.0) {
    rep.comp_budget = lam_n * std::max(0.0, slack) / budget_scale;
    rep.feas_budget = std::max(0.0, spent - budget) / budget_scale;
  }
  rep.feas_box = std::max(rep.feas_box, 0.0);
  worst = std::max({worst, rep.comp_budget, rep.feas_box, rep.feas_budget});
  if (!rep.dual_consistent) worst = std::max(worst, 1.0);
  rep.max_residual = worst;
  return rep;
}

}  // namespace cwpcn
