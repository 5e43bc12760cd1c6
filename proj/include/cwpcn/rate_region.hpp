#pragma once

// Achievable (primary rate, secondary throughput) frontiers.  The underlay
// frontier sweeps the interference cap, the overlay frontier sweeps the rate
// floor; both record the operating point each solved design actually
// achieves.  Containment checks work point against point, no interpolation:
// a claimed-inner point must be dominated by some recorded outer point.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <vector>

#include "cwpcn/core.hpp"
#include "cwpcn/overlay.hpp"
#include "cwpcn/underlay.hpp"

namespace cwpcn {

struct RatePoint {
  double param = 0.0;  // swept value: cap in watts (underlay), floor in bits (overlay)
  double r_primary = 0.0;
  double r_secondary = 0.0;
};

struct RateRegionFrontier {
  std::vector<RatePoint> points;    // Pareto set, ascending r_primary
  std::uint64_t fingerprint = 0;    // instance hash; guards cross-instance compares
};

namespace region_detail {

inline void mix_bits(std::uint64_t& h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  h ^= bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
}

}  // namespace region_detail

inline std::uint64_t instance_fingerprint(const NetworkInstance& inst) {
  std::uint64_t h = 0xb5ad4eceda1ce2a9ULL ^ inst.k;
  using region_detail::mix_bits;
  mix_bits(h, inst.p_max);
  mix_bits(h, inst.p_primary);
  mix_bits(h, inst.noise_ap);
  mix_bits(h, inst.noise_pr);
  mix_bits(h, inst.h_ap_pr);
  mix_bits(h, inst.g_pt_pr);
  mix_bits(h, inst.g_pt_ap);
  for (std::size_t i = 0; i < inst.k; ++i) {
    mix_bits(h, inst.h_cu[i]);
    mix_bits(h, inst.h_cu_pr[i]);
    mix_bits(h, inst.g_pt_cu[i]);
    mix_bits(h, inst.eta[i]);
  }
  return h;
}

// Drops points strictly dominated by another; survivors sorted by ascending
// r_primary.  Exact duplicates in (r_primary, r_secondary) collapse to their
// first occurrence.
inline void pareto_prune(std::vector<RatePoint>& pts) {
  std::vector<RatePoint> keep;
  keep.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < pts.size() && !drop; ++j) {
      if (i == j) continue;
      const bool geq = pts[j].r_primary >= pts[i].r_primary &&
                       pts[j].r_secondary >= pts[i].r_secondary;
      const bool strict = pts[j].r_primary > pts[i].r_primary ||
                          pts[j].r_secondary > pts[i].r_secondary;
      if (geq && strict) drop = true;
      if (j < i && pts[j].r_primary == pts[i].r_primary &&
          pts[j].r_secondary == pts[i].r_secondary)
        drop = true;  // duplicate, first one stays
    }
    if (!drop) keep.push_back(pts[i]);
  }
  std::sort(keep.begin(), keep.end(), [](const RatePoint& a, const RatePoint& b) {
    if (a.r_primary != b.r_primary) return a.r_primary < b.r_primary;
    return a.r_secondary < b.r_secondary;
  });
  pts = std::move(keep);
}

// Cap sweep for the underlay frontier: 64 caps log-spaced across nine decades
// around the PR noise floor, plus the silent and the unthrottled ends.
inline std::vector<GammaItc> default_gamma_grid(const NetworkInstance& inst,
                                                std::size_t n = 64) {
  std::vector<GammaItc> grid;
  grid.push_back(GammaItc::bounded(0.0));
  const double lo = inst.noise_pr * 1e-3;
  const double hi = inst.noise_pr * 1e6;
  for (std::size_t j = 0; j < n; ++j) {
    const double f = n == 1 ? 0.0 : static_cast<double>(j) / (n - 1);
    grid.push_back(GammaItc::bounded(lo * std::pow(hi / lo, f)));
  }
  grid.push_back(GammaItc::unbounded());
  return grid;
}

inline std::vector<double> default_rbar_grid(const NetworkInstance& inst,
                                             std::size_t n = 64) {
  const double top = r1(inst);
  std::vector<double> grid;
  for (std::size_t j = 0; j < n; ++j)
    grid.push_back(top * (n == 1 ? 0.0 : static_cast<double>(j) / (n - 1)));
  return grid;
}

inline RateRegionFrontier frontier_underlay(const NetworkInstance& inst,
                                            const std::vector<GammaItc>& gamma_grid) {
  inst.validate();
  RateRegionFrontier fr;
  fr.fingerprint = instance_fingerprint(inst);
  for (const GammaItc& g : gamma_grid) {
    const SolveResult sr = solve_p1(inst, g);
    RatePoint pt;
    pt.param = g.unconstrained ? std::numeric_limits<double>::infinity() : g.gamma;
    pt.r_primary = sr.primary_rate;
    pt.r_secondary = sr.throughput;
    fr.points.push_back(pt);
  }
  pareto_prune(fr.points);
  return fr;
}

inline RateRegionFrontier frontier_overlay(const NetworkInstance& inst,
                                           const std::vector<double>& rbar_grid) {
  inst.validate();
  RateRegionFrontier fr;
  fr.fingerprint = instance_fingerprint(inst);
  for (double rb : rbar_grid) {
    const SolveResult sr = solve_p2(inst, rb);
    RatePoint pt;
    pt.param = rb;
    pt.r_primary = sr.primary_rate;
    pt.r_secondary = sr.throughput;
    fr.points.push_back(pt);
  }
  pareto_prune(fr.points);
  return fr;
}

// True when every inner point is dominated, within tol in both coordinates,
// by some recorded outer point.  Frontiers must come from the same instance.
inline bool check_containment(const RateRegionFrontier& inner,
                              const RateRegionFrontier& outer, double tol) {
  if (inner.fingerprint != outer.fingerprint)
    throw std::invalid_argument("check_containment: frontiers from different instances");
  for (const RatePoint& u : inner.points) {
    bool dominated = false;
    for (const RatePoint& o : outer.points) {
      if (o.r_primary >= u.r_primary - tol && o.r_secondary >= u.r_secondary - tol) {
        dominated = true;
        break;
      }
    }
    if (!dominated) return false;
  }
  return true;
}

}  // namespace cwpcn
