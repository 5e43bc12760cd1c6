#pragma once

// Line-network scenario: PT and PR anchor the ends, the H-AP sits between
// them, the CUs cluster around the H-AP.  Every link gain follows the same
// distance law ref_gain * (d / ref_distance)^-alpha, optionally multiplied by
// a unit-mean exponential fading factor per link and block.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cwpcn/core.hpp"
#include "cwpcn/rng.hpp"

namespace cwpcn {

enum class Fading { None, Rayleigh };
enum class ShareModel { Underlay, Overlay };

struct Scenario {
  // geometry, coordinates on a line [m]
  double pt_pos = 0.0;
  double pr_pos = 200.0;
  double ap_pos = 100.0;
  std::vector<double> cu_pos;

  // distance law
  double alpha = 3.0;
  double ref_gain = 0.01;  // linear gain at ref_distance
  double ref_distance = 1.0;

  // radio parameters
  double p_max = 1.0;
  double p_primary = 0.1;
  double noise_ap = 1e-12;
  double noise_pr = 1e-12;
  double eta = 0.8;
  GammaItc gamma = GammaItc::bounded(1e-9);  // underlay cap
  double r_bar = 5.0;                        // overlay floor [bits/s/Hz]

  // simulation
  Fading fading = Fading::None;
  std::uint64_t seed = 1;
  std::size_t trials = 2000;

  void validate() const {
    if (cu_pos.empty()) throw std::invalid_argument("Scenario: needs at least one CU");
    if (!(alpha > 0.0)) throw std::invalid_argument("Scenario: alpha must be > 0");
    if (!(ref_gain > 0.0)) throw std::invalid_argument("Scenario: ref_gain must be > 0");
    if (!(ref_distance > 0.0))
      throw std::invalid_argument("Scenario: ref_distance must be > 0");
    if (!(eta >= 0.0 && eta <= 1.0))
      throw std::invalid_argument("Scenario: eta must lie in [0,1]");
    if (trials < 1) throw std::invalid_argument("Scenario: trials must be >= 1");
    auto distinct = [](double a, double b) { return a != b; };
    if (!distinct(pt_pos, pr_pos) || !distinct(ap_pos, pr_pos) ||
        !distinct(pt_pos, ap_pos))
      throw std::invalid_argument("Scenario: PT, PR and H-AP must sit at distinct points");
    for (double c : cu_pos)
      if (!distinct(c, pt_pos) || !distinct(c, pr_pos) || !distinct(c, ap_pos))
        throw std::invalid_argument("Scenario: CU collocated with another node");
  }
};

inline double pathloss_gain(const Scenario& scn, double pos_a, double pos_b) {
  const double d = std::abs(pos_a - pos_b);
  if (d <= 0.0) throw std::invalid_argument("pathloss_gain: zero distance");
  return scn.ref_gain * std::pow(d / scn.ref_distance, -scn.alpha);
}

// Reference layouts: PT at 0 m, PR at 200 m, five CUs packed around the H-AP
// at offsets {-4, -5, +5, +10, +15} m.  The three cases move the H-AP.
inline Scenario scenario_with_ap(double ap_pos) {
  Scenario scn;
  scn.ap_pos = ap_pos;
  for (double off : {-4.0, -5.0, 5.0, 10.0, 15.0}) scn.cu_pos.push_back(ap_pos + off);
  return scn;
}

inline Scenario scenario_case1() { return scenario_with_ap(100.0); }  // midway
inline Scenario scenario_case2() { return scenario_with_ap(170.0); }  // near PR
inline Scenario scenario_case3() { return scenario_with_ap(30.0); }   // near PT

// Pathloss-only instance (the fading == None path).
inline NetworkInstance build_instance(const Scenario& scn) {
  scn.validate();
  NetworkInstance inst;
  inst.k = scn.cu_pos.size();
  inst.p_max = scn.p_max;
  inst.p_primary = scn.p_primary;
  inst.noise_ap = scn.noise_ap;
  inst.noise_pr = scn.noise_pr;
  inst.h_ap_pr = pathloss_gain(scn, scn.ap_pos, scn.pr_pos);
  inst.g_pt_pr = pathloss_gain(scn, scn.pt_pos, scn.pr_pos);
  inst.g_pt_ap = pathloss_gain(scn, scn.pt_pos, scn.ap_pos);
  for (double c : scn.cu_pos) {
    inst.h_cu.push_back(pathloss_gain(scn, scn.ap_pos, c));
    inst.h_cu_pr.push_back(pathloss_gain(scn, c, scn.pr_pos));
    inst.g_pt_cu.push_back(pathloss_gain(scn, scn.pt_pos, c));
    inst.eta.push_back(scn.eta);
  }
  inst.validate();
  return inst;
}

// One fading realization.  Draw order is part of the reproducibility
// contract: h_ap_pr, h_cu[0..k), h_cu_pr[0..k), g_pt_pr, g_pt_cu[0..k),
// g_pt_ap, one Exp(1) factor each.
inline NetworkInstance sample_instance(const Scenario& scn, std::mt19937_64& rng) {
  NetworkInstance inst = build_instance(scn);
  if (scn.fading == Fading::None) return inst;
  inst.h_ap_pr *= exp_unit(rng);
  for (std::size_t i = 0; i < inst.k; ++i) inst.h_cu[i] *= exp_unit(rng);
  for (std::size_t i = 0; i < inst.k; ++i) inst.h_cu_pr[i] *= exp_unit(rng);
  inst.g_pt_pr *= exp_unit(rng);
  for (std::size_t i = 0; i < inst.k; ++i) inst.g_pt_cu[i] *= exp_unit(rng);
  inst.g_pt_ap *= exp_unit(rng);
  return inst;
}

}  // namespace cwpcn
