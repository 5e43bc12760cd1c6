#pragma once

// Core model of a cognitive wireless-powered communication network (CWPCN)
// sharing one band with a primary PT -> PR link.  A hybrid access point
// (H-AP) powers K secondary users over the air during a fraction tau of the
// block, then the users send their data back by TDMA in the remaining 1-tau.
// Block length is normalized to 1, so energy and average power coincide.
//
// All quantities are linear SI units (watts, channel power gains as ratios).
// dBm/dB conversions happen at the configuration boundary, never in here.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwpcn {

// Requested operating point cannot be met (rate floor above the achievable
// ceiling, empty tau interval, ...).  Distinct from std::invalid_argument,
// which flags out-of-domain arguments.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

inline double log2p1(double x) { return std::log1p(x) / std::numbers::ln2; }

// Static channel/power description for one coherence block.
// h_cu[i] is reciprocal: it is both the H-AP -> CU_i energy downlink and the
// CU_i -> H-AP information uplink gain.
struct NetworkInstance {
  std::size_t k = 0;    // number of secondary users
  double p_max = 1.0;   // H-AP transmit power cap [W]
  double p_primary = 0.1;  // PT transmit power [W]
  double noise_ap = 1e-12;  // receiver noise power at the H-AP [W]
  double noise_pr = 1e-12;  // receiver noise power at the PR [W]
  double h_ap_pr = 0.0;  // H-AP -> PR gain (the cross link the ITC throttles)
  double g_pt_pr = 0.0;  // PT -> PR gain (primary direct link)
  double g_pt_ap = 0.0;  // PT -> H-AP gain (interference into the uplink)
  std::vector<double> h_cu;     // H-AP <-> CU_i
  std::vector<double> h_cu_pr;  // CU_i -> PR
  std::vector<double> g_pt_cu;  // PT -> CU_i (harvest contribution)
  std::vector<double> eta;      // harvester efficiency per CU, in [0,1]

  void validate() const {
    if (h_cu.size() != k || h_cu_pr.size() != k || g_pt_cu.size() != k ||
        eta.size() != k) {
      throw std::invalid_argument("NetworkInstance: per-user vectors must have length k");
    }
    auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!nonneg(h_ap_pr) || !nonneg(g_pt_pr) || !nonneg(g_pt_ap))
      throw std::invalid_argument("NetworkInstance: cross gains must be finite and >= 0");
    if (!(p_max > 0.0) || !std::isfinite(p_max))
      throw std::invalid_argument("NetworkInstance: p_max must be > 0");
    if (!nonneg(p_primary))
      throw std::invalid_argument("NetworkInstance: p_primary must be finite and >= 0");
    if (!(noise_ap > 0.0) || !(noise_pr > 0.0))
      throw std::invalid_argument("NetworkInstance: noise powers must be > 0");
    for (std::size_t i = 0; i < k; ++i) {
      if (!nonneg(h_cu[i]) || !nonneg(h_cu_pr[i]) || !nonneg(g_pt_cu[i]))
        throw std::invalid_argument("NetworkInstance: user gains must be finite and >= 0");
      if (!(eta[i] >= 0.0 && eta[i] <= 1.0))
        throw std::invalid_argument("NetworkInstance: eta must lie in [0,1]");
    }
  }
};

// One operating point: WET fraction and per-user transmit energies.
struct Allocation {
  double tau = 0.0;
  std::vector<double> e;  // e[i] = energy spent by CU_i in its uplink slot
};

// Interference-temperature cap at the PR.  `unconstrained` stands in for an
// infinite cap; never encode that as a float sentinel.
struct GammaItc {
  double gamma = 0.0;  // [W], meaningful only when !unconstrained
  bool unconstrained = false;
  static GammaItc bounded(double g) { return GammaItc{g, false}; }
  static GammaItc unbounded() { return GammaItc{0.0, true}; }
};

// Energy harvested by each CU over a unit-length WET phase:
//   q_i = eta_i * (h_i * p_c + g_i * P_p).
// The PT's transmission is free energy from the users' point of view.
inline std::vector<double> harvested_power(const NetworkInstance& inst, double p_c) {
  if (!(p_c >= 0.0) || !std::isfinite(p_c))
    throw std::invalid_argument("harvested_power: p_c must be finite and >= 0");
  std::vector<double> q(inst.k);
  for (std::size_t i = 0; i < inst.k; ++i)
    q[i] = inst.eta[i] * (inst.h_cu[i] * p_c + inst.g_pt_cu[i] * inst.p_primary);
  return q;
}

// Largest WET power the ITC admits: p_c = min(gamma / h_ap_pr, p_max).
// A decoupled cross link (h_ap_pr == 0) leaves the cap at p_max.
inline double underlay_ap_power(const NetworkInstance& inst, double gamma_itc) {
  if (!(gamma_itc >= 0.0) || !std::isfinite(gamma_itc))
    throw std::invalid_argument("underlay_ap_power: gamma_itc must be finite and >= 0");
  if (inst.h_ap_pr == 0.0) return inst.p_max;
  return std::min(gamma_itc / inst.h_ap_pr, inst.p_max);
}

inline double underlay_ap_power(const NetworkInstance& inst, const GammaItc& gamma) {
  return gamma.unconstrained ? inst.p_max : underlay_ap_power(inst, gamma.gamma);
}

// Per-user uplink SNR slopes.  gamma[i] treats the PT as noise at the H-AP
// (underlay); gamma_hat[i] assumes the H-AP cancels the PT's signal, which it
// can do after decoding it (overlay).  gamma[i] <= gamma_hat[i] always.
struct EffectiveGains {
  std::vector<double> gamma;
  std::vector<double> gamma_hat;
};

inline EffectiveGains effective_gains(const NetworkInstance& inst) {
  EffectiveGains eg;
  eg.gamma.resize(inst.k);
  eg.gamma_hat.resize(inst.k);
  const double den = inst.noise_ap + inst.g_pt_ap * inst.p_primary;
  for (std::size_t i = 0; i < inst.k; ++i) {
    eg.gamma[i] = inst.h_cu[i] / den;
    eg.gamma_hat[i] = inst.h_cu[i] / inst.noise_ap;
  }
  return eg;
}

// Sum throughput of the TDMA uplink:
//   R = (1 - tau) * log2(1 + (1/(1-tau)) * sum_i slopes[i] * e[i]).
// Defined on the closed square: 0 at tau == 1 and at zero energy (both are
// the continuous limits of the open-domain expression).
inline double secondary_throughput(double tau, const std::vector<double>& e,
                                   const std::vector<double>& slopes) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("secondary_throughput: tau must lie in [0,1]");
  if (e.size() != slopes.size())
    throw std::invalid_argument("secondary_throughput: e and slopes must have equal length");
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += slopes[i] * e[i];
  if (s <= 0.0 || tau >= 1.0) return 0.0;
  return (1.0 - tau) * log2p1(s / (1.0 - tau));
}

// Primary rate under the underlay model.  During WET the PR sees the H-AP at
// power p_c; during WIT it sees the users' aggregate at average power
// sum_i h_cu_pr[i] * e[i] / (1 - tau).
inline double primary_rate_underlay(const NetworkInstance& inst, double tau,
                                    const std::vector<double>& e, double p_c) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("primary_rate_underlay: tau must lie in [0,1]");
  if (e.size() != inst.k)
    throw std::invalid_argument("primary_rate_underlay: e must have length k");
  const double sig = inst.g_pt_pr * inst.p_primary;
  const double wet = tau * log2p1(sig / (inst.noise_pr + inst.h_ap_pr * p_c));
  if (tau >= 1.0) return wet;
  double itc = 0.0;
  for (std::size_t i = 0; i < inst.k; ++i) itc += inst.h_cu_pr[i] * e[i];
  const double wit = (1.0 - tau) * log2p1(sig / (inst.noise_pr + itc / (1.0 - tau)));
  return wet + wit;
}

// Primary rate during WET under the overlay model, where the H-AP relays the
// primary signal at full power and the two coherent copies add in amplitude:
//   r1 = log2(1 + (g*P_p + hhat*P_max + 2*sqrt(g*hhat*P_p*P_max)) / noise_pr).
inline double r1(const NetworkInstance& inst) {
  const double a = inst.g_pt_pr * inst.p_primary;
  const double b = inst.h_ap_pr * inst.p_max;
  return log2p1((a + b + 2.0 * std::sqrt(a * b)) / inst.noise_pr);
}

// Primary rate during WIT when the users' aggregate interference is held at
// gamma0: r2 = log2(1 + g*P_p / (noise_pr + gamma0)).
inline double r2(const NetworkInstance& inst, double gamma0) {
  if (!(gamma0 >= 0.0))
    throw std::invalid_argument("r2: gamma0 must be >= 0");
  return log2p1(inst.g_pt_pr * inst.p_primary / (inst.noise_pr + gamma0));
}

// Primary rate under the overlay model for a concrete allocation: relay gain
// r1 during WET, user interference during WIT.
inline double primary_rate_overlay(const NetworkInstance& inst, double tau,
                                   const std::vector<double>& e) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("primary_rate_overlay: tau must lie in [0,1]");
  if (e.size() != inst.k)
    throw std::invalid_argument("primary_rate_overlay: e must have length k");
  const double wet = tau * r1(inst);
  if (tau >= 1.0) return wet;
  double itc = 0.0;
  for (std::size_t i = 0; i < inst.k; ++i) itc += inst.h_cu_pr[i] * e[i];
  return wet + (1.0 - tau) * r2(inst, itc / (1.0 - tau));
}

}  // namespace cwpcn
