#pragma once

// Fading averages.  Each trial runs on its own RNG substream, so results do
// not depend on batching, and the reduction is compensated, so they do not
// depend on platform-specific reassociation either.  An overlay trial whose
// fading draw pushes the rate floor above the relay ceiling has no feasible
// design; it scores zero and is counted.

#include <cmath>
#include <cstddef>
#include <vector>

#include "cwpcn/overlay.hpp"
#include "cwpcn/scenario.hpp"
#include "cwpcn/underlay.hpp"

namespace cwpcn {

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;  // sample stddev / sqrt(trials)
  std::size_t trials = 0;
  std::size_t infeasible = 0;  // overlay trials with r_bar > r1
};

namespace mc_detail {

inline double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace mc_detail

inline MonteCarloResult monte_carlo_throughput(const Scenario& scn, ShareModel model) {
  scn.validate();
  std::vector<double> vals;
  vals.reserve(scn.trials);
  std::size_t infeasible = 0;

  for (std::size_t t = 0; t < scn.trials; ++t) {
    std::mt19937_64 rng = make_trial_rng(scn.seed, t);
    const NetworkInstance inst = sample_instance(scn, rng);
    if (model == ShareModel::Underlay) {
      vals.push_back(solve_p1(inst, scn.gamma).throughput);
    } else {
      try {
        vals.push_back(solve_p2(inst, scn.r_bar).throughput);
      } catch (const InfeasibleError&) {
        vals.push_back(0.0);
        ++infeasible;
      }
    }
  }

  MonteCarloResult res;
  res.trials = scn.trials;
  res.infeasible = infeasible;
  const double n = static_cast<double>(scn.trials);
  res.mean = mc_detail::kahan_sum(vals) / n;
  if (scn.trials > 1) {
    std::vector<double> sq(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double d = vals[i] - res.mean;
      sq[i] = d * d;
    }
    const double var = mc_detail::kahan_sum(sq) / (n - 1.0);
    res.std_error = std::sqrt(var / n);
  }
  return res;
}

}  // namespace cwpcn
