#include <cmath>
#include <cstdint>
#include <vector>

#include "catch_amalgamated.hpp"
#include "cwpcn/monte_carlo.hpp"
#include "cwpcn/rng.hpp"
#include "cwpcn/scenario.hpp"

using namespace cwpcn;

TEST_CASE("splitmix64 matches the reference sequence") {
  std::uint64_t s = 0;
  CHECK(splitmix64_next(s) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64_next(s) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64_next(s) == 0x06C45D188009454FULL);
}

TEST_CASE("uniform01 and exp_unit ranges and moments") {
  std::mt19937_64 rng = make_trial_rng(7, 0);
  double umean = 0.0, emean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    umean += u;
    const double x = exp_unit(rng);
    REQUIRE(x >= 0.0);
    REQUIRE(std::isfinite(x));
    emean += x;
  }
  CHECK(umean / n == Catch::Approx(0.5).margin(0.01));
  CHECK(emean / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("trial substreams are reproducible and distinct") {
  std::mt19937_64 a = make_trial_rng(1, 0);
  std::mt19937_64 b = make_trial_rng(1, 0);
  CHECK(a() == b());
  CHECK(a() == b());

  std::mt19937_64 c = make_trial_rng(1, 1);
  std::mt19937_64 d = make_trial_rng(2, 0);
  std::mt19937_64 e = make_trial_rng(1, 0);
  const std::uint64_t base = e();
  CHECK(c() != base);
  CHECK(d() != base);

  // first uniform of the (1, 0) stream, pinned
  std::mt19937_64 f = make_trial_rng(1, 0);
  CHECK(uniform01(f) == Catch::Approx(0.57904095954851975).epsilon(1e-15));
}

TEST_CASE("reference layouts") {
  const Scenario c1 = scenario_case1();
  CHECK(c1.ap_pos == 100.0);
  REQUIRE(c1.cu_pos == std::vector<double>{96.0, 95.0, 105.0, 110.0, 115.0});
  CHECK(scenario_case2().ap_pos == 170.0);
  CHECK(scenario_case3().ap_pos == 30.0);
  CHECK(scenario_case2().cu_pos.front() == 166.0);
  CHECK(scenario_case3().cu_pos.back() == 45.0);
  CHECK_NOTHROW(c1.validate());
}

TEST_CASE("scenario validation rejects broken geometry") {
  Scenario scn = scenario_case1();
  scn.cu_pos.clear();
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);

  scn = scenario_case1();
  scn.ap_pos = scn.pt_pos;  // collocated with PT
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);

  scn = scenario_case1();
  scn.cu_pos[2] = scn.pr_pos;
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);

  scn = scenario_case1();
  scn.alpha = 0.0;
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);
  scn = scenario_case1();
  scn.eta = 1.5;
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);
  scn = scenario_case1();
  scn.trials = 0;
  CHECK_THROWS_AS(scn.validate(), std::invalid_argument);
}

TEST_CASE("pathloss instance values") {
  const Scenario scn = scenario_case1();
  const NetworkInstance inst = build_instance(scn);
  REQUIRE(inst.k == 5);
  CHECK(inst.p_max == 1.0);
  CHECK(inst.p_primary == 0.1);
  CHECK(inst.noise_ap == 1e-12);
  CHECK(inst.noise_pr == 1e-12);

  // 0.01 * d^-3 at the reference distances
  CHECK(inst.h_ap_pr == Catch::Approx(1e-8).epsilon(1e-12));   // 100 m
  CHECK(inst.g_pt_pr == Catch::Approx(1.25e-9).epsilon(1e-12));  // 200 m
  CHECK(inst.g_pt_ap == Catch::Approx(1e-8).epsilon(1e-12));   // 100 m
  CHECK(inst.h_cu[0] == Catch::Approx(0.00015625).epsilon(1e-12));  // 4 m
  CHECK(inst.h_cu[1] == Catch::Approx(0.01 / 125.0).epsilon(1e-12));  // 5 m
  CHECK(inst.h_cu_pr[0] == Catch::Approx(0.01 / (104.0 * 104.0 * 104.0)));
  CHECK(inst.g_pt_cu[0] == Catch::Approx(0.01 / (96.0 * 96.0 * 96.0)));
  for (double eta : inst.eta) CHECK(eta == 0.8);

  // moving the H-AP toward the PR shortens every CU-PR hop
  const NetworkInstance near_pr = build_instance(scenario_case2());
  for (std::size_t i = 0; i < 5; ++i) CHECK(near_pr.h_cu_pr[i] > inst.h_cu_pr[i]);
}

TEST_CASE("sampling without fading is the pathloss instance") {
  const Scenario scn = scenario_case1();
  std::mt19937_64 rng = make_trial_rng(scn.seed, 0);
  const NetworkInstance a = build_instance(scn);
  const NetworkInstance b = sample_instance(scn, rng);
  CHECK(a.h_ap_pr == b.h_ap_pr);
  CHECK(a.h_cu == b.h_cu);
  CHECK(a.h_cu_pr == b.h_cu_pr);
  CHECK(a.g_pt_pr == b.g_pt_pr);
  CHECK(a.g_pt_cu == b.g_pt_cu);
  CHECK(a.g_pt_ap == b.g_pt_ap);
  // and the engine is untouched
  std::mt19937_64 fresh = make_trial_rng(scn.seed, 0);
  CHECK(rng() == fresh());
}

TEST_CASE("fading draws are reproducible and ordered") {
  Scenario scn = scenario_case1();
  scn.fading = Fading::Rayleigh;

  std::mt19937_64 r1 = make_trial_rng(1, 0);
  std::mt19937_64 r2 = make_trial_rng(1, 0);
  const NetworkInstance a = sample_instance(scn, r1);
  const NetworkInstance b = sample_instance(scn, r2);
  CHECK(a.h_ap_pr == b.h_ap_pr);
  CHECK(a.h_cu == b.h_cu);
  CHECK(a.g_pt_ap == b.g_pt_ap);

  // golden values pin the draw order: h_ap_pr first, g_pt_ap last
  CHECK(a.h_ap_pr == Catch::Approx(8.6521974112196119e-09).epsilon(1e-14));
  CHECK(a.h_cu[0] == Catch::Approx(0.00044013295113290516).epsilon(1e-14));
  CHECK(a.g_pt_ap == Catch::Approx(4.7320714629621289e-09).epsilon(1e-14));

  // the first draw scales h_ap_pr by exactly the first Exp(1) variate
  std::mt19937_64 r3 = make_trial_rng(1, 0);
  const double f0 = exp_unit(r3);
  CHECK(a.h_ap_pr == Catch::Approx(1e-8 * f0).epsilon(1e-14));

  std::mt19937_64 r4 = make_trial_rng(1, 1);
  const NetworkInstance c = sample_instance(scn, r4);
  CHECK(c.h_ap_pr != a.h_ap_pr);
}

TEST_CASE("fading factors are unit mean") {
  Scenario scn = scenario_case1();
  scn.fading = Fading::Rayleigh;
  const NetworkInstance base = build_instance(scn);
  const int n = 100000;
  double mh = 0.0, mg = 0.0;
  for (int t = 0; t < n; ++t) {
    std::mt19937_64 rng = make_trial_rng(3, static_cast<std::uint64_t>(t));
    const NetworkInstance inst = sample_instance(scn, rng);
    mh += inst.h_cu[0] / base.h_cu[0];
    mg += inst.g_pt_pr / base.g_pt_pr;
  }
  CHECK(mh / n == Catch::Approx(1.0).margin(0.02));
  CHECK(mg / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("monte carlo without fading reproduces the deterministic solve") {
  Scenario scn = scenario_case1();
  scn.trials = 8;
  const MonteCarloResult mc = monte_carlo_throughput(scn, ShareModel::Underlay);
  const double direct = solve_p1(build_instance(scn), scn.gamma).throughput;
  CHECK(mc.mean == Catch::Approx(direct).epsilon(1e-12));
  CHECK(mc.std_error == 0.0);
  CHECK(mc.trials == 8);
  CHECK(mc.infeasible == 0);
}

TEST_CASE("monte carlo is bitwise repeatable") {
  Scenario scn = scenario_case2();
  scn.fading = Fading::Rayleigh;
  scn.trials = 200;
  const MonteCarloResult a = monte_carlo_throughput(scn, ShareModel::Underlay);
  const MonteCarloResult b = monte_carlo_throughput(scn, ShareModel::Underlay);
  CHECK(a.mean == b.mean);  // exact, not approximate
  CHECK(a.std_error == b.std_error);

  Scenario other = scn;
  other.seed = scn.seed + 1;
  const MonteCarloResult c = monte_carlo_throughput(other, ShareModel::Underlay);
  CHECK(c.mean != a.mean);

  const MonteCarloResult d = monte_carlo_throughput(scn, ShareModel::Overlay);
  const MonteCarloResult e = monte_carlo_throughput(scn, ShareModel::Overlay);
  CHECK(d.mean == e.mean);
  CHECK(d.infeasible == e.infeasible);
}

TEST_CASE("standard error shrinks like one over root n") {
  Scenario scn = scenario_case1();
  scn.fading = Fading::Rayleigh;
  scn.trials = 250;
  const MonteCarloResult small = monte_carlo_throughput(scn, ShareModel::Underlay);
  scn.trials = 1000;
  const MonteCarloResult big = monte_carlo_throughput(scn, ShareModel::Underlay);
  REQUIRE(small.std_error > 0.0);
  const double ratio = big.std_error / small.std_error;
  CHECK(ratio > 0.3);
  CHECK(ratio < 0.7);
}

TEST_CASE("overlay trials that cannot reach the floor score zero") {
  Scenario scn = scenario_case1();
  scn.fading = Fading::Rayleigh;
  scn.trials = 400;
  scn.r_bar = 14.0;  // near the pathloss-only relay ceiling, fading decides
  const MonteCarloResult mc = monte_carlo_throughput(scn, ShareModel::Overlay);
  CHECK(mc.infeasible > 0);
  CHECK(mc.infeasible < mc.trials);
  CHECK(mc.mean >= 0.0);
  CHECK(std::isfinite(mc.mean));

  // underlay designs always exist
  const MonteCarloResult ul = monte_carlo_throughput(scn, ShareModel::Underlay);
  CHECK(ul.infeasible == 0);
}
