#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "cwpcn/rate_region.hpp"
#include "cwpcn/scenario.hpp"
#include "test_helpers.hpp"

using namespace cwpcn;

namespace {

RatePoint pt(double rp, double rs) {
  RatePoint p;
  p.r_primary = rp;
  p.r_secondary = rs;
  return p;
}

bool is_antichain(const std::vector<RatePoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const bool geq = pts[j].r_primary >= pts[i].r_primary &&
                       pts[j].r_secondary >= pts[i].r_secondary;
      const bool strict = pts[j].r_primary > pts[i].r_primary ||
                          pts[j].r_secondary > pts[i].r_secondary;
      if (geq && strict) return false;
    }
  return true;
}

// overlay grid extended with the primary rates an underlay frontier actually
// reaches, so containment is decided point against point, not against the
// nearest grid node
std::vector<double> augmented_rbar_grid(const NetworkInstance& inst,
                                        const RateRegionFrontier& under) {
  std::vector<double> grid = default_rbar_grid(inst);
  const double top = r1(inst);
  for (const RatePoint& u : under.points)
    grid.push_back(std::clamp(u.r_primary, 0.0, top));
  return grid;
}

}  // namespace

TEST_CASE("pareto_prune keeps exactly the undominated points") {
  std::vector<RatePoint> pts = {pt(1.0, 5.0), pt(2.0, 4.0), pt(3.0, 3.0),
                                pt(2.0, 6.0), pt(1.0, 5.0), pt(0.5, 4.5)};
  pareto_prune(pts);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].r_primary == 2.0);
  CHECK(pts[0].r_secondary == 6.0);
  CHECK(pts[1].r_primary == 3.0);
  CHECK(pts[1].r_secondary == 3.0);

  std::vector<RatePoint> dup = {pt(1.0, 1.0), pt(1.0, 1.0)};
  pareto_prune(dup);
  CHECK(dup.size() == 1);

  std::vector<RatePoint> cross = {pt(5.0, 0.0), pt(0.0, 5.0)};
  pareto_prune(cross);
  REQUIRE(cross.size() == 2);
  CHECK(cross[0].r_primary == 0.0);  // sorted ascending

  std::vector<RatePoint> empty;
  pareto_prune(empty);
  CHECK(empty.empty());
}

TEST_CASE("fingerprint separates instances") {
  const NetworkInstance a = build_instance(scenario_case1());
  NetworkInstance b = a;
  CHECK(instance_fingerprint(a) == instance_fingerprint(b));
  b.h_cu[0] *= 1.0 + 1e-15;
  CHECK(instance_fingerprint(a) != instance_fingerprint(b));

  RateRegionFrontier fa, fb;
  fa.fingerprint = instance_fingerprint(a);
  fb.fingerprint = instance_fingerprint(b);
  fa.points.push_back(pt(1.0, 1.0));
  fb.points.push_back(pt(2.0, 2.0));
  CHECK_THROWS_AS(check_containment(fa, fb, 1e-6), std::invalid_argument);
}

TEST_CASE("underlay frontier shape") {
  const NetworkInstance inst = build_instance(scenario_case1());
  const RateRegionFrontier fr = frontier_underlay(inst, default_gamma_grid(inst));
  REQUIRE(fr.points.size() >= 8);
  CHECK(fr.fingerprint == instance_fingerprint(inst));
  CHECK(is_antichain(fr.points));
  for (std::size_t j = 1; j < fr.points.size(); ++j) {
    CHECK(fr.points[j].r_primary > fr.points[j - 1].r_primary);
    CHECK(fr.points[j].r_secondary <= fr.points[j - 1].r_secondary);
  }

  // silent end: no cap means no secondary traffic and an untouched primary
  const double clean = log2p1(inst.g_pt_pr * inst.p_primary / inst.noise_pr);
  const RatePoint& last = fr.points.back();
  CHECK(last.r_primary == Catch::Approx(clean).epsilon(1e-12));
  CHECK(last.r_secondary == 0.0);
  CHECK(last.param == 0.0);

  // unthrottled end: the stand-alone secondary optimum
  const double free_best = solve_p1(inst, GammaItc::unbounded()).throughput;
  CHECK(fr.points.front().r_secondary == Catch::Approx(free_best).epsilon(1e-12));
  for (const RatePoint& p : fr.points) {
    CHECK(p.r_primary >= 0.0);
    CHECK(p.r_secondary >= 0.0);
    CHECK(p.r_secondary <= free_best * (1.0 + 1e-12));
  }
}

TEST_CASE("overlay frontier shape") {
  const NetworkInstance inst = build_instance(scenario_case1());
  const double r1v = r1(inst);
  const RateRegionFrontier fr = frontier_overlay(inst, default_rbar_grid(inst));
  REQUIRE(fr.points.size() >= 8);
  CHECK(is_antichain(fr.points));

  // every recorded point clears the floor it was solved for
  for (const RatePoint& p : fr.points) {
    CHECK(p.r_primary >= p.param - 1e-9);
    CHECK(p.r_primary <= r1v * (1.0 + 1e-12));
    CHECK(p.r_secondary >= 0.0);
  }

  // the ceiling floor pins the whole block to the relay
  const RatePoint& last = fr.points.back();
  CHECK(last.r_primary == Catch::Approx(r1v).epsilon(1e-12));
  CHECK(last.r_secondary == 0.0);

  const double free_best = solve_p2(inst, 0.0).throughput;
  CHECK(fr.points.front().r_secondary == Catch::Approx(free_best).epsilon(1e-9));
}

TEST_CASE("underlay region sits inside the overlay region") {
  for (double pp : {0.1, 1.0}) {
    Scenario scn = scenario_case1();
    scn.p_primary = pp;
    const NetworkInstance inst = build_instance(scn);
    const RateRegionFrontier under =
        frontier_underlay(inst, default_gamma_grid(inst));
    const RateRegionFrontier over =
        frontier_overlay(inst, augmented_rbar_grid(inst, under));
    CHECK(check_containment(under, over, 1e-6));
    // and not the other way round: the relay reaches primary rates the
    // underlay mode cannot touch
    CHECK_FALSE(check_containment(over, under, 1e-6));
  }
}

TEST_CASE("containment tolerance is a two-sided slack") {
  RateRegionFrontier inner, outer;
  inner.fingerprint = outer.fingerprint = 42;
  inner.points.push_back(pt(1.0, 1.0));
  outer.points.push_back(pt(1.0 - 5e-7, 1.0 - 5e-7));
  CHECK(check_containment(inner, outer, 1e-6));
  outer.points[0] = pt(1.0 - 2e-6, 1.0);
  CHECK_FALSE(check_containment(inner, outer, 1e-6));
  CHECK(check_containment(inner, outer, 1e-5));
  outer.points.clear();
  CHECK_FALSE(check_containment(inner, outer, 1e-6));
  inner.points.clear();
  CHECK(check_containment(inner, outer, 1e-6));  // nothing to dominate
}

TEST_CASE("containment holds on random small networks") {
  std::mt19937_64 rng(6601);
  for (int rep = 0; rep < 10; ++rep) {
    const auto inst = testutil::random_instance(rng, 1 + rep % 3);
    const RateRegionFrontier under =
        frontier_underlay(inst, default_gamma_grid(inst, 32));
    const RateRegionFrontier over =
        frontier_overlay(inst, augmented_rbar_grid(inst, under));
    CHECK(check_containment(under, over, 1e-6));
  }
}
