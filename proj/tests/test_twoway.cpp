#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "ecoop/feasibility.hpp"
#include "ecoop/oracle.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/region.hpp"
#include "ecoop/solver.hpp"
#include "ecoop/tolerances.hpp"
#include "ecoop/twoway.hpp"
#include "ecoop/waterfill.hpp"

using namespace ecoop;

namespace {

const EnergyProfile kBurstE1{{0, 12, 0}};
const EnergyProfile kBurstE2{{6, 6, 0}};

Scenario burst_scenario() {
  return Scenario{Model::TwoWay, kBurstE1, kBurstE2, 1.0, {}};
}

Scenario sweep_scenario() {
  return Scenario{Model::TwoWay, EnergyProfile{{5, 10, 5}},
                  EnergyProfile{{10, 5, 10}}, 0.7, {}};
}

void check_schedule(const PowerSchedule& got, std::vector<double> want,
                    double eps) {
  REQUIRE(got.slots() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    INFO("slot ", i);
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(eps));
  }
}

}  // namespace

TEST_CASE("balanced weights drain the burst into an equal spread") {
  TwoDimResult w = two_dim_dwf(kBurstE1, kBurstE2, 1.0, 1.0, 1.0);
  CHECK(w.converged);
  check_schedule(w.p1, {0.0, 4.8, 4.8}, 1e-6);
  check_schedule(w.p2, {4.8, 4.8, 4.8}, 1e-6);
  // All transfer mass crosses, wherever it is timed.
  CHECK(w.delta.total() == doctest::Approx(2.4).epsilon(1e-6));
}

TEST_CASE("horizontal-only equalization reports the transient state and meters") {
  TwoDimResult w = two_dim_dwf(kBurstE1, kBurstE2, 1.0, 1.0, 1.0,
                               TapOrdering::HorizontalOnly);
  check_schedule(w.p1, {0.0, 6.0, 6.0}, 1e-9);
  check_schedule(w.p2, {4.0, 4.0, 4.0}, 1e-9);
  REQUIRE(w.system.right_taps[0].size() == 2);
  REQUIRE(w.system.right_taps[1].size() == 2);
  CHECK(w.system.right_taps[0][0].meter == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(w.system.right_taps[0][1].meter == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(w.system.right_taps[1][0].meter == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(w.system.right_taps[1][1].meter == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("the two known shortcut orderings reproduce their sub-optimal outcomes") {
  TwoDimResult nometers = two_dim_dwf(kBurstE1, kBurstE2, 1.0, 1.0, 1.0,
                                      TapOrdering::HorizontalFirstNoMeters);
  check_schedule(nometers.p1, {0.0, 5.0, 5.0}, 1e-6);
  check_schedule(nometers.p2, {4.0, 5.0, 5.0}, 1e-6);

  TwoDimResult vertical = two_dim_dwf(kBurstE1, kBurstE2, 1.0, 1.0, 1.0,
                                      TapOrdering::VerticalFirst);
  check_schedule(vertical.p1, {0.0, 4.5, 4.5}, 1e-6);
  check_schedule(vertical.p2, {5.0, 5.0, 5.0}, 1e-6);

  // Both shortcuts fall short of the metered schedule.
  TwoDimResult best = two_dim_dwf(kBurstE1, kBurstE2, 1.0, 1.0, 1.0);
  const double full = total_rate(best.p1.power) + total_rate(best.p2.power);
  CHECK(full > total_rate(nometers.p1.power) + total_rate(nometers.p2.power));
  CHECK(full > total_rate(vertical.p1.power) + total_rate(vertical.p2.power));
}

TEST_CASE("water volume is conserved through every relaxation") {
  for (auto theta : {std::pair{1.0, 1.0}, {0.4, 1.0}, {1.0, 0.3}}) {
    Scenario s = sweep_scenario();
    TwoDimResult w = two_dim_dwf(s.e1, s.e2, s.alpha, theta.first,
                                 theta.second);
    const double poured = s.e1.total() + s.e2.total() / s.alpha;
    CHECK(w.system.total_volume() ==
          doctest::Approx(poured).epsilon(1e-12));
    CHECK(w.p1.total() + w.p2.total() / s.alpha ==
          doctest::Approx(poured).epsilon(1e-9));
  }
}

TEST_CASE("a first-slot surplus transfers immediately and only there") {
  TwoDimResult w = two_dim_dwf(EnergyProfile{{8, 4}}, EnergyProfile{{2, 6}},
                               1.0, 1.0, 1.0);
  CHECK(w.delta[0] > 1.0);
  CHECK(std::abs(w.delta[1]) <= 1e-9);
  check_schedule(w.p1, {14.0 / 3.0, 14.0 / 3.0}, 1e-6);
  check_schedule(w.p2, {14.0 / 3.0, 6.0}, 1e-6);
}

TEST_CASE("degenerate weights short-circuit to the closed endpoints") {
  Scenario s = sweep_scenario();

  SolveReport own = solve_twoway_weighted(s, {1.0, 0.0});
  CHECK(own.method == "independent water-filling");
  check_schedule(own.p1, {5.0, 7.5, 7.5}, 1e-9);
  check_schedule(own.p2, {7.5, 7.5, 10.0}, 1e-9);
  CHECK(own.delta.total() == doctest::Approx(0.0));

  SolveReport all = solve_twoway_weighted(s, {0.0, 1.0});
  CHECK(all.method == "full transfer");
  check_schedule(all.p1, {0.0, 0.0, 0.0}, 1e-9);
  // User 2 water-fills its own arrivals plus the scaled transfers.
  check_schedule(all.p2, {12.75, 12.75, 13.5}, 1e-9);
  CHECK(all.delta.total() == doctest::Approx(s.e1.total()).epsilon(1e-12));
}

TEST_CASE("the balanced solve carries certification and the pinned rates") {
  SolveReport rep = solve_twoway_weighted(burst_scenario(), {1.0, 1.0});
  CHECK(rep.method == "two-dimensional water-filling");
  check_schedule(rep.p1, {0.0, 4.8, 4.8}, 1e-6);
  check_schedule(rep.p2, {4.8, 4.8, 4.8}, 1e-6);
  CHECK(rep.objective == doctest::Approx(6.340132).epsilon(1e-5));
  CHECK(rep.kkt.within(tol::kkt));
  CHECK(feasibility_violations(burst_scenario(), rep.p1, rep.p2, rep.delta)
            .empty());
}

TEST_CASE("transfer slots hold the weighted power ratio") {
  SolveReport rep = solve_twoway_weighted(burst_scenario(), {1.0, 1.0});
  RatioCheck rc = verify_transfer_ratio(rep, {1.0, 1.0}, 1.0);
  CHECK(rc.applicable);
  CHECK(rc.pass);
  REQUIRE_FALSE(rc.per_slot.empty());
  for (const auto& slot : rc.per_slot) CHECK(slot.pass);
}

TEST_CASE("ratio verification is vacuous without transfer and off for zero weights") {
  SolveReport none;
  none.p1 = PowerSchedule({1, 1});
  none.p2 = PowerSchedule({1, 1});
  none.delta = TransferSchedule({0, 0});
  RatioCheck vacuous = verify_transfer_ratio(none, {1.0, 1.0}, 1.0);
  CHECK(vacuous.applicable);
  CHECK(vacuous.pass);
  CHECK(vacuous.per_slot.empty());

  RatioCheck off = verify_transfer_ratio(none, {1.0, 0.0}, 1.0);
  CHECK_FALSE(off.applicable);
  RatioCheck dead = verify_transfer_ratio(none, {1.0, 1.0}, 0.0);
  CHECK_FALSE(dead.applicable);
}

TEST_CASE("a doctored transfer slot fails the ratio check") {
  SolveReport rep;
  rep.p1 = PowerSchedule({0, 4.8, 4.8});
  rep.p2 = PowerSchedule({5.1, 4.8, 4.5});
  rep.delta = TransferSchedule({0, 0, 2.4});
  RatioCheck rc = verify_transfer_ratio(rep, {1.0, 1.0}, 1.0);
  CHECK(rc.applicable);
  CHECK_FALSE(rc.pass);
}

TEST_CASE("region endpoints coincide with the degenerate-weight solves") {
  Scenario s = sweep_scenario();
  auto region = trace_twoway_region(s, 9);
  REQUIRE(region.size() == 9);
  CHECK(region.front().theta.first == doctest::Approx(1.0));
  CHECK(region.front().theta.second == doctest::Approx(0.0));
  CHECK(region.back().theta.first == doctest::Approx(0.0));
  CHECK(region.back().theta.second == doctest::Approx(1.0));

  SolveReport own = solve_twoway_weighted(s, {1.0, 0.0});
  CHECK(region.front().rate1 == doctest::Approx(own.rate1).epsilon(1e-9));
  CHECK(region.front().rate2 == doctest::Approx(own.rate2).epsilon(1e-9));
  SolveReport all = solve_twoway_weighted(s, {0.0, 1.0});
  CHECK(region.back().rate1 == doctest::Approx(0.0));
  CHECK(region.back().rate2 == doctest::Approx(all.rate2).epsilon(1e-9));
  CHECK(region.back().rate2 == doctest::Approx(5.71035021109).epsilon(1e-9));

  for (const auto& p : region) {
    CHECK((p.regime == "Transfer" || p.regime == "NoTransfer"));
  }
  CHECK(concavity_slack(region) >= tol::region_concavity);
}

TEST_CASE("transfer widens the boundary beyond the no-transfer corner") {
  Scenario s = sweep_scenario();
  auto region = trace_twoway_region(s, 9);
  // Own-rate corner, reached while user-1 priority dominates.
  const double r1own = region.front().rate1;
  const double r2own = region.front().rate2;
  CHECK(r1own == doctest::Approx(4.37994409161).epsilon(1e-9));
  CHECK(r2own == doctest::Approx(4.81717865057).epsilon(1e-9));
  CHECK(boundary_dominates(region, r1own, r2own, 1e-9));
  // At the user-2-heavy end the transfer buys strictly more than user 2
  // could ever reach alone.
  const double r2alone =
      total_rate(single_user_dwf(s.e2.cumulative()).power);
  CHECK(region.back().rate2 > r2alone + 0.5);
}

TEST_CASE("zero-efficiency transfer collapses the region to the own-rate box") {
  Scenario s = sweep_scenario();
  s.alpha = 0.0;
  auto region = trace_twoway_region(s, 9);
  const double r1own = total_rate(single_user_dwf(s.e1.cumulative()).power);
  const double r2own = total_rate(single_user_dwf(s.e2.cumulative()).power);
  bool corner_seen = false;
  for (const auto& p : region) {
    CHECK(p.rate1 <= r1own + 1e-9);
    CHECK(p.rate2 <= r2own + 1e-9);
    corner_seen = corner_seen || (std::abs(p.rate1 - r1own) <= 1e-9 &&
                                  std::abs(p.rate2 - r2own) <= 1e-9);
  }
  CHECK(corner_seen);
}

TEST_CASE("raising the transfer efficiency only grows the region") {
  Scenario lo = sweep_scenario();
  lo.alpha = 0.3;
  Scenario hi = sweep_scenario();
  auto lo_region = trace_twoway_region(lo, 9);
  auto hi_region = trace_twoway_region(hi, 9);
  for (const auto& p : lo_region) {
    CHECK(boundary_dominates(hi_region, p.rate1, p.rate2, 1e-7));
  }
}

TEST_CASE("the water system agrees with the generic solver on random instances") {
  for (unsigned seed : {12u, 19u, 33u}) {
    Scenario s = random_scenario(seed, 4, 8.0, Model::TwoWay);
    const std::size_t t = s.slots();
    const double th1 = 0.35 + 0.1 * (seed % 3);
    const double th2 = 1.0 - 0.07 * (seed % 4);
    SolveReport water = solve_twoway_weighted(s, {th1, th2});

    ConcaveObjective obj;
    obj.value = [t, th1, th2](const std::vector<double>& x) {
      double v = 0.0;
      for (std::size_t i = 0; i < t; ++i) {
        v += th1 * rate_of_power(x[i]) + th2 * rate_of_power(x[t + i]);
      }
      return v;
    };
    obj.gradient = [t, th1, th2](const std::vector<double>& x) {
      std::vector<double> g(3 * t, 0.0);
      for (std::size_t i = 0; i < t; ++i) {
        g[i] = th1 * rate_slope(x[i]);
        g[t + i] = th2 * rate_slope(x[t + i]);
      }
      return g;
    };
    obj.hessian = [t, th1, th2](const std::vector<double>& x) {
      std::vector<std::vector<double>> h(3 * t,
                                         std::vector<double>(3 * t, 0.0));
      for (std::size_t i = 0; i < t; ++i) {
        const double d1 = 1.0 + x[i];
        const double d2 = 1.0 + x[t + i];
        h[i][i] = -th1 * 0.5 / (kLn2 * d1 * d1);
        h[t + i][t + i] = -th2 * 0.5 / (kLn2 * d2 * d2);
      }
      return h;
    };
    CausalityPolytope poly{s.e1, s.e2, s.alpha, true};
    SolverResult generic = maximize_concave_over_causality(obj, poly, 1e-10);
    CHECK(water.objective ==
          doctest::Approx(generic.objective).epsilon(1e-5));
  }
}

TEST_CASE("a lopsided weight no longer starves the late transfer window") {
  // Regression: the relaxation once parked all transferable volume behind a
  // late down tap and deadlocked three exchange legs below the optimum.
  Scenario s = sweep_scenario();
  SolveReport rep = solve_twoway_weighted(s, {0.03125, 0.96875});
  CHECK(rep.objective == doctest::Approx(5.5319017670).epsilon(1e-9));
  CHECK(rep.kkt.within(tol::kkt));
}
