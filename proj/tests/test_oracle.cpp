#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ecoop/feasibility.hpp"
#include "ecoop/oracle.hpp"
#include "ecoop/relay.hpp"
#include "ecoop/solver.hpp"
#include "ecoop/twoway.hpp"
#include "ecoop/types.hpp"

using namespace ecoop;

namespace {

double total(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

TEST_CASE("single-slot relay grid finds the half-split transfer") {
  Scenario s{Model::Relay, EnergyProfile{{4}}, EnergyProfile{{0}}, 1.0};
  OracleResult r = brute_force_solve(s, {1.0, 1.0}, 8);
  REQUIRE(r.p1.size() == 1);
  REQUIRE(r.delta.size() == 1);
  CHECK(r.delta[0] == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(r.best_objective == doctest::Approx(0.792481).epsilon(1e-5));
  CHECK(r.cells_evaluated > 0);
  CHECK(r.grid_levels > 0);
}

TEST_CASE("two-way grid agrees with the weighted solver on the burst case") {
  Scenario s{Model::TwoWay, EnergyProfile{{0, 12, 0}}, EnergyProfile{{6, 6, 0}},
             1.0};
  SolveReport rep = solve_twoway_weighted(s, {1.0, 1.0});
  OracleResult grid = brute_force_solve(s, {1.0, 1.0}, 4);
  CompareVerdict v = compare_reports(rep.objective, grid.best_objective, 1e-4);
  CHECK(v.pass);
  CHECK(std::abs(v.relative_gap) < 1e-3);
}

TEST_CASE("zero transfer efficiency keeps the grid optimum at zero transfer") {
  Scenario s{Model::TwoWay, EnergyProfile{{3, 1}}, EnergyProfile{{2, 2}}, 0.0};
  OracleResult r = brute_force_solve(s, {1.0, 1.0}, 3);
  CHECK(total(r.delta) <= 1e-9);
}

TEST_CASE("grid search is deterministic") {
  Scenario s = random_scenario(7, 2, 6.0, Model::Mac);
  OracleResult a = brute_force_solve(s, {1.0, 0.7}, 2);
  OracleResult b = brute_force_solve(s, {1.0, 0.7}, 2);
  CHECK(a.best_objective == b.best_objective);
  CHECK(a.cells_evaluated == b.cells_evaluated);
  CHECK(a.p1 == b.p1);
  CHECK(a.p2 == b.p2);
  CHECK(a.delta == b.delta);
}

TEST_CASE("grid rejects oversized horizons and bad depths") {
  Scenario s{Model::Relay, EnergyProfile{{1, 1, 1, 1, 1}},
             EnergyProfile{{1, 1, 1, 1, 1}}, 0.5};
  CHECK_THROWS_WITH_AS(brute_force_solve(s, {1.0, 1.0}, 2),
                       "brute force is sized for horizons up to 4",
                       std::invalid_argument);
  Scenario ok{Model::Relay, EnergyProfile{{1, 1}}, EnergyProfile{{1, 1}}, 0.5};
  CHECK_THROWS_WITH_AS(brute_force_solve(ok, {1.0, 1.0}, 0),
                       "depth must be at least 1", std::invalid_argument);
}

TEST_CASE("scenario generator is seeded and bounded") {
  Scenario a = random_scenario(42, 3, 5.0, Model::TwoWay);
  Scenario b = random_scenario(42, 3, 5.0, Model::TwoWay);
  Scenario c = random_scenario(43, 3, 5.0, Model::TwoWay);
  CHECK(a.e1.amounts == b.e1.amounts);
  CHECK(a.e2.amounts == b.e2.amounts);
  CHECK(a.alpha == b.alpha);
  CHECK(a.model == Model::TwoWay);
  bool differs = a.e1.amounts != c.e1.amounts ||
                 a.e2.amounts != c.e2.amounts || a.alpha != c.alpha;
  CHECK(differs);
  REQUIRE(a.e1.slots() == 3);
  REQUIRE(a.e2.slots() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.e1[i] >= 0.0);
    CHECK(a.e1[i] <= 5.0);
    CHECK(a.e2[i] >= 0.0);
    CHECK(a.e2[i] <= 5.0);
  }
  CHECK(a.alpha >= 0.1);
  CHECK(a.alpha <= 1.0);
  CHECK_THROWS_WITH_AS(random_scenario(1, 0, 5.0, Model::Mac),
                       "horizon must be at least 1", std::invalid_argument);
  CHECK_THROWS_WITH_AS(random_scenario(1, 2, 0.0, Model::Mac),
                       "max_energy must be positive", std::invalid_argument);
}

TEST_CASE("report comparison scores gaps relative to the grid") {
  CompareVerdict close = compare_reports(1.0, 1.0, 1e-4);
  CHECK(close.pass);
  CHECK(close.relative_gap == doctest::Approx(0.0).epsilon(1e-12));

  CompareVerdict ahead = compare_reports(1.01, 1.0, 1e-4);
  CHECK(ahead.pass);
  CHECK(ahead.relative_gap < 0.0);

  CompareVerdict behind = compare_reports(0.99, 1.0, 1e-4);
  CHECK(!behind.pass);
  CHECK(behind.relative_gap == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("deeper grids never lose ground") {
  const Model models[] = {Model::Relay, Model::TwoWay, Model::Mac};
  for (Model m : models) {
    Scenario s = random_scenario(11, 2, 8.0, m);
    std::pair<double, double> theta{1.0, 0.8};
    double prev = -1e300;
    for (int depth = 1; depth <= 4; ++depth) {
      OracleResult r = brute_force_solve(s, theta, depth);
      CHECK(r.best_objective >= prev - 1e-12);
      prev = r.best_objective;
    }
  }
}

TEST_CASE("grid incumbents are feasible policies") {
  const Model models[] = {Model::Relay, Model::TwoWay, Model::Mac};
  for (Model m : models) {
    Scenario s = random_scenario(29, 3, 7.0, m);
    OracleResult r = brute_force_solve(s, {1.0, 1.0}, 3);
    auto v = feasibility_violations(s, PowerSchedule(r.p1), PowerSchedule(r.p2),
                                    TransferSchedule(r.delta));
    for (const auto& viol : v) INFO(viol.describe());
    CHECK(v.empty());
  }
}

TEST_CASE("batch verification rejects empty batches") {
  CHECK_THROWS_WITH_AS(verify_batch(1, 0, Model::Relay, 3, 1e-4),
                       "count must be at least 1", std::invalid_argument);
}

TEST_CASE("small seeded batches pass for every model") {
  const Model models[] = {Model::Relay, Model::TwoWay, Model::Mac};
  for (Model m : models) {
    BatchOutcome out = verify_batch(1, 4, m, 3, 1e-4);
    CHECK(out.instances == 4);
    CHECK(out.passes == 4);
    CHECK(out.failures == 0);
    for (const auto& note : out.failure_notes) INFO(note);
    CHECK(out.failure_notes.empty());
    CHECK(out.worst_gap <= 1e-4);
  }
}
