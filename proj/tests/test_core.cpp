#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ecoop/feasibility.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/relay.hpp"
#include "ecoop/types.hpp"

using namespace ecoop;

namespace {

bool has_violation(const std::vector<Violation>& v, ViolationKind kind,
                   std::size_t slot) {
  for (const auto& x : v) {
    if (x.kind == kind && x.slot == slot) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rate map hits its closed-form anchor points") {
  CHECK(rate_of_power(0.0) == doctest::Approx(0.0));
  CHECK(rate_of_power(1.0) == doctest::Approx(0.5));
  CHECK(rate_of_power(3.0) == doctest::Approx(1.0));
  CHECK(power_of_rate(0.0) == doctest::Approx(0.0));
  CHECK(power_of_rate(0.5) == doctest::Approx(1.0));
  CHECK(power_of_rate(1.0) == doctest::Approx(3.0));
}

TEST_CASE("rate map round-trips and is strictly increasing and concave") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double p = u(rng);
    CHECK(power_of_rate(rate_of_power(p)) ==
          doctest::Approx(p).epsilon(1e-12));
  }
  for (int i = 0; i < 200; ++i) {
    double p = u(rng), q = u(rng);
    if (p > q) std::swap(p, q);
    if (q - p < 1e-9) continue;
    CHECK(rate_of_power(p) < rate_of_power(q));
    // Midpoint concavity, strict away from p = q.
    const double mid = rate_of_power(0.5 * (p + q));
    const double chord = 0.5 * (rate_of_power(p) + rate_of_power(q));
    CHECK(mid >= chord - 1e-12);
    if (q - p > 1e-3) CHECK(mid > chord);
  }
}

TEST_CASE("rate slope matches a finite difference") {
  for (double p : {0.0, 0.3, 1.0, 4.0, 17.5}) {
    const double h = 1e-6;
    const double fd = (rate_of_power(p + h) - rate_of_power(p)) / h;
    CHECK(rate_slope(p) == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("majorization orders spread against concentrated sequences") {
  CHECK(majorizes({1.0, 1.0}, {0.0, 2.0}));
  CHECK_FALSE(majorizes({0.0, 2.0}, {1.0, 1.0}));
  CHECK(majorizes({0.7, 0.3}, {0.7, 0.3}));
  CHECK_THROWS_AS(majorizes({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("energy profiles reject empty, negative, and non-finite input") {
  CHECK_THROWS_AS(EnergyProfile(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(EnergyProfile({1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(EnergyProfile({1.0, std::nan("")}), std::invalid_argument);
  EnergyProfile ok({0.0, 2.0});
  CHECK(ok.total() == doctest::Approx(2.0));
  CHECK(ok.cumulative() == std::vector<double>{0.0, 2.0});
}

TEST_CASE("scenario validation names the offending field") {
  Scenario s{Model::Relay, EnergyProfile{{1.0, 2.0}}, EnergyProfile{{1.0, 2.0}},
             0.5, {}};
  CHECK_NOTHROW(s.validate());

  Scenario bad_len = s;
  bad_len.e2 = EnergyProfile{{1.0}};
  CHECK_THROWS_WITH_AS(bad_len.validate(),
                       "profiles must share a positive horizon",
                       std::invalid_argument);

  Scenario bad_alpha = s;
  bad_alpha.alpha = 1.5;
  CHECK_THROWS_WITH_AS(bad_alpha.validate(), "alpha out of range",
                       std::invalid_argument);
  bad_alpha.alpha = -0.1;
  CHECK_THROWS_WITH_AS(bad_alpha.validate(), "alpha out of range",
                       std::invalid_argument);

  Scenario bad_e1 = s;
  bad_e1.e1 = EnergyProfile{{0.0, 0.0}};
  CHECK_THROWS_WITH_AS(bad_e1.validate(),
                       "user-1 profile must harvest something",
                       std::invalid_argument);

  Scenario bad_units = s;
  bad_units.units = PhysicalUnits{};
  bad_units.units->bandwidth_hz = 0.0;
  CHECK_THROWS_WITH_AS(bad_units.validate(), "physical units must be positive",
                       std::invalid_argument);
}

TEST_CASE("default physical units map millijoules to matching SNR") {
  // 1 MHz, 1e-19 W/Hz, 100 dB path loss, 1 s slots: x mJ per slot -> SNR x.
  PhysicalUnits u;
  CHECK(u.gain() == doctest::Approx(1e-10).epsilon(1e-12));
  CHECK(u.snr_of_energy(2e-3) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(u.snr_of_energy(12e-3) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(u.energy_of_snr(u.snr_of_energy(5e-3)) ==
        doctest::Approx(5e-3).epsilon(1e-12));
}

TEST_CASE("physical and normalized modes agree on the solved schedules") {
  Scenario norm{Model::Relay, EnergyProfile{{12, 0, 0, 0}},
                EnergyProfile{{5, 1, 0, 2}}, 0.5, {}};
  Scenario phys = norm;
  phys.units = PhysicalUnits{};
  for (double& x : phys.e1.amounts) x *= 1e-3;
  for (double& x : phys.e2.amounts) x *= 1e-3;

  RelayReport a = solve_relay(norm);
  RelayReport b = solve_relay(phys);
  REQUIRE(a.p_source.slots() == b.p_source.slots());
  for (std::size_t i = 0; i < a.p_source.slots(); ++i) {
    CHECK(a.p_source[i] == doctest::Approx(b.p_source[i]).epsilon(1e-9));
    CHECK(a.p_relay[i] == doctest::Approx(b.p_relay[i]).epsilon(1e-9));
    CHECK(a.delta[i] == doctest::Approx(b.delta[i]).epsilon(1e-9));
  }
  CHECK(a.throughput == doctest::Approx(b.throughput).epsilon(1e-12));
}

TEST_CASE("feasibility accepts the pinned source-initial optimum") {
  Scenario s{Model::Relay, EnergyProfile{{12, 0, 0, 0}},
             EnergyProfile{{5, 1, 0, 2}}, 0.5, {}};
  PowerSchedule p({2.33, 2.33, 2.33, 2.33});
  TransferSchedule d({2.67, 0, 0, 0});
  CHECK(feasibility_violations(s, p, p, d).empty());
}

TEST_CASE("feasibility flags the transcription with source overdraw at prefixes 3 and 4") {
  // This published schedule spends more than the source ever harvests; the
  // checker must localize the overdraw to the two failing prefixes.
  Scenario s{Model::Relay, EnergyProfile{{2, 3, 5, 4}},
             EnergyProfile{{5, 1, 2, 1}}, 0.5, {}};
  PowerSchedule p({2, 3, 4, 6.33});
  TransferSchedule d({0, 0, 1.33, 3.33});
  auto v = feasibility_violations(s, p, p, d);
  REQUIRE_FALSE(v.empty());
  CHECK(has_violation(v, ViolationKind::SourceEnergy, 3));
  CHECK(has_violation(v, ViolationKind::SourceEnergy, 4));
  CHECK_FALSE(has_violation(v, ViolationKind::SourceEnergy, 1));
  CHECK_FALSE(has_violation(v, ViolationKind::SourceEnergy, 2));
  for (const auto& x : v) CHECK(x.slack > 0.0);
}

TEST_CASE("transfer budget violations carry the first overdrawn prefix") {
  Scenario s{Model::Relay, EnergyProfile{{2, 2}}, EnergyProfile{{1, 1}}, 1.0,
             {}};
  PowerSchedule p({0, 0});
  TransferSchedule d({3, 0});
  auto v = feasibility_violations(s, p, p, d);
  CHECK(has_violation(v, ViolationKind::TransferBudget, 1));
}

TEST_CASE("negative entries are rejected as their own violation kind") {
  Scenario s{Model::Relay, EnergyProfile{{2, 2}}, EnergyProfile{{1, 1}}, 1.0,
             {}};
  auto v = feasibility_violations(s, PowerSchedule({-0.5, 0.5}),
                                  PowerSchedule({0, 0}),
                                  TransferSchedule({0, 0}));
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().kind == ViolationKind::Negativity);
}

TEST_CASE("data causality tracks cumulative forwarded bits") {
  CHECK(data_causality_violations(PowerSchedule({2, 5}), PowerSchedule({2, 5}))
            .empty());
  CHECK(data_causality_violations(PowerSchedule({3, 0}), PowerSchedule({0, 3}))
            .empty());
  auto v =
      data_causality_violations(PowerSchedule({0, 3}), PowerSchedule({3, 0}));
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().kind == ViolationKind::DataCausality);
  CHECK(v.front().slot == 1);
}

TEST_CASE("violation descriptions carry kind and slot") {
  Violation v{ViolationKind::SourceEnergy, 3, 0.25};
  const std::string text = v.describe();
  CHECK(text.find('3') != std::string::npos);
  CHECK_FALSE(text.empty());
}

TEST_CASE("feasible policies stay feasible under convex combination") {
  // The feasible set is an intersection of half-spaces, so any blend of two
  // feasible policies must pass as well. Randomized over scenarios, policy
  // pairs, and blend weights.
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ue(0.0, 8.0);
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t t = 2 + static_cast<std::size_t>(trial % 3);
    std::vector<double> a1(t), a2(t);
    for (auto& x : a1) x = ue(rng);
    for (auto& x : a2) x = ue(rng);
    if (std::accumulate(a1.begin(), a1.end(), 0.0) <= 0.0) a1[0] = 1.0;
    Scenario s{Model::TwoWay, EnergyProfile(a1), EnergyProfile(a2),
               0.1 + 0.9 * uf(rng), {}};

    // Draw two feasible policies by spending random fractions of what each
    // prefix allows.
    auto draw = [&](PowerSchedule& p1, PowerSchedule& p2,
                    TransferSchedule& d) {
      std::vector<double> dd(t), q1(t), q2(t);
      double c1 = 0.0, spent_d = 0.0, spent_1 = 0.0, spent_2 = 0.0, c2 = 0.0;
      for (std::size_t i = 0; i < t; ++i) {
        c1 += a1[i];
        dd[i] = uf(rng) * (c1 - spent_d - spent_1);
        spent_d += dd[i];
        q1[i] = uf(rng) * (c1 - spent_d - spent_1);
        if (q1[i] < 0.0) q1[i] = 0.0;
        spent_1 += q1[i];
        c2 += a2[i];
        q2[i] = uf(rng) * (c2 + s.alpha * spent_d - spent_2);
        if (q2[i] < 0.0) q2[i] = 0.0;
        spent_2 += q2[i];
      }
      p1 = PowerSchedule(q1);
      p2 = PowerSchedule(q2);
      d = TransferSchedule(dd);
    };
    PowerSchedule x1, x2, y1, y2;
    TransferSchedule xd, yd;
    draw(x1, x2, xd);
    draw(y1, y2, yd);
    REQUIRE(feasibility_violations(s, x1, x2, xd).empty());
    REQUIRE(feasibility_violations(s, y1, y2, yd).empty());

    const double lam = uf(rng);
    std::vector<double> m1(t), m2(t), md(t);
    for (std::size_t i = 0; i < t; ++i) {
      m1[i] = lam * x1[i] + (1 - lam) * y1[i];
      m2[i] = lam * x2[i] + (1 - lam) * y2[i];
      md[i] = lam * xd[i] + (1 - lam) * yd[i];
    }
    CHECK(feasibility_violations(s, PowerSchedule(m1), PowerSchedule(m2),
                                 TransferSchedule(md))
              .empty());
  }
}
