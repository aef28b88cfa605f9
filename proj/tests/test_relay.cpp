#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ecoop/feasibility.hpp"
#include "ecoop/oracle.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/relay.hpp"
#include "ecoop/tolerances.hpp"

using namespace ecoop;

namespace {

Scenario relay(std::vector<double> e1, std::vector<double> e2, double alpha) {
  return Scenario{Model::Relay, EnergyProfile(std::move(e1)),
                  EnergyProfile(std::move(e2)), alpha, {}};
}

void check_all_lemmas(const RelayReport& r) {
  REQUIRE(r.lemma_results.size() == 5);
  for (const auto& l : r.lemma_results) {
    INFO("lemma '", l.name, "' slack ", l.slack);
    CHECK(l.pass);
  }
}

void check_report_feasible(const RelayReport& r, const Scenario& s) {
  CHECK(feasibility_violations(s, r.p_source, r.p_relay, r.delta).empty());
  CHECK(data_causality_violations(r.p_source, r.p_relay).empty());
}

}  // namespace

TEST_CASE("crossing detection finds the pinned index patterns") {
  // Relay curve above the source for three slots, below afterwards.
  EnergyProfile e1{{1, 1, 1, 5, 5}};
  EnergyProfile e2{{3, 2, 1, 0, 0}};
  auto idx = detect_single_crossing(e1, e2);
  REQUIRE(idx.has_value());
  CHECK(*idx == 3);

  // Relay cumulative curve dominates everywhere: the crossing sits at T.
  auto full = detect_single_crossing(EnergyProfile{{1, 1}},
                                     EnergyProfile{{5, 5}});
  REQUIRE(full.has_value());
  CHECK(*full == 2);

  // Source dominates from the start: crossing at 0.
  auto zero = detect_single_crossing(EnergyProfile{{5, 5}},
                                     EnergyProfile{{1, 1}});
  REQUIRE(zero.has_value());
  CHECK(*zero == 0);

  // Ties count toward the prefix.
  auto tied = detect_single_crossing(EnergyProfile{{2, 2}},
                                     EnergyProfile{{2, 2}});
  REQUIRE(tied.has_value());
  CHECK(*tied == 2);

  // Up, down, and up again: no single crossing exists.
  CHECK_FALSE(detect_single_crossing(EnergyProfile{{0, 5, 0, 5}},
                                     EnergyProfile{{3, 0, 5, 0}})
                  .has_value());
}

TEST_CASE("identical profiles need no transfer") {
  RelayReport r = solve_relay_single_crossing(relay({2, 2}, {2, 2}, 0.5));
  CHECK(r.p_source[0] == doctest::Approx(2.0));
  CHECK(r.p_source[1] == doctest::Approx(2.0));
  CHECK(r.p_relay[0] == doctest::Approx(2.0));
  CHECK(r.p_relay[1] == doctest::Approx(2.0));
  CHECK(r.delta.total() == doctest::Approx(0.0));
}

TEST_CASE("an abundant relay matches the source without transfer") {
  RelayReport r = solve_relay_single_crossing(relay({1, 1}, {5, 5}, 1.0));
  PowerSchedule own({1.0, 1.0});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.p_source[i] == doctest::Approx(own[i]));
    CHECK(r.p_relay[i] == doctest::Approx(own[i]));
  }
  CHECK(r.delta.total() == doctest::Approx(0.0));
}

TEST_CASE("a starved relay is fed by the per-slot split") {
  // Crossing at zero: each slot sends (e1 - e2) / (1 + alpha) and both sides
  // run the blended profile.
  Scenario s = relay({4, 4}, {0, 0}, 1.0);
  auto idx = detect_single_crossing(s.e1, s.e2);
  REQUIRE(idx.has_value());
  CHECK(*idx == 0);
  RelayReport r = solve_relay(s);
  CHECK(r.path == RelayPath::SingleCrossing);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.delta[i] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.p_source[i] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.p_relay[i] == doctest::Approx(2.0).epsilon(1e-9));
  }
  check_all_lemmas(r);
}

TEST_CASE("dispatch agrees with the crossing closed form when it is feasible") {
  for (auto& sc : {relay({2, 2}, {2, 2}, 0.5), relay({4, 4}, {0, 0}, 1.0),
                   relay({2, 3, 5, 4}, {5, 1, 2, 1}, 0.5)}) {
    RelayReport direct = solve_relay_single_crossing(sc);
    RelayReport dispatched = solve_relay(sc);
    CHECK(dispatched.path == RelayPath::SingleCrossing);
    for (std::size_t i = 0; i < sc.slots(); ++i) {
      CHECK(dispatched.p_source[i] ==
            doctest::Approx(direct.p_source[i]).epsilon(1e-9));
      CHECK(dispatched.p_relay[i] ==
            doctest::Approx(direct.p_relay[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("crossing solver refuses profiles without the crossing shape") {
  CHECK_THROWS_AS(
      solve_relay_single_crossing(relay({0, 5, 0, 5}, {3, 0, 5, 0}, 0.5)),
      std::invalid_argument);
}

TEST_CASE("source-initial fixed point reproduces the pinned schedule") {
  Scenario s = relay({12, 0, 0, 0}, {5, 1, 0, 2}, 0.5);
  RelayReport r = solve_relay(s);
  CHECK(r.path == RelayPath::SourceInitial);
  CHECK(r.delta[0] == doctest::Approx(2.67).epsilon(1e-2));
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(std::abs(r.delta[i]) <= 1e-9);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(r.p_source[i] == doctest::Approx(2.33).epsilon(1e-2));
    CHECK(r.p_relay[i] == doctest::Approx(2.33).epsilon(1e-2));
  }
  CHECK(r.throughput == doctest::Approx(3.473931).epsilon(1e-5));
  check_all_lemmas(r);
  check_report_feasible(r, s);
  CHECK(r.kkt.within(1e-3));
}

TEST_CASE("tiny source burst solves to matched flat halves") {
  RelayReport r = solve_relay(relay({4, 0}, {0, 0}, 1.0));
  CHECK(r.path == RelayPath::SourceInitial);
  CHECK(r.delta[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.delta[1] == doctest::Approx(0.0));
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.p_source[i] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.p_relay[i] == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("an energy-rich relay forwards the flat source stream untouched") {
  RelayReport r = solve_relay(relay({4, 0}, {10, 0}, 0.5));
  CHECK(r.path == RelayPath::SourceInitial);
  CHECK(r.delta.total() == doctest::Approx(0.0));
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.p_source[i] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.p_relay[i] == doctest::Approx(2.0).epsilon(1e-9));
  }
  check_all_lemmas(r);
}

TEST_CASE("source-initial solver rejects late source arrivals") {
  CHECK_THROWS_AS(solve_relay_source_initial(relay({4, 1}, {0, 0}, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("the crossing instance with an infeasible transcription solves cleanly") {
  // The published schedule for this instance overdraws the source; the solver
  // must find the true optimum instead and certify it.
  Scenario s = relay({2, 3, 5, 4}, {5, 1, 2, 1}, 0.5);
  RelayReport r = solve_relay(s);
  CHECK(r.path == RelayPath::SingleCrossing);
  CHECK(r.throughput == doctest::Approx(3.731518).epsilon(1e-5));
  CHECK(r.p_source[0] == doctest::Approx(2.0).epsilon(1e-6));
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(r.p_source[i] == doctest::Approx(2.888889).epsilon(1e-5));
  }
  check_all_lemmas(r);
  check_report_feasible(r, s);
  CHECK(r.kkt.within(tol::kkt));
}

TEST_CASE("general path certifies random multi-crossing profiles") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  int general_seen = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t t = 3 + trial % 2;
    std::vector<double> a(t), b(t);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    if (a[0] + a[1] <= 0.0) a[0] = 1.0;
    Scenario s = relay(std::move(a), std::move(b), 0.3 + 0.05 * trial);
    RelayReport r = solve_relay(s);
    if (r.path == RelayPath::General) ++general_seen;
    check_all_lemmas(r);
    check_report_feasible(r, s);
    CHECK(r.kkt.within(tol::kkt));
  }
  CHECK(general_seen > 0);
}

TEST_CASE("optimal powers are unique across solver starts") {
  for (unsigned seed : {2u, 9u, 17u, 28u, 35u}) {
    Scenario s = random_scenario(seed, 3, 10.0, Model::Relay);
    RelayReport base = detail::solve_relay_general(s, 0);
    for (unsigned jitter : {1u, 2u}) {
      RelayReport other = detail::solve_relay_general(s, jitter);
      for (std::size_t i = 0; i < s.slots(); ++i) {
        CHECK(base.p_source[i] ==
              doctest::Approx(other.p_source[i]).epsilon(1e-5));
        CHECK(base.p_relay[i] ==
              doctest::Approx(other.p_relay[i]).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("a relay poorer than the source forces some transfer") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t t = 2 + trial % 3;
    std::vector<double> a(t), b(t);
    for (auto& x : a) x = 2.0 + u(rng);
    for (auto& x : b) x = 0.2 * u(rng);
    double ta = 0.0, tb = 0.0;
    for (double x : a) ta += x;
    for (double x : b) tb += x;
    REQUIRE(tb < ta);
    RelayReport r = solve_relay(relay(std::move(a), std::move(b), 0.8));
    CHECK(r.delta.total() > tol::transfer_active);
  }
}

TEST_CASE("closed-form instances that break causality fall back to the general path") {
  // The matched closed form can violate the cross-pair energy constraint;
  // the dispatcher must detect that and hand the instance to the certified
  // numerical path instead of reporting an infeasible schedule.
  Scenario s = random_scenario(15, 2, 10.0, Model::Relay);
  REQUIRE(detect_single_crossing(s.e1, s.e2).has_value());
  RelayReport r = solve_relay(s);
  CHECK(r.path == RelayPath::General);
  check_all_lemmas(r);
  check_report_feasible(r, s);
  CHECK(r.kkt.within(tol::kkt));
}

TEST_CASE("near-degenerate matched instances keep the lemma set tight") {
  // Regression set: instances whose optimum has exactly matched schedules
  // once wobbled past the equality detector before the active-manifold
  // polish landed.
  for (unsigned seed : {4u, 15u, 23u, 61u}) {
    for (std::size_t t : {2u, 3u}) {
      Scenario s = random_scenario(seed, t, 10.0, Model::Relay);
      RelayReport r = solve_relay(s);
      check_all_lemmas(r);
      check_report_feasible(r, s);
      CHECK(r.kkt.within(tol::kkt));
    }
  }
}

TEST_CASE("matched optimum passes the equality arm of the spending lemma") {
  RelayReport r = solve_relay(relay({12, 0, 0, 0}, {5, 1, 0, 2}, 0.5));
  double gap = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    gap = std::max(gap, std::abs(r.p_source[i] - r.p_relay[i]));
  }
  CHECK(gap <= tol::schedule_equal);
  CHECK(majorizes(rates_of_powers(r.p_source.power),
                  rates_of_powers(r.p_relay.power)));
}

TEST_CASE("lemma checks reject infeasible reports") {
  Scenario s = relay({2, 2}, {2, 2}, 0.5);
  RelayReport bogus;
  bogus.p_source = PowerSchedule({9, 9});
  bogus.p_relay = PowerSchedule({2, 2});
  bogus.delta = TransferSchedule({0, 0});
  CHECK_THROWS_AS(verify_relay_lemmas(bogus, s), std::invalid_argument);
}

TEST_CASE("unspent source energy fails the exhaustion lemma with positive slack") {
  Scenario s = relay({4, 4}, {4, 4}, 0.5);
  RelayReport half;
  half.p_source = PowerSchedule({1, 1});
  half.p_relay = PowerSchedule({1, 1});
  half.delta = TransferSchedule({0, 0});
  auto checks = verify_relay_lemmas(half, s);
  REQUIRE(checks.size() == 5);
  CHECK(checks[0].pass);        // equal bits on both hops
  CHECK_FALSE(checks[1].pass);  // source left energy on the table
  CHECK(checks[1].slack > 1.0);
}

TEST_CASE("the relay exhaustion lemma is vacuous without transfer") {
  Scenario s = relay({1, 1}, {4, 4}, 0.5);
  RelayReport r;
  r.p_source = PowerSchedule({1, 1});
  r.p_relay = PowerSchedule({1, 1});  // leaves most of the relay energy unused
  r.delta = TransferSchedule({0, 0});
  auto checks = verify_relay_lemmas(r, s);
  CHECK(checks[0].pass);
  CHECK(checks[1].pass);
  CHECK(checks[2].pass);  // no transfer happened, nothing to exhaust
}
