#pragma once

#include <optional>
#include <vector>

#include "ecoop/report.hpp"
#include "ecoop/types.hpp"

namespace ecoop {

enum class RelayPath { SingleCrossing, SourceInitial, General };

struct RelayReport {
  PowerSchedule p_source;
  PowerSchedule p_relay;
  TransferSchedule delta;
  double throughput = 0.0;  // bits delivered end to end
  KktReport kkt;
  std::vector<LemmaResult> lemma_results;
  RelayPath path = RelayPath::General;
};

// Index i~ in [0, T] such that cumulative e2 >= cumulative e1 for slots
// <= i~ and <= afterwards; ties count toward the prefix. Absent when the
// cumulative curves cross more than once.
std::optional<std::size_t> detect_single_crossing(const EnergyProfile& e1,
                                                  const EnergyProfile& e2);

// Closed-form path for single-crossing profiles: matched source/relay powers
// from water-filling the merged cap min(cum e1, (cum e2 + alpha cum e1)/(1+alpha)),
// with transfers placed after the crossing.
RelayReport solve_relay_single_crossing(const Scenario& s);

// Closed-form path for e1 = [E, 0, ..., 0]: single first-slot transfer found
// by bisecting the fixed-point equation that matches relay deliverable bits
// to the source's flat-rate bits.
RelayReport solve_relay_source_initial(const Scenario& s);

// Dispatches to the most specific closed form whose precondition holds, else
// runs an interior-point solve in rate variables. The returned report always
// carries KKT residuals and all five structural-lemma results.
RelayReport solve_relay(const Scenario& s);

// The five structural optimality checks, slack-tolerant to 1e-6:
// 1. delivered bits equal source bits; 2. source exhausts e1 - delta;
// 3. if any transfer happened, relay exhausts e2 + alpha*delta;
// 4. total source power <= total relay power, equality only for identical
//    schedules, with source rates majorized by relay rates;
// 5. wherever cumulative rates meet, cumulative source power <= relay power.
std::vector<LemmaResult> verify_relay_lemmas(const RelayReport& report,
                                             const Scenario& s);

namespace detail {
// Interior-point solve in rate variables for arbitrary profiles. start_jitter
// perturbs the initial interior point (uniqueness experiments); 0 is the
// deterministic production start.
RelayReport solve_relay_general(const Scenario& s, unsigned start_jitter);
}  // namespace detail

}  // namespace ecoop
