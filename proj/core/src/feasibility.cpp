#include "ecoop/feasibility.hpp"

#include <cmath>

#include "ecoop/rates.hpp"
#include "ecoop/tolerances.hpp"

namespace ecoop {

namespace {

void check_nonnegative(const std::vector<double>& v,
                       std::vector<Violation>& out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < -tol::feasibility) {
      out.push_back({ViolationKind::Negativity, i + 1, -v[i]});
    }
  }
}

}  // namespace

std::vector<Violation> feasibility_violations(const Scenario& s,
                                              const PowerSchedule& p1,
                                              const PowerSchedule& p2,
                                              const TransferSchedule& d) {
  const std::size_t T = s.slots();
  if (p1.slots() != T || p2.slots() != T || d.slots() != T) {
    throw std::invalid_argument("schedule length mismatch");
  }

  std::vector<Violation> out;
  check_nonnegative(p1.power, out);
  check_nonnegative(p2.power, out);
  check_nonnegative(d.delta, out);

  const EnergyProfile e1 = s.e1_snr();
  const EnergyProfile e2 = s.e2_snr();

  double c_p1 = 0, c_p2 = 0, c_d = 0, c_e1 = 0, c_e2 = 0;
  for (std::size_t k = 0; k < T; ++k) {
    c_p1 += p1[k];
    c_p2 += p2[k];
    c_d += d[k];
    c_e1 += e1[k];
    c_e2 += e2[k];

    if (double ex = c_p1 - (c_e1 - c_d); ex > tol::feasibility) {
      out.push_back({ViolationKind::SourceEnergy, k + 1, ex});
    }
    if (double ex = c_p2 - (c_e2 + s.alpha * c_d); ex > tol::feasibility) {
      out.push_back({ViolationKind::ReceiverEnergy, k + 1, ex});
    }
    if (double ex = c_d - c_e1; ex > tol::feasibility) {
      out.push_back({ViolationKind::TransferBudget, k + 1, ex});
    }
  }
  return out;
}

std::vector<Violation> data_causality_violations(const PowerSchedule& p1,
                                                 const PowerSchedule& p2) {
  if (p1.slots() != p2.slots()) {
    throw std::invalid_argument("schedule length mismatch");
  }
  std::vector<Violation> out;
  double bits_in = 0, bits_out = 0;
  for (std::size_t k = 0; k < p1.slots(); ++k) {
    bits_in += rate_of_power(std::max(0.0, p1[k]));
    bits_out += rate_of_power(std::max(0.0, p2[k]));
    if (double ex = bits_out - bits_in; ex > tol::feasibility) {
      out.push_back({ViolationKind::DataCausality, k + 1, ex});
    }
  }
  return out;
}

}  // namespace ecoop
