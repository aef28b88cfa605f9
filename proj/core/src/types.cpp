#include "ecoop/types.hpp"

#include <cmath>
#include <numeric>

namespace ecoop {

namespace {

double sum_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

void require_finite_nonnegative(const std::vector<double>& v,
                                const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + " entry not finite");
    }
    if (x < 0.0) {
      throw std::invalid_argument(std::string(what) + " entry negative");
    }
  }
}

}  // namespace

std::vector<double> cumulative_sum(const std::vector<double>& v) {
  std::vector<double> c(v.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += v[i];
    c[i] = acc;
  }
  return c;
}

EnergyProfile::EnergyProfile(std::vector<double> a) : amounts(std::move(a)) {
  if (amounts.empty()) {
    throw std::invalid_argument("energy profile needs at least one slot");
  }
  require_finite_nonnegative(amounts, "energy profile");
}

double EnergyProfile::total() const { return sum_of(amounts); }
std::vector<double> EnergyProfile::cumulative() const {
  return cumulative_sum(amounts);
}

double PhysicalUnits::gain() const {
  return std::pow(10.0, -path_loss_db / 10.0);
}

double PhysicalUnits::snr_of_energy(double joules) const {
  return joules * gain() / (n0_w_per_hz * bandwidth_hz * slot_seconds);
}

double PhysicalUnits::energy_of_snr(double snr) const {
  return snr * n0_w_per_hz * bandwidth_hz * slot_seconds / gain();
}

void Scenario::validate() const {
  if (e1.slots() == 0 || e1.slots() != e2.slots()) {
    throw std::invalid_argument("profiles must share a positive horizon");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha out of range");
  }
  // The energy-sending side must harvest something; the receiving side may
  // live entirely off transfers.
  if (e1.total() <= 0.0) {
    throw std::invalid_argument("user-1 profile must harvest something");
  }
  if (units) {
    if (units->bandwidth_hz <= 0 || units->n0_w_per_hz <= 0 ||
        units->slot_seconds <= 0) {
      throw std::invalid_argument("physical units must be positive");
    }
  }
}

EnergyProfile Scenario::e1_snr() const {
  if (!units) return e1;
  std::vector<double> a(e1.amounts);
  for (double& x : a) x = units->snr_of_energy(x);
  return EnergyProfile(std::move(a));
}

EnergyProfile Scenario::e2_snr() const {
  if (!units) return e2;
  std::vector<double> a(e2.amounts);
  for (double& x : a) x = units->snr_of_energy(x);
  return EnergyProfile(std::move(a));
}

double PowerSchedule::total() const { return sum_of(power); }
std::vector<double> PowerSchedule::cumulative() const {
  return cumulative_sum(power);
}

double TransferSchedule::total() const { return sum_of(delta); }
std::vector<double> TransferSchedule::cumulative() const {
  return cumulative_sum(delta);
}

std::string Violation::describe() const {
  const char* name = "";
  switch (kind) {
    case ViolationKind::SourceEnergy: name = "source energy causality"; break;
    case ViolationKind::ReceiverEnergy: name = "receiver energy causality"; break;
    case ViolationKind::TransferBudget: name = "transfer budget"; break;
    case ViolationKind::Negativity: name = "negativity"; break;
    case ViolationKind::DataCausality: name = "data causality"; break;
  }
  return std::string(name) + " violated at slot " + std::to_string(slot) +
         " by " + std::to_string(slack);
}

}  // namespace ecoop
