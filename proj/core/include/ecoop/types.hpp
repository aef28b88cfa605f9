#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecoop {

enum class Model { Relay, TwoWay, Mac };

// Per-slot harvested energy. Normalized mode: amounts are SNR-domain units
// (noise-and-path-loss already divided out). Physical mode: joules.
struct EnergyProfile {
  std::vector<double> amounts;

  EnergyProfile() = default;
  explicit EnergyProfile(std::vector<double> a);

  std::size_t slots() const { return amounts.size(); }
  double operator[](std::size_t i) const { return amounts[i]; }
  double total() const;
  std::vector<double> cumulative() const;
};

struct PhysicalUnits {
  double bandwidth_hz = 1e6;
  double n0_w_per_hz = 1e-19;
  double path_loss_db = 100.0;
  double slot_seconds = 1.0;

  // Linear channel gain.
  double gain() const;
  // Joules harvested in one slot -> dimensionless SNR at full spend.
  double snr_of_energy(double joules) const;
  double energy_of_snr(double snr) const;
};

// All solvers run on SNR-domain quantities; units only affect ingest and
// reporting. units == nullopt selects normalized mode.
struct Scenario {
  Model model = Model::TwoWay;
  EnergyProfile e1;  // user 1 / source
  EnergyProfile e2;  // user 2 / relay
  double alpha = 1.0;  // transfer efficiency, fraction of sent energy received
  std::optional<PhysicalUnits> units;

  std::size_t slots() const { return e1.slots(); }
  void validate() const;  // throws std::invalid_argument

  // SNR-domain profiles (identity in normalized mode).
  EnergyProfile e1_snr() const;
  EnergyProfile e2_snr() const;
};

struct PowerSchedule {
  std::vector<double> power;

  PowerSchedule() = default;
  explicit PowerSchedule(std::vector<double> p) : power(std::move(p)) {}
  std::size_t slots() const { return power.size(); }
  double operator[](std::size_t i) const { return power[i]; }
  double total() const;
  std::vector<double> cumulative() const;
};

struct TransferSchedule {
  std::vector<double> delta;

  TransferSchedule() = default;
  explicit TransferSchedule(std::vector<double> d) : delta(std::move(d)) {}
  std::size_t slots() const { return delta.size(); }
  double operator[](std::size_t i) const { return delta[i]; }
  double total() const;
  std::vector<double> cumulative() const;
};

enum class ViolationKind {
  SourceEnergy,    // cumulative user-1 spend exceeds harvested minus sent
  ReceiverEnergy,  // cumulative user-2 spend exceeds harvested plus received
  TransferBudget,  // cumulative transfer exceeds cumulative user-1 harvest
  Negativity,      // a power or transfer entry below zero
  DataCausality,   // relay forwarded bits it has not yet received
};

struct Violation {
  ViolationKind kind;
  std::size_t slot;   // 1-based index k of the violated prefix constraint
  double slack;       // constraint LHS minus RHS; > 0 exactly when reported

  std::string describe() const;
};

std::vector<double> cumulative_sum(const std::vector<double>& v);

}  // namespace ecoop
