#pragma once

#include "poroplate/plate_qs.hpp"

#include <string>
#include <vector>

namespace poroplate {

// Inertial operators: the quasi-static set on spaces built in inertial mode
// (no mean constraint on b) plus the effective-density mass on b.
DiscreteOperators assemble_inertial(const EffectiveModel& model, const DiscreteSpaces& spaces,
                                    const AssembleOptions& opt = {});

// b = b0, v = b1, and (a, p) from in-plane equilibrium under F1(0) together
// with  M p + C^T u = t0.
PlateState initial_inertial_state(const DiscreteOperators& ops, const AssembledLoads& loads,
                                  const SolverOptions& solver = {});

// First-order system in (b, v = db/dt, p) with a slaved by in-plane
// equilibrium. Implicit midpoint:
//   (b' - b) / dt = (v + v') / 2
//   Mb (v' - v) / dt + [A u_m - C p_m]_b = F2(t_m)
//   [A u' - C p']_a = F1(t')
//   M (p' - p) + C^T (u' - u) + dt D p_m = dt G(t_m)
// Backward Euler evaluates everything at t'. Eliminating v' leaves one
// symmetric indefinite system per step.
class InertialStepper {
 public:
  InertialStepper(const DiscreteOperators& ops, const AssembledLoads& loads, double dt,
                  Scheme scheme = Scheme::ImplicitMidpoint, const SolverOptions& solver = {});
  PlateState step(const PlateState& s) const;

 private:
  const DiscreteOperators& ops_;
  const AssembledLoads& loads_;
  double dt_;
  Scheme scheme_;
  SpMat k_;
  SymmetricSolver solver_;
};

double inertial_energy(const DiscreteOperators& ops, const PlateState& s);

Trajectory solve_inertial_trajectory(const DiscreteOperators& ops, const AssembledLoads& loads,
                                     const TimeSettings& ts, bool with_ledger = true);

// Ledger of a full (stride 1) inertial trajectory.
EnergyLedger energy_ledger_inertial(const std::vector<PlateState>& trajectory, const DiscreteOperators& ops,
                                    const AssembledLoads& loads);

struct ProbeEntry {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool expect_small = true;  // pass when value <= threshold, else when value > threshold
  bool passed = false;
};

struct UniquenessReport {
  std::vector<ProbeEntry> entries;
  bool passed() const;
  std::string to_json() const;
};

// Zero-data trajectories in both modes and on two factorization paths, the
// sum of trajectories for opposite random data, and two negative controls.
UniquenessReport uniqueness_probe(const EffectiveModel& model, const PlateGrid& grid, double dt, double t_end,
                                  unsigned seed = 7);

}  // namespace poroplate
