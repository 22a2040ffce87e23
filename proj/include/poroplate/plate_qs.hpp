#pragma once

#include "poroplate/cellsolve.hpp"
#include "poroplate/plate.hpp"

#include <map>

namespace poroplate {

double elastic_energy(const DiscreteOperators& ops, const Vec& u);
double pressure_energy(const DiscreteOperators& ops, const Vec& p);
double kinetic_energy(const DiscreteOperators& ops, const Vec& v);
double dissipation_rate(const DiscreteOperators& ops, const Vec& p);

// Relative residuals of the plate equation (after removing the constraint
// directions) and of the pressure balance  M p + C^T u = rhs_p.
struct CoupledResidual {
  double plate = 0.0;
  double pressure = 0.0;
};
double plate_residual(const DiscreteOperators& ops, const Vec& u, const Vec& p, const Vec& f);
double balance_residual(const DiscreteOperators& ops, const Vec& lhs, const Vec& rhs);

// Plate equilibrium under F(0) coupled with  M p + C^T u = t0.
PlateState initial_state(const DiscreteOperators& ops, const AssembledLoads& loads, const SolverOptions& solver = {});
CoupledResidual initial_residual(const DiscreteOperators& ops, const AssembledLoads& loads, const PlateState& s);

// One factorization per (dt, scheme). The stepped system is the symmetric
// monolithic form of
//   A u' - C p' = F(t')
//   M (p' - p) + C^T (u' - u) + dt D p* = dt G*
// with p* = p', G* = G(t') (backward Euler) or midpoint averages (Crank-Nicolson).
// Eliminating u gives the reduced pressure evolution with the plate Schur
// complement; the monolithic form avoids building it.
class QuasiStaticStepper {
 public:
  QuasiStaticStepper(const DiscreteOperators& ops, const AssembledLoads& loads, double dt,
                     Scheme scheme = Scheme::BackwardEuler, const SolverOptions& solver = {});
  PlateState step(const PlateState& s) const;
  double dt() const { return dt_; }
  // Relative residual of the last step's linear system.
  double last_residual() const { return last_residual_; }

 private:
  const DiscreteOperators& ops_;
  const AssembledLoads& loads_;
  double dt_;
  Scheme scheme_;
  SpMat k_;
  SymmetricSolver solver_;
  mutable double last_residual_ = 0.0;
};

PlateState step(const PlateState& s, const DiscreteOperators& ops, const AssembledLoads& loads, double dt,
                Scheme scheme = Scheme::BackwardEuler);

// Per-step energy balance of backward Euler:
//   E' - E + dt p'.D p' + numerical = (u' - u).F' + dt G'.p'
// with numerical = 1/2 |u' - u|_A^2 + 1/2 |p' - p|_M^2 >= 0.
struct StepBalance {
  double energy_before = 0.0, energy_after = 0.0;
  double dissipation = 0.0;
  double load_work = 0.0;
  double numerical = 0.0;
  double defect() const { return energy_after - energy_before + dissipation + numerical - load_work; }
};
StepBalance step_balance(const DiscreteOperators& ops, const AssembledLoads& loads, const PlateState& prev,
                         const PlateState& next);

// Running energy identity:
//   E(t) + int_0^t p.D p = E(0) + [F.u]_0^t - int dF/dt.u + int G.p      (quasi-static)
//   plus 1/2 v.Mb v in E and F2.v work on the transverse part          (inertial)
// Time integrals by the trapezoid rule, dF/dt exact for the interpolated loads.
class LedgerAccumulator {
 public:
  LedgerAccumulator(const DiscreteOperators& ops, const AssembledLoads& loads, bool inertial);
  void start(const PlateState& s0);
  void advance(const PlateState& prev, const PlateState& next, int step);
  const EnergyLedger& ledger() const { return ledger_; }

 private:
  LedgerRow row(const PlateState& s, int step) const;
  const DiscreteOperators& ops_;
  const AssembledLoads& loads_;
  EnergyLedger ledger_;
  double d_cum_ = 0.0, w_ = 0.0;
};

// Rejects sampled loads that cannot supply dF/dt over [0, t_end].
void check_time_derivative(const AssembledLoads& loads, const TimeSettings& ts);

Trajectory solve_trajectory(const DiscreteOperators& ops, const AssembledLoads& loads, const TimeSettings& ts,
                            bool with_ledger = true);

struct MicroReconstruction {
  // Darcy flux along x3, one value per (cell, thickness interval): -K33 dp/dx3.
  Mat darcy_flux;  // cells x nz
  // Cell-centre membrane strain and curvature (Mandel) and nodal pressure.
  std::vector<Eigen::Vector3d> membrane_strain, curvature;
  Mat pressure;  // cells x (nz + 1)
};

MicroReconstruction reconstruct_fields(const PlateState& s, const DiscreteOperators& ops,
                                       const EffectiveModel& model,
                                       const std::map<int, CorrectorSet>& correctors);

}  // namespace poroplate
