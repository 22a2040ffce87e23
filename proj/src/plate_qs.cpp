#include "poroplate/plate_qs.hpp"

#include <cmath>
#include <string>

namespace poroplate {

double elastic_energy(const DiscreteOperators& ops, const Vec& u) { return 0.5 * u.dot(ops.a_plate * u); }
double pressure_energy(const DiscreteOperators& ops, const Vec& p) {
  return p.size() ? 0.5 * p.dot(ops.m_storage * p) : 0.0;
}
double kinetic_energy(const DiscreteOperators& ops, const Vec& v) {
  return v.size() ? 0.5 * v.dot(ops.b_mass * v) : 0.0;
}
double dissipation_rate(const DiscreteOperators& ops, const Vec& p) {
  return p.size() ? p.dot(ops.d_darcy * p) : 0.0;
}

double plate_residual(const DiscreteOperators& ops, const Vec& u, const Vec& p, const Vec& f) {
  const Vec au = ops.a_plate * u;
  const Vec cp = p.size() ? Vec(ops.c_op * p) : Vec(Vec::Zero(u.size()));
  Vec r = au - cp - f;
  const Mat l = Mat(ops.constraints);
  if (l.rows() > 0) {
    const Mat llt = l * l.transpose();
    r -= l.transpose() * llt.ldlt().solve(l * r);
  }
  const double scale = std::max({f.norm(), au.norm() + cp.norm(), 1e-300});
  return r.norm() / scale;
}

double balance_residual(const DiscreteOperators&, const Vec& lhs, const Vec& rhs) {
  const double scale = std::max({lhs.norm(), rhs.norm(), 1e-300});
  return (lhs - rhs).norm() / scale;
}

namespace {

struct Split {
  Vec u, p;
};

Split solve_monolithic(const DiscreteOperators& ops, const SpMat& k, const SymmetricSolver& solver, const Vec& top,
                       const Vec& bottom, double* residual) {
  const int nu = ops.n_u(), nm = ops.n_mult(), np = ops.n_p();
  Vec rhs = Vec::Zero(nu + nm + np);
  rhs.head(nu) = top;
  rhs.tail(np) = bottom;
  const Vec x = solver.solve(rhs);
  if (!x.allFinite()) throw NonFiniteState("linear solve produced non-finite values");
  const double denom = std::max(rhs.norm(), 1e-300);
  const double res = rhs.norm() == 0 ? (k * x).norm() : (k * x - rhs).norm() / denom;
  if (residual) *residual = res;
  if (res > 1e-8) throw SingularSystem("step system residual " + std::to_string(res));
  return {x.head(nu), x.tail(np)};
}

}  // namespace

PlateState initial_state(const DiscreteOperators& ops, const AssembledLoads& loads, const SolverOptions& opt) {
  const SpMat k = monolithic_matrix(ops, 0.0);
  SymmetricSolver solver;
  solver.factor(k, opt);
  auto s = solve_monolithic(ops, k, solver, loads.f_at(0.0), -loads.t0, nullptr);
  PlateState st;
  st.t = 0.0;
  st.u = std::move(s.u);
  st.p = std::move(s.p);
  return st;
}

CoupledResidual initial_residual(const DiscreteOperators& ops, const AssembledLoads& loads, const PlateState& s) {
  CoupledResidual r;
  r.plate = plate_residual(ops, s.u, s.p, loads.f_at(s.t));
  if (ops.n_p() > 0)
    r.pressure = balance_residual(ops, ops.m_storage * s.p + ops.c_op.transpose() * s.u, loads.t0);
  return r;
}

QuasiStaticStepper::QuasiStaticStepper(const DiscreteOperators& ops, const AssembledLoads& loads, double dt,
                                       Scheme scheme, const SolverOptions& opt)
    : ops_(ops), loads_(loads), dt_(dt), scheme_(scheme) {
  if (!(dt > 0)) throw SchemaError("simulation.dt", "must be positive");
  const double beta = scheme == Scheme::BackwardEuler ? dt : 0.5 * dt;
  k_ = monolithic_matrix(ops, beta);
  solver_.factor(k_, opt);
}

PlateState QuasiStaticStepper::step(const PlateState& s) const {
  const double t1 = s.t + dt_;
  Vec bottom = -(ops_.m_storage * s.p + ops_.c_op.transpose() * s.u);
  if (scheme_ == Scheme::BackwardEuler) {
    bottom -= dt_ * loads_.g_at(t1);
  } else {
    bottom += 0.5 * dt_ * (ops_.d_darcy * s.p);
    bottom -= 0.5 * dt_ * (loads_.g_at(s.t) + loads_.g_at(t1));
  }
  auto x = solve_monolithic(ops_, k_, solver_, loads_.f_at(t1), bottom, &last_residual_);
  PlateState out;
  out.t = t1;
  out.u = std::move(x.u);
  out.p = std::move(x.p);
  return out;
}

PlateState step(const PlateState& s, const DiscreteOperators& ops, const AssembledLoads& loads, double dt,
                Scheme scheme) {
  return QuasiStaticStepper(ops, loads, dt, scheme).step(s);
}

StepBalance step_balance(const DiscreteOperators& ops, const AssembledLoads& loads, const PlateState& prev,
                         const PlateState& next) {
  const double dt = next.t - prev.t;
  StepBalance b;
  b.energy_before = elastic_energy(ops, prev.u) + pressure_energy(ops, prev.p);
  b.energy_after = elastic_energy(ops, next.u) + pressure_energy(ops, next.p);
  b.dissipation = dt * dissipation_rate(ops, next.p);
  const Vec du = next.u - prev.u, dp = next.p - prev.p;
  b.load_work = du.dot(loads.f_at(next.t)) + (next.p.size() ? dt * loads.g_at(next.t).dot(next.p) : 0.0);
  b.numerical = elastic_energy(ops, du) + pressure_energy(ops, dp);
  return b;
}

// ----------------------------------------------------------------- ledger

LedgerAccumulator::LedgerAccumulator(const DiscreteOperators& ops, const AssembledLoads& loads, bool inertial)
    : ops_(ops), loads_(loads) {
  ledger_.inertial = inertial;
}

LedgerRow LedgerAccumulator::row(const PlateState& s, int step) const {
  LedgerRow r;
  r.step = step;
  r.time = s.t;
  r.e_elastic = elastic_energy(ops_, s.u);
  r.e_pressure = pressure_energy(ops_, s.p);
  if (ledger_.inertial) r.e_kinetic = kinetic_energy(ops_, s.v);
  r.d_cumulative = d_cum_;
  r.w_loads = w_;
  r.residual = r.e_kinetic + r.e_elastic + r.e_pressure + d_cum_ - ledger_.e_initial - w_;
  return r;
}

void LedgerAccumulator::start(const PlateState& s0) {
  d_cum_ = 0.0;
  w_ = 0.0;
  ledger_.rows.clear();
  ledger_.e_initial = elastic_energy(ops_, s0.u) + pressure_energy(ops_, s0.p) +
                      (ledger_.inertial ? kinetic_energy(ops_, s0.v) : 0.0);
  ledger_.rows.push_back(row(s0, 0));
}

void LedgerAccumulator::advance(const PlateState& prev, const PlateState& next, int step) {
  const double dt = next.t - prev.t;
  d_cum_ += 0.5 * dt * (dissipation_rate(ops_, prev.p) + dissipation_rate(ops_, next.p));
  const Vec f0 = loads_.f_at(prev.t), f1 = loads_.f_at(next.t);
  double w = 0.0;
  if (!ledger_.inertial) {
    w += f1.dot(next.u) - f0.dot(prev.u) - loads_.fdot_work(prev.t, next.t, prev.u, next.u);
  } else {
    const int na = ops_.spaces.n_a, nb = ops_.spaces.n_b;
    w += f1.head(na).dot(next.u.head(na)) - f0.head(na).dot(prev.u.head(na)) -
         loads_.fdot_work(prev.t, next.t, prev.u.head(na), next.u.head(na), 0, na);
    w += 0.5 * dt * (f0.tail(nb).dot(prev.v) + f1.tail(nb).dot(next.v));
  }
  if (ops_.n_p() > 0) w += 0.5 * dt * (loads_.g_at(prev.t).dot(prev.p) + loads_.g_at(next.t).dot(next.p));
  w_ += w;
  ledger_.rows.push_back(row(next, step));
}

void check_time_derivative(const AssembledLoads& loads, const TimeSettings& ts) {
  if (loads.times.size() < 2) return;
  const double tol = 1e-9 * std::max(ts.dt, ts.t_end);
  if (loads.max_spacing() > ts.dt + tol)
    throw MissingTimeDerivative("load samples are spaced " + std::to_string(loads.max_spacing()) +
                                " apart, coarser than the step " + std::to_string(ts.dt));
  if (loads.times.front() > tol || loads.times.back() < ts.steps() * ts.dt - tol)
    throw MissingTimeDerivative("load samples do not cover the simulated interval");
}

Trajectory solve_trajectory(const DiscreteOperators& ops, const AssembledLoads& loads, const TimeSettings& ts,
                            bool with_ledger) {
  if (!(ts.dt > 0)) throw SchemaError("simulation.dt", "must be positive");
  if (with_ledger) check_time_derivative(loads, ts);
  Trajectory tr;
  PlateState s = initial_state(ops, loads, ts.solver);
  QuasiStaticStepper stepper(ops, loads, ts.dt, ts.scheme, ts.solver);
  LedgerAccumulator acc(ops, loads, false);
  if (with_ledger) acc.start(s);
  tr.states.push_back(s);
  const int n = ts.steps();
  for (int k = 1; k <= n; ++k) {
    PlateState next = stepper.step(s);
    next.t = k * ts.dt;
    if (with_ledger) acc.advance(s, next, k);
    s = std::move(next);
    if (k % std::max(1, ts.stride) == 0 || k == n) tr.states.push_back(s);
  }
  tr.final_state = s;
  if (with_ledger) tr.ledger = acc.ledger();
  return tr;
}

// ----------------------------------------------------------------- reconstruction

MicroReconstruction reconstruct_fields(const PlateState& s, const DiscreteOperators& ops,
                                       const EffectiveModel& model,
                                       const std::map<int, CorrectorSet>& correctors) {
  for (const auto& rc : model.regions)
    for (const auto& l : rc.layers)
      if (!correctors.count(l.phase))
        throw MissingCorrector("no correctors for phase " + std::to_string(l.phase));
  const auto& sp = ops.spaces;
  const int nx = sp.grid.nx, ny = sp.grid.ny, nz = sp.grid.nz;
  const double hz = sp.hz();
  MicroReconstruction m;
  m.darcy_flux = Mat::Zero(nx * ny, nz);
  m.pressure = Mat::Zero(nx * ny, nz + 1);
  const Vec pf = full_pressure(ops, s.p);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      const int cell = ix * ny + iy;
      const Vec6 e = generalized_strain(sp, s.u, ix, iy, 0.5, 0.5);
      m.membrane_strain.push_back(e.head<3>());
      m.curvature.push_back(e.tail<3>());
      for (int kz = 0; kz <= nz; ++kz) m.pressure(cell, kz) = pf(sp.p_dof(cell, kz));
      const auto& rc = model.regions[ops.cell_region[cell]];
      for (int j = 0; j < nz; ++j) {
        const double zm = -0.5 + (j + 0.5) * hz;
        double k33 = 0.0;
        for (const auto& l : rc.layers)
          if (zm >= l.lo && zm < l.hi) k33 = l.k(2, 2);
        m.darcy_flux(cell, j) = -k33 * (m.pressure(cell, j + 1) - m.pressure(cell, j)) / hz;
      }
    }
  return m;
}

}  // namespace poroplate
