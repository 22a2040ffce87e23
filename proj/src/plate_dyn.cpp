#include "poroplate/plate_dyn.hpp"

#include <json.hpp>

#include <cmath>
#include <random>

namespace poroplate {

DiscreteOperators assemble_inertial(const EffectiveModel& model, const DiscreteSpaces& spaces,
                                    const AssembleOptions& opt) {
  if (spaces.mode != PlateMode::Inertial) throw BadGrid("inertial assembly needs spaces built in inertial mode");
  for (std::size_t r = 0; r < model.regions.size(); ++r)
    if (!(model.regions[r].kappa > 0))
      throw BadTensor("effective density of region " + std::to_string(r) + " is not positive");
  return assemble(model, spaces, opt);
}

namespace {

SpMat selection(int n, const std::vector<int>& keep) {
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < keep.size(); ++k) t.emplace_back(keep[k], static_cast<int>(k), 1.0);
  return from_triplets(n, static_cast<int>(keep.size()), t);
}

}  // namespace

PlateState initial_inertial_state(const DiscreteOperators& ops, const AssembledLoads& loads,
                                  const SolverOptions& opt) {
  const auto& sp = ops.spaces;
  const int nu = ops.n_u(), nm = ops.n_mult(), np = ops.n_p(), na = sp.n_a, nb = sp.n_b;
  const int n = nu + nm + np;
  const SpMat k = monolithic_matrix(ops, 0.0);
  std::vector<int> keep, fixed;
  for (int i = 0; i < n; ++i) (i >= na && i < nu ? fixed : keep).push_back(i);
  const SpMat s_keep = selection(n, keep), s_fixed = selection(n, fixed);
  const SpMat kr = s_keep.transpose() * k * s_keep;
  const SpMat kf = s_keep.transpose() * k * s_fixed;

  Vec rhs = Vec::Zero(n);
  rhs.head(nu) = loads.f_at(0.0);
  rhs.tail(np) = -loads.t0;
  const Vec r = s_keep.transpose() * rhs - kf * loads.b0;
  SymmetricSolver solver;
  solver.factor(kr, opt);
  const Vec x = solver.solve(r);
  if (!x.allFinite()) throw NonFiniteState("initial state is not finite");
  if (r.norm() > 0 && (kr * x - r).norm() > 1e-8 * r.norm())
    throw SingularSystem("initial inertial system residual too large");

  PlateState st;
  st.t = 0.0;
  st.u = Vec::Zero(nu);
  st.u.head(na) = x.head(na);
  st.u.tail(nb) = loads.b0;
  st.p = x.tail(np);
  st.v = loads.b1;
  return st;
}

InertialStepper::InertialStepper(const DiscreteOperators& ops, const AssembledLoads& loads, double dt,
                                 Scheme scheme, const SolverOptions& opt)
    : ops_(ops), loads_(loads), dt_(dt), scheme_(scheme) {
  if (!(dt > 0)) throw SchemaError("simulation.dt", "must be positive");
  if (scheme == Scheme::CrankNicolson) scheme_ = Scheme::ImplicitMidpoint;
  if (scheme_ == Scheme::ImplicitMidpoint)
    k_ = monolithic_matrix(ops, 0.5 * dt, 4.0 / (dt * dt));
  else
    k_ = monolithic_matrix(ops, dt, 1.0 / (dt * dt));
  solver_.factor(k_, opt);
}

PlateState InertialStepper::step(const PlateState& s) const {
  const auto& sp = ops_.spaces;
  const int nu = ops_.n_u(), nm = ops_.n_mult(), np = ops_.n_p(), na = sp.n_a, nb = sp.n_b;
  const double dt = dt_, t1 = s.t + dt;
  const Vec b = s.u.tail(nb);
  const Vec mb = ops_.b_mass * b, mv = ops_.b_mass * s.v;
  Vec rhs = Vec::Zero(nu + nm + np);
  const Vec cpu = ops_.m_storage * s.p + ops_.c_op.transpose() * s.u;
  if (scheme_ == Scheme::ImplicitMidpoint) {
    const double tm = s.t + 0.5 * dt;
    const Vec fm = loads_.f_at(tm);
    const Vec au = ops_.a_plate * s.u - ops_.c_op * s.p;
    rhs.head(na) = loads_.f_at(t1).head(na);
    rhs.segment(na, nb) = 2.0 * fm.tail(nb) + (4.0 / (dt * dt)) * mb + (4.0 / dt) * mv - au.tail(nb);
    rhs.tail(np) = -cpu + 0.5 * dt * (ops_.d_darcy * s.p) - dt * loads_.g_at(tm);
  } else {
    rhs.head(nu) = loads_.f_at(t1);
    rhs.segment(na, nb) += (1.0 / (dt * dt)) * mb + (1.0 / dt) * mv;
    rhs.tail(np) = -cpu - dt * loads_.g_at(t1);
  }
  const Vec x = solver_.solve(rhs);
  if (!x.allFinite()) throw NonFiniteState("inertial step produced non-finite values");
  const double rn = rhs.norm();
  if (rn > 0 && (k_ * x - rhs).norm() > 1e-8 * rn) throw SingularSystem("inertial step residual too large");

  PlateState out;
  out.t = t1;
  out.u = x.head(nu);
  out.p = x.tail(np);
  const Vec db = out.u.tail(nb) - b;
  out.v = scheme_ == Scheme::ImplicitMidpoint ? Vec(2.0 / dt * db - s.v) : Vec(db / dt);
  return out;
}

double inertial_energy(const DiscreteOperators& ops, const PlateState& s) {
  return kinetic_energy(ops, s.v) + elastic_energy(ops, s.u) + pressure_energy(ops, s.p);
}

Trajectory solve_inertial_trajectory(const DiscreteOperators& ops, const AssembledLoads& loads,
                                     const TimeSettings& ts, bool with_ledger) {
  if (!(ts.dt > 0)) throw SchemaError("simulation.dt", "must be positive");
  if (with_ledger) check_time_derivative(loads, ts);
  Trajectory tr;
  PlateState s = initial_inertial_state(ops, loads, ts.solver);
  InertialStepper stepper(ops, loads, ts.dt, ts.scheme, ts.solver);
  LedgerAccumulator acc(ops, loads, true);
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

EnergyLedger energy_ledger_inertial(const std::vector<PlateState>& trajectory, const DiscreteOperators& ops,
                                    const AssembledLoads& loads) {
  LedgerAccumulator acc(ops, loads, true);
  if (trajectory.empty()) return acc.ledger();
  if (trajectory.size() > 1) {
    TimeSettings ts;
    ts.dt = trajectory[1].t - trajectory[0].t;
    ts.t_end = trajectory.back().t;
    check_time_derivative(loads, ts);
  }
  acc.start(trajectory.front());
  for (std::size_t k = 1; k < trajectory.size(); ++k)
    acc.advance(trajectory[k - 1], trajectory[k], static_cast<int>(k));
  return acc.ledger();
}

// ----------------------------------------------------------------- probe

bool UniquenessReport::passed() const {
  for (const auto& e : entries)
    if (!e.passed) return false;
  return true;
}

std::string UniquenessReport::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : entries)
    j.push_back({{"name", e.name},
                 {"value", e.value},
                 {"threshold", e.threshold},
                 {"expect", e.expect_small ? "at most" : "above"},
                 {"passed", e.passed}});
  return nlohmann::json{{"passed", passed()}, {"entries", j}}.dump(2);
}

UniquenessReport uniqueness_probe(const EffectiveModel& model, const PlateGrid& grid, double dt, double t_end,
                                  unsigned seed) {
  UniquenessReport rep;
  auto add = [&](std::string name, double value, double threshold, bool small) {
    ProbeEntry e{std::move(name), value, threshold, small, small ? value <= threshold : value > threshold};
    rep.entries.push_back(e);
  };
  const auto qs_spaces = build_spaces(grid, PlateMode::Quasistatic, model.lx, model.ly);
  const auto in_spaces = build_spaces(grid, PlateMode::Inertial, model.lx, model.ly);
  const auto qs = assemble(model, qs_spaces);
  const auto in = assemble_inertial(model, in_spaces);

  SolverOptions ldlt, lu;
  lu.force_lu = true;
  auto settings = [&](Scheme s, const SolverOptions& o) {
    TimeSettings ts;
    ts.dt = dt;
    ts.t_end = t_end;
    ts.scheme = s;
    ts.solver = o;
    return ts;
  };

  const AssembledLoads zq = assemble_loads(qs, {});
  const AssembledLoads zi = assemble_loads(in, {});
  add("quasistatic zero data, backward Euler, LDLT",
      solve_trajectory(qs, zq, settings(Scheme::BackwardEuler, ldlt), false).final_state.norm(), 1e-10, true);
  add("quasistatic zero data, backward Euler, LU",
      solve_trajectory(qs, zq, settings(Scheme::BackwardEuler, lu), false).final_state.norm(), 1e-10, true);
  add("quasistatic zero data, Crank-Nicolson",
      solve_trajectory(qs, zq, settings(Scheme::CrankNicolson, ldlt), false).final_state.norm(), 1e-10, true);
  add("inertial zero data, midpoint, LDLT",
      solve_inertial_trajectory(in, zi, settings(Scheme::ImplicitMidpoint, ldlt), false).final_state.norm(), 1e-10,
      true);
  add("inertial zero data, midpoint, LU",
      solve_inertial_trajectory(in, zi, settings(Scheme::ImplicitMidpoint, lu), false).final_state.norm(), 1e-10,
      true);
  add("inertial zero data, backward Euler",
      solve_inertial_trajectory(in, zi, settings(Scheme::BackwardEuler, ldlt), false).final_state.norm(), 1e-10,
      true);

  // Opposite random data solved on different factorization paths: the sum
  // solves the zero-data problem.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto random_vec = [&](int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uni(rng);
    return v;
  };
  {
    LoadSpec plus, minus;
    plus.t0 = random_vec(qs_spaces.n_p);
    minus.t0 = -plus.t0;
    const auto lp = assemble_loads(qs, plus), lm = assemble_loads(qs, minus);
    const auto a = solve_trajectory(qs, lp, settings(Scheme::BackwardEuler, ldlt), false).final_state;
    const auto b = solve_trajectory(qs, lm, settings(Scheme::BackwardEuler, lu), false).final_state;
    const double scale = std::max(1.0, a.norm());
    add("quasistatic opposite random t0, sum", (a.u + b.u).norm() / scale + (a.p + b.p).norm() / scale, 1e-10,
        true);
  }
  {
    LoadSpec plus, minus;
    plus.t0 = random_vec(in_spaces.n_p);
    plus.b0 = random_vec(in_spaces.n_b);
    plus.b1 = random_vec(in_spaces.n_b);
    minus.t0 = -plus.t0;
    minus.b0 = -plus.b0;
    minus.b1 = -plus.b1;
    const auto lp = assemble_loads(in, plus), lm = assemble_loads(in, minus);
    const auto a = solve_inertial_trajectory(in, lp, settings(Scheme::ImplicitMidpoint, ldlt), false).final_state;
    const auto b = solve_inertial_trajectory(in, lm, settings(Scheme::ImplicitMidpoint, lu), false).final_state;
    const double scale = std::max(1.0, a.norm());
    PlateState sum;
    sum.u = a.u + b.u;
    sum.p = a.p + b.p;
    sum.v = a.v + b.v;
    add("inertial opposite random data, sum", sum.norm() / scale, 1e-10, true);
  }

  // Negative control: nonzero initial velocity must move the plate.
  {
    LoadSpec spec;
    spec.b1 = random_vec(in_spaces.n_b);
    const auto l = assemble_loads(in, spec);
    add("inertial injected b1 (control)",
        solve_inertial_trajectory(in, l, settings(Scheme::ImplicitMidpoint, ldlt), false).final_state.norm(), 1e-6,
        false);
  }
  // Injected t0 with zero loads: energy must not grow.
  if (in.n_p() > 0) {
    LoadSpec spec;
    spec.t0 = random_vec(in_spaces.n_p);
    const auto l = assemble_loads(in, spec);
    const auto tr = solve_inertial_trajectory(in, l, settings(Scheme::ImplicitMidpoint, ldlt), false);
    double worst = 0.0;
    const double e0 = inertial_energy(in, tr.states.front());
    for (std::size_t k = 1; k < tr.states.size(); ++k)
      worst = std::max(worst, inertial_energy(in, tr.states[k]) - inertial_energy(in, tr.states[k - 1]));
    add("inertial injected t0, largest energy increase / E0", worst / std::max(e0, 1e-300), 1e-12, true);
  }
  return rep;
}

}  // namespace poroplate
