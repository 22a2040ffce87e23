#include "poroplate/verify.hpp"

#include "poroplate/kinematics.hpp"
#include "poroplate/pipeline.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

namespace poroplate {

namespace {

const double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

VerifyCheck named(const char* name, int criterion) {
  VerifyCheck c;
  c.name = name;
  c.criterion = criterion;
  return c;
}

RunConfig preset(const std::string& name) { return parse_config(preset_config(name)); }

RunConfig single_cell(int resolution, const std::string& kind, int axis, double size) {
  RunConfig cfg = preset("homogeneous_plate");
  cfg.geometry.resolution = resolution;
  cfg.geometry.cells[0].kind = kind;
  cfg.geometry.cells[0].axis = axis;
  cfg.geometry.cells[0].size = size;
  return cfg;
}

double state_distance(const PlateState& a, const PlateState& b) {
  double d = (a.u - b.u).squaredNorm() + (a.p - b.p).squaredNorm();
  double n = b.u.squaredNorm() + b.p.squaredNorm();
  if (a.v.size() && b.v.size()) {
    d += (a.v - b.v).squaredNorm();
    n += b.v.squaredNorm();
  }
  return std::sqrt(d / std::max(n, 1e-300));
}

// Residual of the energy identity at the final time for successive dt halvings.
std::vector<double> ledger_residuals(RunConfig cfg, const EffectiveModel& model, double dt0, int levels) {
  std::vector<double> out;
  for (int k = 0; k < levels; ++k) {
    cfg.simulation.dt = dt0 / (1 << k);
    out.push_back(std::abs(simulate(cfg, model).trajectory.ledger.rows.back().residual));
  }
  return out;
}

double min_rate(const std::vector<double>& r) {
  double m = INFINITY;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) m = std::min(m, std::log2(r[k] / r[k + 1]));
  return m;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt(x);
  return s;
}

// ------------------------------------------------------------------ checks

VerifyCheck kirchhoff_limit() {
  VerifyCheck c = named("kirchhoff_limit", 1);
  const auto h = homogenize(preset("homogeneous_plate"));
  Eigen::Matrix3d iso;
  iso << 8.0 / 3, 2.0 / 3, 0, 2.0 / 3, 8.0 / 3, 0, 0, 0, 2;
  const auto& pc = h.model.phases.at(0);
  const Mat6& a = h.model.regions[0].a_hom;
  const double membrane = (pc.membrane.a - iso).cwiseAbs().maxCoeff();
  const double bending = (a.bottomRightCorner<3, 3>() - iso / 12).cwiseAbs().maxCoeff();
  double w = 0;
  for (const auto& e : h.correctors.at(0).elastic) w = std::max(w, e.w.norm());
  c.value = std::max({membrane, bending, w});
  c.threshold = 1e-12;
  c.passed = c.value <= c.threshold;
  c.detail = "membrane " + fmt(membrane) + ", bending " + fmt(bending) + ", corrector norm " + fmt(w);
  return c;
}

VerifyCheck poiseuille(bool fast) {
  VerifyCheck c = named("poiseuille_permeability", 2);
  std::vector<int> ns = fast ? std::vector<int>{8, 16} : std::vector<int>{8, 16, 32};
  std::vector<double> err;
  double k33 = 0;
  for (int n : ns) {
    const auto cfg = single_cell(n, "layer", 3, 0.5);
    const auto cell = build_cell(n, geometry_spec(cfg, cfg.geometry.cells[0]), phase_spec(cfg, 0));
    FluidCellSystem sys(cell, cell_options(cfg));
    const double k11 = sys.flux(sys.solve(1).q, 1);
    k33 = std::max(k33, std::abs(sys.flux(sys.solve(3).q, 3)));
    err.push_back(std::abs(k11 - 1.0 / 96) * 96);
  }
  bool monotone = true;
  for (std::size_t k = 0; k + 1 < err.size(); ++k) monotone &= err[k + 1] < err[k];
  c.value = err.back();
  c.threshold = 0.05;
  c.passed = monotone && err.back() <= 0.05 && k33 <= 1e-8;
  c.detail = "relative K11 error " + list(err) + (monotone ? " (monotone)" : " (not monotone)") + ", |K33| " + fmt(k33);
  return c;
}

VerifyCheck tensor_structure(const std::string& inject) {
  VerifyCheck c = named("tensor_structure", 3);
  struct G {
    const char* label;
    const char* kind;
    int axis;
    double size;
  };
  const G geos[] = {{"full_solid", "full_solid", 3, 0},
                    {"horizontal_film", "layer", 3, 0.5},
                    {"mask", "mask", 3, 0},
                    {"channel", "channel", 3, 0.5},
                    {"inclusion", "inclusion", 3, 0.3}};
  int failed = 0, ran = 0;
  std::string bad;
  for (const auto& g : geos) {
    auto cfg = single_cell(8, g.kind, g.axis, g.size);
    std::optional<HomogenizeResult> hr;
    if (std::string(g.kind) == "mask") {
      // vertical tube with an L-shaped cross-section
      std::vector<std::uint8_t> m(512, 0);
      for (int i = 1; i < 6; ++i)
        for (int j = 1; j < 6; ++j)
          if (i < 3 || j < 3)
            for (int k = 0; k < 8; ++k) m[(i * 8 + j) * 8 + k] = 1;
      hr = homogenize(cfg, GeometrySpec::explicit_mask(m));
    } else {
      hr = homogenize(cfg);
    }
    auto& h = *hr;
    if (inject == "tensor" && std::string(g.label) == "full_solid") {
      h.model.regions[0].a_hom(0, 1) += 1e-6;
      h.report = verify_tensor_properties(h.model, tensor_tolerances(cfg));
    }
    for (const auto& tc : h.report.checks) {
      ++ran;
      if (tc.status == "fail") {
        ++failed;
        bad += std::string(bad.empty() ? "" : ", ") + g.label + ":" + tc.name;
      }
    }
  }
  c.value = failed;
  c.threshold = 0;
  c.passed = failed == 0;
  c.detail = std::to_string(ran) + " property checks on 5 geometries" + (bad.empty() ? "" : ", failed: " + bad);
  return c;
}

VerifyCheck qs_energy_identity(bool fast, const EffectiveModel& channel) {
  VerifyCheck c = named("quasistatic_energy_identity", 4);
  auto cfg = preset("eigenmode");
  cfg.simulation.t_end = fast ? 0.2 : 0.4;
  const auto r = ledger_residuals(cfg, channel, 0.02, 5);
  auto zero = cfg;
  zero.loads.preset = "none";
  const double z = simulate(zero, channel).trajectory.ledger.max_abs_residual();
  c.value = min_rate(r);
  c.threshold = 0.9;
  c.passed = c.value >= 0.9 && z <= 1e-12;
  c.detail = "residual at T " + list(r) + ", zero data " + fmt(z);
  return c;
}

VerifyCheck eigenmode_decay(const EffectiveModel& channel) {
  VerifyCheck c = named("eigenmode_decay", 4);
  auto cfg = preset("eigenmode");
  cfg.simulation.dt = 0.0025;
  cfg.simulation.t_end = 0.4;
  const auto res = simulate(cfg, channel, false);
  const auto& tr = res.trajectory;
  const double e0 = pressure_energy(res.ops, tr.states.front().p), e1 = pressure_energy(res.ops, tr.final_state.p);
  const double measured = -std::log(e1 / e0) / (2 * cfg.simulation.t_end);
  const auto& ph = channel.phases.begin()->second;
  const double target = 4 * kPi * kPi * ph.k(2, 2) / ph.m0;
  c.value = std::abs(measured / target - 1);
  c.threshold = 0.1;
  c.passed = c.value <= c.threshold;
  c.detail = "decay constant " + fmt(measured) + " vs 4 pi^2 K33 / M0 = " + fmt(target) + " (nz = 8)";
  return c;
}

VerifyCheck qs_oracle(const EffectiveModel& channel) {
  VerifyCheck c = named("quasistatic_reference_stepping", 5);
  auto cfg = preset("smooth_loads");
  const auto coarse = simulate(cfg, channel, false).trajectory.final_state;
  cfg.simulation.dt /= 100;
  const auto fine = simulate(cfg, channel, false).trajectory.final_state;
  c.value = state_distance(coarse, fine);
  c.threshold = 2e-2;
  c.passed = c.value <= c.threshold;
  c.detail = "relative state error at T against dt/100 " + fmt(c.value);
  return c;
}

VerifyCheck inertial_identity(bool fast) {
  VerifyCheck c = named("inertial_energy_identity", 6);
  auto cons = preset("inertial_conservative");
  const auto solid = effective_model_for(cons);
  const auto res = simulate(cons, solid, false);
  const auto& st = res.trajectory.states;
  const double e0 = inertial_energy(res.ops, st.front());
  double drift = 0;
  for (std::size_t k = 1; k < st.size(); ++k)
    drift = std::max(drift, std::abs(inertial_energy(res.ops, st[k]) - inertial_energy(res.ops, st[k - 1])) / e0);

  auto dis = preset("inertial_dissipative");
  dis.simulation.t_end = fast ? 0.1 : 0.2;
  const int levels = 5;
  const double dt0 = 0.005;
  // loads resolved finer than the finest step, so their kinks do not limit the rate
  dis.loads.sample_count = 4 * static_cast<int>(std::llround(dis.simulation.t_end / (dt0 / (1 << (levels - 1)))));
  const auto model = effective_model_for(dis);
  const auto r = ledger_residuals(dis, model, dt0, levels);
  const double rate = min_rate(r);
  c.value = rate;
  c.threshold = 1.8;
  c.passed = drift <= 1e-9 && rate >= 1.8;
  c.detail = "conservative drift per step " + fmt(drift) + ", dissipative residual " + list(r);
  return c;
}

VerifyCheck uniqueness(const EffectiveModel& channel) {
  VerifyCheck c = named("uniqueness_probe", 7);
  const auto rep = uniqueness_probe(channel, {4, 4, 4}, 0.01, 0.1);
  int failed = 0;
  double worst_zero = 0;
  std::string bad;
  for (const auto& e : rep.entries) {
    if (!e.passed) {
      ++failed;
      bad += (bad.empty() ? "" : ", ") + e.name;
    }
    if (e.name.find("zero data") != std::string::npos) worst_zero = std::max(worst_zero, e.value);
  }
  c.value = worst_zero;
  c.threshold = 1e-10;
  c.passed = failed == 0;
  c.detail = std::to_string(rep.entries.size()) + " probes, largest zero-data terminal norm " + fmt(worst_zero) +
             (bad.empty() ? "" : ", failed: " + bad);
  return c;
}

VerifyCheck griso(bool fast) {
  VerifyCheck c = named("griso_instrumentation", 8);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::normal_distribution<double> n01(0, 1);

  SampledField f(6, 5, 7);
  for (double& v : f.data) v = u(rng);
  const auto back = griso_decompose(f).reconstruct();
  double identity = 0;
  for (std::size_t k = 0; k < f.data.size(); ++k) identity = std::max(identity, std::abs(back.data[k] - f.data[k]));

  SampledField rot(8, 8, 9);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 9; ++k) {
        rot.at(i, j, k, 0) = rot.x3(k) * std::sin(2 * kPi * rot.x(i));
        rot.at(i, j, k, 1) = -rot.x3(k) * std::cos(2 * kPi * rot.y(j));
      }
  double rot_res = 0;
  for (double v : griso_decompose(rot).residual.data) rot_res = std::max(rot_res, std::abs(v));

  // smooth periodic fields: low Fourier modes times cubics in x3
  const int fields = 50, np = fast ? 12 : 16;
  std::vector<SampledField> ens;
  for (int e = 0; e < fields; ++e) {
    double coef[3][4][4];
    for (auto& a : coef)
      for (auto& b : a)
        for (double& x : b) x = n01(rng);
    SampledField s(np, np, 9);
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        for (int k = 0; k < 9; ++k) {
          const double x = s.x(i), y = s.y(j), z = s.x3(k);
          const double modes[4] = {std::sin(2 * kPi * x) * std::sin(2 * kPi * y), std::sin(2 * kPi * x) * std::cos(2 * kPi * y),
                                   std::cos(2 * kPi * x) * std::sin(2 * kPi * y), std::cos(2 * kPi * x) * std::cos(2 * kPi * y)};
          for (int comp = 0; comp < 3; ++comp)
            for (int m = 0; m < 4; ++m) {
              const double* a = coef[comp][m];
              s.at(i, j, k, comp) += modes[m] * (a[0] + z * (a[1] + z * (a[2] + z * a[3])));
            }
        }
    ens.push_back(std::move(s));
  }
  std::vector<double> worst;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    double m = 0;
    for (const auto& s : ens) m = std::max(m, korn_ratio(s, h));
    worst.push_back(m);
  }
  double growth = 0;
  for (std::size_t k = 0; k + 1 < worst.size(); ++k) growth = std::max(growth, worst[k + 1] / worst[k]);
  c.value = growth;
  c.threshold = 1.1;
  c.passed = identity <= 1e-14 && rot_res <= 1e-12 && growth <= 1.1;
  c.detail = "identity " + fmt(identity) + ", rotation residual " + fmt(rot_res) + ", max Korn ratio " + list(worst);
  return c;
}

VerifyCheck two_region() {
  VerifyCheck c = named("two_region_plate", 9);
  auto cfg = preset("two_region");
  const int levels = 3;
  cfg.loads.sample_count =
      4 * static_cast<int>(std::llround(cfg.simulation.t_end / (cfg.simulation.dt / (1 << (levels - 1)))));
  const auto model = effective_model_for(cfg);
  const auto res = simulate(cfg, model);
  const auto& s = res.ops.spaces;
  const int nz = s.grid.nz;

  // pressure unknowns exist exactly in the poroelastic columns
  int expected_removed = 0;
  for (int cell = 0; cell < s.grid.nx * s.grid.ny; ++cell)
    if (model.regions[res.ops.cell_region[cell]].elastic_only()) expected_removed += nz + 1;
  const bool removal = res.ops.removed_p == expected_removed && expected_removed > 0 &&
                       res.ops.n_p() == s.n_p - expected_removed;

  // deflection and its gradient agree from both sides of every interface edge
  const auto& u = res.trajectory.final_state.u;
  double jump = 0;
  auto eval = [&](int ix, int iy, double xi, double eta) {
    const auto e = bfs_eval(xi, eta, s.hx(), s.hy());
    std::array<double, 3> v{0, 0, 0};
    for (int i = 0; i < 16; ++i) {
      const int corner = i / 4, k = i % 4;
      const double coef = u(s.b_dof(s.node(ix + (corner & 1), iy + (corner >> 1)), k));
      v[0] += coef * e.v[i];
      v[1] += coef * e.dx[i];
      v[2] += coef * e.dy[i];
    }
    return v;
  };
  const int ix = s.grid.nx / 2;
  for (int iy = 0; iy < s.grid.ny; ++iy)
    for (double eta : {0.1, 0.5, 0.9}) {
      const auto l = eval(ix - 1, iy, 1.0, eta), r = eval(ix, iy, 0.0, eta);
      for (int q = 0; q < 3; ++q) jump = std::max(jump, std::abs(l[q] - r[q]));
    }

  // ledger structure: residual falls with dt, dissipation accumulates
  bool dissipation_grows = true;
  for (std::size_t k = 1; k < res.trajectory.ledger.rows.size(); ++k)
    dissipation_grows &= res.trajectory.ledger.rows[k].d_cumulative >= res.trajectory.ledger.rows[k - 1].d_cumulative;
  const auto r = ledger_residuals(cfg, model, cfg.simulation.dt, levels);
  const double rate = min_rate(r);
  c.value = jump;
  c.threshold = 1e-12;
  c.passed = removal && jump <= 1e-12 && dissipation_grows && rate >= 0.9;
  c.detail = "removed pressure DOFs " + std::to_string(res.ops.removed_p) + " of " + std::to_string(s.n_p) +
             (removal ? "" : " (expected " + std::to_string(expected_removed) + ")") + ", interface jump " + fmt(jump) +
             ", ledger residual " + list(r) + (dissipation_grows ? "" : ", dissipation decreased");
  return c;
}

template <class F>
void timed(VerifyReport& rep, const char* name, int criterion, F f) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyCheck c = named(name, criterion);
  try {
    c = f();
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("error: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.checks.push_back(c);
}

}  // namespace

bool VerifyReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

std::string VerifyReport::to_json(bool timings) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j = {{"name", c.name},      {"criterion", c.criterion}, {"passed", c.passed},
                        {"value", c.value},    {"threshold", c.threshold}, {"detail", c.detail}};
    if (timings) j["seconds"] = c.seconds;
    arr.push_back(j);
  }
  return nlohmann::json{{"passed", passed()}, {"fast", fast}, {"checks", arr}}.dump(2) + "\n";
}

VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport rep;
  rep.fast = opt.fast;
  std::optional<EffectiveModel> cached;
  auto channel = [&]() -> const EffectiveModel& {
    if (!cached) cached = effective_model_for(preset("eigenmode"));
    return *cached;
  };
  timed(rep, "kirchhoff_limit", 1, [] { return kirchhoff_limit(); });
  timed(rep, "poiseuille_permeability", 2, [&] { return poiseuille(opt.fast); });
  timed(rep, "tensor_structure", 3, [&] { return tensor_structure(opt.inject); });
  timed(rep, "quasistatic_energy_identity", 4, [&] { return qs_energy_identity(opt.fast, channel()); });
  timed(rep, "eigenmode_decay", 4, [&] { return eigenmode_decay(channel()); });
  timed(rep, "quasistatic_reference_stepping", 5, [&] { return qs_oracle(channel()); });
  timed(rep, "inertial_energy_identity", 6, [&] { return inertial_identity(opt.fast); });
  timed(rep, "uniqueness_probe", 7, [&] { return uniqueness(channel()); });
  timed(rep, "griso_instrumentation", 8, [&] { return griso(opt.fast); });
  timed(rep, "two_region_plate", 9, [] { return two_region(); });
  return rep;
}

}  // namespace poroplate
