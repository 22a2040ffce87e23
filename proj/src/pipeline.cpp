#include "poroplate/pipeline.hpp"

#include <filesystem>

namespace poroplate {

HomogenizeResult homogenize(const RunConfig& cfg) {
  HomogenizeResult out;
  std::map<int, PhaseCoefficients> phases;
  const auto opt = cell_options(cfg);
  for (const auto& cc : cfg.geometry.cells) {
    const auto cell = build_cell(cfg.geometry.resolution, geometry_spec(cfg, cc), phase_spec(cfg, cc.phase));
    out.geometry[cc.phase] = check_geometry(cell);
    auto cs = solve_all(cell, opt);
    phases[cc.phase] = phase_coefficients(cs);
    out.correctors.emplace(cc.phase, std::move(cs));
  }
  out.model = assemble_model(build_phase_map(cfg.geometry.plate), phases);
  out.report = verify_tensor_properties(out.model, tensor_tolerances(cfg));
  return out;
}

HomogenizeResult homogenize(const RunConfig& cfg, const GeometrySpec& geometry) {
  HomogenizeResult out;
  const auto& cc = cfg.geometry.cells.at(0);
  const auto cell = build_cell(cfg.geometry.resolution, geometry, phase_spec(cfg, cc.phase));
  out.geometry[cc.phase] = check_geometry(cell);
  auto cs = solve_all(cell, cell_options(cfg));
  std::map<int, PhaseCoefficients> phases{{cc.phase, phase_coefficients(cs)}};
  out.correctors.emplace(cc.phase, std::move(cs));
  out.model = assemble_model(build_phase_map(cfg.geometry.plate), phases);
  out.report = verify_tensor_properties(out.model, tensor_tolerances(cfg));
  return out;
}

EffectiveModel effective_model_for(const RunConfig& cfg) {
  if (cfg.effective_model.empty()) return homogenize(cfg).model;
  std::filesystem::path p(cfg.effective_model);
  if (p.is_relative()) p = std::filesystem::path(cfg.base_dir) / p;
  return import_model(p.string());
}

SimulationResult simulate(const RunConfig& cfg, const EffectiveModel& model, bool with_ledger) {
  const auto& sim = cfg.simulation;
  const auto spaces = build_spaces(sim.grid, sim.mode, model.lx, model.ly);
  SimulationResult out{sim.mode == PlateMode::Inertial ? assemble_inertial(model, spaces) : assemble(model, spaces),
                       {}, {}, {}};
  out.warnings = out.ops.warnings;
  out.loads = assemble_loads(out.ops, build_load_spec(cfg, model, out.ops));
  out.warnings.insert(out.warnings.end(), out.loads.warnings.begin(), out.loads.warnings.end());
  const auto ts = time_settings(cfg);
  out.trajectory = sim.mode == PlateMode::Inertial ? solve_inertial_trajectory(out.ops, out.loads, ts, with_ledger)
                                                   : solve_trajectory(out.ops, out.loads, ts, with_ledger);
  return out;
}

}  // namespace poroplate
