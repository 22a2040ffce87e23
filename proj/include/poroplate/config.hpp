#pragma once

#include "poroplate/cellsolve.hpp"
#include "poroplate/effective.hpp"
#include "poroplate/microcell.hpp"
#include "poroplate/plate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace poroplate {

struct CellConfig {
  int phase = 0;
  std::string kind = "full_solid";  // full_solid | layer | inclusion | channel | mask
  int axis = 3;
  double size = 0.0;
  std::string mask_file;
};

struct MaterialConfig {
  int id = 0;
  double lambda = 1.0, mu = 1.0;
  std::optional<std::array<double, 21>> stiffness;  // Mandel upper triangle, overrides lambda/mu
  double fluid_density = 1.0, solid_density = 1.0;
};

struct GeometryConfig {
  int resolution = 8;
  std::vector<CellConfig> cells;
  PlatePhaseMap plate;  // densities filled from the material section
};

struct SimulationConfig {
  PlateMode mode = PlateMode::Quasistatic;
  double dt = 0.01;
  double t_end = 0.1;
  Scheme scheme = Scheme::BackwardEuler;
  PlateGrid grid{8, 8, 8};
  int stride = 1;
};

struct SampleConfig {
  double t = 0.0;
  std::vector<double> f1, f2, f3, m1, m2, g;
};

// Named presets: none, zero, eigenmode, smooth, bending_wave.
struct LoadConfig {
  std::string preset = "none";
  double amplitude = 1.0;
  unsigned seed = 7;
  int sample_count = 0;  // smooth preset: samples over [0, t_end]; 0 picks one per step
  std::vector<SampleConfig> samples;
  std::vector<double> t0, b0, b1;
};

struct OutputConfig {
  std::string directory = "out";
  std::string ledger = "ledger.csv";
  bool snapshots = false;
};

struct ToleranceConfig {
  double symmetry = 1e-12;
  double duality = 1e-8;
  double permeability_energy = 1e-8;
  double cell_residual = 1e-8;
  double stokes_beta = 0.05;
};

struct VerifyConfig {
  std::string inject = "none";  // none | tensor
};

struct RunConfig {
  GeometryConfig geometry;
  std::vector<MaterialConfig> material;
  std::string effective_model;  // stem of a saved model; skips cell solves when set
  SimulationConfig simulation;
  LoadConfig loads;
  OutputConfig outputs;
  ToleranceConfig tolerances;
  VerifyConfig verify;
  std::string base_dir = ".";  // relative paths resolve here; not serialized
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);
// Canonical text with every default spelled out.
std::string normalize_config(const std::string& text);

const MaterialConfig& material_of(const RunConfig& cfg, int phase);
GeometrySpec geometry_spec(const RunConfig& cfg, const CellConfig& cell);
PhaseSpec phase_spec(const RunConfig& cfg, int phase);
CellSolveOptions cell_options(const RunConfig& cfg);
TensorTolerances tensor_tolerances(const RunConfig& cfg);
TimeSettings time_settings(const RunConfig& cfg);

// Load specification for the plate, presets expanded.
LoadSpec build_load_spec(const RunConfig& cfg, const EffectiveModel& model, const DiscreteOperators& ops);

// Named reference configurations used by verify and the tests.
std::string preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace poroplate
