#pragma once

#include "poroplate/config.hpp"
#include "poroplate/effective.hpp"
#include "poroplate/plate_dyn.hpp"
#include "poroplate/plate_qs.hpp"

#include <map>
#include <string>
#include <vector>

namespace poroplate {

struct HomogenizeResult {
  EffectiveModel model;
  TensorReport report;
  std::map<int, CorrectorSet> correctors;
  std::map<int, GeometryReport> geometry;
};

// Cell problems for every phase, then the plate-level model and its report.
HomogenizeResult homogenize(const RunConfig& cfg);

// Single-phase variant with the cell geometry given directly.
HomogenizeResult homogenize(const RunConfig& cfg, const GeometrySpec& geometry);

// Saved model when the config names one, otherwise a fresh homogenization.
EffectiveModel effective_model_for(const RunConfig& cfg);

struct SimulationResult {
  DiscreteOperators ops;
  AssembledLoads loads;
  Trajectory trajectory;
  std::vector<std::string> warnings;
};

SimulationResult simulate(const RunConfig& cfg, const EffectiveModel& model, bool with_ledger = true);

}  // namespace poroplate
