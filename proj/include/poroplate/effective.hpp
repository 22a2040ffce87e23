#pragma once

#include "poroplate/cellsolve.hpp"
#include "poroplate/common.hpp"
#include "poroplate/microcell.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace poroplate {

// Reduced in-plane quadratic form of one phase, 3x3 in the 2D Mandel basis
// (e1e1, e2e2, (e1e2 + e2e1)/sqrt2).
struct MembraneTensor {
  int phase_id = 0;
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  double symmetry_defect = 0.0;  // before symmetrization
  double nu = 0.0;               // smallest eigenvalue
  double upper = 0.0;            // largest eigenvalue
};

MembraneTensor membrane_tensor(const CorrectorSet& correctors);

// Everything a phase contributes, independent of where it sits in the plate.
struct PhaseCoefficients {
  int phase_id = 0;
  double fluid_fraction = 0.0;
  MembraneTensor membrane;
  Mat3 b_h = Mat3::Zero();  // solid stress of the Biot corrector
  Mat3 c_h = Mat3::Zero();  // fluid trace of the elastic correctors
  Mat3 theta = Mat3::Zero();
  double m0 = 0.0;
  Mat3 k = Mat3::Zero();            // flux form, symmetrized
  Mat3 k_dissipation = Mat3::Zero();  // integral of grad q^i : grad q^j
  Mat3 k_stabilization = Mat3::Zero();  // pressure stabilization remainder
  bool biot_available = true;
  std::string biot_status = "ok";
};

// Fluid-free phases get zero coupling, storage and permeability.
PhaseCoefficients phase_coefficients(const CorrectorSet& correctors);

struct LayerCoefficients {
  double lo = -0.5, hi = 0.5;
  int phase = 0;
  double fluid_fraction = 0.0;
  Mat3 theta = Mat3::Zero();
  Mat3 b_h = Mat3::Zero();
  Mat3 c_h = Mat3::Zero();
  double m0 = 0.0;
  Mat3 k = Mat3::Zero();
};

struct RegionCoefficients {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  Mat6 a_hom = Mat6::Zero();  // (membrane strain, bending strain) Mandel pairs
  double kappa = 0.0;         // effective density
  std::vector<LayerCoefficients> layers;
  // A column without fluid anywhere carries no pressure unknowns.
  bool elastic_only() const;
};

struct PlateTensorField {
  std::vector<Mat6> a_hom;  // per region
};

struct EffectiveModel {
  double lx = 1.0, ly = 1.0;
  std::vector<RegionCoefficients> regions;
  std::map<int, PhaseCoefficients> phases;
};

// Closed-form thickness moments m_k = integral of x3^k over [lo, hi].
double thickness_moment(double lo, double hi, int k);

PlateTensorField assemble_plate_tensor(const PlatePhaseMap& map,
                                       const std::map<int, MembraneTensor>& tensors);

struct CouplingStorageField {
  std::vector<std::vector<Mat3>> theta, c_h;  // [region][layer]
  std::vector<std::vector<double>> m0;
};
CouplingStorageField assemble_coupling_storage(const std::map<int, PhaseCoefficients>& phases,
                                               const PlatePhaseMap& map);
std::vector<std::vector<Mat3>> assemble_permeability(const std::map<int, PhaseCoefficients>& phases,
                                                     const PlatePhaseMap& map);

EffectiveModel assemble_model(const PlatePhaseMap& map, const std::map<int, PhaseCoefficients>& phases);

struct TensorCheck {
  std::string name;
  std::string scope;  // region or phase label
  double value = 0.0;
  double tolerance = 0.0;
  std::string status;  // pass, fail, vacuous, degenerate axis
  std::string note;
};

struct TensorReport {
  std::vector<TensorCheck> checks;
  double nu_a_hom = 0.0;
  double max_a_hom = 0.0;
  std::optional<double> nu_m0;  // absent when no phase carries fluid
  bool passed() const;
  std::string to_json() const;
};

struct TensorTolerances {
  double symmetry = 1e-12;
  double duality = 1e-8;
  double permeability_energy = 1e-8;
};

TensorReport verify_tensor_properties(const EffectiveModel& model, const TensorTolerances& tol = {});

// Serialized form: <stem>.json (metadata, block table) and <stem>.bin
// (little-endian f64 blocks).
void export_model(const EffectiveModel& model, const std::string& stem);
EffectiveModel import_model(const std::string& stem);

}  // namespace poroplate
