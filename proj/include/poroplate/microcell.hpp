#pragma once

#include "poroplate/common.hpp"
#include "poroplate/mandel.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace poroplate {

struct PhaseSpec {
  int id = 0;
  Stiffness elasticity;
  std::optional<double> fluid_fraction_target;
};

// Geometry primitives on the unit torus. Axes are 1-based as in (y1,y2,y3).
struct GeometrySpec {
  enum class Kind { FullSolid, Layer, CenteredInclusion, Channel, Mask };
  Kind kind = Kind::FullSolid;
  int axis = 3;        // layer normal or channel direction
  double size = 0.0;   // layer thickness, inclusion radius or channel width
  std::vector<std::uint8_t> mask;  // explicit mask, 1 = fluid

  static GeometrySpec full_solid() { return {}; }
  static GeometrySpec layer(int axis, double d) { return {Kind::Layer, axis, d, {}}; }
  static GeometrySpec centered_inclusion(double r) {
    return {Kind::CenteredInclusion, 3, r, {}};
  }
  static GeometrySpec channel(int axis, double w) { return {Kind::Channel, axis, w, {}}; }
  static GeometrySpec explicit_mask(std::vector<std::uint8_t> m) {
    return {Kind::Mask, 3, 0.0, std::move(m)};
  }
};

// Homology of a voxel phase on the torus: which integer translations are
// realized by closed paths inside the phase.
struct WindingInfo {
  int rank = 0;
  Eigen::Matrix3d basis = Eigen::Matrix3d::Zero();  // first `rank` columns orthonormal
  std::array<bool, 3> spans{false, false, false};   // some loop advances along axis d
  bool contains(const Vec3& v, double tol = 1e-9) const;
};

struct GeometryReport {
  bool solid_connected = false;
  bool fluid_connected = false;
  double fluid_fraction = 0.0;
  std::array<bool, 3> percolation{false, false, false};
  std::array<bool, 3> solid_wraps{false, false, false};
  std::size_t fluid_voxels = 0;
  std::size_t solid_voxels = 0;
  int solid_components = 0;
  int fluid_components = 0;
  WindingInfo solid_winding;
  WindingInfo fluid_winding;
};

class CellMicrostructure {
 public:
  CellMicrostructure(int n, std::vector<std::uint8_t> fluid, PhaseSpec phase);

  int resolution() const { return n_; }
  double h() const { return 1.0 / n_; }
  const PhaseSpec& phase() const { return phase_; }
  const std::vector<std::uint8_t>& fluid_mask() const { return fluid_; }

  // Voxel (i,j,k) spans [i,i+1]h x [j,j+1]h x [k,k+1]h; indices wrap.
  std::size_t voxel(int i, int j, int k) const;
  bool is_fluid(int i, int j, int k) const { return fluid_[voxel(i, j, k)] != 0; }
  std::size_t fluid_count() const;
  double fluid_fraction() const;

 private:
  int n_;
  std::vector<std::uint8_t> fluid_;
  PhaseSpec phase_;
};

CellMicrostructure build_cell(int resolution, const GeometrySpec& geometry, const PhaseSpec& phase);
GeometryReport check_geometry(const CellMicrostructure& cell);

// Connected components and winding of one phase (value 1 or 0 in `mask`).
WindingInfo phase_winding(int n, const std::vector<std::uint8_t>& mask, std::uint8_t value,
                          int* components);

std::vector<std::uint8_t> read_mask_file(const std::string& path, int* n);
void write_mask_file(const std::string& path, int n, const std::vector<std::uint8_t>& mask);

// Plate scale layout.
struct LayerSpec {
  double lo = -0.5, hi = 0.5;
  int phase = 0;
};

struct RegionSpec {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  std::vector<LayerSpec> column;
};

struct PhaseDensity {
  double fluid = 1.0;
  double solid = 1.0;
};

struct PlatePhaseMap {
  double lx = 1.0, ly = 1.0;
  std::vector<RegionSpec> regions;
  std::map<int, PhaseDensity> densities;
};

// Validates and normalizes (columns sorted by x3).
PlatePhaseMap build_phase_map(const PlatePhaseMap& layout);

}  // namespace poroplate
