#pragma once

#include "poroplate/common.hpp"
#include "poroplate/microcell.hpp"
#include "poroplate/sparse.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace poroplate {

struct CellSolveOptions {
  double stokes_beta = 0.05;
  SolverOptions solver;
  // Relative residual above which a solved cell problem is rejected.
  double accept_residual = 1e-8;
};

// Strain of (w,g): e_y(w) + sym(g (x) e3), for one trilinear voxel with nodal
// values `we` (8 nodes x 3 components, node index a = ax + 2 ay + 4 az).
Mat3 strain_operator(const Eigen::Matrix<double, 8, 3>& we, const Vec3& g, const Vec3& xi, double h);

// Solid phase discretization: trilinear hexahedra on solid voxels, nodal
// vector field w on solid nodes plus the constant g and three mean multipliers.
class SolidCellSystem {
 public:
  SolidCellSystem(const CellMicrostructure& cell, const CellSolveOptions& opt);

  const CellMicrostructure& cell() const { return cell_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<int>& nodes() const { return nodes_; }  // global node ids
  int local_node(int global) const { return node_map_[global]; }
  Eigen::Index field_size() const { return 3 * node_count() + 3; }  // w then g

  // Components of g fixed to zero to remove the rigid-shear kernel of a
  // solid that does not wrap around every axis.
  const std::array<bool, 3>& fixed_g() const { return fixed_g_; }
  std::string gauge_description() const;

  // Right-hand sides on the (w,g) block.
  Vec rhs_elastic(const Vec6& load_mandel) const;
  Vec rhs_biot() const;  // l(z,r) = integral over fluid of (div z + r3)

  struct Solution {
    Vec w;
    Vec3 g = Vec3::Zero();
    Vec3 mean = Vec3::Zero();
    // Normwise backward error ||r|| / (||K|| ||x|| + max(||b||, L)) against
    // the ungauged system, L the largest unit-strain load norm.
    double residual = 0.0;
  };
  Solution solve(const Vec& rhs) const;
  std::vector<Solution> solve(const std::vector<Vec>& rhs) const;

  Vec pack(const Vec& w, const Vec3& g) const;
  // a((w,g),(w',g')) with the solid elasticity.
  double energy(const Vec& x, const Vec& y) const;
  // Integral over the solid of A c(w,g), as a Mandel 6-vector.
  Vec6 stress_integral(const Vec& x) const;
  // Integral over the fluid of tr c(w,g), equal to rhs_biot . x.
  double fluid_trace(const Vec& x) const;
  Vec3 mean(const Vec& x) const;  // solid average of w
  const SpMat& stiffness() const { return k_; }
  double solid_volume() const { return solid_volume_; }
  double fluid_volume() const { return 1.0 - solid_volume_; }

  // Element data shared by every voxel.
  const Eigen::Matrix<double, 27, 27>& element_matrix() const { return ke_; }

 private:
  Eigen::Matrix<double, 27, 1> gather(const Vec& x, int voxel) const;

  CellMicrostructure cell_;
  CellSolveOptions opt_;
  std::vector<int> nodes_, node_map_;
  std::vector<int> solid_voxels_;
  std::vector<std::array<int, 8>> voxel_nodes_;  // local node ids per solid voxel
  Eigen::Matrix<double, 27, 27> ke_;
  Eigen::Matrix<double, 6, 27> se_;  // integral of D B over a voxel
  SpMat k_;                          // (w,g) block
  SpMat full_;                       // gauged, node 0 pinned
  Vec mean_weights_;                 // per local node
  std::array<bool, 3> fixed_g_{false, false, false};
  double solid_volume_ = 0.0;
  double k_norm_ = 0.0;              // max absolute row sum of k_
  double load_ref_ = 0.0;
  SymmetricSolver solver_;
  Vec biot_rhs_;
};

// Fluid phase: equal-order trilinear velocity/pressure with pressure-gradient
// stabilization, no slip on every node touching a solid voxel.
class FluidCellSystem {
 public:
  FluidCellSystem(const CellMicrostructure& cell, const CellSolveOptions& opt);

  int velocity_nodes() const { return static_cast<int>(vel_nodes_.size()); }
  int pressure_nodes() const { return static_cast<int>(p_nodes_.size()); }
  const std::vector<int>& velocity_node_ids() const { return vel_nodes_; }
  const std::vector<int>& pressure_node_ids() const { return p_nodes_; }
  double beta() const { return beta_; }

  struct Solution {
    Vec q;   // 3 per velocity node
    Vec pi;  // per pressure node
    double momentum_residual = 0.0;
    double divergence_residual = 0.0;
    double pressure_mean = 0.0;
    int iterations = 0;
  };
  Solution solve(int direction) const;  // direction 1..3

  // Integral of q_j over the fluid.
  double flux(const Vec& q, int j) const;
  // Integral of grad q : grad q'.
  double dissipation(const Vec& q, const Vec& q2) const;
  // beta h^2 (grad pi' - e_j, grad pi).
  double stabilization(const Vec& pi, const Vec& pi2, int j) const;
  bool iterative() const { return solver_.iterative(); }

 private:
  Vec rhs(int direction) const;

  CellMicrostructure cell_;
  double beta_ = 0.05;
  double h_ = 0;
  std::vector<int> vel_nodes_, vel_map_, p_nodes_, p_map_;
  SpMat lap_;       // scalar Laplacian on velocity nodes
  SpMat stab_;      // beta h^2 Laplacian on pressure nodes
  SpMat system_;
  SpMat pinned_;
  std::array<Vec, 3> grad_load_;  // integral of d_j N_r per pressure node
  Vec mass_load_;                 // integral of N_a per velocity node
  Vec p_weights_;
  SymmetricSolver solver_;
  double accept_ = 1e-8;
};

struct ElasticCorrector {
  int i = 1, j = 1;  // symmetric load pair, 1 based, i <= j
  Vec w;             // 3 per solid node
  Vec3 g = Vec3::Zero();
  Vec3 mean = Vec3::Zero();
  double residual = 0.0;
};

struct BiotCorrector {
  Vec w;
  Vec3 g = Vec3::Zero();
  Vec3 mean = Vec3::Zero();
  double residual = 0.0;
};

struct StokesCellSolution {
  int direction = 1;
  Vec q;
  Vec pi;
  double momentum_residual = 0.0;
  double divergence_residual = 0.0;
  double pressure_mean = 0.0;
};

struct CorrectorSet {
  int phase_id = 0;
  std::vector<ElasticCorrector> elastic;  // (1,1),(2,2),(3,3),(1,2),(1,3),(2,3)
  std::optional<BiotCorrector> biot;
  std::string biot_status = "ok";  // reason when biot is absent
  std::vector<StokesCellSolution> stokes;
  std::shared_ptr<const SolidCellSystem> solid;
  std::shared_ptr<const FluidCellSystem> fluid;

  const ElasticCorrector* find(int i, int j) const;
};

ElasticCorrector solve_elastic_corrector(const CellMicrostructure& cell, int i, int j,
                                         const CellSolveOptions& opt = {});
BiotCorrector solve_biot_corrector(const CellMicrostructure& cell, const CellSolveOptions& opt = {});
StokesCellSolution solve_stokes_cell(const CellMicrostructure& cell, int direction,
                                     const CellSolveOptions& opt = {});
// Batches all cell problems. A Biot problem that has no solution (fluid
// film separating the solid) is reported through biot_status instead of
// throwing.
CorrectorSet solve_all(const CellMicrostructure& cell, const CellSolveOptions& opt = {});

}  // namespace poroplate
