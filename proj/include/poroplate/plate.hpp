#pragma once

#include "poroplate/common.hpp"
#include "poroplate/effective.hpp"
#include "poroplate/sparse.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace poroplate {

enum class PlateMode { Quasistatic, Inertial };

struct PlateGrid {
  int nx = 4, ny = 4, nz = 4;
};

// DOF layout.
//   node n = ix * ny + iy, cell c = ix * ny + iy (lower left corner node)
//   u = [a; b]: a at 2n + comp, b at n_a + 4n + k with k in (value, d/dx, d/dy, d2/dxdy)
//   p (full) at c * (nz + 1) + kz, x3 node kz at -1/2 + kz / nz
struct DiscreteSpaces {
  PlateGrid grid;
  PlateMode mode = PlateMode::Quasistatic;
  double lx = 1.0, ly = 1.0;
  int n_a = 0, n_b = 0, n_p = 0;
  int a_multipliers = 2;
  int b_multipliers = 1;

  int n_u() const { return n_a + n_b; }
  int n_nodes() const { return grid.nx * grid.ny; }
  int node(int ix, int iy) const;  // indices wrap
  int a_dof(int node, int comp) const { return 2 * node + comp; }
  int b_dof(int node, int k) const { return n_a + 4 * node + k; }
  int p_dof(int cell, int kz) const { return cell * (grid.nz + 1) + kz; }
  double hx() const { return lx / grid.nx; }
  double hy() const { return ly / grid.ny; }
  double hz() const { return 1.0 / grid.nz; }
};

DiscreteSpaces build_spaces(const PlateGrid& grid, PlateMode mode, double lx = 1.0, double ly = 1.0);

struct AssembleOptions {
  bool zero_coupling = false;  // drop Theta everywhere (decoupling check)
};

struct DiscreteOperators {
  DiscreteSpaces spaces;
  SpMat a_plate;   // n_u x n_u
  SpMat c_op;      // n_u x n_p_active
  SpMat m_storage; // n_p_active
  SpMat d_darcy;   // n_p_active
  SpMat b_mass;    // n_b x n_b, weighted by the effective density
  SpMat constraints;  // (a_multipliers + b_multipliers) x n_u
  std::vector<int> cell_region;
  std::vector<int> p_active;  // full p index -> active index or -1
  std::vector<int> p_full;    // active index -> full p index
  // Unweighted pressure-space mass on the full p grid, used for source fields.
  SpMat p_gram;
  int removed_p = 0;
  std::vector<std::string> warnings;

  int n_u() const { return spaces.n_u(); }
  int n_p() const { return static_cast<int>(p_full.size()); }
  int n_mult() const { return static_cast<int>(constraints.rows()); }
};

// Pressure DOFs whose support carries no fluid are dropped.
DiscreteOperators assemble(const EffectiveModel& model, const DiscreteSpaces& spaces,
                           const AssembleOptions& opt = {});

// Symmetric monolithic matrix
//   [ A + mass_coef*Mb   L^T  -C           ]
//   [ L                  0    0            ]
//   [ -C^T               0    -(M + beta D) ]
// where Mb acts on the b block only.
SpMat monolithic_matrix(const DiscreteOperators& ops, double beta, double mass_coef = 0.0);

// Bicubic Hermite shape functions on the reference cell [0,1]^2, scaled to a
// physical cell hx x hy. Local function 4*corner + k, corner = 2*sy + sx.
struct BfsEval {
  std::array<double, 16> v, dx, dy, dxx, dyy, dxy;
};
BfsEval bfs_eval(double xi, double eta, double hx, double hy);

// (membrane strain, curvature) in Mandel form at local point (xi, eta) of cell (ix, iy).
Vec6 generalized_strain(const DiscreteSpaces& s, const Vec& u, int ix, int iy, double xi, double eta);

// Interpolation of smooth fields onto the discrete spaces.
Vec interpolate_b(const DiscreteSpaces& s, const std::function<std::array<double, 4>(double, double)>& f);
Vec interpolate_a(const DiscreteSpaces& s, const std::function<std::array<double, 2>(double, double)>& f);

// ----------------------------------------------------------------- loads

// One time sample. Plane fields are nodal values (n_nodes); g is on the full
// pressure grid. Empty vectors mean zero.
struct LoadSample {
  double t = 0.0;
  Vec f1, f2, f3;  // in-plane and transverse force densities
  Vec m1, m2;      // moment density, pairs with -grad theta3
  Vec g;           // volumetric source
};

struct LoadSpec {
  std::vector<LoadSample> samples;  // sorted by time; none means zero loads
  Vec t0;  // full pressure grid, empty means zero
  Vec b0;  // b DOFs (inertial), empty means zero
  Vec b1;  // b DOFs (inertial), empty means zero
};

// Assembled load vectors, linearly interpolated in time.
struct AssembledLoads {
  int n_u = 0, n_a = 0, n_p = 0;
  std::vector<double> times;
  std::vector<Vec> f;  // n_u
  std::vector<Vec> g;  // n_p active
  Vec t0;              // n_p active
  Vec b0, b1;          // n_b
  std::vector<std::string> warnings;

  Vec f_at(double t) const;
  Vec g_at(double t) const;
  // Exact integral over [t0, t1] of dF/dt . w(t), w linear between w0 and w1.
  double fdot_work(double ta, double tb, const Vec& w0, const Vec& w1, int offset = 0, int count = -1) const;
  // Largest sample spacing (0 for a single sample).
  double max_spacing() const;
  bool is_zero() const;
};

AssembledLoads assemble_loads(const DiscreteOperators& ops, const LoadSpec& spec);

// ----------------------------------------------------------------- state

struct PlateState {
  double t = 0.0;
  Vec u;  // [a; b]
  Vec p;  // active pressure DOFs
  Vec v;  // d b / dt (inertial only)

  Eigen::Ref<const Vec> a(const DiscreteSpaces& s) const { return u.head(s.n_a); }
  Eigen::Ref<const Vec> b(const DiscreteSpaces& s) const { return u.tail(s.n_b); }
  double norm() const;
};

PlateState zero_state(const DiscreteOperators& ops);
// Active pressure vector back on the full grid (removed DOFs are zero).
Vec full_pressure(const DiscreteOperators& ops, const Vec& p);

enum class Scheme { BackwardEuler, CrankNicolson, ImplicitMidpoint };
Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct TimeSettings {
  double dt = 0.01;
  double t_end = 0.1;
  Scheme scheme = Scheme::BackwardEuler;
  int stride = 1;
  SolverOptions solver{};
  int steps() const;
};

struct LedgerRow {
  int step = 0;
  double time = 0.0;
  double e_kinetic = 0.0;
  double e_elastic = 0.0;
  double e_pressure = 0.0;
  double d_cumulative = 0.0;
  double w_loads = 0.0;
  double residual = 0.0;
};

struct EnergyLedger {
  bool inertial = false;
  double e_initial = 0.0;  // energy of the initial state
  std::vector<LedgerRow> rows;
  std::string to_csv() const;
  double max_abs_residual() const;
};

struct Trajectory {
  std::vector<PlateState> states;  // every stride-th step, first and last always kept
  EnergyLedger ledger;
  PlateState final_state;
};

}  // namespace poroplate
