#include "poroplate/cellsolve.hpp"

#include "poroplate/mandel.hpp"

#include <cmath>
#include <numeric>

namespace poroplate {

namespace {

struct Gauss2 {
  std::array<Vec3, 8> pts;
  double weight = 1.0 / 8.0;
  Gauss2() {
    const double a = 0.5 - 0.5 / std::sqrt(3.0), b = 0.5 + 0.5 / std::sqrt(3.0);
    for (int q = 0; q < 8; ++q) pts[q] = Vec3((q & 1) ? b : a, (q & 2) ? b : a, (q & 4) ? b : a);
  }
};
const Gauss2 kGauss;

inline double shape(int a, const Vec3& x) {
  double v = 1.0;
  for (int d = 0; d < 3; ++d) v *= ((a >> d) & 1) ? x(d) : 1.0 - x(d);
  return v;
}

inline Vec3 shape_grad(int a, const Vec3& x) {
  Vec3 g;
  for (int d = 0; d < 3; ++d) {
    double v = ((a >> d) & 1) ? 1.0 : -1.0;
    for (int e = 0; e < 3; ++e)
      if (e != d) v *= ((a >> e) & 1) ? x(e) : 1.0 - x(e);
    g(d) = v;
  }
  return g;
}

// Mandel image of sym(e_c (x) v).
inline Vec6 sym_dyad(int c, const Vec3& v) {
  Mat3 m = Mat3::Zero();
  m.row(c) = v.transpose();
  return mandel::from_sym3(0.5 * (m + m.transpose()));
}

inline int wrap(int a, int n) { return ((a % n) + n) % n; }

inline int node_id(int i, int j, int k, int n) {
  return (wrap(i, n) * n + wrap(j, n)) * n + wrap(k, n);
}

std::array<int, 8> voxel_corner_nodes(int i, int j, int k, int n) {
  std::array<int, 8> out{};
  for (int a = 0; a < 8; ++a) out[a] = node_id(i + (a & 1), j + ((a >> 1) & 1), k + ((a >> 2) & 1), n);
  return out;
}

}  // namespace

Mat3 strain_operator(const Eigen::Matrix<double, 8, 3>& we, const Vec3& g, const Vec3& xi, double h) {
  Mat3 grad = Mat3::Zero();  // grad(i,d) = d w_i / d y_d
  for (int a = 0; a < 8; ++a) grad += we.row(a).transpose() * (shape_grad(a, xi) / h).transpose();
  Mat3 gm = Mat3::Zero();
  gm.col(2) = g;
  return 0.5 * (grad + grad.transpose()) + 0.5 * (gm + gm.transpose());
}

// ---------------------------------------------------------------- solid

SolidCellSystem::SolidCellSystem(const CellMicrostructure& cell, const CellSolveOptions& opt)
    : cell_(cell), opt_(opt) {
  const int n = cell.resolution();
  const double h = cell.h();
  const std::size_t nvox = static_cast<std::size_t>(n) * n * n;
  node_map_.assign(nvox, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (cell.is_fluid(i, j, k)) continue;
        solid_voxels_.push_back(static_cast<int>(cell.voxel(i, j, k)));
        auto corners = voxel_corner_nodes(i, j, k, n);
        std::array<int, 8> loc{};
        for (int a = 0; a < 8; ++a) {
          if (node_map_[corners[a]] < 0) {
            node_map_[corners[a]] = static_cast<int>(nodes_.size());
            nodes_.push_back(corners[a]);
          }
          loc[a] = node_map_[corners[a]];
        }
        voxel_nodes_.push_back(loc);
      }
  if (solid_voxels_.empty()) throw EmptySolid("no solid voxel");
  solid_volume_ = static_cast<double>(solid_voxels_.size()) * h * h * h;

  const auto geo = check_geometry(cell);
  if (!geo.solid_connected) throw SingularSystem("solid phase is not connected");
  const auto& wind = geo.solid_winding;
  if (wind.rank < 2) throw SingularSystem("solid wraps around fewer than two axes");
  if (wind.rank == 2) {
    // Kernel (z, r) with e(z) + sym(r (x) e3) = 0 survives periodicity.
    const bool w1 = wind.contains(Vec3::UnitX()), w2 = wind.contains(Vec3::UnitY()),
               w3 = wind.contains(Vec3::UnitZ());
    if (w1 && w2)
      fixed_g_ = {true, true, true};
    else if (w2 && w3)
      fixed_g_ = {true, false, false};
    else if (w1 && w3)
      fixed_g_ = {false, true, false};
    else
      throw SingularSystem("solid wraps along a skew lattice plane; kernel not removable");
  }

  // Element matrices, identical for every voxel.
  const Mat6& dm = cell.phase().elasticity.matrix();
  ke_.setZero();
  se_.setZero();
  const double vol = h * h * h;
  for (const auto& xi : kGauss.pts) {
    Eigen::Matrix<double, 6, 27> b;
    for (int a = 0; a < 8; ++a) {
      const Vec3 gr = shape_grad(a, xi) / h;
      for (int c = 0; c < 3; ++c) b.col(3 * a + c) = sym_dyad(c, gr);
    }
    // sym(g (x) e3): the constant g sits in the third column of the gradient.
    for (int c = 0; c < 3; ++c) b.col(24 + c) = sym_dyad(c, Vec3::UnitZ());
    const double w = kGauss.weight * vol;
    ke_ += w * b.transpose() * dm * b;
    se_ += w * dm * b;
  }

  const int ns = node_count();
  const Eigen::Index nwg = 3 * ns + 3;
  std::vector<Triplet> trip;
  trip.reserve(solid_voxels_.size() * 27 * 27);
  mean_weights_ = Vec::Zero(ns);
  auto dof = [ns](const std::array<int, 8>& loc, int e) { return e < 24 ? 3 * loc[e / 3] + e % 3 : 3 * ns + (e - 24); };
  for (const auto& loc : voxel_nodes_) {
    for (int a = 0; a < 27; ++a)
      for (int b = 0; b < 27; ++b) trip.emplace_back(dof(loc, a), dof(loc, b), ke_(a, b));
    for (int a = 0; a < 8; ++a) mean_weights_(loc[a]) += vol / 8.0;
  }
  k_ = from_triplets(nwg, nwg, trip);

  double diag_scale = 0;
  for (int d = 0; d < 3 * ns; ++d) diag_scale += std::abs(k_.coeff(d, d));
  diag_scale /= std::max(1, 3 * ns);
  Vec rows = Vec::Zero(nwg);
  for (int kk = 0; kk < k_.outerSize(); ++kk)
    for (SpMat::InnerIterator it(k_, kk); it; ++it) rows(it.row()) += std::abs(it.value());
  k_norm_ = rows.maxCoeff();

  // Translations are removed by pinning local node 0; the mean is restored afterwards.
  std::vector<Triplet> ft;
  for (int kk = 0; kk < k_.outerSize(); ++kk)
    for (SpMat::InnerIterator it(k_, kk); it; ++it) {
      const auto r = it.row(), c = it.col();
      const bool rg = r >= 3 * ns && fixed_g_[r - 3 * ns], cg = c >= 3 * ns && fixed_g_[c - 3 * ns];
      if (!rg && !cg && r >= 3 && c >= 3) ft.emplace_back(r, c, it.value());
    }
  for (int c = 0; c < 3; ++c) {
    if (fixed_g_[c]) ft.emplace_back(3 * ns + c, 3 * ns + c, diag_scale);
    ft.emplace_back(c, c, diag_scale);
  }
  full_ = from_triplets(nwg, nwg, ft);
  solver_.factor(full_, opt.solver);

  // Interface faces: fluid outward normal points into the solid.
  biot_rhs_ = Vec::Zero(nwg);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!cell.is_fluid(i, j, k)) continue;
        biot_rhs_(3 * ns + 2) += vol;
        const auto corners = voxel_corner_nodes(i, j, k, n);
        for (int d = 0; d < 3; ++d)
          for (int s : {-1, 1}) {
            int idx[3] = {i, j, k};
            idx[d] += s;
            if (cell.is_fluid(idx[0], idx[1], idx[2])) continue;
            for (int a = 0; a < 8; ++a) {
              if (((a >> d) & 1) != (s > 0 ? 1 : 0)) continue;
              biot_rhs_(3 * node_map_[corners[a]] + d) += 0.25 * h * h * s;
            }
          }
      }
  for (int p = 0; p < 6; ++p) load_ref_ = std::max(load_ref_, rhs_elastic(Vec6::Unit(p)).norm());
}

std::string SolidCellSystem::gauge_description() const {
  if (fixed_g_[0] && fixed_g_[1] && fixed_g_[2]) return "g fixed to 0 (solid does not wrap along y3)";
  if (fixed_g_[0]) return "g1 fixed to 0 (solid does not wrap along y1)";
  if (fixed_g_[1]) return "g2 fixed to 0 (solid does not wrap along y2)";
  return "none";
}

Vec SolidCellSystem::rhs_elastic(const Vec6& load) const {
  const int ns = node_count();
  Vec b = Vec::Zero(field_size());
  const Eigen::Matrix<double, 27, 1> fe = -(se_.transpose() * load);
  for (const auto& loc : voxel_nodes_) {
    for (int a = 0; a < 8; ++a)
      for (int c = 0; c < 3; ++c) b(3 * loc[a] + c) += fe(3 * a + c);
    for (int c = 0; c < 3; ++c) b(3 * ns + c) += fe(24 + c);
  }
  return b;
}

Vec SolidCellSystem::rhs_biot() const { return biot_rhs_; }

Vec SolidCellSystem::pack(const Vec& w, const Vec3& g) const {
  Vec x(field_size());
  x.head(3 * node_count()) = w;
  x.tail<3>() = g;
  return x;
}

std::vector<SolidCellSystem::Solution> SolidCellSystem::solve(const std::vector<Vec>& rhs) const {
  const int ns = node_count();
  std::vector<Solution> out;
  for (const auto& b : rhs) {
    Vec full = b;
    for (int c = 0; c < 3; ++c) {
      if (fixed_g_[c]) full(3 * ns + c) = 0.0;
      full(c) = 0.0;
    }
    Vec x = solver_.solve(full);
    Vec3 shift = Vec3::Zero();
    for (int v = 0; v < ns; ++v) shift += mean_weights_(v) * x.segment<3>(3 * v);
    shift /= solid_volume_;
    for (int v = 0; v < ns; ++v) x.segment<3>(3 * v) -= shift;
    Solution s;
    s.w = x.head(3 * ns);
    s.g = x.segment<3>(3 * ns);
    // Multiplier of the mean constraint, from testing with rigid translations.
    Vec3 lam = Vec3::Zero();
    for (int v = 0; v < ns; ++v) lam += b.segment<3>(3 * v);
    lam /= solid_volume_;
    // Residual of the ungauged equations, every (w,g) test function.
    Vec r = k_ * x - b;
    for (int v = 0; v < ns; ++v)
      for (int c = 0; c < 3; ++c) r(3 * v + c) += mean_weights_(v) * lam(c);
    Vec3 cons = Vec3::Zero();
    for (int v = 0; v < ns; ++v) cons += mean_weights_(v) * s.w.segment<3>(3 * v);
    const double denom = k_norm_ * x.norm() + std::max(b.norm(), load_ref_);
    s.residual = std::sqrt(r.squaredNorm() + cons.squaredNorm()) / (denom > 0 ? denom : 1.0);
    s.mean = cons / solid_volume_;
    out.push_back(std::move(s));
  }
  return out;
}

SolidCellSystem::Solution SolidCellSystem::solve(const Vec& rhs) const { return solve(std::vector<Vec>{rhs}).front(); }

Eigen::Matrix<double, 27, 1> SolidCellSystem::gather(const Vec& x, int voxel) const {
  const int ns = node_count();
  Eigen::Matrix<double, 27, 1> xe;
  const auto& loc = voxel_nodes_[voxel];
  for (int a = 0; a < 8; ++a)
    for (int c = 0; c < 3; ++c) xe(3 * a + c) = x(3 * loc[a] + c);
  for (int c = 0; c < 3; ++c) xe(24 + c) = x(3 * ns + c);
  return xe;
}

double SolidCellSystem::energy(const Vec& x, const Vec& y) const { return x.dot(k_ * y); }

Vec6 SolidCellSystem::stress_integral(const Vec& x) const {
  Vec6 s = Vec6::Zero();
  for (std::size_t e = 0; e < voxel_nodes_.size(); ++e) s += se_ * gather(x, static_cast<int>(e));
  return s;
}

double SolidCellSystem::fluid_trace(const Vec& x) const { return biot_rhs_.dot(x); }

Vec3 SolidCellSystem::mean(const Vec& x) const {
  Vec3 m = Vec3::Zero();
  for (int v = 0; v < node_count(); ++v) m += mean_weights_(v) * x.segment<3>(3 * v);
  return m / solid_volume_;
}

// ---------------------------------------------------------------- fluid

FluidCellSystem::FluidCellSystem(const CellMicrostructure& cell, const CellSolveOptions& opt)
    : cell_(cell), beta_(opt.stokes_beta), h_(cell.h()), accept_(opt.accept_residual) {
  const int n = cell.resolution();
  const double h = h_;
  if (cell.fluid_count() == 0) throw NoFluid("cell has no fluid voxel");
  const std::size_t nn = static_cast<std::size_t>(n) * n * n;
  p_map_.assign(nn, -1);
  vel_map_.assign(nn, -1);
  std::vector<std::array<int, 8>> vox;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!cell.is_fluid(i, j, k)) continue;
        auto corners = voxel_corner_nodes(i, j, k, n);
        for (int a = 0; a < 8; ++a)
          if (p_map_[corners[a]] < 0) {
            p_map_[corners[a]] = static_cast<int>(p_nodes_.size());
            p_nodes_.push_back(corners[a]);
          }
        vox.push_back(corners);
      }
  for (int id : p_nodes_) {
    const int i = id / (n * n), j = (id / n) % n, k = id % n;
    bool inner = true;
    for (int a = 0; a < 8 && inner; ++a)
      inner = cell.is_fluid(i - (a & 1), j - ((a >> 1) & 1), k - ((a >> 2) & 1));
    if (inner) {
      vel_map_[id] = static_cast<int>(vel_nodes_.size());
      vel_nodes_.push_back(id);
    }
  }

  // Reference element integrals.
  Eigen::Matrix<double, 8, 8> le = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 24> bdiv = Eigen::Matrix<double, 8, 24>::Zero();
  Eigen::Matrix<double, 8, 3> gl = Eigen::Matrix<double, 8, 3>::Zero();
  Eigen::Matrix<double, 8, 1> ml = Eigen::Matrix<double, 8, 1>::Zero();
  const double vol = h * h * h;
  for (const auto& xi : kGauss.pts) {
    const double w = kGauss.weight * vol;
    for (int a = 0; a < 8; ++a) {
      const Vec3 ga = shape_grad(a, xi) / h;
      ml(a) += w * shape(a, xi);
      gl.row(a) += w * ga.transpose();
      for (int b = 0; b < 8; ++b) {
        const Vec3 gb = shape_grad(b, xi) / h;
        le(a, b) += w * ga.dot(gb);
        for (int c = 0; c < 3; ++c) bdiv(a, 3 * b + c) += w * shape(a, xi) * gb(c);
      }
    }
  }

  const int nv = velocity_nodes(), np = pressure_nodes();
  const Eigen::Index nu = 3 * static_cast<Eigen::Index>(nv);
  const Eigen::Index ntot = nu + np + 1;
  const double stab = beta_ * h * h;
  std::vector<Triplet> lt, st, sys;
  mass_load_ = Vec::Zero(nv);
  p_weights_ = Vec::Zero(np);
  for (int c = 0; c < 3; ++c) grad_load_[c] = Vec::Zero(np);
  for (const auto& corners : vox) {
    for (int a = 0; a < 8; ++a) {
      const int pa = p_map_[corners[a]], va = vel_map_[corners[a]];
      p_weights_(pa) += ml(a);
      for (int c = 0; c < 3; ++c) grad_load_[c](pa) += gl(a, c);
      if (va >= 0) mass_load_(va) += ml(a);
      for (int b = 0; b < 8; ++b) {
        const int pb = p_map_[corners[b]], vb = vel_map_[corners[b]];
        st.emplace_back(pa, pb, stab * le(a, b));
        sys.emplace_back(nu + pa, nu + pb, -stab * le(a, b));
        if (va >= 0 && vb >= 0) {
          lt.emplace_back(va, vb, le(a, b));
          for (int c = 0; c < 3; ++c) sys.emplace_back(3 * va + c, 3 * vb + c, le(a, b));
        }
        // continuity row pa, velocity column (b, c)
        if (vb >= 0)
          for (int c = 0; c < 3; ++c) {
            sys.emplace_back(nu + pa, 3 * vb + c, -bdiv(a, 3 * b + c));
            sys.emplace_back(3 * vb + c, nu + pa, -bdiv(a, 3 * b + c));
          }
      }
    }
  }
  for (int r = 0; r < np; ++r) {
    sys.emplace_back(nu + r, ntot - 1, p_weights_(r));
    sys.emplace_back(ntot - 1, nu + r, p_weights_(r));
  }
  lap_ = from_triplets(nv, nv, lt);
  stab_ = from_triplets(np, np, st);
  system_ = from_triplets(ntot, ntot, sys);

  // The pressure constant is removed by pinning pressure node 0; the
  // multiplier of the mean constraint vanishes for every admissible load.
  const Eigen::Index pin = nu;
  std::vector<Triplet> gt;
  for (int kk = 0; kk < system_.outerSize(); ++kk)
    for (SpMat::InnerIterator it(system_, kk); it; ++it)
      if (it.row() < ntot - 1 && it.col() < ntot - 1 && it.row() != pin && it.col() != pin)
        gt.push_back(Triplet(it.row(), it.col(), it.value()));
  gt.emplace_back(pin, pin, -stab * le(0, 0));
  pinned_ = from_triplets(ntot - 1, ntot - 1, gt);

  // SPD block preconditioner: velocity Laplacian and lumped pressure mass.
  std::vector<Triplet> pt;
  for (int kk = 0; kk < lap_.outerSize(); ++kk)
    for (SpMat::InnerIterator it(lap_, kk); it; ++it)
      for (int c = 0; c < 3; ++c) pt.emplace_back(3 * it.row() + c, 3 * it.col() + c, it.value());
  for (int r = 0; r < np; ++r) pt.emplace_back(nu + r, nu + r, p_weights_(r));
  const SpMat pre = from_triplets(ntot - 1, ntot - 1, pt);
  solver_.factor(pinned_, opt.solver, &pre);
}

Vec FluidCellSystem::rhs(int direction) const {
  const int nv = velocity_nodes(), np = pressure_nodes();
  const Eigen::Index nu = 3 * static_cast<Eigen::Index>(nv);
  Vec b = Vec::Zero(nu + np + 1);
  for (int v = 0; v < nv; ++v) b(3 * v + direction - 1) = mass_load_(v);
  b.segment(nu, np) = -beta_ * h_ * h_ * grad_load_[direction - 1];
  return b;
}

FluidCellSystem::Solution FluidCellSystem::solve(int direction) const {
  if (direction < 1 || direction > 3) throw SchemaError("direction", "must be 1, 2 or 3");
  const int nv = velocity_nodes(), np = pressure_nodes();
  const Eigen::Index nu = 3 * static_cast<Eigen::Index>(nv);
  const Vec b = rhs(direction);
  Vec bp = b.head(nu + np);
  bp(nu) = 0.0;
  Vec x = Vec::Zero(nu + np + 1);
  x.head(nu + np) = solver_.solve(bp);
  x.segment(nu, np).array() -= p_weights_.dot(x.segment(nu, np)) / p_weights_.sum();
  Solution s;
  s.q = x.head(nu);
  s.pi = x.segment(nu, np);
  s.iterations = solver_.last_iterations();
  const Vec r = system_ * x - b;
  const double bn = std::max(b.norm(), 1e-300);
  s.momentum_residual = r.head(nu).norm() / bn;
  s.divergence_residual = r.segment(nu, np).norm() / bn;
  s.pressure_mean = p_weights_.dot(s.pi) / cell_.fluid_fraction();
  if (s.momentum_residual > accept_ || s.divergence_residual > accept_)
    throw SingularSystem("Stokes cell residual above tolerance");
  return s;
}

double FluidCellSystem::flux(const Vec& q, int j) const {
  double f = 0;
  for (int v = 0; v < velocity_nodes(); ++v) f += mass_load_(v) * q(3 * v + j - 1);
  return f;
}

double FluidCellSystem::dissipation(const Vec& q, const Vec& q2) const {
  double s = 0;
  const int nv = velocity_nodes();
  for (int c = 0; c < 3; ++c) {
    Vec a(nv), b(nv);
    for (int v = 0; v < nv; ++v) {
      a(v) = q(3 * v + c);
      b(v) = q2(3 * v + c);
    }
    s += a.dot(lap_ * b);
  }
  return s;
}

double FluidCellSystem::stabilization(const Vec& pi, const Vec& pi2, int j) const {
  return pi2.dot(stab_ * pi) - beta_ * h_ * h_ * grad_load_[j - 1].dot(pi);
}

// ---------------------------------------------------------------- drivers

const ElasticCorrector* CorrectorSet::find(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& c : elastic)
    if (c.i == i && c.j == j) return &c;
  return nullptr;
}

namespace {

const std::array<std::pair<int, int>, 6> kPairs = {{{1, 1}, {2, 2}, {3, 3}, {1, 2}, {1, 3}, {2, 3}}};

void accept(const SolidCellSystem::Solution& s, double tol, const char* what) {
  if (!(s.residual <= tol))
    throw IncompatibleCellProblem(std::string(what) + ": residual " + std::to_string(s.residual) +
                                  " on the removed rigid-shear kernel; the load does not vanish on it");
}

ElasticCorrector to_elastic(const SolidCellSystem::Solution& s, int i, int j) {
  ElasticCorrector c;
  c.i = i;
  c.j = j;
  c.w = s.w;
  c.g = s.g;
  c.mean = s.mean;
  c.residual = s.residual;
  return c;
}

StokesCellSolution to_stokes(FluidCellSystem::Solution&& s, int dir) {
  StokesCellSolution out;
  out.direction = dir;
  out.q = std::move(s.q);
  out.pi = std::move(s.pi);
  out.momentum_residual = s.momentum_residual;
  out.divergence_residual = s.divergence_residual;
  out.pressure_mean = s.pressure_mean;
  return out;
}

}  // namespace

ElasticCorrector solve_elastic_corrector(const CellMicrostructure& cell, int i, int j, const CellSolveOptions& opt) {
  if (i < 1 || i > 3 || j < 1 || j > 3) throw SchemaError("load", "indices must lie in 1..3");
  if (i > j) std::swap(i, j);
  SolidCellSystem sys(cell, opt);
  auto s = sys.solve(sys.rhs_elastic(mandel::dyad3(i - 1, j - 1)));
  accept(s, opt.accept_residual, "elastic corrector");
  return to_elastic(s, i, j);
}

BiotCorrector solve_biot_corrector(const CellMicrostructure& cell, const CellSolveOptions& opt) {
  SolidCellSystem sys(cell, opt);
  auto s = sys.solve(sys.rhs_biot());
  accept(s, opt.accept_residual, "Biot corrector");
  return BiotCorrector{s.w, s.g, s.mean, s.residual};
}

StokesCellSolution solve_stokes_cell(const CellMicrostructure& cell, int direction, const CellSolveOptions& opt) {
  FluidCellSystem sys(cell, opt);
  return to_stokes(sys.solve(direction), direction);
}

CorrectorSet solve_all(const CellMicrostructure& cell, const CellSolveOptions& opt) {
  CorrectorSet set;
  set.phase_id = cell.phase().id;
  auto solid = std::make_shared<SolidCellSystem>(cell, opt);
  std::vector<Vec> rhs;
  for (auto [i, j] : kPairs) rhs.push_back(solid->rhs_elastic(mandel::dyad3(i - 1, j - 1)));
  rhs.push_back(solid->rhs_biot());
  auto sol = solid->solve(rhs);
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    accept(sol[p], opt.accept_residual, "elastic corrector");
    set.elastic.push_back(to_elastic(sol[p], kPairs[p].first, kPairs[p].second));
  }
  const auto& sb = sol.back();
  if (sb.residual <= opt.accept_residual) {
    set.biot = BiotCorrector{sb.w, sb.g, sb.mean, sb.residual};
  } else {
    set.biot_status = "no solution: fluid source does not vanish on the rigid-shear kernel (" +
                      solid->gauge_description() + "), residual " + std::to_string(sb.residual);
  }
  set.solid = solid;
  if (cell.fluid_count() > 0) {
    auto fluid = std::make_shared<FluidCellSystem>(cell, opt);
    for (int d = 1; d <= 3; ++d) set.stokes.push_back(to_stokes(fluid->solve(d), d));
    set.fluid = fluid;
  }
  return set;
}

}  // namespace poroplate
