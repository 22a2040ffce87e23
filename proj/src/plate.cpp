#include "poroplate/plate.hpp"

#include "poroplate/mandel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace poroplate {

namespace {

struct Rule {
  std::vector<double> x, w;  // on [0, 1]
};

Rule gauss(int n) {
  Rule r;
  if (n == 3) {
    const double a = std::sqrt(0.6);
    r.x = {0.5 * (1 - a), 0.5, 0.5 * (1 + a)};
    r.w = {5.0 / 18, 8.0 / 18, 5.0 / 18};
  } else if (n == 4) {
    const double a = std::sqrt(3.0 / 7 - 2.0 / 7 * std::sqrt(1.2));
    const double b = std::sqrt(3.0 / 7 + 2.0 / 7 * std::sqrt(1.2));
    const double wa = (18 + std::sqrt(30.0)) / 36, wb = (18 - std::sqrt(30.0)) / 36;
    r.x = {0.5 * (1 - b), 0.5 * (1 - a), 0.5 * (1 + a), 0.5 * (1 + b)};
    r.w = {0.5 * wb, 0.5 * wa, 0.5 * wa, 0.5 * wb};
  } else {
    throw std::logic_error("unsupported rule");
  }
  return r;
}

// Cubic Hermite pieces on [0,1]: value at 0/1 and slope at 0/1 (slope scaled by h).
void hermite(double t, double h, int which, double out[3]) {
  const double t2 = t * t, t3 = t2 * t;
  switch (which) {
    case 0: out[0] = 1 - 3 * t2 + 2 * t3; out[1] = -6 * t + 6 * t2; out[2] = -6 + 12 * t; break;
    case 1: out[0] = 3 * t2 - 2 * t3; out[1] = 6 * t - 6 * t2; out[2] = 6 - 12 * t; break;
    case 2: out[0] = h * (t - 2 * t2 + t3); out[1] = h * (1 - 4 * t + 3 * t2); out[2] = h * (-4 + 6 * t); break;
    default: out[0] = h * (t3 - t2); out[1] = h * (3 * t2 - 2 * t); out[2] = h * (6 * t - 2); break;
  }
}

struct Bilinear {
  std::array<double, 4> v, dx, dy;
};

Bilinear bilinear(double xi, double eta, double hx, double hy) {
  Bilinear b;
  for (int c = 0; c < 4; ++c) {
    const int sx = c & 1, sy = c >> 1;
    const double fx = sx ? xi : 1 - xi, fy = sy ? eta : 1 - eta;
    const double gx = sx ? 1.0 : -1.0, gy = sy ? 1.0 : -1.0;
    b.v[c] = fx * fy;
    b.dx[c] = gx * fy / hx;
    b.dy[c] = fx * gy / hy;
  }
  return b;
}

struct CellCorners {
  std::array<int, 4> node;
};

CellCorners corners(const DiscreteSpaces& s, int ix, int iy) {
  CellCorners c;
  for (int k = 0; k < 4; ++k) c.node[k] = s.node(ix + (k & 1), iy + (k >> 1));
  return c;
}

// Local u index: a in [0, 8) as 2*corner + comp, b in [8, 24) as 8 + 4*corner + k.
std::array<int, 24> local_to_global(const DiscreteSpaces& s, const CellCorners& cc) {
  std::array<int, 24> g{};
  for (int c = 0; c < 4; ++c) {
    g[2 * c] = s.a_dof(cc.node[c], 0);
    g[2 * c + 1] = s.a_dof(cc.node[c], 1);
    for (int k = 0; k < 4; ++k) g[8 + 4 * c + k] = s.b_dof(cc.node[c], k);
  }
  return g;
}

// Generalized strain (membrane Mandel, curvature Mandel) of each local function.
Eigen::Matrix<double, 6, 24> strain_matrix(const Bilinear& n, const BfsEval& b) {
  Eigen::Matrix<double, 6, 24> m = Eigen::Matrix<double, 6, 24>::Zero();
  const double r2 = mandel::kSqrt2;
  for (int c = 0; c < 4; ++c) {
    m(0, 2 * c) = n.dx[c];
    m(1, 2 * c + 1) = n.dy[c];
    m(2, 2 * c) = n.dy[c] / r2;
    m(2, 2 * c + 1) = n.dx[c] / r2;
  }
  for (int j = 0; j < 16; ++j) {
    m(3, 8 + j) = b.dxx[j];
    m(4, 8 + j) = b.dyy[j];
    m(5, 8 + j) = r2 * b.dxy[j];
  }
  return m;
}

Eigen::Vector3d plane_mandel(const Mat3& t) {
  return mandel::from_sym2(t.topLeftCorner<2, 2>());
}

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, std::abs(x)); }

// Thickness integrals of one column on the pressure grid.
struct ColumnIntegrals {
  Mat mass, darcy, gram;         // (nz+1)^2
  std::vector<Eigen::Vector3d> t0, t1;  // Theta moments against phi_k and x3 phi_k
};

ColumnIntegrals column_integrals(const RegionCoefficients& rc, int nz, bool zero_coupling) {
  ColumnIntegrals ci;
  const int np = nz + 1;
  const double hz = 1.0 / nz;
  ci.mass = Mat::Zero(np, np);
  ci.darcy = Mat::Zero(np, np);
  ci.gram = Mat::Zero(np, np);
  ci.t0.assign(np, Eigen::Vector3d::Zero());
  ci.t1.assign(np, Eigen::Vector3d::Zero());
  const Rule g = gauss(3);
  for (int j = 0; j < nz; ++j) {
    const double z0 = -0.5 + j * hz, z1 = z0 + hz;
    for (int q = 0; q < 3; ++q) {
      const double x3 = z0 + g.x[q] * hz, w = g.w[q] * hz;
      const double phi[2] = {(z1 - x3) / hz, (x3 - z0) / hz};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) ci.gram(j + a, j + b) += w * phi[a] * phi[b];
    }
    for (const auto& l : rc.layers) {
      const double s0 = std::max(z0, l.lo), s1 = std::min(z1, l.hi);
      if (s1 <= s0) continue;
      const Eigen::Vector3d th = zero_coupling ? Eigen::Vector3d::Zero() : plane_mandel(l.theta);
      const double k33 = l.k(2, 2);
      const double dphi[2] = {-1.0 / hz, 1.0 / hz};
      for (int q = 0; q < 3; ++q) {
        const double x3 = s0 + g.x[q] * (s1 - s0), w = g.w[q] * (s1 - s0);
        const double phi[2] = {(z1 - x3) / hz, (x3 - z0) / hz};
        for (int a = 0; a < 2; ++a) {
          ci.t0[j + a] += w * phi[a] * th;
          ci.t1[j + a] += w * x3 * phi[a] * th;
          for (int b = 0; b < 2; ++b) {
            ci.mass(j + a, j + b) += w * l.m0 * phi[a] * phi[b];
            ci.darcy(j + a, j + b) += w * k33 * dphi[a] * dphi[b];
          }
        }
      }
    }
  }
  return ci;
}

}  // namespace

int DiscreteSpaces::node(int ix, int iy) const {
  ix = ((ix % grid.nx) + grid.nx) % grid.nx;
  iy = ((iy % grid.ny) + grid.ny) % grid.ny;
  return ix * grid.ny + iy;
}

DiscreteSpaces build_spaces(const PlateGrid& grid, PlateMode mode, double lx, double ly) {
  if (grid.nx < 2 || grid.ny < 2)
    throw MinimumGrid("in-plane grid needs at least 2x2 cells, got " + std::to_string(grid.nx) + "x" +
                      std::to_string(grid.ny));
  if (grid.nz < 1) throw MinimumGrid("thickness grid needs at least one interval");
  if (!(lx > 0) || !(ly > 0)) throw BadGrid("plate extents must be positive");
  DiscreteSpaces s;
  s.grid = grid;
  s.mode = mode;
  s.lx = lx;
  s.ly = ly;
  const int nn = grid.nx * grid.ny;
  s.n_a = 2 * nn;
  s.n_b = 4 * nn;
  s.n_p = nn * (grid.nz + 1);
  s.a_multipliers = 2;
  s.b_multipliers = mode == PlateMode::Quasistatic ? 1 : 0;
  return s;
}

BfsEval bfs_eval(double xi, double eta, double hx, double hy) {
  BfsEval e;
  for (int c = 0; c < 4; ++c) {
    const int sx = c & 1, sy = c >> 1;
    for (int k = 0; k < 4; ++k) {
      const bool ddx = k == 1 || k == 3, ddy = k == 2 || k == 3;
      double fx[3], fy[3];
      hermite(xi, hx, ddx ? 2 + sx : sx, fx);
      hermite(eta, hy, ddy ? 2 + sy : sy, fy);
      const int j = 4 * c + k;
      e.v[j] = fx[0] * fy[0];
      e.dx[j] = fx[1] * fy[0] / hx;
      e.dy[j] = fx[0] * fy[1] / hy;
      e.dxx[j] = fx[2] * fy[0] / (hx * hx);
      e.dyy[j] = fx[0] * fy[2] / (hy * hy);
      e.dxy[j] = fx[1] * fy[1] / (hx * hy);
    }
  }
  return e;
}

DiscreteOperators assemble(const EffectiveModel& model, const DiscreteSpaces& s, const AssembleOptions& opt) {
  if (std::abs(model.lx - s.lx) > 1e-12 * s.lx || std::abs(model.ly - s.ly) > 1e-12 * s.ly)
    throw AlignmentError("plate extents of the model and the grid differ");
  const int nx = s.grid.nx, ny = s.grid.ny, nz = s.grid.nz;
  const double hx = s.hx(), hy = s.hy(), area = hx * hy;

  DiscreteOperators ops;
  ops.spaces = s;
  for (std::size_t r = 0; r < model.regions.size(); ++r) {
    const auto& rc = model.regions[r];
    for (double v : {rc.x0 / hx, rc.x1 / hx, rc.y0 / hy, rc.y1 / hy})
      if (!near_integer(v))
        throw AlignmentError("region " + std::to_string(r) + " boundary is not on a grid line");
    for (const auto& l : rc.layers) {
      auto it = model.phases.find(l.phase);
      if (l.fluid_fraction > 0 && it != model.phases.end() && !it->second.biot_available)
        throw IncompatibleCellProblem("phase " + std::to_string(l.phase) +
                                      " carries fluid but has no Biot corrector (" + it->second.biot_status + ")");
    }
  }
  ops.cell_region.assign(nx * ny, -1);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      const double cx = (ix + 0.5) * hx, cy = (iy + 0.5) * hy;
      for (std::size_t r = 0; r < model.regions.size(); ++r) {
        const auto& rc = model.regions[r];
        if (cx > rc.x0 && cx < rc.x1 && cy > rc.y0 && cy < rc.y1) {
          ops.cell_region[ix * ny + iy] = static_cast<int>(r);
          break;
        }
      }
      if (ops.cell_region[ix * ny + iy] < 0)
        throw RegionGap("no region covers cell (" + std::to_string(ix) + ", " + std::to_string(iy) + ")");
    }

  std::vector<ColumnIntegrals> columns;
  for (const auto& rc : model.regions) columns.push_back(column_integrals(rc, nz, opt.zero_coupling));

  const Rule g3 = gauss(3), g4 = gauss(4);
  std::vector<Triplet> ta, tc_full, tm, td, tg, tb;
  std::vector<Triplet> tl;
  const int nu = s.n_u(), npf = s.n_p;
  Vec b_integral = Vec::Zero(s.n_b);

  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      const int cell = ix * ny + iy;
      const int r = ops.cell_region[cell];
      const Mat6& ah = model.regions[r].a_hom;
      const auto cc = corners(s, ix, iy);
      const auto l2g = local_to_global(s, cc);

      Eigen::Matrix<double, 24, 24> ke = Eigen::Matrix<double, 24, 24>::Zero();
      Eigen::Matrix<double, 6, 24> sint = Eigen::Matrix<double, 6, 24>::Zero();
      for (int qx = 0; qx < 3; ++qx)
        for (int qy = 0; qy < 3; ++qy) {
          const double w = g3.w[qx] * g3.w[qy] * area;
          const auto bl = bilinear(g3.x[qx], g3.x[qy], hx, hy);
          const auto bf = bfs_eval(g3.x[qx], g3.x[qy], hx, hy);
          const auto bm = strain_matrix(bl, bf);
          ke.noalias() += w * bm.transpose() * ah * bm;
          sint += w * bm;
        }
      for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j)
          if (ke(i, j) != 0) ta.emplace_back(l2g[i], l2g[j], ke(i, j));

      // b mass and mean functional
      Eigen::Matrix<double, 16, 16> me = Eigen::Matrix<double, 16, 16>::Zero();
      Eigen::Matrix<double, 16, 1> mean = Eigen::Matrix<double, 16, 1>::Zero();
      for (int qx = 0; qx < 4; ++qx)
        for (int qy = 0; qy < 4; ++qy) {
          const double w = g4.w[qx] * g4.w[qy] * area;
          const auto bf = bfs_eval(g4.x[qx], g4.x[qy], hx, hy);
          Eigen::Map<const Eigen::Matrix<double, 16, 1>> v(bf.v.data());
          me.noalias() += w * v * v.transpose();
          mean += w * v;
        }
      const double kappa = model.regions[r].kappa;
      for (int i = 0; i < 16; ++i) {
        b_integral(l2g[8 + i] - s.n_a) += mean(i);
        for (int j = 0; j < 16; ++j)
          tb.emplace_back(l2g[8 + i] - s.n_a, l2g[8 + j] - s.n_a, kappa * me(i, j));
      }

      // pressure blocks
      const auto& ci = columns[r];
      for (int kz = 0; kz <= nz; ++kz) {
        const int pk = s.p_dof(cell, kz);
        const Eigen::Matrix<double, 24, 1> col =
            sint.topRows<3>().transpose() * ci.t0[kz] - sint.bottomRows<3>().transpose() * ci.t1[kz];
        for (int i = 0; i < 24; ++i)
          if (col(i) != 0) tc_full.emplace_back(l2g[i], pk, col(i));
        for (int lz = 0; lz <= nz; ++lz) {
          const int pl = s.p_dof(cell, lz);
          if (ci.mass(kz, lz) != 0) tm.emplace_back(pk, pl, area * ci.mass(kz, lz));
          if (ci.darcy(kz, lz) != 0) td.emplace_back(pk, pl, area * ci.darcy(kz, lz));
          if (ci.gram(kz, lz) != 0) tg.emplace_back(pk, pl, area * ci.gram(kz, lz));
        }
      }
    }

  ops.a_plate = from_triplets(nu, nu, ta);
  ops.b_mass = from_triplets(s.n_b, s.n_b, tb);
  ops.p_gram = from_triplets(npf, npf, tg);
  const SpMat c_full = from_triplets(nu, npf, tc_full);
  const SpMat m_full = from_triplets(npf, npf, tm);
  const SpMat d_full = from_triplets(npf, npf, td);

  // Active pressure DOFs: those with fluid in their support.
  const Vec mdiag = m_full.diagonal();
  const double mmax = mdiag.size() ? mdiag.cwiseAbs().maxCoeff() : 0.0;
  ops.p_active.assign(npf, -1);
  for (int i = 0; i < npf; ++i)
    if (mdiag(i) > 1e-14 * mmax && mmax > 0) {
      ops.p_active[i] = static_cast<int>(ops.p_full.size());
      ops.p_full.push_back(i);
    }
  ops.removed_p = npf - static_cast<int>(ops.p_full.size());
  const int npa = ops.n_p();
  std::vector<Triplet> sel;
  for (int k = 0; k < npa; ++k) sel.emplace_back(ops.p_full[k], k, 1.0);
  const SpMat psel = from_triplets(npf, npa, sel);
  ops.c_op = c_full * psel;
  ops.m_storage = SpMat(psel.transpose() * m_full * psel);
  ops.d_darcy = SpMat(psel.transpose() * d_full * psel);
  if (ops.removed_p > 0) {
    std::ostringstream os;
    os << "removed " << ops.removed_p << " of " << npf << " pressure DOFs without fluid in their support";
    ops.warnings.push_back(os.str());
  }

  // Zero-mean constraints.
  const int nm = s.a_multipliers + s.b_multipliers;
  for (int n = 0; n < s.n_nodes(); ++n) {
    tl.emplace_back(0, s.a_dof(n, 0), area);
    tl.emplace_back(1, s.a_dof(n, 1), area);
  }
  if (s.b_multipliers)
    for (int i = 0; i < s.n_b; ++i)
      if (std::abs(b_integral(i)) > 1e-15 * area) tl.emplace_back(2, s.n_a + i, b_integral(i));
  ops.constraints = from_triplets(nm, nu, tl);
  return ops;
}

SpMat monolithic_matrix(const DiscreteOperators& ops, double beta, double mass_coef) {
  const int nu = ops.n_u(), nm = ops.n_mult(), np = ops.n_p(), na = ops.spaces.n_a;
  const int n = nu + nm + np;
  std::vector<Triplet> t;
  t.reserve(ops.a_plate.nonZeros() + 2 * ops.c_op.nonZeros() + ops.m_storage.nonZeros() +
            ops.d_darcy.nonZeros() + ops.b_mass.nonZeros() + 2 * ops.constraints.nonZeros());
  auto put = [&](const SpMat& m, int r0, int c0, double s, bool transpose) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it) {
        const int r = static_cast<int>(transpose ? it.col() : it.row());
        const int c = static_cast<int>(transpose ? it.row() : it.col());
        t.emplace_back(r0 + r, c0 + c, s * it.value());
      }
  };
  put(ops.a_plate, 0, 0, 1.0, false);
  if (mass_coef != 0) put(ops.b_mass, na, na, mass_coef, false);
  put(ops.constraints, nu, 0, 1.0, false);
  put(ops.constraints, 0, nu, 1.0, true);
  put(ops.c_op, 0, nu + nm, -1.0, false);
  put(ops.c_op, nu + nm, 0, -1.0, true);
  put(ops.m_storage, nu + nm, nu + nm, -1.0, false);
  if (beta != 0) put(ops.d_darcy, nu + nm, nu + nm, -beta, false);
  return from_triplets(n, n, t);
}

Vec6 generalized_strain(const DiscreteSpaces& s, const Vec& u, int ix, int iy, double xi, double eta) {
  const auto l2g = local_to_global(s, corners(s, ix, iy));
  const auto bm = strain_matrix(bilinear(xi, eta, s.hx(), s.hy()), bfs_eval(xi, eta, s.hx(), s.hy()));
  Eigen::Matrix<double, 24, 1> ul;
  for (int i = 0; i < 24; ++i) ul(i) = u(l2g[i]);
  return bm * ul;
}

Vec interpolate_b(const DiscreteSpaces& s, const std::function<std::array<double, 4>(double, double)>& f) {
  Vec b = Vec::Zero(s.n_b);
  for (int ix = 0; ix < s.grid.nx; ++ix)
    for (int iy = 0; iy < s.grid.ny; ++iy) {
      const auto v = f(ix * s.hx(), iy * s.hy());
      for (int k = 0; k < 4; ++k) b(s.b_dof(s.node(ix, iy), k) - s.n_a) = v[k];
    }
  return b;
}

Vec interpolate_a(const DiscreteSpaces& s, const std::function<std::array<double, 2>(double, double)>& f) {
  Vec a = Vec::Zero(s.n_a);
  for (int ix = 0; ix < s.grid.nx; ++ix)
    for (int iy = 0; iy < s.grid.ny; ++iy) {
      const auto v = f(ix * s.hx(), iy * s.hy());
      for (int c = 0; c < 2; ++c) a(s.a_dof(s.node(ix, iy), c)) = v[c];
    }
  return a;
}

// ----------------------------------------------------------------- loads

namespace {

Vec plane_field(const Vec& f, int n) {
  if (f.size() == 0) return Vec::Zero(n);
  if (f.size() != n) throw BadGrid("plane load field has " + std::to_string(f.size()) + " values, expected " +
                                   std::to_string(n));
  return f;
}

}  // namespace

AssembledLoads assemble_loads(const DiscreteOperators& ops, const LoadSpec& spec) {
  const auto& s = ops.spaces;
  const int nn = s.n_nodes(), nu = s.n_u();
  const double hx = s.hx(), hy = s.hy(), area = hx * hy;
  AssembledLoads out;
  out.n_u = nu;
  out.n_a = s.n_a;
  out.n_p = ops.n_p();
  const Rule g3 = gauss(3);

  auto restrict_p = [&](const Vec& full) {
    Vec r(ops.n_p());
    for (int k = 0; k < ops.n_p(); ++k) r(k) = full(ops.p_full[k]);
    return r;
  };
  auto p_functional = [&](const Vec& field) {
    if (field.size() == 0) return Vec(Vec::Zero(ops.n_p()));
    if (field.size() != s.n_p)
      throw BadGrid("pressure field has " + std::to_string(field.size()) + " values, expected " +
                    std::to_string(s.n_p));
    return restrict_p(ops.p_gram * field);
  };

  bool warned[3] = {false, false, false};
  double last_t = -1e300;
  for (const auto& smp : spec.samples) {
    if (!(smp.t > last_t)) throw BadGrid("load samples must have increasing times");
    last_t = smp.t;
    Vec fld[5] = {plane_field(smp.f1, nn), plane_field(smp.f2, nn), plane_field(smp.f3, nn),
                  plane_field(smp.m1, nn), plane_field(smp.m2, nn)};
    const int n_norm = s.mode == PlateMode::Quasistatic ? 3 : 2;
    for (int c = 0; c < n_norm; ++c) {
      const double mean = fld[c].mean();
      const double scale = fld[c].cwiseAbs().maxCoeff();
      if (std::abs(mean) > 1e-12 * std::max(scale, 1e-300) && scale > 0) {
        fld[c].array() -= mean;
        if (!warned[c]) {
          const char* names[3] = {"f1", "f2", "f3"};
          char buf[160];
          std::snprintf(buf, sizeof buf, "removed nonzero mean %.6g from load %s (first at t=%.6g)", mean,
                        names[c], smp.t);
          out.warnings.emplace_back(buf);
          warned[c] = true;
        }
      }
    }
    Vec f = Vec::Zero(nu);
    for (int ix = 0; ix < s.grid.nx; ++ix)
      for (int iy = 0; iy < s.grid.ny; ++iy) {
        const auto cc = corners(s, ix, iy);
        const auto l2g = local_to_global(s, cc);
        for (int qx = 0; qx < 3; ++qx)
          for (int qy = 0; qy < 3; ++qy) {
            const double w = g3.w[qx] * g3.w[qy] * area;
            const auto bl = bilinear(g3.x[qx], g3.x[qy], hx, hy);
            const auto bf = bfs_eval(g3.x[qx], g3.x[qy], hx, hy);
            double val[5] = {0, 0, 0, 0, 0};
            for (int c = 0; c < 4; ++c)
              for (int k = 0; k < 5; ++k) val[k] += fld[k](cc.node[c]) * bl.v[c];
            for (int c = 0; c < 4; ++c) {
              f(l2g[2 * c]) += w * val[0] * bl.v[c];
              f(l2g[2 * c + 1]) += w * val[1] * bl.v[c];
            }
            for (int j = 0; j < 16; ++j)
              f(l2g[8 + j]) += w * (val[2] * bf.v[j] - val[3] * bf.dx[j] - val[4] * bf.dy[j]);
          }
      }
    out.times.push_back(smp.t);
    out.f.push_back(std::move(f));
    out.g.push_back(p_functional(smp.g));
  }
  out.t0 = p_functional(spec.t0);
  auto bvec = [&](const Vec& v, const char* name) {
    if (v.size() == 0) return Vec(Vec::Zero(s.n_b));
    if (v.size() != s.n_b)
      throw BadGrid(std::string(name) + " has " + std::to_string(v.size()) + " values, expected " +
                    std::to_string(s.n_b));
    return v;
  };
  out.b0 = bvec(spec.b0, "b0");
  out.b1 = bvec(spec.b1, "b1");
  return out;
}

namespace {

template <class Get>
Vec interp(const std::vector<double>& times, Get get, double t, int n) {
  if (times.empty()) return Vec::Zero(n);
  if (times.size() == 1 || t <= times.front()) return get(0);
  if (t >= times.back()) return get(times.size() - 1);
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  const double s = (t - times[k]) / (times[k + 1] - times[k]);
  return (1 - s) * get(k) + s * get(k + 1);
}

}  // namespace

Vec AssembledLoads::f_at(double t) const {
  return interp(times, [&](std::size_t k) { return f[k]; }, t, n_u);
}

Vec AssembledLoads::g_at(double t) const {
  return interp(times, [&](std::size_t k) { return g[k]; }, t, n_p);
}

double AssembledLoads::fdot_work(double ta, double tb, const Vec& w0, const Vec& w1, int offset, int count) const {
  if (times.size() < 2 || tb <= ta) return 0.0;
  if (count < 0) count = n_u - offset;
  const double len = tb - ta;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double s0 = std::max(ta, times[k]), s1 = std::min(tb, times[k + 1]);
    if (s1 <= s0) continue;
    const Vec slope = (f[k + 1].segment(offset, count) - f[k].segment(offset, count)) / (times[k + 1] - times[k]);
    const double c0 = (s0 - ta) / len, c1 = (s1 - ta) / len;
    const Vec wm = (1 - 0.5 * (c0 + c1)) * w0 + 0.5 * (c0 + c1) * w1;
    total += slope.dot(wm) * (s1 - s0);
  }
  return total;
}

double AssembledLoads::max_spacing() const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) m = std::max(m, times[k + 1] - times[k]);
  return m;
}

bool AssembledLoads::is_zero() const {
  for (const auto& v : f)
    if (v.size() && v.cwiseAbs().maxCoeff() != 0) return false;
  for (const auto& v : g)
    if (v.size() && v.cwiseAbs().maxCoeff() != 0) return false;
  for (const Vec* v : {&t0, &b0, &b1})
    if (v->size() && v->cwiseAbs().maxCoeff() != 0) return false;
  return true;
}

// ----------------------------------------------------------------- state

double PlateState::norm() const {
  double s = u.squaredNorm() + p.squaredNorm();
  if (v.size()) s += v.squaredNorm();
  return std::sqrt(s);
}

PlateState zero_state(const DiscreteOperators& ops) {
  PlateState st;
  st.u = Vec::Zero(ops.n_u());
  st.p = Vec::Zero(ops.n_p());
  if (ops.spaces.mode == PlateMode::Inertial) st.v = Vec::Zero(ops.spaces.n_b);
  return st;
}

Vec full_pressure(const DiscreteOperators& ops, const Vec& p) {
  Vec f = Vec::Zero(ops.spaces.n_p);
  for (int k = 0; k < ops.n_p(); ++k) f(ops.p_full[k]) = p(k);
  return f;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "backward_euler") return Scheme::BackwardEuler;
  if (name == "crank_nicolson") return Scheme::CrankNicolson;
  if (name == "implicit_midpoint") return Scheme::ImplicitMidpoint;
  throw SchemaError("simulation.scheme", "unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::BackwardEuler: return "backward_euler";
    case Scheme::CrankNicolson: return "crank_nicolson";
    default: return "implicit_midpoint";
  }
}

int TimeSettings::steps() const {
  return std::max(1, static_cast<int>(std::llround(t_end / dt)));
}

std::string EnergyLedger::to_csv() const {
  std::string out = "step,time,E_elastic,E_pressure,D_cumulative,W_loads,residual";
  if (inertial) out += ",E_kinetic";
  out += "\n";
  char buf[512];
  for (const auto& r : rows) {
    int n = std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.step, r.time, r.e_elastic,
                          r.e_pressure, r.d_cumulative, r.w_loads, r.residual);
    if (inertial) std::snprintf(buf + n, sizeof buf - n, ",%.17g", r.e_kinetic);
    out += buf;
    out += "\n";
  }
  return out;
}

double EnergyLedger::max_abs_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.residual));
  return m;
}

}  // namespace poroplate
