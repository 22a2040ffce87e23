#include "doctest.h"

#include "poroplate/cellsolve.hpp"
#include "poroplate/mandel.hpp"

#include <cmath>
#include <random>

using namespace poroplate;

namespace {

PhaseSpec iso(double lambda, double mu) { return {0, Stiffness::isotropic(lambda, mu), std::nullopt}; }

Stiffness random_stiffness(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Mat6 r;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) r(i, j) = u(rng);
  Mat6 m = r * r.transpose() + 1.5 * Mat6::Identity();
  return Stiffness(0.5 * (m + m.transpose()));
}

// Constant-strain oracle: g with (A (E + sym(g (x) e3)))_{i3} = 0.
Vec3 plane_stress_g(const Stiffness& a, const Mat3& e) {
  Eigen::Matrix3d m;
  Vec3 rhs;
  for (int i = 0; i < 3; ++i) {
    rhs(i) = -a.apply(e)(i, 2);
    for (int c = 0; c < 3; ++c) {
      Mat3 s = Mat3::Zero();
      s(c, 2) += 0.5;
      s(2, c) += 0.5;
      m(i, c) = a.apply(s)(i, 2);
    }
  }
  return m.fullPivLu().solve(rhs);
}

}  // namespace

TEST_CASE("strain operator definition") {
  Eigen::Matrix<double, 8, 3> zero = Eigen::Matrix<double, 8, 3>::Zero();
  const Vec3 xi(0.3, 0.6, 0.2);
  CHECK(strain_operator(zero, Vec3::Zero(), xi, 0.25).norm() == 0.0);
  Mat3 e3 = strain_operator(zero, Vec3::UnitZ(), xi, 0.25);
  CHECK(e3(2, 2) == 1.0);
  CHECK(e3.norm() == 1.0);
  Mat3 e1 = strain_operator(zero, Vec3::UnitX(), xi, 0.25);
  CHECK(e1(0, 2) == 0.5);
  CHECK(e1(2, 0) == 0.5);
  CHECK(e1.norm() == doctest::Approx(std::sqrt(0.5)));
  // Linear field w = y1 e2 sampled at the corners of a voxel of size h.
  Eigen::Matrix<double, 8, 3> lin = Eigen::Matrix<double, 8, 3>::Zero();
  for (int a = 0; a < 8; ++a) lin(a, 1) = 0.25 * (a & 1);
  Mat3 s = strain_operator(lin, Vec3::Zero(), xi, 0.25);
  CHECK(s(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("full solid isotropic load (1,1): plane stress") {
  for (int n : {2, 3}) {
    auto cell = build_cell(n, GeometrySpec::full_solid(), iso(1.0, 1.0));
    auto c = solve_elastic_corrector(cell, 1, 1);
    CHECK(c.w.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(c.g(0) == doctest::Approx(0.0));
    CHECK(c.g(1) == doctest::Approx(0.0));
    CHECK(c.g(2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  }
  // Dense oracle on N=2 with a general lambda, mu: independent factorization.
  auto cell = build_cell(2, GeometrySpec::full_solid(), iso(2.0, 0.7));
  SolidCellSystem sys(cell, {});
  const Vec b = sys.rhs_elastic(mandel::dyad3(0, 0));
  Mat k = Mat(sys.stiffness());
  const int ns = sys.node_count();
  Mat full = Mat::Zero(k.rows() + 3, k.cols() + 3);
  full.topLeftCorner(k.rows(), k.cols()) = k;
  for (int v = 0; v < ns; ++v)
    for (int c = 0; c < 3; ++c) full(k.rows() + c, 3 * v + c) = full(3 * v + c, k.rows() + c) = 1.0;
  Vec bb = Vec::Zero(full.rows());
  bb.head(b.size()) = b;
  Vec x = full.fullPivLu().solve(bb);
  CHECK(x(3 * ns + 2) == doctest::Approx(-2.0 / (2.0 + 1.4)).epsilon(1e-12));
  auto s = sys.solve(b);
  CHECK((s.g - x.segment<3>(3 * ns)).norm() <= 1e-12);
}

TEST_CASE("full solid anisotropic: exact constant strain states") {
  auto a = random_stiffness(7);
  auto cell = build_cell(3, GeometrySpec::full_solid(), {0, a, std::nullopt});
  for (auto [i, j] : {std::pair{1, 1}, {2, 2}, {3, 3}, {1, 2}, {1, 3}, {2, 3}}) {
    auto c = solve_elastic_corrector(cell, i, j);
    Mat3 e = Mat3::Zero();
    e(i - 1, j - 1) += 0.5;
    e(j - 1, i - 1) += 0.5;
    CHECK(c.w.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((c.g - plane_stress_g(a, e)).norm() <= 1e-12);
  }
  auto c13 = solve_elastic_corrector(cell, 1, 3);
  CHECK((c13.g - Vec3(-1, 0, 0)).norm() <= 1e-12);
}

TEST_CASE("load symmetry") {
  auto cell = build_cell(6, GeometrySpec::centered_inclusion(0.3), iso(1.0, 1.0));
  auto a = solve_elastic_corrector(cell, 1, 2);
  auto b = solve_elastic_corrector(cell, 2, 1);
  CHECK(a.w == b.w);
  CHECK(a.g == b.g);
}

TEST_CASE("layer cell elastic corrector residual and mean") {
  auto cell = build_cell(16, GeometrySpec::layer(3, 0.5), iso(1.0, 1.0));
  auto c = solve_elastic_corrector(cell, 1, 1);
  CHECK(c.residual <= 1e-10);
  CHECK(c.mean.norm() <= 1e-12);
  SolidCellSystem sys(cell, {});
  CHECK(sys.fixed_g()[0]);
  CHECK(sys.fixed_g()[2]);
}

TEST_CASE("Biot corrector on a fluid-free cell vanishes") {
  auto cell = build_cell(4, GeometrySpec::full_solid(), iso(1.0, 1.0));
  auto b = solve_biot_corrector(cell);
  CHECK(b.w.norm() == 0.0);
  CHECK(b.g.norm() == 0.0);
}

TEST_CASE("Biot corrector for a vertical laminate matches the 1D reduction") {
  // Solid slab normal to y1; per-layer constant strain in y1:
  // sigma11 = -1, sigma33 = d/(1-d), other shear stresses zero.
  const double lambda = 1.3, mu = 0.8;
  const int n = 8;
  auto cell = build_cell(n, GeometrySpec::layer(1, 0.25), iso(lambda, mu));
  const double d = cell.fluid_fraction();
  Eigen::Matrix2d m;
  m << lambda + 2 * mu, lambda, lambda, lambda + 2 * mu;
  const Eigen::Vector2d eps = m.inverse() * Eigen::Vector2d(-1.0, d / (1.0 - d));
  auto b = solve_biot_corrector(cell);
  CHECK(b.residual <= 1e-10);
  CHECK(b.g(2) == doctest::Approx(eps(1)).epsilon(1e-10));
  CHECK(std::abs(b.g(1)) <= 1e-12);
  // w1 linear in y1 with slope eps11, other components zero.
  SolidCellSystem sys(cell, {});
  double max_err = 0;
  const auto& ids = sys.nodes();
  // Unwrapped y1 over the slab: solid occupies voxels outside [3,5).
  double ymean = 0, wsum = 0;
  std::vector<double> yu(ids.size());
  for (std::size_t v = 0; v < ids.size(); ++v) {
    int i = ids[v] / (n * n);
    if (i <= 3) i += n;
    yu[v] = static_cast<double>(i) / n;
  }
  for (std::size_t v = 0; v < ids.size(); ++v) {
    const int i = ids[v] / (n * n);
    const double wgt = (i == 5 || i == 3) ? 0.5 : 1.0;
    ymean += wgt * yu[v];
    wsum += wgt;
  }
  ymean /= wsum;
  for (std::size_t v = 0; v < ids.size(); ++v) {
    max_err = std::max(max_err, std::abs(b.w(3 * v) - eps(0) * (yu[v] - ymean)));
    max_err = std::max(max_err, std::abs(b.w(3 * v + 1)) + std::abs(b.w(3 * v + 2)));
  }
  CHECK(max_err <= 1e-10);
  // M0 = l(w,g) = -(1-d) eps11 + d eps33.
  const double m0 = sys.fluid_trace(sys.pack(b.w, b.g));
  CHECK(m0 == doctest::Approx(-(1 - d) * eps(0) + d * eps(1)).epsilon(1e-10));
  CHECK(m0 > 0);
}

TEST_CASE("horizontal fluid film: Biot problem has no solution") {
  auto cell = build_cell(8, GeometrySpec::layer(3, 0.5), iso(1.0, 1.0));
  CHECK_THROWS_AS(solve_biot_corrector(cell), IncompatibleCellProblem);
  // The source paired with the kernel (z, r) = (-(y3 - c) e3, e3) equals 1.
  SolidCellSystem sys(cell, {});
  Vec k = Vec::Zero(sys.field_size());
  const int n = 8;
  for (std::size_t v = 0; v < sys.nodes().size(); ++v) {
    int kk = sys.nodes()[v] % n;
    if (kk < 6) kk += n;  // solid slab spans voxels 6..9 (mod 8)
    k(3 * v + 2) = -(static_cast<double>(kk) / n);
  }
  k(sys.field_size() - 1) = 1.0;
  CHECK((sys.stiffness() * k).norm() <= 1e-12);
  CHECK(sys.rhs_biot().dot(k) == doctest::Approx(1.0).epsilon(1e-12));
  auto all = solve_all(cell);
  CHECK_FALSE(all.biot.has_value());
  CHECK(all.elastic.size() == 6);
  CHECK(all.stokes.size() == 3);
}

TEST_CASE("Stokes: Poiseuille profile in a horizontal film") {
  const int n = 16;
  auto cell = build_cell(n, GeometrySpec::layer(3, 0.5), iso(1.0, 1.0));
  FluidCellSystem fl(cell, {});
  auto s1 = fl.solve(1);
  double peak = 0, err = 0;
  const double h = 1.0 / n;
  for (int v = 0; v < fl.velocity_nodes(); ++v) {
    const int k = fl.velocity_node_ids()[v] % n;
    const double y = k * h - 0.25;  // distance from the lower wall
    const double exact = 0.5 * y * (0.5 - y);
    err = std::max(err, std::abs(s1.q(3 * v) - exact));
    peak = std::max(peak, s1.q(3 * v));
    err = std::max(err, std::abs(s1.q(3 * v + 1)) + std::abs(s1.q(3 * v + 2)));
  }
  CHECK(err <= 1e-10);
  CHECK(peak == doctest::Approx(0.03125).epsilon(1e-10));
  auto s3 = fl.solve(3);
  CHECK(s3.q.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(s3.divergence_residual <= 1e-10);
  CHECK(std::abs(s3.pressure_mean) <= 1e-12);
}

TEST_CASE("Stokes: no fluid") {
  auto cell = build_cell(4, GeometrySpec::full_solid(), iso(1.0, 1.0));
  CHECK_THROWS_AS(solve_stokes_cell(cell, 1), NoFluid);
  auto all = solve_all(cell);
  CHECK(all.stokes.empty());
  CHECK(all.biot.has_value());
}

TEST_CASE("Stokes: iterative and direct paths agree") {
  auto cell = build_cell(8, GeometrySpec::channel(3, 0.5), iso(1.0, 1.0));
  CellSolveOptions direct, iter;
  direct.solver.kind = SolverOptions::Kind::Direct;
  iter.solver.kind = SolverOptions::Kind::Iterative;
  FluidCellSystem a(cell, direct), b(cell, iter);
  auto sa = a.solve(3), sb = b.solve(3);
  CHECK(b.iterative());
  CHECK((sa.q - sb.q).norm() <= 1e-8 * sa.q.norm());
  CHECK(a.flux(sa.q, 3) > 0);
}

TEST_CASE("independent phases solve independently") {
  PhaseSpec p0 = iso(1.0, 1.0), p1 = iso(3.0, 0.5);
  p1.id = 1;
  auto c0 = build_cell(6, GeometrySpec::centered_inclusion(0.3), p0);
  auto c1 = build_cell(6, GeometrySpec::channel(3, 0.34), p1);
  auto a0 = solve_all(c0);
  auto a1 = solve_all(c1);
  auto b0 = solve_all(c0);
  CHECK(a0.elastic[0].w == b0.elastic[0].w);
  CHECK(a0.biot->g == b0.biot->g);
  CHECK(a1.phase_id == 1);
}
