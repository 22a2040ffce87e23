#include "doctest.h"

#include "poroplate/effective.hpp"
#include "poroplate/mandel.hpp"

#include <cstdio>
#include <fstream>

using namespace poroplate;

namespace {

PhaseSpec iso(double lambda, double mu, int id = 0) { return {id, Stiffness::isotropic(lambda, mu), std::nullopt}; }

Eigen::Matrix3d plane_stress_iso(double lambda, double mu) {
  const double c = 2 * mu * lambda / (lambda + 2 * mu);
  Eigen::Matrix3d a;
  a << 2 * mu + c, c, 0, c, 2 * mu + c, 0, 0, 0, 2 * mu;
  return a;
}

// Plane-stress reduction by static condensation of the out-of-plane Mandel
// components (33, 23, 13).
Eigen::Matrix3d plane_stress_schur(const Mat6& d) {
  const int p[3] = {0, 1, 5}, o[3] = {2, 3, 4};
  Eigen::Matrix3d app, aoo, apo;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      app(r, c) = d(p[r], p[c]);
      aoo(r, c) = d(o[r], o[c]);
      apo(r, c) = d(p[r], o[c]);
    }
  return app - apo * aoo.inverse() * apo.transpose();
}

Stiffness anisotropic() {
  Mat6 r;
  r << 1.0, 0.2, -0.1, 0.3, 0.0, 0.1,
       0.0, 0.9, 0.2, -0.2, 0.1, 0.0,
       0.1, 0.0, 1.1, 0.0, 0.3, -0.1,
       0.2, 0.1, 0.0, 0.8, 0.0, 0.2,
       -0.1, 0.0, 0.2, 0.1, 1.0, 0.0,
       0.0, 0.3, 0.0, 0.1, -0.2, 0.7;
  return Stiffness(r * r.transpose() + 0.5 * Mat6::Identity());
}

PlatePhaseMap single_region(std::vector<LayerSpec> column, std::vector<int> phases) {
  PlatePhaseMap m;
  for (int id : phases) m.densities[id] = {1.0, 2.0};
  m.regions.push_back({0, 0, 1, 1, std::move(column)});
  return build_phase_map(m);
}

}  // namespace

TEST_CASE("full solid isotropic membrane tensor is the plane stress form") {
  auto cs = solve_all(build_cell(4, GeometrySpec::full_solid(), iso(1.0, 1.0)));
  auto mt = membrane_tensor(cs);
  Eigen::Matrix3d expect;
  expect << 8.0 / 3, 2.0 / 3, 0, 2.0 / 3, 8.0 / 3, 0, 0, 0, 2;
  CHECK((mt.a - expect).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(mt.nu == doctest::Approx(2.0));
  double wmax = 0;
  for (const auto& c : cs.elastic) wmax = std::max(wmax, c.w.norm());
  CHECK(wmax <= 1e-12);
}

TEST_CASE("full solid anisotropic membrane tensor matches static condensation") {
  const Stiffness s = anisotropic();
  auto cs = solve_all(build_cell(3, GeometrySpec::full_solid(), {0, s, std::nullopt}));
  auto mt = membrane_tensor(cs);
  CHECK((mt.a - plane_stress_schur(s.matrix())).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK(mt.symmetry_defect <= 1e-12);
}

TEST_CASE("horizontal film membrane tensor is the slab fraction of plane stress") {
  auto cs = solve_all(build_cell(8, GeometrySpec::layer(3, 0.5), iso(1.0, 1.0)));
  auto mt = membrane_tensor(cs);
  CHECK((mt.a - 0.5 * plane_stress_iso(1.0, 1.0)).cwiseAbs().maxCoeff() <= 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> full(plane_stress_iso(1.0, 1.0));
  CHECK(mt.nu > 0);
  CHECK(mt.upper < full.eigenvalues()(2));
}

TEST_CASE("missing corrector") {
  auto cs = solve_all(build_cell(2, GeometrySpec::full_solid(), iso(1.0, 1.0)));
  cs.elastic.erase(cs.elastic.begin() + 3);  // (1,2)
  CHECK_THROWS_AS(membrane_tensor(cs), MissingCorrector);
}

TEST_CASE("fluid-free phase has no coupling, storage or permeability") {
  auto pc = phase_coefficients(solve_all(build_cell(4, GeometrySpec::full_solid(), iso(2.0, 0.7))));
  CHECK(pc.b_h.norm() <= 1e-14);
  CHECK(pc.c_h.norm() == 0.0);
  CHECK(pc.theta.norm() <= 1e-14);
  CHECK(pc.m0 == 0.0);
  CHECK(pc.k.norm() == 0.0);
}

TEST_CASE("vertical laminate coupling and storage match the 1D reduction") {
  const double lambda = 1.5, mu = 0.8, d = 0.25;
  auto cs = solve_all(build_cell(8, GeometrySpec::layer(1, d), iso(lambda, mu)));
  REQUIRE(cs.biot.has_value());
  auto pc = phase_coefficients(cs);

  // Biot corrector: sigma11 = -1 (unit pore pressure on the interfaces),
  // integral of sigma33 balances the fluid volume, eps22 = 0.
  Eigen::Matrix2d k;
  k << lambda + 2 * mu, lambda, lambda, lambda + 2 * mu;
  const Eigen::Vector2d eps = k.inverse() * Eigen::Vector2d(-1.0, d / (1 - d));
  Mat3 b = Mat3::Zero();
  b(0, 0) = -(1 - d);
  b(1, 1) = (1 - d) * lambda * (eps(0) + eps(1));
  b(2, 2) = d;
  CHECK((pc.b_h - b).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(pc.m0 == doctest::Approx(-(1 - d) * eps(0) + d * eps(1)).epsilon(1e-10));

  // Elastic correctors leave uniaxial stress along y2; the fluid trace of the
  // corrector strain c is -(1-d) c11 + d c33.
  const double nu = lambda / (2 * (lambda + mu));
  Mat3 c = Mat3::Zero();
  c(0, 0) = (1 - d) * (-1.0);
  c(1, 1) = (1 - d) * (-nu) - d * (-nu);
  c(2, 2) = -d * (-1.0);
  CHECK((pc.c_h - c).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((pc.b_h - pc.c_h).norm() <= 1e-8);
  CHECK(pc.m0 > 0);
  CHECK((pc.theta - (d * Mat3::Identity() - b)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("duality and storage on an isolated pore") {
  auto pc = phase_coefficients(solve_all(build_cell(8, GeometrySpec::centered_inclusion(0.3), iso(1.0, 1.0))));
  CHECK((pc.b_h - pc.c_h).norm() <= 1e-8);
  CHECK((pc.b_h - pc.b_h.transpose()).norm() <= 1e-10);
  CHECK(pc.m0 > 0);
  Eigen::SelfAdjointEigenSolver<Mat3> ek(pc.k);
  CHECK(ek.eigenvalues()(0) >= -1e-12);
  CHECK((pc.k - pc.k_dissipation).norm() <= 1e-8);
}

TEST_CASE("permeability of a horizontal film and a channel") {
  auto layer = phase_coefficients(solve_all(build_cell(16, GeometrySpec::layer(3, 0.5), iso(1.0, 1.0))));
  CHECK(std::abs(layer.k(0, 0) - 1.0 / 96) <= 0.05 / 96);
  CHECK(layer.k(1, 1) == doctest::Approx(layer.k(0, 0)).epsilon(1e-10));
  CHECK(std::abs(layer.k(2, 2)) <= 1e-8);
  CHECK((layer.k - layer.k_dissipation).norm() <= 1e-8);
  CHECK_FALSE(layer.biot_available);

  auto tube = phase_coefficients(solve_all(build_cell(8, GeometrySpec::channel(3, 0.5), iso(1.0, 1.0))));
  CHECK(tube.k(2, 2) > 0);
  CHECK(std::abs(tube.k(0, 0)) <= 1e-10);
  CHECK((tube.k - tube.k_dissipation).norm() <= 1e-8);
  CHECK(tube.k_stabilization.norm() <= 1e-12);
}

TEST_CASE("thickness moments and plate tensor assembly") {
  CHECK(thickness_moment(-0.5, 0.5, 0) == doctest::Approx(1.0));
  CHECK(std::abs(thickness_moment(-0.5, 0.5, 1)) <= 1e-16);
  CHECK(thickness_moment(-0.5, 0.5, 2) == doctest::Approx(1.0 / 12));

  MembraneTensor t0, t1;
  t0.a = plane_stress_iso(1.0, 1.0);
  t1.phase_id = 1;
  t1.a = plane_stress_iso(3.0, 0.5);
  std::map<int, MembraneTensor> tensors{{0, t0}, {1, t1}};

  auto one = assemble_plate_tensor(single_region({{-0.5, 0.5, 0}}, {0, 1}), tensors).a_hom[0];
  CHECK(one.topRightCorner<3, 3>().norm() <= 1e-15);
  CHECK((one.bottomRightCorner<3, 3>() - t0.a / 12).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((one.topLeftCorner<3, 3>() - t0.a).cwiseAbs().maxCoeff() <= 1e-15);

  auto split = assemble_plate_tensor(single_region({{-0.5, 0.1, 0}, {0.1, 0.5, 0}}, {0, 1}), tensors).a_hom[0];
  CHECK((split - one).cwiseAbs().maxCoeff() <= 1e-15);

  // Asymmetric laminate against 3-point Gauss quadrature of the moments.
  const std::vector<LayerSpec> column{{-0.5, 0.2, 0}, {0.2, 0.5, 1}};
  auto lam = assemble_plate_tensor(single_region(column, {0, 1}), tensors).a_hom[0];
  Mat6 oracle = Mat6::Zero();
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)}, gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  for (const auto& l : column) {
    const auto& t = tensors[l.phase].a;
    for (int q = 0; q < 3; ++q) {
      const double x = 0.5 * (l.lo + l.hi) + 0.5 * (l.hi - l.lo) * gx[q], w = 0.5 * (l.hi - l.lo) * gw[q];
      oracle.topLeftCorner<3, 3>() += w * t;
      oracle.topRightCorner<3, 3>() -= w * x * t;
      oracle.bottomLeftCorner<3, 3>() -= w * x * t;
      oracle.bottomRightCorner<3, 3>() += w * x * x * t;
    }
  }
  CHECK((lam - oracle).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(lam.topRightCorner<3, 3>().norm() > 1e-3);
  Eigen::SelfAdjointEigenSolver<Mat6> es(lam);
  // Lower bound: min membrane eigenvalue times min eigenvalue of the summed moment matrix.
  Eigen::Matrix2d mm = Eigen::Matrix2d::Zero();
  for (const auto& l : column) {
    const double m0 = thickness_moment(l.lo, l.hi, 0), m1 = thickness_moment(l.lo, l.hi, 1),
                 m2 = thickness_moment(l.lo, l.hi, 2);
    mm += (Eigen::Matrix2d() << m0, -m1, -m1, m2).finished();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> e0(t0.a), e1(t1.a);
  const double bound = std::min(e0.eigenvalues()(0), e1.eigenvalues()(0)) *
                       Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(mm).eigenvalues()(0);
  CHECK(es.eigenvalues()(0) >= bound - 1e-14);
  CHECK(bound > 0);

  CHECK_THROWS_AS(assemble_plate_tensor(single_region({{-0.5, 0.5, 2}}, {2}), tensors), UnknownPhase);
}

TEST_CASE("tensor report on solid, film and corrupted models") {
  std::map<int, PhaseCoefficients> phases;
  phases[0] = phase_coefficients(solve_all(build_cell(4, GeometrySpec::full_solid(), iso(1.0, 1.0))));
  auto solid = assemble_model(single_region({{-0.5, 0.5, 0}}, {0}), phases);
  CHECK(solid.regions[0].kappa == doctest::Approx(2.0));
  CHECK(solid.regions[0].elastic_only());
  auto rep = verify_tensor_properties(solid);
  CHECK(rep.passed());
  CHECK_FALSE(rep.nu_m0.has_value());
  bool vacuous = false;
  for (const auto& c : rep.checks) vacuous |= c.name == "storage_positive" && c.status == "vacuous";
  CHECK(vacuous);
  CHECK(rep.to_json().find("\"passed\": true") != std::string::npos);

  auto film_cs = solve_all(build_cell(8, GeometrySpec::layer(3, 0.5), iso(1.0, 1.0, 1)));
  phases[1] = phase_coefficients(film_cs);
  auto film = assemble_model(single_region({{-0.5, 0.5, 1}}, {1}), phases);
  CHECK(film.regions[0].kappa == doctest::Approx(1.5));
  auto fr = verify_tensor_properties(film);
  CHECK(fr.passed());
  bool degenerate = false, unavailable = false;
  for (const auto& c : fr.checks) {
    degenerate |= c.status == "degenerate axis";
    unavailable |= c.name == "coupling_duality" && c.status == "unavailable";
  }
  CHECK(degenerate);
  CHECK(unavailable);

  phases[2] = phase_coefficients(solve_all(build_cell(8, GeometrySpec::channel(3, 0.5), iso(1.0, 1.0, 2))));
  auto tube = assemble_model(single_region({{-0.5, 0.5, 2}}, {2}), phases);
  CHECK(verify_tensor_properties(tube).passed());
  CHECK(verify_tensor_properties(tube).nu_m0.has_value());
  tube.phases[2].b_h(0, 1) += 1e-6;
  auto bad = verify_tensor_properties(tube);
  CHECK_FALSE(bad.passed());
  bool named = false;
  for (const auto& c : bad.checks) named |= c.name == "coupling_duality" && c.status == "fail" && c.value >= 0.9e-6;
  CHECK(named);
}

TEST_CASE("model export and import round trip") {
  std::map<int, PhaseCoefficients> phases;
  phases[0] = phase_coefficients(solve_all(build_cell(4, GeometrySpec::full_solid(), iso(1.0, 1.0))));
  phases[2] = phase_coefficients(solve_all(build_cell(6, GeometrySpec::channel(3, 0.5), iso(2.0, 1.0, 2))));
  PlatePhaseMap m;
  m.densities[0] = {1.0, 2.0};
  m.densities[2] = {1.0, 3.0};
  m.regions = {{0, 0, 0.5, 1, {{-0.5, 0.5, 0}}}, {0.5, 0, 1, 1, {{-0.5, 0.0, 2}, {0.0, 0.5, 0}}}};
  auto model = assemble_model(build_phase_map(m), phases);
  const std::string stem = "test_model_roundtrip";
  export_model(model, stem);
  auto back = import_model(stem);
  REQUIRE(back.regions.size() == 2);
  CHECK(back.regions[1].a_hom == model.regions[1].a_hom);
  CHECK(back.regions[1].layers[0].theta == model.regions[1].layers[0].theta);
  CHECK(back.regions[1].layers[0].k == model.regions[1].layers[0].k);
  CHECK(back.regions[1].layers[0].m0 == model.regions[1].layers[0].m0);
  CHECK(back.regions[0].kappa == model.regions[0].kappa);
  CHECK(back.phases.at(2).membrane.a == model.phases.at(2).membrane.a);
  CHECK(back.phases.at(2).k_dissipation == model.phases.at(2).k_dissipation);
  CHECK(verify_tensor_properties(back).to_json() == verify_tensor_properties(model).to_json());
  {
    std::ofstream out(stem + ".bin", std::ios::binary | std::ios::app);
    out.write("\0\0\0\0\0\0\0\0", 8);
  }
  CHECK_THROWS_AS(import_model(stem), IoError);
  std::remove((stem + ".bin").c_str());
  CHECK_THROWS_AS(import_model(stem), IoError);
  std::remove((stem + ".json").c_str());
}
