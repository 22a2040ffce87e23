#include "doctest.h"

#include "plate_fixtures.hpp"
#include "poroplate/kinematics.hpp"

#include <cmath>
#include <random>

using namespace poroplate;

namespace {

const double kPi = 3.14159265358979323846;

template <class F>
SampledField sample(int nx, int ny, int nz, F f) {
  SampledField s(nx, ny, nz);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const auto v = f(s.x(i), s.y(j), s.x3(k));
        for (int c = 0; c < 3; ++c) s.at(i, j, k, c) = v[c];
      }
  return s;
}

double max_abs(const SampledField& f) {
  double m = 0;
  for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

// Smooth periodic field: low Fourier modes times cubics in x3.
struct RandomField {
  double c[3][2][2][4];
  explicit RandomField(std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (auto& a : c)
      for (auto& b : a)
        for (auto& d : b)
          for (double& e : d) e = n(rng);
  }
  std::array<double, 3> operator()(double x, double y, double z) const {
    std::array<double, 3> v{0, 0, 0};
    for (int comp = 0; comp < 3; ++comp)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
          const double mode = (p ? std::cos(2 * kPi * x) : std::sin(2 * kPi * x)) *
                              (q ? std::cos(2 * kPi * y) : std::sin(2 * kPi * y));
          const double* a = c[comp][p][q];
          v[comp] += mode * (a[0] + z * (a[1] + z * (a[2] + z * a[3])));
        }
    return v;
  }
};

}  // namespace

TEST_CASE("reconstruction identity") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  SampledField f(5, 4, 7);
  for (double& v : f.data) v = u(rng);
  const auto d = griso_decompose(f);
  const auto g = d.reconstruct();
  double err = 0;
  for (std::size_t n = 0; n < f.data.size(); ++n) err = std::max(err, std::abs(g.data[n] - f.data[n]));
  CHECK(err <= 1e-14);
  for (const auto& r : d.r) CHECK(r[2] == 0.0);
}

TEST_CASE("thickness normalization") {
  for (int nz : {3, 5, 11, 101}) {
    const double dz = 1.0 / (nz - 1);
    const auto d = griso_decompose(SampledField(3, 3, nz));
    // the trapezoid rule integrates x3^2 with error dz^2 / 6
    CHECK(d.c_i == doctest::Approx(1.0 / (1.0 / 12 + dz * dz / 6)).epsilon(1e-13));
  }
  CHECK(griso_decompose(SampledField(3, 3, 2001)).c_i == doctest::Approx(12.0).epsilon(1e-6));
  CHECK_THROWS_AS(griso_decompose(SampledField(3, 3, 2)), BadGrid);
}

TEST_CASE("decomposition examples") {
  const int nx = 8, ny = 6, nz = 9;
  SUBCASE("in-plane field") {
    const auto f = sample(nx, ny, nz, [](double x, double y, double) {
      return std::array<double, 3>{std::sin(2 * kPi * x), std::cos(2 * kPi * y), 0.0};
    });
    const auto d = griso_decompose(f);
    CHECK(max_abs(d.residual) <= 1e-15);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        CHECK(d.psi_hat[i * ny + j][0] == doctest::Approx(f.at(i, j, 0, 0)).epsilon(1e-14));
        CHECK(std::abs(d.r[i * ny + j][0]) + std::abs(d.r[i * ny + j][1]) <= 1e-14);
      }
  }
  SUBCASE("pure rotation") {
    const auto f = sample(nx, ny, nz, [](double, double, double z) { return std::array<double, 3>{z, 0.0, 0.0}; });
    const auto d = griso_decompose(f);
    for (const auto& p : d.psi_hat) CHECK(std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]) <= 1e-15);
    for (const auto& r : d.r) {
      CHECK(std::abs(r[0]) <= 1e-14);
      CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(max_abs(d.residual) <= 1e-12);
  }
  SUBCASE("transverse field") {
    const auto f = sample(nx, ny, nz, [](double x, double y, double) {
      return std::array<double, 3>{0.0, 0.0, std::sin(2 * kPi * (x + y))};
    });
    const auto d = griso_decompose(f);
    CHECK(max_abs(d.residual) <= 1e-15);
    for (const auto& r : d.r) CHECK(std::abs(r[0]) + std::abs(r[1]) == 0.0);
  }
  SUBCASE("x3-independent additions only move the average") {
    std::mt19937 rng(5);
    const RandomField rf(rng);
    const auto f = sample(nx, ny, nz, rf);
    const auto g = sample(nx, ny, nz, [&](double x, double y, double z) {
      auto v = rf(x, y, z);
      v[0] += std::cos(2 * kPi * y);
      v[2] -= std::sin(2 * kPi * x);
      return v;
    });
    const auto df = griso_decompose(f), dg = griso_decompose(g);
    double dr = 0, dres = 0;
    for (std::size_t n = 0; n < df.r.size(); ++n)
      for (int c = 0; c < 3; ++c) dr = std::max(dr, std::abs(df.r[n][c] - dg.r[n][c]));
    for (std::size_t n = 0; n < df.residual.data.size(); ++n)
      dres = std::max(dres, std::abs(df.residual.data[n] - dg.residual.data[n]));
    CHECK(dr <= 1e-13);
    CHECK(dres <= 1e-13);
  }
}

TEST_CASE("plate displacement has no residual") {
  const auto s = build_spaces({6, 5, 1}, PlateMode::Quasistatic);
  Vec u = Vec::Zero(s.n_u());
  u.head(s.n_a) = Vec::Random(s.n_a);
  u.tail(s.n_b) = Vec::Random(s.n_b);
  const auto f = plate_displacement_field(s, u, 5);
  const auto d = griso_decompose(f);
  CHECK(max_abs(d.residual) <= 1e-14);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 5; ++j) {
      const int n = s.node(i, j);
      const auto& r = d.r[i * 5 + j];
      CHECK(r[0] == doctest::Approx(u(s.b_dof(n, 2))).epsilon(1e-13));
      CHECK(r[1] == doctest::Approx(-u(s.b_dof(n, 1))).epsilon(1e-13));
      CHECK(d.psi_hat[i * 5 + j][2] == doctest::Approx(u(s.b_dof(n, 0))).epsilon(1e-13));
    }
}

TEST_CASE("Korn ratio") {
  SUBCASE("rigid translation") {
    const auto f = sample(6, 6, 5, [](double, double, double) { return std::array<double, 3>{1.0, -2.0, 0.5}; });
    CHECK_THROWS_AS(korn_ratio(f, 0.1), ZeroStrain);
  }
  SUBCASE("pure bending") {
    for (double h : {0.1, 0.01}) {
      const auto f = sample(32, 32, 5, [&](double x, double y, double z) {
        const double w = 2 * kPi;
        return std::array<double, 3>{-z * w * std::cos(w * x) * std::sin(w * y),
                                     -z * w * std::sin(w * x) * std::cos(w * y),
                                     std::sin(w * x) * std::sin(w * y) / h};
      });
      const double r = korn_ratio(f, h);
      CHECK(std::isfinite(r));
      CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("random ensemble under thickness halving") {
    std::mt19937 rng(11);
    std::vector<RandomField> fields;
    for (int n = 0; n < 50; ++n) fields.emplace_back(rng);
    std::vector<double> worst;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
      double m = 0;
      for (const auto& rf : fields) m = std::max(m, korn_ratio(sample(16, 16, 9, rf), h));
      worst.push_back(m);
    }
    for (std::size_t k = 0; k + 1 < worst.size(); ++k) CHECK(worst[k + 1] / worst[k] <= 1.1);
  }
}
