#include "poroplate/kinematics.hpp"

#include <cmath>

namespace poroplate {

SampledField::SampledField(int nx_, int ny_, int nz_, double lx_, double ly_)
    : nx(nx_), ny(ny_), nz(nz_), lx(lx_), ly(ly_), data(static_cast<std::size_t>(nx_) * ny_ * nz_ * 3, 0.0) {}

std::vector<double> thickness_weights(int nz) {
  std::vector<double> w(nz, 1.0 / (nz - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

namespace {

void check(const SampledField& f) {
  if (f.nz < 3) throw BadGrid("at least 3 thickness points are required");
  if (f.nx < 3 || f.ny < 3) throw BadGrid("at least 3 points per plane direction are required");
  if (!(f.lx > 0) || !(f.ly > 0)) throw BadGrid("plane extents must be positive");
  if (f.data.size() != static_cast<std::size_t>(f.nx) * f.ny * f.nz * 3) throw BadGrid("field size mismatch");
}

// Gradient columns (d1, d2, d3) of component c at a sample point.
std::array<double, 3> gradient(const SampledField& f, int i, int j, int k, int c) {
  const double dx = f.lx / f.nx, dy = f.ly / f.ny, dz = 1.0 / (f.nz - 1);
  const int ip = (i + 1) % f.nx, im = (i + f.nx - 1) % f.nx;
  const int jp = (j + 1) % f.ny, jm = (j + f.ny - 1) % f.ny;
  std::array<double, 3> g;
  g[0] = (f.at(ip, j, k, c) - f.at(im, j, k, c)) / (2 * dx);
  g[1] = (f.at(i, jp, k, c) - f.at(i, jm, k, c)) / (2 * dy);
  if (k == 0)
    g[2] = (-3 * f.at(i, j, 0, c) + 4 * f.at(i, j, 1, c) - f.at(i, j, 2, c)) / (2 * dz);
  else if (k == f.nz - 1)
    g[2] = (3 * f.at(i, j, k, c) - 4 * f.at(i, j, k - 1, c) + f.at(i, j, k - 2, c)) / (2 * dz);
  else
    g[2] = (f.at(i, j, k + 1, c) - f.at(i, j, k - 1, c)) / (2 * dz);
  return g;
}

template <class F>
double integrate(const SampledField& f, F pointwise) {
  const auto w = thickness_weights(f.nz);
  const double da = f.lx / f.nx * f.ly / f.ny;
  double s = 0.0;
  for (int i = 0; i < f.nx; ++i)
    for (int j = 0; j < f.ny; ++j)
      for (int k = 0; k < f.nz; ++k) s += da * w[k] * pointwise(i, j, k);
  return s;
}

double grad_norm2(const SampledField& f, double h) {
  return integrate(f, [&](int i, int j, int k) {
    double s = 0;
    for (int c = 0; c < 3; ++c) {
      auto g = gradient(f, i, j, k, c);
      g[2] /= h;
      s += g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    }
    return s;
  });
}

double l2_norm2(const SampledField& f) {
  return integrate(f, [&](int i, int j, int k) {
    double s = 0;
    for (int c = 0; c < 3; ++c) s += f.at(i, j, k, c) * f.at(i, j, k, c);
    return s;
  });
}

}  // namespace

double scaled_strain_norm2(const SampledField& psi, double h) {
  check(psi);
  return integrate(psi, [&](int i, int j, int k) {
    double g[3][3];
    for (int c = 0; c < 3; ++c) {
      const auto gc = gradient(psi, i, j, k, c);
      g[c][0] = gc[0];
      g[c][1] = gc[1];
      g[c][2] = gc[2] / h;
    }
    double s = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double e = 0.5 * (g[a][b] + g[b][a]);
        s += e * e;
      }
    return s;
  });
}

SampledField GrisoDecomposition::plate_part() const {
  SampledField f(residual.nx, residual.ny, residual.nz, residual.lx, residual.ly);
  for (int i = 0; i < f.nx; ++i)
    for (int j = 0; j < f.ny; ++j) {
      const auto& ph = psi_hat[i * f.ny + j];
      const auto& rr = r[i * f.ny + j];
      for (int k = 0; k < f.nz; ++k) {
        const double z = f.x3(k);
        f.at(i, j, k, 0) = ph[0] + rr[1] * z;
        f.at(i, j, k, 1) = ph[1] - rr[0] * z;
        f.at(i, j, k, 2) = ph[2];
      }
    }
  return f;
}

SampledField GrisoDecomposition::reconstruct() const {
  SampledField f = plate_part();
  for (std::size_t n = 0; n < f.data.size(); ++n) f.data[n] += residual.data[n];
  return f;
}

GrisoDecomposition griso_decompose(const SampledField& psi) {
  check(psi);
  const auto w = thickness_weights(psi.nz);
  double m2 = 0;
  for (int k = 0; k < psi.nz; ++k) m2 += w[k] * psi.x3(k) * psi.x3(k);

  GrisoDecomposition d;
  d.nx = psi.nx;
  d.ny = psi.ny;
  d.c_i = 1.0 / m2;
  d.psi_hat.assign(static_cast<std::size_t>(psi.nx) * psi.ny, {0, 0, 0});
  d.r.assign(d.psi_hat.size(), {0, 0, 0});
  for (int i = 0; i < psi.nx; ++i)
    for (int j = 0; j < psi.ny; ++j) {
      auto& ph = d.psi_hat[i * psi.ny + j];
      auto& rr = d.r[i * psi.ny + j];
      for (int k = 0; k < psi.nz; ++k) {
        const double z = psi.x3(k);
        for (int c = 0; c < 3; ++c) ph[c] += w[k] * psi.at(i, j, k, c);
        // e3 ^ psi = (-psi2, psi1, 0)
        rr[0] -= d.c_i * w[k] * z * psi.at(i, j, k, 1);
        rr[1] += d.c_i * w[k] * z * psi.at(i, j, k, 0);
      }
    }
  d.residual = psi;
  const SampledField pp = d.plate_part();
  for (std::size_t n = 0; n < pp.data.size(); ++n) d.residual.data[n] -= pp.data[n];
  return d;
}

double korn_ratio(const SampledField& psi, double h) {
  if (!(h > 0)) throw BadGrid("thickness must be positive");
  const double den = scaled_strain_norm2(psi, h);
  if (!(den >= 1e-14)) throw ZeroStrain("scaled strain norm " + std::to_string(den) + " below 1e-14");
  const auto d = griso_decompose(psi);
  const double num = scaled_strain_norm2(d.plate_part(), h) + grad_norm2(d.residual, h) +
                     l2_norm2(d.residual) / (h * h);
  return num / den;
}

SampledField plate_displacement_field(const DiscreteSpaces& s, const Vec& u, int nz) {
  if (u.size() != s.n_u()) throw BadGrid("displacement vector size mismatch");
  SampledField f(s.grid.nx, s.grid.ny, nz, s.lx, s.ly);
  for (int i = 0; i < f.nx; ++i)
    for (int j = 0; j < f.ny; ++j) {
      const int n = s.node(i, j);
      const double a1 = u(s.a_dof(n, 0)), a2 = u(s.a_dof(n, 1));
      const double b = u(s.b_dof(n, 0)), bx = u(s.b_dof(n, 1)), by = u(s.b_dof(n, 2));
      for (int k = 0; k < nz; ++k) {
        const double z = f.x3(k);
        f.at(i, j, k, 0) = a1 - z * bx;
        f.at(i, j, k, 1) = a2 - z * by;
        f.at(i, j, k, 2) = b;
      }
    }
  return f;
}

}  // namespace poroplate
