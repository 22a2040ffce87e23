#pragma once

#include "poroplate/effective.hpp"
#include "poroplate/plate.hpp"

#include <cmath>
#include <vector>

namespace fixtures {

using namespace poroplate;

// Plane-stress membrane matrix of the isotropic solid with lambda = mu = 1.
inline Eigen::Matrix3d membrane_iso() {
  Eigen::Matrix3d d;
  d << 8.0 / 3, 2.0 / 3, 0, 2.0 / 3, 8.0 / 3, 0, 0, 0, 2;
  return d;
}

struct Layer {
  double lo, hi;
  double theta;  // Theta = theta * I
  double m0;
  double k33;
  double kappa = 1.0;  // density of the layer
  Eigen::Matrix3d membrane = membrane_iso();
};

inline RegionCoefficients region(double x0, double y0, double x1, double y1, const std::vector<Layer>& layers) {
  RegionCoefficients rc;
  rc.x0 = x0;
  rc.y0 = y0;
  rc.x1 = x1;
  rc.y1 = y1;
  for (const auto& l : layers) {
    const double m0 = l.hi - l.lo, m1 = (l.hi * l.hi - l.lo * l.lo) / 2,
                 m2 = (std::pow(l.hi, 3) - std::pow(l.lo, 3)) / 3;
    rc.a_hom.topLeftCorner<3, 3>() += m0 * l.membrane;
    rc.a_hom.topRightCorner<3, 3>() -= m1 * l.membrane;
    rc.a_hom.bottomLeftCorner<3, 3>() -= m1 * l.membrane;
    rc.a_hom.bottomRightCorner<3, 3>() += m2 * l.membrane;
    rc.kappa += m0 * l.kappa;
    LayerCoefficients lc;
    lc.lo = l.lo;
    lc.hi = l.hi;
    lc.fluid_fraction = l.m0 > 0 ? 0.3 : 0.0;
    lc.theta = l.theta * Mat3::Identity();
    lc.m0 = l.m0;
    lc.k = Mat3::Zero();
    lc.k(2, 2) = l.k33;
    rc.layers.push_back(lc);
  }
  return rc;
}

inline EffectiveModel single(const std::vector<Layer>& layers, double lx = 1.0, double ly = 1.0) {
  EffectiveModel m;
  m.lx = lx;
  m.ly = ly;
  m.regions.push_back(region(0, 0, lx, ly, layers));
  return m;
}

inline EffectiveModel poro_plate(double theta = 0.4, double m0 = 0.5, double k33 = 0.02) {
  return single({{-0.5, 0.5, theta, m0, k33}});
}

inline EffectiveModel solid_plate() { return single({{-0.5, 0.5, 0.0, 0.0, 0.0}}); }

// Poroelastic lower half, elastic upper half.
inline EffectiveModel asymmetric_laminate() {
  return single({{-0.5, 0.0, 0.4, 0.5, 0.02}, {0.0, 0.5, 0.0, 0.0, 0.0, 2.0}});
}

// Left half poroelastic, right half elastic.
inline EffectiveModel two_region() {
  EffectiveModel m;
  m.regions.push_back(region(0, 0, 0.5, 1, {{-0.5, 0.5, 0.4, 0.5, 0.02}}));
  m.regions.push_back(region(0.5, 0, 1, 1, {{-0.5, 0.5, 0.0, 0.0, 0.0, 2.0}}));
  return m;
}

// Pressure field on the full grid from f(x, y, x3) at column centres and x3 nodes.
template <class F>
Vec pressure_field(const DiscreteSpaces& s, F f) {
  Vec v(s.n_p);
  for (int ix = 0; ix < s.grid.nx; ++ix)
    for (int iy = 0; iy < s.grid.ny; ++iy)
      for (int kz = 0; kz <= s.grid.nz; ++kz)
        v(s.p_dof(ix * s.grid.ny + iy, kz)) = f((ix + 0.5) * s.hx(), (iy + 0.5) * s.hy(), -0.5 + kz * s.hz());
  return v;
}

template <class F>
Vec plane_field(const DiscreteSpaces& s, F f) {
  Vec v(s.n_nodes());
  for (int ix = 0; ix < s.grid.nx; ++ix)
    for (int iy = 0; iy < s.grid.ny; ++iy) v(s.node(ix, iy)) = f(ix * s.hx(), iy * s.hy());
  return v;
}

}  // namespace fixtures
