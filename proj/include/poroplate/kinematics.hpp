#pragma once

#include "poroplate/common.hpp"
#include "poroplate/plate.hpp"

#include <array>
#include <vector>

namespace poroplate {

// Vector field sampled on a periodic nx x ny plane grid times nz points
// spanning x3 in [-1/2, 1/2] (both ends included).
struct SampledField {
  int nx = 0, ny = 0, nz = 0;
  double lx = 1.0, ly = 1.0;
  std::vector<double> data;  // ((i * ny + j) * nz + k) * 3 + c

  SampledField() = default;
  SampledField(int nx_, int ny_, int nz_, double lx_ = 1.0, double ly_ = 1.0);
  double& at(int i, int j, int k, int c) { return data[((static_cast<std::size_t>(i) * ny + j) * nz + k) * 3 + c]; }
  double at(int i, int j, int k, int c) const {
    return data[((static_cast<std::size_t>(i) * ny + j) * nz + k) * 3 + c];
  }
  double x(int i) const { return i * lx / nx; }
  double y(int j) const { return j * ly / ny; }
  double x3(int k) const { return -0.5 + static_cast<double>(k) / (nz - 1); }
};

struct GrisoDecomposition {
  int nx = 0, ny = 0;
  std::vector<std::array<double, 3>> psi_hat;  // thickness average, per plane point
  std::vector<std::array<double, 3>> r;        // rotation, r[2] == 0
  SampledField residual;
  double c_i = 12.0;  // reciprocal of the discrete second moment of the thickness

  // psi_hat + r ^ x3 e3 on the sampling grid
  SampledField plate_part() const;
  SampledField reconstruct() const;
};

// Composite trapezoid weights for the thickness points.
std::vector<double> thickness_weights(int nz);

GrisoDecomposition griso_decompose(const SampledField& psi);

// Scaled-gradient Korn ratio of the decomposition; h is the plate thickness.
double korn_ratio(const SampledField& psi, double h);

// Squared L2 norm of sym(d1, d2, d3 / h) of the field.
double scaled_strain_norm2(const SampledField& psi, double h);

// Kirchhoff-Love displacement (a - x3 grad b, b) of a plate state at the grid nodes.
SampledField plate_displacement_field(const DiscreteSpaces& s, const Vec& u, int nz);

}  // namespace poroplate
