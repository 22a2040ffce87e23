#pragma once

#include "poroplate/common.hpp"

#include <array>

namespace poroplate {

// Orthonormal vector images of symmetric matrices.
// 2x2: (m11, m22, sqrt2 m12).  3x3: (m11, m22, m33, sqrt2 m23, sqrt2 m13, sqrt2 m12).
namespace mandel {

inline constexpr double kSqrt2 = 1.41421356237309504880;

Eigen::Vector3d from_sym2(const Eigen::Matrix2d& m);
Eigen::Matrix2d to_sym2(const Eigen::Vector3d& v);
Vec6 from_sym3(const Mat3& m);
Mat3 to_sym3(const Vec6& v);

// Position of symmetric pair (i,j), zero based, in the 6-vector.
int index3(int i, int j);
// Unit Mandel vector of e_i (.) e_j (symmetrized dyad); off-diagonal entries get 1/sqrt2.
Vec6 dyad3(int i, int j);

// Embedding of the in-plane block into the 3x3 image.
Vec6 embed(const Eigen::Vector3d& v2);
Eigen::Vector3d restrict(const Vec6& v6);

}  // namespace mandel

// Fourth order elasticity tensor with major and minor symmetries, stored as its
// 6x6 Mandel matrix.
class Stiffness {
 public:
  Stiffness() = default;
  explicit Stiffness(const Mat6& mandel);

  static Stiffness isotropic(double lambda, double mu);
  // Upper triangle of the Mandel matrix, row by row (21 numbers).
  static Stiffness from_upper21(const std::array<double, 21>& c);

  const Mat6& matrix() const { return m_; }
  double nu() const { return nu_; }
  std::array<double, 21> upper21() const;

  // Component A_ijkl, zero based.
  double component(int i, int j, int k, int l) const;
  Mat3 apply(const Mat3& e) const;

 private:
  Mat6 m_ = Mat6::Zero();
  double nu_ = 0.0;
};

}  // namespace poroplate
