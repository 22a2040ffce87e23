#include "poroplate/mandel.hpp"

#include <cmath>

namespace poroplate {
namespace mandel {

Eigen::Vector3d from_sym2(const Eigen::Matrix2d& m) {
  return {m(0, 0), m(1, 1), kSqrt2 * 0.5 * (m(0, 1) + m(1, 0))};
}

Eigen::Matrix2d to_sym2(const Eigen::Vector3d& v) {
  Eigen::Matrix2d m;
  m << v(0), v(2) / kSqrt2, v(2) / kSqrt2, v(1);
  return m;
}

Vec6 from_sym3(const Mat3& m) {
  Vec6 v;
  v << m(0, 0), m(1, 1), m(2, 2), kSqrt2 * 0.5 * (m(1, 2) + m(2, 1)),
      kSqrt2 * 0.5 * (m(0, 2) + m(2, 0)), kSqrt2 * 0.5 * (m(0, 1) + m(1, 0));
  return v;
}

Mat3 to_sym3(const Vec6& v) {
  Mat3 m;
  const double s = 1.0 / kSqrt2;
  m << v(0), s * v(5), s * v(4), s * v(5), v(1), s * v(3), s * v(4), s * v(3), v(2);
  return m;
}

int index3(int i, int j) {
  if (i == j) return i;
  if (i > j) std::swap(i, j);
  if (i == 1 && j == 2) return 3;
  if (i == 0 && j == 2) return 4;
  return 5;
}

Vec6 dyad3(int i, int j) {
  Vec6 v = Vec6::Zero();
  v(index3(i, j)) = (i == j) ? 1.0 : 1.0 / kSqrt2;
  return v;
}

Vec6 embed(const Eigen::Vector3d& v2) {
  Vec6 v = Vec6::Zero();
  v(0) = v2(0);
  v(1) = v2(1);
  v(5) = v2(2);
  return v;
}

Eigen::Vector3d restrict(const Vec6& v6) { return {v6(0), v6(1), v6(5)}; }

}  // namespace mandel

Stiffness::Stiffness(const Mat6& mandel) : m_(mandel) {
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if (!m_.allFinite()) throw BadTensor("non-finite entries");
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw BadTensor("Mandel matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat6> es(m_);
  nu_ = es.eigenvalues().minCoeff();
  if (!(nu_ > 0.0)) throw BadTensor("elasticity is not positive definite");
}

Stiffness Stiffness::isotropic(double lambda, double mu) {
  Mat6 m = 2.0 * mu * Mat6::Identity();
  m.topLeftCorner<3, 3>().array() += lambda;
  return Stiffness(m);
}

Stiffness Stiffness::from_upper21(const std::array<double, 21>& c) {
  Mat6 m;
  int k = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      m(i, j) = c[k];
      m(j, i) = c[k];
      ++k;
    }
  return Stiffness(m);
}

std::array<double, 21> Stiffness::upper21() const {
  std::array<double, 21> c{};
  int k = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) c[k++] = m_(i, j);
  return c;
}

double Stiffness::component(int i, int j, int k, int l) const {
  const double fi = (i == j) ? 1.0 : 1.0 / mandel::kSqrt2;
  const double fk = (k == l) ? 1.0 : 1.0 / mandel::kSqrt2;
  return m_(mandel::index3(i, j), mandel::index3(k, l)) * fi * fk;
}

Mat3 Stiffness::apply(const Mat3& e) const {
  return mandel::to_sym3(m_ * mandel::from_sym3(e));
}

}  // namespace poroplate
