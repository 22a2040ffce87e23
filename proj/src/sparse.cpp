#include "poroplate/sparse.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>

namespace poroplate {

namespace {

// SPD preconditioner applied through a sparse LDL^T factor, or a diagonal.
class FactorPreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  FactorPreconditioner() = default;
  void set_matrix(const SpMat& p) {
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
    ldlt_->compute(p);
    if (ldlt_->info() != Eigen::Success) throw SingularSystem("preconditioner factorization failed");
    if ((ldlt_->vectorD().array() <= 0).any()) throw SingularSystem("preconditioner is not positive definite");
  }
  void set_diagonal(const SpMat& a) {
    inv_diag_ = a.diagonal().cwiseAbs();
    for (Eigen::Index i = 0; i < inv_diag_.size(); ++i)
      inv_diag_(i) = inv_diag_(i) > 0 ? 1.0 / inv_diag_(i) : 1.0;
  }

  template <typename M> FactorPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M> FactorPreconditioner& factorize(const M&) { return *this; }
  template <typename M> FactorPreconditioner& compute(const M&) { return *this; }

  template <typename Rhs> Vec solve(const Rhs& b) const {
    if (ldlt_) return ldlt_->solve(Vec(b));
    return inv_diag_.cwiseProduct(Vec(b));
  }
  Eigen::ComputationInfo info() { return Eigen::Success; }

 private:
  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  Vec inv_diag_;
};

}  // namespace

struct SymmetricSolver::Impl {
  SpMat a;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool use_lu = false;
  Eigen::MINRES<SpMat, Eigen::Lower | Eigen::Upper, FactorPreconditioner> minres;
  double tol = 1e-10;
};

SymmetricSolver::SymmetricSolver() : impl_(std::make_unique<Impl>()) {}
SymmetricSolver::~SymmetricSolver() = default;
SymmetricSolver::SymmetricSolver(SymmetricSolver&&) noexcept = default;
SymmetricSolver& SymmetricSolver::operator=(SymmetricSolver&&) noexcept = default;

void SymmetricSolver::factor(const SpMat& a, const SolverOptions& opt, const SpMat* precond) {
  if (a.rows() != a.cols()) throw SingularSystem("matrix is not square");
  n_ = a.rows();
  impl_->a = a;
  impl_->a.makeCompressed();
  impl_->tol = opt.rel_tol;
  iterative_ = opt.kind == SolverOptions::Kind::Iterative ||
               (opt.kind == SolverOptions::Kind::Auto && n_ > opt.auto_threshold);
  if (n_ == 0) return;
  if (iterative_) {
    auto& m = impl_->minres;
    if (precond)
      m.preconditioner().set_matrix(*precond);
    else
      m.preconditioner().set_diagonal(impl_->a);
    m.compute(impl_->a);
    m.setTolerance(opt.rel_tol);
    m.setMaxIterations(opt.max_iter);
  } else {
    // LDL^T without pivoting covers SPD and quasi-definite systems; anything
    // with a vanishing pivot goes to LU.
    bool ok = !opt.force_lu;
    if (ok) {
      impl_->ldlt.compute(impl_->a);
      ok = impl_->ldlt.info() == Eigen::Success;
    }
    if (ok) {
      const Vec& d = impl_->ldlt.vectorD();
      const double dmax = d.cwiseAbs().maxCoeff();
      ok = d.allFinite() && dmax > 0 && d.cwiseAbs().minCoeff() > 1e-13 * dmax;
    }
    impl_->use_lu = !ok;
    if (impl_->use_lu) {
      impl_->lu.compute(impl_->a);
      if (impl_->lu.info() != Eigen::Success) throw SingularSystem("sparse LU factorization failed");
    }
  }
}

Vec SymmetricSolver::solve(const Vec& b) const { return solve(b, Vec::Zero(b.size())); }

Vec SymmetricSolver::solve(const Vec& b, const Vec& guess) const {
  if (n_ == 0) return Vec();
  Vec x;
  if (iterative_) {
    x = impl_->minres.solveWithGuess(b, guess);
    last_iters_ = static_cast<int>(impl_->minres.iterations());
    if (impl_->minres.info() != Eigen::Success || impl_->minres.error() > impl_->tol * 1.0001)
      throw SingularSystem("MINRES did not converge (relative residual " +
                           std::to_string(impl_->minres.error()) + ")");
  } else {
    last_iters_ = 0;
    if (impl_->use_lu) {
      x = impl_->lu.solve(b);
      if (impl_->lu.info() != Eigen::Success) throw SingularSystem("sparse LU solve failed");
    } else {
      x = impl_->ldlt.solve(b);
    }
  }
  if (!x.allFinite()) throw SingularSystem("non-finite solution");
  return x;
}

Mat SymmetricSolver::solve(const Mat& b) const {
  Mat x(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) x.col(c) = solve(Vec(b.col(c)));
  return x;
}

double relative_residual(const SpMat& a, const Vec& x, const Vec& b) {
  return (a * x - b).norm() / std::max(b.norm(), 1e-300);
}

SpMat from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double symmetry_defect(const SpMat& a) {
  SpMat d = SpMat(a.transpose()) - a;
  double mx = 0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
  return mx;
}

}  // namespace poroplate
