#pragma once

#include "poroplate/common.hpp"

#include <memory>

namespace poroplate {

struct SolverOptions {
  enum class Kind { Auto, Direct, Iterative };
  Kind kind = Kind::Auto;
  double rel_tol = 1e-10;
  int max_iter = 20000;
  // Auto switches to the iterative path above this many unknowns.
  Eigen::Index auto_threshold = 40000;
  // Skip LDL^T and factor with LU directly.
  bool force_lu = false;
};

// Solver for symmetric (possibly indefinite) sparse systems. The direct path
// is a sparse LDL^T (AMD ordering), falling back to sparse LU when a pivot
// vanishes; the iterative path is
// preconditioned MINRES with a user supplied SPD preconditioner, or the
// absolute diagonal when none is given.
class SymmetricSolver {
 public:
  SymmetricSolver();
  ~SymmetricSolver();
  SymmetricSolver(SymmetricSolver&&) noexcept;
  SymmetricSolver& operator=(SymmetricSolver&&) noexcept;

  void factor(const SpMat& a, const SolverOptions& opt = {}, const SpMat* precond = nullptr);
  Vec solve(const Vec& b) const;
  Vec solve(const Vec& b, const Vec& guess) const;
  Mat solve(const Mat& b) const;

  bool iterative() const { return iterative_; }
  Eigen::Index rows() const { return n_; }
  int last_iterations() const { return last_iters_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool iterative_ = false;
  Eigen::Index n_ = 0;
  mutable int last_iters_ = 0;
};

// Relative residual ||A x - b|| / max(||b||, tiny).
double relative_residual(const SpMat& a, const Vec& x, const Vec& b);

SpMat from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& t);
double symmetry_defect(const SpMat& a);

}  // namespace poroplate
