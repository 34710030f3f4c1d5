#include "magma/linear_solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "magma/common.hpp"

namespace magma {

Eigen::VectorXd solve_sparse(Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& b) {
  A.makeCompressed();
  if (A.rows() <= kDirectLimit) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw SolverFailure("sparse LU factorization failed (singular system)");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
      throw SolverFailure("sparse LU solve failed");
    return x;
  }
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>
      it;
  it.setTolerance(1e-12);
  it.setMaxIterations(2000);
  it.compute(A);
  Eigen::VectorXd x = it.solve(b);
  if (it.info() != Eigen::Success)
    throw SolverFailure("iterative linear solve did not converge");
  return x;
}

}  // namespace magma
