#pragma once

#include <Eigen/Sparse>

namespace magma {

// Solves the sparse nonsymmetric stencil systems of the Newton and Poisson
// steps. Direct sparse LU up to kDirectLimit unknowns; above that a
// BiCGSTAB iteration with incomplete-LU preconditioning takes over.
// Throws SolverFailure when the factorization or iteration fails.
inline constexpr int kDirectLimit = 513 * 513;

Eigen::VectorXd solve_sparse(Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& b);

}  // namespace magma
