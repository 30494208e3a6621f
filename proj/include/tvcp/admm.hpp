#pragma once

#include <Eigen/Sparse>

#include <span>
#include <vector>

namespace tvcp {

using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct AdmmOptions {
    /// Stop once the duality gap is <= tol * (1 + |objective|).
    double tol = 1e-8;
    int max_iter = 50000;
    /// Over-relaxation factor in (0, 2).
    double relaxation = 1.6;
    /// Initial penalty; <= 0 means "use lambda".
    double rho = 0.0;
    int check_every = 10;
};

struct AdmmResult {
    std::vector<double> theta;
    double objective;
    double gap;
    int iterations;
};

/// Penalty ||D theta||_1.
double l1_of_operator(const SparseOperator& d, std::span<const double> theta);

/// Minimises 1/2 ||y - theta||^2 + lambda ||D theta||_1 by ADMM on the split
/// z = D theta with over-relaxation and residual-balanced penalty. Optimality
/// is certified with the dual problem
///   max_u 1/2||y||^2 - 1/2||y - D^T u||^2  s.t. ||u||_inf <= lambda,
/// whose feasible point is the clipped scaled multiplier.
/// Throws ConvergenceError (carrying the last gap) after max_iter iterations.
AdmmResult solve_generalized_lasso(std::span<const double> y, const SparseOperator& d, double lambda,
                                   const AdmmOptions& options);

}  // namespace tvcp
