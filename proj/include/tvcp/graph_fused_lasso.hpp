#pragma once

#include "tvcp/admm.hpp"
#include "tvcp/fused_lasso.hpp"
#include "tvcp/graph.hpp"

namespace tvcp {

/// m x n edge-incidence operator, row e = (+1 at u, -1 at v).
SparseOperator incidence_operator(const Graph& g);

/// 1/2 ||y - theta||^2 + lambda * sum_{(i,j) in E} |theta_i - theta_j|.
double graph_fused_lasso_objective(const Signal& y, const Signal& theta, const Graph& g, double lambda);

/// Graph fused lasso by ADMM on the incidence split, certified to a duality
/// gap <= tol * (1 + |objective|). Throws ConvergenceError otherwise.
FusedLassoFit graph_fused_lasso(const Signal& y, const Graph& g, double lambda, double tol = 1e-10,
                                int max_iter = 100000);

}  // namespace tvcp
