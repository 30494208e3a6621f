#pragma once

#include "tvcp/signal.hpp"

#include <span>

namespace tvcp {

struct FusedLassoFit {
    Signal theta_hat;
    double lambda;
    /// 1/2 sum (y - theta)^2 + lambda * penalty(theta) at theta_hat.
    double objective;
};

/// 1/2 ||y - theta||^2 + lambda * sum |theta_i - theta_{i+1}|.
double fused_lasso_objective(std::span<const double> y, std::span<const double> theta, double lambda);

/// Exact minimiser of the 1-D fused lasso criterion by linear-time dynamic
/// programming over piecewise-quadratic messages. Fused neighbours come out
/// bitwise equal, so changepoints(fit.theta_hat, 0) is meaningful.
FusedLassoFit fused_lasso_1d(const Signal& y, double lambda);

/// Same solver on a raw span; writes the solution into `theta` (same length).
void fused_lasso_1d(std::span<const double> y, double lambda, std::span<double> theta);

/// Smallest lambda at which the solution is the constant mean(y):
/// max_i |sum_{j<=i} (y_j - mean(y))|, i = 1..n-1.
double lambda_max(const Signal& y);

/// Certifies stationarity: there is s in [-1,1]^{n-1}, s = sign of the jump on
/// jumps, with y - theta = lambda * D^T s within `tol` componentwise.
bool check_kkt(const Signal& y, const FusedLassoFit& fit, double tol);

}  // namespace tvcp
