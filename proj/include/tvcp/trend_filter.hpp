#pragma once

#include "tvcp/admm.hpp"
#include "tvcp/signal.hpp"

namespace tvcp {

struct TrendFit {
    Signal theta_hat;
    double lambda;
    double objective;
    double gap = 0.0;
    int iterations = 0;
};

/// (n-2) x n operator with rows (1, -2, 1).
SparseOperator second_difference_operator(std::size_t n);

/// 1/2 ||y - theta||^2 + lambda * sum |theta_i - 2 theta_{i+1} + theta_{i+2}|.
double trend_objective(const Signal& y, const Signal& theta, double lambda);

/// Linear trend filtering. Solved by over-relaxed ADMM on z = D2 theta until
/// the duality gap is <= tol * (1 + |objective|). n <= 2 returns y.
TrendFit trend_filter_linear(const Signal& y, double lambda, double tol = 1e-8, int max_iter = 50000);

/// Knot tolerance for iterative trend-filter output: 1e-6 * (1 + max|theta|).
double default_knot_tol(const Signal& theta) noexcept;

struct LinearFitOfKink {
    double slope;      ///< (a1 + a2) / 2
    double intercept;  ///< (a1 - a2) r (r + 1) / (2 (2r + 1))
    double sse;        ///< residual sum of squares at the optimum
};

/// Least-squares line through f(x) = a1 x (x >= 0), a2 x (x < 0) on x = -r..r.
/// The residual is (a1 - a2)^2 r (r + 1)(r^2 + r + 1) / (12 (2r + 1)).
LinearFitOfKink piecewise_linear_lsq(double a1, double a2, long r);

}  // namespace tvcp
