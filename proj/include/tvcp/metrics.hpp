#pragma once

#include "tvcp/signal.hpp"

namespace tvcp {

/// Default jump tolerance for iterative solver outputs: 1e-9 * (1 + max|theta|).
double default_jump_tol(const Signal& theta) noexcept;

/// {i : |theta_i - theta_{i+1}| > tol}, 1-based. tol = 0 is the exact definition.
ChangepointSet changepoints(const Signal& theta, double tol = 0.0);

/// Discrete total variation sum |x_i - x_{i+1}|.
double tv(const Signal& x) noexcept;

/// One-sided screening distance d(A|B) = max_{b in B} min_{a in A} |a - b|.
/// B empty gives 0; A empty with B nonempty gives +infinity.
ExtendedDistance screening_distance(const ChangepointSet& a, const ChangepointSet& b);

/// max{d(A|B), d(B|A)}; 0 when both are empty.
ExtendedDistance hausdorff(const ChangepointSet& a, const ChangepointSet& b);

/// Smallest segment length W_n with boundary conventions t_0 = 0, t_{s+1} = n.
Index min_spacing(const ChangepointSet& s0, std::size_t n);

/// Smallest jump magnitude H_n over S0; +infinity when S0 is empty.
double min_gap(const Signal& theta0, const ChangepointSet& s0);

// Second-order analogs used for piecewise-linear signals.

/// sum_{i=2}^{n-1} |x_{i-1} - 2x_i + x_{i+1}|.
double tv2(const Signal& x) noexcept;
/// Knots {i in 2..n-1 : |x_{i-1} - 2x_i + x_{i+1}| > tol}.
ChangepointSet knots2(const Signal& theta, double tol = 0.0);
/// Smallest second-difference magnitude over the knots; +infinity without knots.
double min_gap2(const Signal& theta, double tol = 0.0);

}  // namespace tvcp
