#pragma once

#include "tvcp/signal.hpp"

#include <vector>

namespace tvcp {

/// `count` geometrically spaced points from lo to hi inclusive (ascending).
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

/// Default CV grid: 50 geometric points on [1e-4 * lambda_max(y), lambda_max(y)].
/// Falls back to {0} when y is constant.
std::vector<double> default_lambda_grid(const Signal& y, std::size_t count = 50);

struct CvResult {
    double lambda;
    std::size_t index;                 ///< position of `lambda` in the grid
    std::vector<double> grid;
    std::vector<double> errors;        ///< total squared prediction error per grid point
};

/// k-fold CV for the 1-D fused lasso. Fold j holds out the (0-based) indices
/// congruent to j mod k. Each held-out point is predicted by linear
/// interpolation of the fitted values of its nearest retained neighbours
/// (nearest fitted value at the boundary). Returns the grid value with the
/// smallest total error; exact ties go to the larger lambda.
CvResult cv_select_lambda(const Signal& y, const std::vector<double>& lambda_grid, int k = 5,
                          unsigned jobs = 1);

}  // namespace tvcp
