#include "tvcp/trend_filter.hpp"

#include "tvcp/errors.hpp"

#include <cmath>
#include <vector>

namespace tvcp {

SparseOperator second_difference_operator(std::size_t n) {
    const auto rows = n >= 2 ? static_cast<Eigen::Index>(n - 2) : 0;
    SparseOperator d(rows, static_cast<Eigen::Index>(n));
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(rows) * 3);
    for (Eigen::Index i = 0; i < rows; ++i) {
        trip.emplace_back(i, i, 1.0);
        trip.emplace_back(i, i + 1, -2.0);
        trip.emplace_back(i, i + 2, 1.0);
    }
    d.setFromTriplets(trip.begin(), trip.end());
    return d;
}

double trend_objective(const Signal& y, const Signal& theta, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) loss += 0.5 * (y[i] - theta[i]) * (y[i] - theta[i]);
    double pen = 0.0;
    for (std::size_t i = 0; i + 2 < theta.size(); ++i) pen += std::abs(theta[i] - 2.0 * theta[i + 1] + theta[i + 2]);
    return loss + lambda * pen;
}

TrendFit trend_filter_linear(const Signal& y, double lambda, double tol, int max_iter) {
    if (!(lambda >= 0.0)) throw InputError("lambda must be >= 0");
    if (y.size() <= 2) return TrendFit{y, lambda, 0.0};
    AdmmOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    const AdmmResult res = solve_generalized_lasso(y.values(), second_difference_operator(y.size()), lambda, opt);
    Signal theta(res.theta);
    const double obj = trend_objective(y, theta, lambda);
    return TrendFit{std::move(theta), lambda, obj, res.gap, res.iterations};
}

double default_knot_tol(const Signal& theta) noexcept { return 1e-6 * (1.0 + theta.max_abs()); }

LinearFitOfKink piecewise_linear_lsq(double a1, double a2, long r) {
    if (r < 1) throw InputError("half-width r must be >= 1");
    const double rd = static_cast<double>(r);
    const double diff = a1 - a2;
    LinearFitOfKink out;
    out.slope = 0.5 * (a1 + a2);
    out.intercept = diff * rd * (rd + 1.0) / (2.0 * (2.0 * rd + 1.0));
    out.sse = diff * diff * rd * (rd + 1.0) * (rd * rd + rd + 1.0) / (12.0 * (2.0 * rd + 1.0));
    return out;
}

}  // namespace tvcp
