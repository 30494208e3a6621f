#include "tvcp/tau_select.hpp"

#include "tvcp/cross_validation.hpp"
#include "tvcp/errors.hpp"
#include "tvcp/fused_lasso.hpp"
#include "tvcp/haar_filter.hpp"
#include "tvcp/metrics.hpp"
#include "tvcp/parallel.hpp"
#include "tvcp/rng.hpp"

#include <algorithm>
#include <cmath>

namespace tvcp {

Fitter cv_fused_lasso_fitter(int k, std::size_t grid_size) {
    return [k, grid_size](const Signal& y) {
        const CvResult cv = cv_select_lambda(y, default_lambda_grid(y, grid_size), k);
        return fused_lasso_1d(y, cv.lambda).theta_hat;
    };
}

Fitter fixed_fused_lasso_fitter(double lambda) {
    return [lambda](const Signal& y) { return fused_lasso_1d(y, lambda).theta_hat; };
}

double upper_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw InputError("quantile of an empty collection");
    if (!(q > 0.0 && q < 1.0)) throw InputError("quantile level must lie in (0, 1)");
    std::sort(values.begin(), values.end());
    const auto m = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * m));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

std::vector<double> permuted_data(const Signal& theta_tilde, const std::vector<double>& residuals,
                                  std::uint64_t seed, std::uint64_t index) {
    std::vector<double> r = residuals;
    Rng rng(mix_seed(seed ^ index));
    std::shuffle(r.begin(), r.end(), rng);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += theta_tilde[i];
    return r;
}

TauSelection select_tau(const Signal& y, const Fitter& fit, const TauSelectionConfig& config) {
    return select_tau(y, fit(y), fit, config);
}

TauSelection select_tau(const Signal& y, const Signal& theta_tilde, const Fitter& fit,
                        const TauSelectionConfig& config) {
    const auto n = static_cast<Index>(y.size());
    const Index b = config.bandwidth;
    if (config.permutations < 1) throw InputError("number of permutations must be >= 1");
    if (!(config.q > 0.0 && config.q < 1.0)) throw InputError("quantile level must lie in (0, 1)");
    if (b < 1 || n < 2 * b) throw InputError("threshold selection needs bandwidth >= 1 and n >= 2b");
    if (theta_tilde.size() != y.size()) throw InputError("fit length does not match data length");

    const ChangepointSet s_tilde = changepoints(theta_tilde, config.jump_tol);
    std::vector<double> residuals(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) residuals[i] = y[i] - theta_tilde[i];

    // Locations more than b away from every estimated changepoint.
    std::vector<Index> far;
    for (Index i = b; i <= n - b; ++i) {
        const ChangepointSet single{i};
        if (screening_distance(s_tilde, single) > ExtendedDistance(static_cast<double>(b))) far.push_back(i);
    }

    TauSelection out;
    out.config = config;
    out.per_permutation_maxima.assign(static_cast<std::size_t>(config.permutations), 0.0);
    parallel_for(out.per_permutation_maxima.size(), config.jobs, [&](std::size_t p) {
        const Signal aux(permuted_data(theta_tilde, residuals, config.seed, p + 1));
        const FilterProfile profile = haar_filter(fit(aux), b);
        double m = 0.0;
        for (Index i : far) m = std::max(m, std::abs(profile.at(i)));
        out.per_permutation_maxima[p] = m;
    });
    out.tau_hat = upper_quantile(out.per_permutation_maxima, config.q);
    return out;
}

}  // namespace tvcp
