#pragma once

#include "tvcp/signal.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace tvcp {

/// A deterministic fitting procedure Signal -> Signal (e.g. CV-tuned fused lasso).
using Fitter = std::function<Signal(const Signal&)>;

/// Fused lasso whose lambda is chosen by k-fold CV on the default grid of the
/// data it is applied to.
Fitter cv_fused_lasso_fitter(int k = 5, std::size_t grid_size = 50);
Fitter fixed_fused_lasso_fitter(double lambda);

struct TauSelectionConfig {
    int permutations = 100;
    Index bandwidth = 1;
    double q = 0.95;
    std::uint64_t seed = 0;
    /// Tolerance used to read the changepoints of the fitted signal.
    double jump_tol = 0.0;
    unsigned jobs = 1;
};

struct TauSelection {
    double tau_hat;
    std::vector<double> per_permutation_maxima;
    TauSelectionConfig config;
};

/// Nearest-rank upper quantile: the ceil(q * m)-th smallest value (at least the first).
double upper_quantile(std::vector<double> values, double q);

/// theta_tilde + residuals shuffled with the stream for permutation `index`
/// (seeded from seed XOR index).
std::vector<double> permuted_data(const Signal& theta_tilde, const std::vector<double>& residuals,
                                  std::uint64_t seed, std::uint64_t index);

/// Permutation calibration of the filter threshold. For each permutation,
/// refits on theta_tilde + shuffled residuals and records the largest |F_i|
/// over locations more than `bandwidth` away from every changepoint of
/// theta_tilde (0 when no location qualifies). tau_hat is the upper q-quantile
/// of those maxima.
TauSelection select_tau(const Signal& y, const Fitter& fit, const TauSelectionConfig& config);

/// Same procedure with theta_tilde = fit(y) already computed.
TauSelection select_tau(const Signal& y, const Signal& theta_tilde, const Fitter& fit,
                        const TauSelectionConfig& config);

}  // namespace tvcp
