#pragma once

#include "tvcp/signal.hpp"

#include <span>
#include <vector>

namespace tvcp {

/// Filter values F_i for i = b..n-b (1-based), where
/// F_i = mean(theta_{i+1..i+b}) - mean(theta_{i-b+1..i}).
class FilterProfile {
public:
    FilterProfile(Index bandwidth, std::size_t n, std::vector<double> values);

    Index bandwidth() const noexcept { return bandwidth_; }
    std::size_t signal_length() const noexcept { return n_; }
    Index first() const noexcept { return bandwidth_; }
    Index last() const noexcept { return static_cast<Index>(n_) - bandwidth_; }
    /// Value at 1-based location i in [first(), last()].
    double at(Index i) const { return values_.at(static_cast<std::size_t>(i - bandwidth_)); }
    std::span<const double> values() const noexcept { return values_; }
    double max_abs() const noexcept;

private:
    Index bandwidth_;
    std::size_t n_;
    std::vector<double> values_;
};

enum class FilterVariant { full, reduced };

struct FilteredSet {
    ChangepointSet locations;
    double tau;
    Index bandwidth;
    FilterVariant variant;
};

/// O(n) prefix-sum evaluation. Throws InputError unless b >= 1 and n >= 2b.
FilterProfile haar_filter(const Signal& theta, Index b);

/// {i in b..n-b : |F_i| >= tau}. With tau = 0 every valid location qualifies.
FilteredSet full_filter_set(const Signal& theta, Index b, double tau);
FilteredSet full_filter_set(const FilterProfile& profile, double tau);

/// Estimated changepoints, points at distance b from them, and the two
/// boundary points b and n-b, intersected with b..n-b. Jumps are detected
/// with changepoints(theta, tol).
ChangepointSet candidate_set(const Signal& theta, Index b, double tol = 0.0);

/// Threshold applied on the candidate set only. Always a subset of the full set
/// and of size at most 3|S(theta)| + 2.
FilteredSet reduced_filter_set(const Signal& theta, Index b, double tau, double tol = 0.0);
FilteredSet reduced_filter_set(const FilterProfile& profile, const ChangepointSet& candidates, double tau);

/// Locations whose |F| is >= both neighbours and strictly greater than at
/// least one; the two boundary locations have a single neighbour.
ChangepointSet local_maxima(const FilterProfile& profile);

struct Bandwidth {
    Index value;
    bool clamped;  ///< the log rule exceeded (n-1)/2 and was reduced
};

/// floor(0.25 * ln(n)^2), at least 1, clamped to floor((n-1)/2).
Bandwidth auto_bandwidth(std::size_t n);

// Extremal values of |a^T x| over the ball ||x - c||_2 <= r.

double ball_linear_max(std::span<const double> a, std::span<const double> c, double r);
/// Requires |a^T c| - r ||a||_2 >= 0; throws InputError otherwise.
double ball_linear_min(std::span<const double> a, std::span<const double> c, double r);
/// c + r sign(a^T c) a / ||a||_2 (sign(0) taken as +1; c itself when a = 0).
std::vector<double> ball_linear_argmax(std::span<const double> a, std::span<const double> c, double r);
/// c - r sign(a^T c) a / ||a||_2, under the same precondition as the minimum.
std::vector<double> ball_linear_argmin(std::span<const double> a, std::span<const double> c, double r);

}  // namespace tvcp
