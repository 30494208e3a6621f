#include "tvcp/haar_filter.hpp"

#include "tvcp/errors.hpp"
#include "tvcp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tvcp {

FilterProfile::FilterProfile(Index bandwidth, std::size_t n, std::vector<double> values)
    : bandwidth_(bandwidth), n_(n), values_(std::move(values)) {
    if (bandwidth_ < 1 || static_cast<Index>(n_) < 2 * bandwidth_) {
        throw InputError("filter needs bandwidth >= 1 and n >= 2b");
    }
    if (values_.size() != static_cast<std::size_t>(static_cast<Index>(n_) - 2 * bandwidth_ + 1)) {
        throw InputError("filter profile must hold one value per location b..n-b");
    }
}

double FilterProfile::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

FilterProfile haar_filter(const Signal& theta, Index b) {
    const auto n = static_cast<Index>(theta.size());
    if (b < 1) throw InputError("bandwidth must be >= 1");
    if (n < 2 * b) {
        throw InputError("filter undefined: n = " + std::to_string(n) + " < 2b = " + std::to_string(2 * b));
    }
    // prefix[k] = theta_1 + ... + theta_k
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (Index k = 1; k <= n; ++k) prefix[k] = prefix[k - 1] + theta.at1(k);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n - 2 * b + 1));
    const double inv_b = 1.0 / static_cast<double>(b);
    for (Index i = b; i <= n - b; ++i) {
        const double right = prefix[i + b] - prefix[i];
        const double left = prefix[i] - prefix[i - b];
        values.push_back((right - left) * inv_b);
    }
    return FilterProfile(b, theta.size(), std::move(values));
}

FilteredSet full_filter_set(const FilterProfile& profile, double tau) {
    if (!(tau >= 0.0)) throw InputError("threshold must be >= 0");
    std::vector<Index> keep;
    for (Index i = profile.first(); i <= profile.last(); ++i) {
        if (std::abs(profile.at(i)) >= tau) keep.push_back(i);
    }
    return FilteredSet{ChangepointSet(std::move(keep)), tau, profile.bandwidth(), FilterVariant::full};
}

FilteredSet full_filter_set(const Signal& theta, Index b, double tau) {
    return full_filter_set(haar_filter(theta, b), tau);
}

ChangepointSet candidate_set(const Signal& theta, Index b, double tol) {
    const auto n = static_cast<Index>(theta.size());
    if (b < 1 || n < 2 * b) throw InputError("candidate set needs bandwidth >= 1 and n >= 2b");
    std::vector<Index> cand{b, n - b};
    for (Index s : changepoints(theta, tol)) {
        for (Index i : {s - b, s, s + b}) {
            if (i >= b && i <= n - b) cand.push_back(i);
        }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return ChangepointSet(std::move(cand));
}

FilteredSet reduced_filter_set(const FilterProfile& profile, const ChangepointSet& candidates, double tau) {
    if (!(tau >= 0.0)) throw InputError("threshold must be >= 0");
    std::vector<Index> keep;
    for (Index i : candidates) {
        if (i < profile.first() || i > profile.last()) {
            throw InputError("candidate location " + std::to_string(i) + " outside the filter range");
        }
        if (std::abs(profile.at(i)) >= tau) keep.push_back(i);
    }
    return FilteredSet{ChangepointSet(std::move(keep)), tau, profile.bandwidth(), FilterVariant::reduced};
}

FilteredSet reduced_filter_set(const Signal& theta, Index b, double tau, double tol) {
    return reduced_filter_set(haar_filter(theta, b), candidate_set(theta, b, tol), tau);
}

ChangepointSet local_maxima(const FilterProfile& profile) {
    const Index lo = profile.first();
    const Index hi = profile.last();
    std::vector<Index> out;
    if (lo == hi) return ChangepointSet{};
    auto mag = [&](Index i) { return std::abs(profile.at(i)); };
    if (mag(lo + 1) < mag(lo)) out.push_back(lo);
    for (Index i = lo + 1; i <= hi - 1; ++i) {
        const double here = mag(i);
        const double left = mag(i - 1);
        const double right = mag(i + 1);
        if ((left < here && right <= here) || (left <= here && right < here)) out.push_back(i);
    }
    if (mag(hi - 1) < mag(hi)) out.push_back(hi);
    return ChangepointSet(std::move(out));
}

Bandwidth auto_bandwidth(std::size_t n) {
    if (n < 2) throw InputError("bandwidth rule needs n >= 2");
    const double logn = std::log(static_cast<double>(n));
    auto b = static_cast<Index>(std::floor(0.25 * logn * logn));
    b = std::max<Index>(b, 1);
    const Index cap = std::max<Index>(1, (static_cast<Index>(n) - 1) / 2);
    if (b > cap) return Bandwidth{cap, true};
    return Bandwidth{b, false};
}

namespace {

void require_same_length(std::span<const double> a, std::span<const double> c) {
    if (a.size() != c.size()) throw InputError("vectors must have equal length");
}

double dot(std::span<const double> a, std::span<const double> c) {
    return std::inner_product(a.begin(), a.end(), c.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

double ball_linear_max(std::span<const double> a, std::span<const double> c, double r) {
    require_same_length(a, c);
    if (!(r >= 0.0)) throw InputError("radius must be >= 0");
    return std::abs(dot(a, c)) + r * norm2(a);
}

double ball_linear_min(std::span<const double> a, std::span<const double> c, double r) {
    require_same_length(a, c);
    if (!(r >= 0.0)) throw InputError("radius must be >= 0");
    const double v = std::abs(dot(a, c)) - r * norm2(a);
    if (v < 0.0) throw InputError("ball contains a point with a^T x = 0; closed-form minimum needs |a^T c| >= r||a||");
    return v;
}

namespace {

std::vector<double> ball_step(std::span<const double> a, std::span<const double> c, double r, double direction) {
    std::vector<double> x(c.begin(), c.end());
    const double na = norm2(a);
    if (na == 0.0) return x;
    const double s = dot(a, c) >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += direction * r * s * a[i] / na;
    return x;
}

}  // namespace

std::vector<double> ball_linear_argmax(std::span<const double> a, std::span<const double> c, double r) {
    require_same_length(a, c);
    return ball_step(a, c, r, 1.0);
}

std::vector<double> ball_linear_argmin(std::span<const double> a, std::span<const double> c, double r) {
    ball_linear_min(a, c, r);
    return ball_step(a, c, r, -1.0);
}

}  // namespace tvcp
