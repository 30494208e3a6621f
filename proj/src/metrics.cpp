#include "tvcp/metrics.hpp"

#include "tvcp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tvcp {

namespace {

void require_finite(const std::vector<double>& values) {
    if (values.empty()) throw InputError("signal must have at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InputError("signal value at position " + std::to_string(i + 1) + " is not finite");
        }
    }
}

void require_increasing(const std::vector<Index>& idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 1) throw InputError("changepoint indices are 1-based and must be >= 1");
        if (i > 0 && idx[i] <= idx[i - 1]) {
            throw InputError("changepoint indices must be strictly increasing");
        }
    }
}

// Distance from `x` to the nearest member of the sorted nonempty set `a`.
Index nearest_distance(std::span<const Index> a, Index x) {
    auto it = std::lower_bound(a.begin(), a.end(), x);
    Index best = std::numeric_limits<Index>::max();
    if (it != a.end()) best = *it - x;
    if (it != a.begin()) best = std::min(best, x - *std::prev(it));
    return best;
}

}  // namespace

Signal::Signal(std::vector<double> values) : values_(std::move(values)) { require_finite(values_); }

Signal::Signal(std::initializer_list<double> values) : values_(values) { require_finite(values_); }

double Signal::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

ChangepointSet::ChangepointSet(std::vector<Index> indices) : indices_(std::move(indices)) {
    require_increasing(indices_);
}

ChangepointSet::ChangepointSet(std::initializer_list<Index> indices) : indices_(indices) {
    require_increasing(indices_);
}

void ChangepointSet::validate_for(std::size_t n) const {
    if (!indices_.empty() && indices_.back() > static_cast<Index>(n) - 1) {
        throw InputError("changepoint index " + std::to_string(indices_.back()) +
                         " out of range 1.." + std::to_string(static_cast<Index>(n) - 1));
    }
}

bool ChangepointSet::contains(Index i) const noexcept {
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool ChangepointSet::is_subset_of(const ChangepointSet& other) const noexcept {
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

ExtendedDistance::ExtendedDistance(double value) : value_(value) {
    if (!(value >= 0.0)) throw InputError("distance must be nonnegative");
}

double default_jump_tol(const Signal& theta) noexcept { return 1e-9 * (1.0 + theta.max_abs()); }

ChangepointSet changepoints(const Signal& theta, double tol) {
    if (tol < 0.0) throw InputError("jump tolerance must be nonnegative");
    std::vector<Index> out;
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
        if (std::abs(theta[i] - theta[i + 1]) > tol) out.push_back(static_cast<Index>(i + 1));
    }
    return ChangepointSet(std::move(out));
}

double tv(const Signal& x) noexcept {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) total += std::abs(x[i] - x[i + 1]);
    return total;
}

ExtendedDistance screening_distance(const ChangepointSet& a, const ChangepointSet& b) {
    if (b.empty()) return ExtendedDistance(0.0);
    if (a.empty()) return ExtendedDistance::infinity();
    Index worst = 0;
    for (Index x : b) worst = std::max(worst, nearest_distance(a.indices(), x));
    return ExtendedDistance(static_cast<double>(worst));
}

ExtendedDistance hausdorff(const ChangepointSet& a, const ChangepointSet& b) {
    return std::max(screening_distance(a, b), screening_distance(b, a));
}

Index min_spacing(const ChangepointSet& s0, std::size_t n) {
    s0.validate_for(n);
    Index prev = 0;
    Index best = static_cast<Index>(n);
    for (Index t : s0) {
        best = std::min(best, t - prev);
        prev = t;
    }
    return std::min(best, static_cast<Index>(n) - prev);
}

double min_gap(const Signal& theta0, const ChangepointSet& s0) {
    s0.validate_for(theta0.size());
    double best = std::numeric_limits<double>::infinity();
    for (Index i : s0) best = std::min(best, std::abs(theta0.at1(i + 1) - theta0.at1(i)));
    return best;
}

namespace {
double second_difference(const Signal& x, std::size_t i) {  // 0-based centre
    return x[i - 1] - 2.0 * x[i] + x[i + 1];
}
}  // namespace

double tv2(const Signal& x) noexcept {
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) total += std::abs(second_difference(x, i));
    return total;
}

ChangepointSet knots2(const Signal& theta, double tol) {
    if (tol < 0.0) throw InputError("knot tolerance must be nonnegative");
    std::vector<Index> out;
    for (std::size_t i = 1; i + 1 < theta.size(); ++i) {
        if (std::abs(second_difference(theta, i)) > tol) out.push_back(static_cast<Index>(i + 1));
    }
    return ChangepointSet(std::move(out));
}

double min_gap2(const Signal& theta, double tol) {
    double best = std::numeric_limits<double>::infinity();
    for (Index k : knots2(theta, tol)) {
        best = std::min(best, std::abs(second_difference(theta, static_cast<std::size_t>(k - 1))));
    }
    return best;
}

}  // namespace tvcp
