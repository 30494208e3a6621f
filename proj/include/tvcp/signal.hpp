#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace tvcp {

using Index = std::int64_t;

/// A finite, nonempty sequence of real samples (data, mean, or estimate).
class Signal {
public:
    explicit Signal(std::vector<double> values);
    Signal(std::initializer_list<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    /// 1-based access matching the external index convention.
    double at1(Index i) const { return values_.at(static_cast<std::size_t>(i - 1)); }

    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    double max_abs() const noexcept;

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    std::vector<double> values_;
};

/// Sorted set of 1-based jump indices. Index i denotes a jump between
/// positions i and i+1.
class ChangepointSet {
public:
    ChangepointSet() = default;
    /// Throws InputError unless `indices` is strictly increasing and >= 1.
    explicit ChangepointSet(std::vector<Index> indices);
    ChangepointSet(std::initializer_list<Index> indices);

    /// Throws InputError if any index lies outside 1..n-1.
    void validate_for(std::size_t n) const;

    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }
    bool contains(Index i) const noexcept;
    bool is_subset_of(const ChangepointSet& other) const noexcept;

    std::span<const Index> indices() const noexcept { return indices_; }
    const std::vector<Index>& vector() const noexcept { return indices_; }
    auto begin() const noexcept { return indices_.begin(); }
    auto end() const noexcept { return indices_.end(); }
    Index front() const { return indices_.front(); }
    Index back() const { return indices_.back(); }

    friend bool operator==(const ChangepointSet&, const ChangepointSet&) = default;

private:
    std::vector<Index> indices_;
};

/// Nonnegative distance in index units that may be +infinity.
class ExtendedDistance {
public:
    constexpr ExtendedDistance() = default;
    explicit ExtendedDistance(double value);

    static constexpr ExtendedDistance infinity() {
        ExtendedDistance d;
        d.value_ = std::numeric_limits<double>::infinity();
        return d;
    }

    constexpr double value() const noexcept { return value_; }
    constexpr bool is_infinite() const noexcept {
        return value_ == std::numeric_limits<double>::infinity();
    }

    friend constexpr auto operator<=>(const ExtendedDistance&, const ExtendedDistance&) = default;

private:
    double value_ = 0.0;
};

}  // namespace tvcp
