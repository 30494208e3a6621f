#pragma once

#include "tvcp/signal.hpp"

#include <string>
#include <vector>

namespace tvcp {

/// Block (t_i, t_{i+1}] in 1-based positions: first = t_i + 1, last = t_{i+1}.
struct Block {
    Index first;
    Index last;
    Index length() const noexcept { return last - first + 1; }
    friend bool operator==(const Block&, const Block&) = default;
};

/// Blocks cut at S0 with t_0 = 0 and t_{s+1} = n.
std::vector<Block> blocks_of(const ChangepointSet& s0, std::size_t n);

struct InterpolantResult {
    Signal z;
    /// Absolute 1-based switch point t'_i per block: |z| is nonincreasing on
    /// first..t'_i and z follows the right-anchored sequence after it.
    std::vector<Index> breakpoints;
    std::vector<Block> blocks;
};

/// Piecewise-monotone lower interpolant of x with respect to S0. Within each
/// block the left sequence is the running minimum of (g+ x)_+ from the left
/// edge and the right sequence the running minimum of (g- x)_+ from the right
/// edge, with g+ = sign of the first and g- = sign of the last entry of the
/// block. The switch point is the smallest admissible one.
InterpolantResult lower_interpolant(const Signal& x, const ChangepointSet& s0);

/// True iff each block admits a switch point t' where |z| is nonincreasing
/// on first..t' with sign(z_first) * sign(z_j) >= 0, and nondecreasing on
/// t'+1..last with sign(z_last) * sign(z_j) >= 0. The step from t' to t'+1 is
/// unconstrained, as in the two-sided construction. Returns false when S0
/// does not fit the length of z.
bool check_class_M(const Signal& z, const ChangepointSet& s0);

struct Relation {
    std::string name;
    double lhs;
    double rhs;
    bool equality;  ///< lhs == rhs rather than lhs <= rhs
    bool pass;
};

struct InterpolantReport {
    std::vector<Relation> relations;
    double tolerance;
    bool all_pass() const noexcept;
};

/// Evaluates both sides of the five norm relations a lower interpolant must
/// satisfy, at tolerance 1e-9 * (1 + ||x||_2):
///   ||D_{-S}x||_1 = ||D_{-S}z||_1 + ||D_{-S}(x - z)||_1
///   ||D_S x||_1 = ||D_S z||_1
///   ||D_S z||_1 <= ||D_{-S}z||_1 + 4 sqrt(s0 / W) ||z||_2
///   ||z||_2 <= ||x||_2,  ||x - z||_2 <= ||x||_2
/// `min_spacing_w` <= 0 means use min_spacing(S0, n).
InterpolantReport verify_interpolant_properties(const Signal& x, const Signal& z, const ChangepointSet& s0,
                                                double min_spacing_w = 0.0);

}  // namespace tvcp
