#include "tvcp/interpolant.hpp"

#include "tvcp/errors.hpp"
#include "tvcp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvcp {

namespace {

double sgn(double v) noexcept { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }
double pos(double v) noexcept { return v > 0.0 ? v : 0.0; }

}  // namespace

std::vector<Block> blocks_of(const ChangepointSet& s0, std::size_t n) {
    s0.validate_for(n);
    std::vector<Block> out;
    Index start = 1;
    for (Index t : s0) {
        out.push_back({start, t});
        start = t + 1;
    }
    out.push_back({start, static_cast<Index>(n)});
    return out;
}

InterpolantResult lower_interpolant(const Signal& x, const ChangepointSet& s0) {
    std::vector<Block> blocks = blocks_of(s0, x.size());
    std::vector<double> z(x.size());
    std::vector<Index> breaks;
    breaks.reserve(blocks.size());

    for (const Block& blk : blocks) {
        const auto len = static_cast<std::size_t>(blk.length());
        const std::size_t off = static_cast<std::size_t>(blk.first - 1);
        auto xv = [&](std::size_t j) { return x[off + j]; };  // 0-based within block
        if (len == 1) {
            z[off] = xv(0);
            breaks.push_back(blk.first);
            continue;
        }
        const double gp = sgn(xv(0));
        const double gm = sgn(xv(len - 1));
        std::vector<double> zp(len), zm(len);
        double run = pos(gp * xv(0));
        for (std::size_t j = 0; j < len; ++j) {
            run = std::min(run, pos(gp * xv(j)));
            zp[j] = gp * run;
        }
        run = pos(gm * xv(len - 1));
        for (std::size_t j = len; j-- > 0;) {
            run = std::min(run, pos(gm * xv(j)));
            zm[j] = gm * run;
        }
        // First position (1-based) where |z+| reaches its minimum, and the last
        // position where |z-| still equals its minimum.
        std::size_t p_plus = len;
        for (std::size_t j = 0; j < len; ++j) {
            if (std::abs(zp[j]) == std::abs(zp[len - 1])) {
                p_plus = j + 1;
                break;
            }
        }
        std::size_t p_minus = 1;
        for (std::size_t j = 0; j < len; ++j) {
            if (std::abs(zm[j]) == std::abs(zm[0])) p_minus = j + 1;
            else break;
        }
        const std::size_t jp = std::max<std::size_t>(1, p_plus - 1);
        if (jp > std::min(p_minus, len - 1)) {
            throw std::logic_error("lower interpolant: no admissible switch point");
        }
        for (std::size_t j = 0; j < len; ++j) z[off + j] = j < jp ? zp[j] : zm[j];
        breaks.push_back(blk.first + static_cast<Index>(jp) - 1);
    }
    return InterpolantResult{Signal(std::move(z)), std::move(breaks), std::move(blocks)};
}

bool check_class_M(const Signal& z, const ChangepointSet& s0) {
    std::vector<Block> blocks;
    try {
        blocks = blocks_of(s0, z.size());
    } catch (const InputError&) {
        return false;
    }
    for (const Block& blk : blocks) {
        const auto len = static_cast<std::size_t>(blk.length());
        const std::size_t off = static_cast<std::size_t>(blk.first - 1);
        auto a = [&](std::size_t j) { return std::abs(z[off + j]); };
        const double s_first = sgn(z[off]);
        const double s_last = sgn(z[off + len - 1]);
        // left_ok[j]: |z| nonincreasing and signs agree with the first entry on 0..j.
        std::vector<char> left_ok(len), right_ok(len);
        for (std::size_t j = 0; j < len; ++j) {
            const bool sign_ok = s_first * sgn(z[off + j]) >= 0.0;
            const bool mono = j == 0 || a(j) <= a(j - 1);
            left_ok[j] = sign_ok && mono && (j == 0 || left_ok[j - 1]);
        }
        // right_ok[j]: |z| nondecreasing on j..len-1 and signs agree with the
        // last entry on j..len-1.
        for (std::size_t j = len; j-- > 0;) {
            const bool sign_ok = s_last * sgn(z[off + j]) >= 0.0;
            const bool mono = j == len - 1 || a(j) <= a(j + 1);
            right_ok[j] = sign_ok && mono && (j == len - 1 || right_ok[j + 1]);
        }
        bool found = false;
        for (std::size_t t = 0; t < len && !found; ++t) {
            // Pieces 0..t and t+1..len-1; the junction itself is unconstrained.
            if (!left_ok[t]) break;
            found = t == len - 1 || right_ok[t + 1];
        }
        if (!found) return false;
    }
    return true;
}

bool InterpolantReport::all_pass() const noexcept {
    return std::all_of(relations.begin(), relations.end(), [](const Relation& r) { return r.pass; });
}

InterpolantReport verify_interpolant_properties(const Signal& x, const Signal& z, const ChangepointSet& s0,
                                                double min_spacing_w) {
    if (x.size() != z.size()) throw InputError("x and z must have equal length");
    s0.validate_for(x.size());
    const std::size_t n = x.size();

    double dx_off = 0, dz_off = 0, dw_off = 0, dx_on = 0, dz_on = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = x[i + 1] - x[i];
        const double c = z[i + 1] - z[i];
        if (s0.contains(static_cast<Index>(i + 1))) {
            dx_on += std::abs(a);
            dz_on += std::abs(c);
        } else {
            dx_off += std::abs(a);
            dz_off += std::abs(c);
            dw_off += std::abs(a - c);
        }
    }
    double nx = 0, nz = 0, nw = 0;
    for (std::size_t i = 0; i < n; ++i) {
        nx += x[i] * x[i];
        nz += z[i] * z[i];
        nw += (x[i] - z[i]) * (x[i] - z[i]);
    }
    nx = std::sqrt(nx);
    nz = std::sqrt(nz);
    nw = std::sqrt(nw);

    const double w = min_spacing_w > 0.0 ? min_spacing_w : static_cast<double>(min_spacing(s0, n));
    const double s = static_cast<double>(s0.size());
    const double tol = 1e-9 * (1.0 + nx);

    InterpolantReport rep;
    rep.tolerance = tol;
    auto eq = [&](std::string name, double l, double r) {
        rep.relations.push_back({std::move(name), l, r, true, std::abs(l - r) <= tol});
    };
    auto le = [&](std::string name, double l, double r) {
        rep.relations.push_back({std::move(name), l, r, false, l <= r + tol});
    };
    eq("off_support_split", dx_off, dz_off + dw_off);
    eq("on_support_equal", dx_on, dz_on);
    le("on_support_bound", dz_on, dz_off + 4.0 * std::sqrt(s) / std::sqrt(w) * nz);
    le("z_norm", nz, nx);
    le("residual_norm", nw, nx);
    return rep;
}

}  // namespace tvcp
