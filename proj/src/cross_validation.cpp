#include "tvcp/cross_validation.hpp"

#include "tvcp/errors.hpp"
#include "tvcp/fused_lasso.hpp"
#include "tvcp/parallel.hpp"

#include <cmath>

namespace tvcp {

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
    if (count == 0) throw InputError("grid must have at least one point");
    if (!(lo > 0.0) || !(hi >= lo)) throw InputError("geometric grid needs 0 < lo <= hi");
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = hi;
        return grid;
    }
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.back() = hi;
    return grid;
}

std::vector<double> default_lambda_grid(const Signal& y, std::size_t count) {
    const double lmax = lambda_max(y);
    if (lmax == 0.0) return {0.0};
    return geometric_grid(1e-4 * lmax, lmax, count);
}

namespace {

struct Fold {
    std::vector<double> train_y;
    std::vector<std::size_t> held_out;   // positions in the full signal
    // For each held-out point: retained neighbours as indices into train_y,
    // with their positions in the full signal. -1 marks a missing side.
    std::vector<std::ptrdiff_t> left, right;
    std::vector<std::size_t> left_pos, right_pos;
};

Fold make_fold(const Signal& y, int k, int j) {
    Fold f;
    const std::size_t n = y.size();
    std::vector<std::ptrdiff_t> train_index(n, -1);
    std::vector<std::size_t> train_pos;
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<int>(i % static_cast<std::size_t>(k)) != j) {
            train_index[i] = static_cast<std::ptrdiff_t>(f.train_y.size());
            f.train_y.push_back(y[i]);
            train_pos.push_back(i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (train_index[i] >= 0) continue;
        f.held_out.push_back(i);
        std::ptrdiff_t lft = -1, rgt = -1;
        std::size_t lp = 0, rp = 0;
        for (std::size_t p = i; p-- > 0;) {
            if (train_index[p] >= 0) {
                lft = train_index[p];
                lp = p;
                break;
            }
        }
        for (std::size_t p = i + 1; p < n; ++p) {
            if (train_index[p] >= 0) {
                rgt = train_index[p];
                rp = p;
                break;
            }
        }
        f.left.push_back(lft);
        f.right.push_back(rgt);
        f.left_pos.push_back(lp);
        f.right_pos.push_back(rp);
    }
    return f;
}

double fold_error(const Signal& y, const Fold& f, double lambda, std::vector<double>& theta) {
    theta.resize(f.train_y.size());
    fused_lasso_1d(f.train_y, lambda, theta);
    double err = 0.0;
    for (std::size_t h = 0; h < f.held_out.size(); ++h) {
        const std::size_t i = f.held_out[h];
        double pred;
        if (f.left[h] < 0) {
            pred = theta[static_cast<std::size_t>(f.right[h])];
        } else if (f.right[h] < 0) {
            pred = theta[static_cast<std::size_t>(f.left[h])];
        } else {
            const double w = static_cast<double>(i - f.left_pos[h]) /
                             static_cast<double>(f.right_pos[h] - f.left_pos[h]);
            pred = (1.0 - w) * theta[static_cast<std::size_t>(f.left[h])] +
                   w * theta[static_cast<std::size_t>(f.right[h])];
        }
        err += (y[i] - pred) * (y[i] - pred);
    }
    return err;
}

}  // namespace

CvResult cv_select_lambda(const Signal& y, const std::vector<double>& lambda_grid, int k, unsigned jobs) {
    if (lambda_grid.empty()) throw InputError("lambda grid must be nonempty");
    if (k < 2) throw InputError("number of folds must be >= 2");
    if (y.size() < 2 * static_cast<std::size_t>(k)) {
        throw InputError("cross-validation needs n >= 2k");
    }
    for (double l : lambda_grid) {
        if (!(l >= 0.0) || !std::isfinite(l)) throw InputError("lambda grid values must be finite and >= 0");
    }

    std::vector<Fold> folds;
    folds.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) folds.push_back(make_fold(y, k, j));

    CvResult out;
    out.grid = lambda_grid;
    out.errors.assign(lambda_grid.size(), 0.0);
    parallel_for(lambda_grid.size(), jobs, [&](std::size_t g) {
        std::vector<double> theta;
        double total = 0.0;
        for (const Fold& f : folds) total += fold_error(y, f, lambda_grid[g], theta);
        out.errors[g] = total;
    });

    std::size_t best = 0;
    for (std::size_t g = 1; g < lambda_grid.size(); ++g) {
        const bool better = out.errors[g] < out.errors[best];
        const bool tie_larger = out.errors[g] == out.errors[best] && lambda_grid[g] > lambda_grid[best];
        if (better || tie_larger) best = g;
    }
    out.index = best;
    out.lambda = lambda_grid[best];
    return out;
}

}  // namespace tvcp
