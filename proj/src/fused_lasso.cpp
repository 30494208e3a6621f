#include "tvcp/fused_lasso.hpp"

#include "tvcp/errors.hpp"
#include "tvcp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tvcp {

double fused_lasso_objective(std::span<const double> y, std::span<const double> theta, double lambda) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) loss += 0.5 * (y[i] - theta[i]) * (y[i] - theta[i]);
    double pen = 0.0;
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) pen += std::abs(theta[i] - theta[i + 1]);
    return loss + lambda * pen;
}

// Forward pass: the derivative of the message (partial minimum over
// theta_1..theta_{k-1}, plus the loss at k) is piecewise linear in theta_k.
// Its knots live in a deque stored in the middle of arrays of length 2n;
// each knot carries the slope/intercept increment (a, b) to apply when
// crossing it. The message is then clipped at derivative -lambda / +lambda,
// which yields the back-pointers tm[k] <= tp[k]. The backward pass clips the
// next coefficient into [tm[k], tp[k]].
void fused_lasso_1d(std::span<const double> y, double lambda, std::span<double> theta) {
    const std::size_t n = y.size();
    if (theta.size() != n) throw InputError("output length must equal input length");
    if (n == 0) return;
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be finite and >= 0");
    if (n == 1 || lambda == 0.0) {
        std::copy(y.begin(), y.end(), theta.begin());
        return;
    }

    std::vector<double> x(2 * n), a(2 * n), b(2 * n);
    std::vector<double> tm(n - 1), tp(n - 1);

    tm[0] = -lambda + y[0];
    tp[0] = lambda + y[0];
    std::size_t l = n - 1;
    std::size_t r = n;
    x[l] = tm[0];
    x[r] = tp[0];
    a[l] = 1.0;
    b[l] = -y[0] + lambda;
    a[r] = -1.0;
    b[r] = y[0] + lambda;
    double afirst = 1.0;
    double bfirst = -lambda - y[1];
    double alast = -1.0;
    double blast = -lambda + y[1];

    for (std::size_t k = 1; k + 1 < n; ++k) {
        // Step up from the left until the derivative exceeds -lambda.
        double alo = afirst;
        double blo = bfirst;
        std::size_t lo = l;
        for (; lo <= r; ++lo) {
            if (alo * x[lo] + blo > -lambda) break;
            alo += a[lo];
            blo += b[lo];
        }
        tm[k] = (-lambda - blo) / alo;
        l = lo - 1;
        x[l] = tm[k];

        // Step down from the right until the derivative drops below lambda.
        double ahi = alast;
        double bhi = blast;
        std::size_t hi = r;
        for (; hi >= l; --hi) {
            if (-ahi * x[hi] - bhi < lambda) break;
            ahi += a[hi];
            bhi += b[hi];
        }
        tp[k] = (lambda + bhi) / (-ahi);
        r = hi + 1;
        x[r] = tp[k];

        a[l] = alo;
        b[l] = blo + lambda;
        a[r] = ahi;
        b[r] = bhi + lambda;
        afirst = 1.0;
        bfirst = -lambda - y[k + 1];
        alast = -1.0;
        blast = -lambda + y[k + 1];
    }

    // Last coefficient: zero of the final derivative.
    double alo = afirst;
    double blo = bfirst;
    for (std::size_t lo = l; lo <= r; ++lo) {
        if (alo * x[lo] + blo > 0.0) break;
        alo += a[lo];
        blo += b[lo];
    }
    theta[n - 1] = -blo / alo;

    for (std::size_t k = n - 1; k-- > 0;) {
        if (theta[k + 1] > tp[k]) {
            theta[k] = tp[k];
        } else if (theta[k + 1] < tm[k]) {
            theta[k] = tm[k];
        } else {
            theta[k] = theta[k + 1];
        }
    }
}

FusedLassoFit fused_lasso_1d(const Signal& y, double lambda) {
    std::vector<double> theta(y.size());
    fused_lasso_1d(y.values(), lambda, theta);
    const double obj = fused_lasso_objective(y.values(), theta, lambda);
    return FusedLassoFit{Signal(std::move(theta)), lambda, obj};
}

double lambda_max(const Signal& y) {
    const std::size_t n = y.size();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double cum = 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cum += y[i] - mean;
        best = std::max(best, std::abs(cum));
    }
    return best;
}

bool check_kkt(const Signal& y, const FusedLassoFit& fit, double tol) {
    const Signal& theta = fit.theta_hat;
    const std::size_t n = y.size();
    if (theta.size() != n) throw InputError("fit length does not match data length");
    const double lambda = fit.lambda;
    if (n == 1) return std::abs(y[0] - theta[0]) <= tol;

    const double jump_tol = default_jump_tol(theta);
    // With D the forward-difference operator, (D^T s)_1 = -s_1,
    // (D^T s)_j = s_{j-1} - s_j, (D^T s)_n = s_{n-1}. Choose lambda*s_j as
    // close as allowed to -cumsum_j of the residual, forced to the jump sign.
    std::vector<double> ls(n - 1);
    double cum = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        cum += y[j] - theta[j];
        const double diff = theta[j + 1] - theta[j];
        if (std::abs(diff) > jump_tol) {
            ls[j] = lambda * (diff > 0 ? 1.0 : -1.0);
        } else {
            ls[j] = std::clamp(-cum, -lambda, lambda);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double prev = j == 0 ? 0.0 : ls[j - 1];
        const double next = j + 1 == n ? 0.0 : ls[j];
        const double dts = prev - next;
        if (std::abs((y[j] - theta[j]) - dts) > tol) return false;
    }
    return true;
}

}  // namespace tvcp
