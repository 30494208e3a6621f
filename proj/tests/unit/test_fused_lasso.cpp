#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "tvcp/errors.hpp"
#include "tvcp/fused_lasso.hpp"
#include "tvcp/metrics.hpp"

#include <cmath>
#include <random>

using namespace tvcp;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> noisy_steps(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> lvl(-3, 3);
    std::vector<double> y(n);
    double level = lvl(rng);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && rng() % 8 == 0) level = lvl(rng);
        y[i] = level + 0.7 * z(rng);
    }
    return y;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("two-point closed form", "[fl1d]") {
    const FusedLassoFit fit = fused_lasso_1d(Signal{0, 2}, 0.5);
    CHECK_THAT(fit.theta_hat[0], WithinAbs(0.5, 1e-12));
    CHECK_THAT(fit.theta_hat[1], WithinAbs(1.5, 1e-12));
    // Past the fusion point both entries equal the mean.
    const FusedLassoFit fused = fused_lasso_1d(Signal{0, 2}, 1.0);
    CHECK(fused.theta_hat[0] == fused.theta_hat[1]);
    CHECK_THAT(fused.theta_hat[0], WithinAbs(1.0, 1e-12));
}

TEST_CASE("zero penalty returns the data", "[fl1d]") {
    const Signal y{3, -1, 4, 1, -5, 9, 2, 6};
    CHECK(fused_lasso_1d(y, 0.0).theta_hat == y);
}

TEST_CASE("full fusion at and beyond lambda_max", "[fl1d]") {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 50; ++rep) {
        const Signal y(noisy_steps(rng, 5 + rep));
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(y.size());
        const double lmax = lambda_max(y);
        for (double scale : {1.0, 1.5, 10.0}) {
            const FusedLassoFit fit = fused_lasso_1d(y, lmax * scale);
            for (double v : fit.theta_hat) REQUIRE_THAT(v, WithinAbs(mean, 1e-9 * (1 + std::abs(mean))));
        }
        // Just below the threshold the fit is not constant.
        if (lmax > 0) REQUIRE(!changepoints(fused_lasso_1d(y, 0.99 * lmax).theta_hat).empty());
    }
}

TEST_CASE("constant data is a fixed point", "[fl1d][property]") {
    for (double lambda : {0.0, 0.1, 3.0, 1e6}) {
        const Signal y(std::vector<double>(17, 2.25));
        CHECK(fused_lasso_1d(y, lambda).theta_hat == y);
    }
}

TEST_CASE("invalid penalty is rejected", "[fl1d]") {
    CHECK_THROWS_AS(fused_lasso_1d(Signal{1, 2}, -1.0), InputError);
    CHECK_THROWS_AS(fused_lasso_1d(Signal{1, 2}, std::nan("")), InputError);
}

TEST_CASE("reported objective matches recomputation", "[fl1d]") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 100; ++rep) {
        const Signal y(noisy_steps(rng, 40));
        const FusedLassoFit fit = fused_lasso_1d(y, 0.8);
        const double ref = fused_lasso_objective(y.values(), fit.theta_hat.values(), 0.8);
        REQUIRE_THAT(fit.objective, WithinAbs(ref, 1e-10 * std::abs(ref)));
    }
}

TEST_CASE("dynamic programme agrees with a dual proximal-gradient oracle", "[fl1d][oracle]") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> size(2, 50);
    for (int rep = 0; rep < 40; ++rep) {
        const std::vector<double> y = noisy_steps(rng, size(rng));
        for (double lambda : {0.1, 1.0, 10.0}) {
            const FusedLassoFit fit = fused_lasso_1d(Signal(y), lambda);
            const auto d = oracle::first_differences(y.size());
            const std::vector<double> ref = oracle::dual_projected_gradient(y, d, lambda, 200000, 4.0);
            REQUIRE(max_diff(fit.theta_hat.vector(), ref) <= 1e-6);
            const double f_dp = oracle::penalized_objective(y, fit.theta_hat.vector(), d, lambda);
            const double f_ref = oracle::penalized_objective(y, ref, d, lambda);
            REQUIRE(f_dp <= f_ref + 1e-12 * (1 + std::abs(f_ref)));
        }
    }
}

TEST_CASE("KKT certificate", "[fl1d][kkt]") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        const Signal y(noisy_steps(rng, 3 + rep % 60));
        for (double lambda : {0.1, 1.0, 10.0}) REQUIRE(check_kkt(y, fused_lasso_1d(y, lambda), 1e-7));
    }
    // The unpenalised solution is not stationary once lambda > 0.
    const Signal rough{0, 5, -3, 4, -2, 6};
    CHECK_FALSE(check_kkt(rough, FusedLassoFit{rough, 1.0, 0.0}, 1e-8));
    CHECK(check_kkt(rough, FusedLassoFit{rough, 0.0, 0.0}, 1e-12));
    // A wrong fit with the right lambda fails as well.
    FusedLassoFit fit = fused_lasso_1d(rough, 1.0);
    std::vector<double> bad = fit.theta_hat.vector();
    bad[2] += 0.1;
    CHECK_FALSE(check_kkt(rough, FusedLassoFit{Signal(bad), 1.0, 0.0}, 1e-8));
}

TEST_CASE("total variation of the fit decreases along the path", "[fl1d][property]") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const Signal y(noisy_steps(rng, 80));
        double prev = tv(y) + 1e-12;
        for (double lambda = 0.01; lambda < 50; lambda *= 1.3) {
            const double cur = tv(fused_lasso_1d(y, lambda).theta_hat);
            REQUIRE(cur <= prev + 1e-9);
            prev = cur;
        }
    }
}

TEST_CASE("shift and scale equivariance", "[fl1d][property]") {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 100; ++rep) {
        const std::vector<double> y = noisy_steps(rng, 30);
        const double a = 0.25 + 0.5 * (rep % 9), b = -2.0 + 0.3 * (rep % 13);
        std::vector<double> ay(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) ay[i] = a * y[i] + b;
        const Signal base = fused_lasso_1d(Signal(y), 0.7).theta_hat;
        const Signal moved = fused_lasso_1d(Signal(ay), a * 0.7).theta_hat;
        for (std::size_t i = 0; i < y.size(); ++i) {
            REQUIRE_THAT(moved[i], WithinAbs(a * base[i] + b, 1e-9 * (1 + std::abs(moved[i]))));
        }
    }
}

TEST_CASE("long inputs run in linear time", "[fl1d]") {
    std::mt19937_64 rng(7);
    const Signal y(noisy_steps(rng, 200000));
    const FusedLassoFit fit = fused_lasso_1d(y, 5.0);
    CHECK(fit.theta_hat.size() == y.size());
    CHECK(check_kkt(y, fit, 1e-6));
}
