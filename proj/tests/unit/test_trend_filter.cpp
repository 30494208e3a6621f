#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "tvcp/errors.hpp"
#include "tvcp/metrics.hpp"
#include "tvcp/trend_filter.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace tvcp;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> noisy_kinks(std::mt19937_64& rng, std::size_t n, double sd = 0.5) {
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> slope(-1.0, 1.0);
    std::vector<double> y(n);
    double level = 0.0, s = slope(rng);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && rng() % 10 == 0) s = slope(rng);
        level += s;
        y[i] = level + sd * z(rng);
    }
    return y;
}

}  // namespace

TEST_CASE("short inputs and zero penalty return the data", "[tf1]") {
    CHECK(trend_filter_linear(Signal{1, 5}, 3.0).theta_hat == Signal{1, 5});
    CHECK(trend_filter_linear(Signal{4}, 3.0).theta_hat == Signal{4});
    const Signal y{0, 3, 1, 4, 1, 5};
    CHECK(trend_filter_linear(y, 0.0).theta_hat == y);
}

TEST_CASE("three-point closed form", "[tf1]") {
    const TrendFit fit = trend_filter_linear(Signal{0, 1, 0}, 0.25, 1e-12);
    CHECK_THAT(fit.theta_hat[0], WithinAbs(0.25, 1e-8));
    CHECK_THAT(fit.theta_hat[1], WithinAbs(0.5, 1e-8));
    CHECK_THAT(fit.theta_hat[2], WithinAbs(0.25, 1e-8));
}

TEST_CASE("huge penalty gives the least-squares line", "[tf1]") {
    std::mt19937_64 rng(1);
    const std::vector<double> y = noisy_kinks(rng, 30);
    const std::size_t n = y.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icept = (sy - slope * sx) / n;
    const TrendFit fit = trend_filter_linear(Signal(y), 1e5, 1e-10);
    for (std::size_t i = 0; i < n; ++i) REQUIRE_THAT(fit.theta_hat[i], WithinAbs(icept + slope * i, 1e-6));
}

TEST_CASE("objective agrees with a dual proximal-gradient oracle", "[tf1][oracle]") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> size(3, 40);
    for (int rep = 0; rep < 30; ++rep) {
        const std::vector<double> y = noisy_kinks(rng, size(rng));
        for (double lambda : {0.1, 1.0, 10.0}) {
            const TrendFit fit = trend_filter_linear(Signal(y), lambda, 1e-10);
            const auto d = oracle::second_differences(y.size());
            const auto ref = oracle::dual_projected_gradient(y, d, lambda, 200000, 16.0);
            const double f_ref = oracle::penalized_objective(y, ref, d, lambda);
            const double f_fit = oracle::penalized_objective(y, fit.theta_hat.vector(), d, lambda);
            REQUIRE(std::abs(f_fit - f_ref) <= 1e-6);
            REQUIRE_THAT(fit.objective, WithinAbs(f_fit, 1e-8 * (1 + std::abs(f_fit))));
        }
    }
}

TEST_CASE("adding an affine sequence shifts the fit by it", "[tf1][property]") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const std::vector<double> y = noisy_kinks(rng, 50);
        const double c = 0.3 * rep - 1.0, d = 2.0 - 0.5 * rep;
        std::vector<double> moved(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) moved[i] = y[i] + c * (i + 1) + d;
        const Signal a = trend_filter_linear(Signal(y), 2.0, 1e-12).theta_hat;
        const Signal b = trend_filter_linear(Signal(moved), 2.0, 1e-12).theta_hat;
        for (std::size_t i = 0; i < y.size(); ++i) REQUIRE_THAT(b[i], WithinAbs(a[i] + c * (i + 1) + d, 1e-5));
    }
}

TEST_CASE("knot count shrinks as the penalty grows", "[tf1][statistical]") {
    const std::vector<double> lambdas{0.5, 2.0, 8.0, 32.0};
    std::vector<std::vector<double>> counts(lambdas.size());
    for (int seed = 0; seed < 50; ++seed) {
        std::mt19937_64 rng(100 + seed);
        const Signal y(noisy_kinks(rng, 40));
        for (std::size_t k = 0; k < lambdas.size(); ++k) {
            const Signal th = trend_filter_linear(y, lambdas[k]).theta_hat;
            counts[k].push_back(static_cast<double>(knots2(th, default_knot_tol(th)).size()));
        }
    }
    double prev = 1e9;
    for (auto& c : counts) {
        std::sort(c.begin(), c.end());
        const double med = 0.5 * (c[24] + c[25]);
        CHECK(med <= prev);
        prev = med;
    }
}

TEST_CASE("iteration budget exhaustion is a convergence error", "[tf1]") {
    std::mt19937_64 rng(4);
    const Signal y(noisy_kinks(rng, 60));
    try {
        trend_filter_linear(y, 1.0, 1e-14, 10);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(e.final_gap() > 0.0);
        CHECK(e.iterations() == 10);
    }
}

TEST_CASE("kink fit closed forms", "[tf1][kink]") {
    const LinearFitOfKink same = piecewise_linear_lsq(1.7, 1.7, 6);
    CHECK(same.sse == 0.0);
    CHECK(same.slope == 1.7);
    CHECK(same.intercept == 0.0);

    const LinearFitOfKink k = piecewise_linear_lsq(1.0, 0.0, 1);
    CHECK_THAT(k.slope, WithinAbs(0.5, 1e-15));
    CHECK_THAT(k.intercept, WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(k.sse, WithinAbs(1.0 / 6.0, 1e-15));
    CHECK_THROWS_AS(piecewise_linear_lsq(1, 0, 0), InputError);
}

TEST_CASE("kink fit matches the normal equations", "[tf1][kink][oracle]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> a(-5, 5);
    std::uniform_int_distribution<long> rr(1, 300);
    for (int rep = 0; rep < 1000; ++rep) {
        const double a1 = a(rng), a2 = a(rng);
        const long r = rr(rng);
        const LinearFitOfKink got = piecewise_linear_lsq(a1, a2, r);
        const oracle::LineFit ref = oracle::kink_normal_equations(a1, a2, r);
        const double scale = 1.0 + ref.sse;
        REQUIRE(std::abs(got.sse - ref.sse) <= 1e-10 * scale);
        REQUIRE(std::abs(got.slope - ref.slope) <= 1e-10 * (1 + std::abs(ref.slope)));
        REQUIRE(std::abs(got.intercept - ref.intercept) <= 1e-10 * (1 + std::abs(ref.intercept) + std::abs(a1 - a2) * r));
    }
}

TEST_CASE("kink residual is bounded below by r^3/24", "[tf1][kink][property]") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> a(-5, 5);
    for (long r = 1; r <= 2000; r += (r < 50 ? 1 : 37)) {
        const double a1 = a(rng), a2 = a(rng);
        const double diff2 = (a1 - a2) * (a1 - a2);
        const double rd = static_cast<double>(r);
        REQUIRE(piecewise_linear_lsq(a1, a2, r).sse >= diff2 * rd * rd * rd / 24.0);
    }
}

TEST_CASE("the 13r^3/24 lower bound does not hold", "[tf1][kink]") {
    // r = 1, unit slope change: the exact residual is 1/6 < 13/24.
    const double sse = oracle::kink_normal_equations(1.0, 0.0, 1).sse;
    CHECK_THAT(sse, WithinAbs(1.0 / 6.0, 1e-15));
    CHECK(sse < 13.0 / 24.0);
    // The ratio to r^3 tends to 1/24 from above for large r.
    const double big = piecewise_linear_lsq(1.0, 0.0, 100000).sse / 1e15;
    CHECK(std::abs(big - 1.0 / 24.0) < 1e-5);
}
