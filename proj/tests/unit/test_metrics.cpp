#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "tvcp/errors.hpp"
#include "tvcp/metrics.hpp"
#include "tvcp/simulation.hpp"

#include <cmath>
#include <random>

using namespace tvcp;

namespace {

std::vector<long> as_long(const ChangepointSet& s) { return {s.begin(), s.end()}; }

ChangepointSet random_set(std::mt19937_64& rng, Index n, std::size_t max_size, bool allow_empty = true) {
    std::uniform_int_distribution<std::size_t> size(allow_empty ? 0 : 1, max_size);
    std::uniform_int_distribution<Index> pos(1, n - 1);
    std::vector<Index> v;
    const std::size_t k = size(rng);
    for (std::size_t i = 0; i < k; ++i) v.push_back(pos(rng));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return ChangepointSet(v);
}

}  // namespace

TEST_CASE("signal rejects empty and non-finite values", "[signal]") {
    CHECK_THROWS_AS(Signal(std::vector<double>{}), InputError);
    CHECK_THROWS_AS(Signal({1.0, std::nan("")}), InputError);
    CHECK_THROWS_AS(Signal({1.0, HUGE_VAL}), InputError);
    CHECK_NOTHROW(Signal({0.0}));
}

TEST_CASE("changepoint sets must be strictly increasing and positive", "[signal]") {
    CHECK_THROWS_AS(ChangepointSet({3, 3}), InputError);
    CHECK_THROWS_AS(ChangepointSet({4, 2}), InputError);
    CHECK_THROWS_AS(ChangepointSet({0}), InputError);
    CHECK_THROWS_AS(ChangepointSet({5}).validate_for(5), InputError);
    CHECK_NOTHROW(ChangepointSet({4}).validate_for(5));
}

TEST_CASE("extended distance rejects negatives", "[signal]") {
    CHECK_THROWS_AS(ExtendedDistance(-1.0), InputError);
    CHECK(ExtendedDistance::infinity().is_infinite());
    CHECK(ExtendedDistance(3.0) < ExtendedDistance::infinity());
}

TEST_CASE("changepoints reads exact and tolerant jumps", "[metrics]") {
    CHECK(changepoints(Signal{1, 1, 1}).empty());
    CHECK(changepoints(Signal{0, 0, 2, 2, 2, 5}) == ChangepointSet{2, 5});
    CHECK(changepoints(Signal{0, 1e-12, 1}, 1e-9) == ChangepointSet{2});
    CHECK(changepoints(Signal{7}).empty());
}

TEST_CASE("changepoints is scale equivariant in the tolerance", "[metrics][property]") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> v(30);
        for (auto& x : v) x = std::round(z(rng) * 4) / 4;
        const double c = 0.5 + rep % 7;
        std::vector<double> w = v;
        for (auto& x : w) x *= c;
        CHECK(changepoints(Signal(w), c * 0.3) == changepoints(Signal(v), 0.3));
    }
}

TEST_CASE("total variation", "[metrics]") {
    CHECK(tv(Signal{3, 3, 3, 3}) == 0.0);
    CHECK(tv(Signal{0, 1, 0}) == 2.0);
    CHECK(tv(Signal{4}) == 0.0);
    GeneratorSpec spec;
    spec.n = 100;
    CHECK(tv(gen_signal(spec)) == 10.0);
}

TEST_CASE("total variation matches an independent loop", "[metrics][property]") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> v(1 + rep % 40);
        for (auto& x : v) x = z(rng);
        double ref = 0.0;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) ref += std::abs(v[i] - v[i + 1]);
        REQUIRE(tv(Signal(v)) == ref);
    }
}

TEST_CASE("screening distance examples and empty-set conventions", "[metrics]") {
    CHECK(screening_distance({3}, {1, 5}).value() == 2.0);
    CHECK(screening_distance({2, 7}, {2, 7}).value() == 0.0);
    CHECK(screening_distance({}, {4}).is_infinite());
    CHECK(screening_distance({4}, {}).value() == 0.0);
    CHECK(screening_distance({}, {}).value() == 0.0);
}

TEST_CASE("hausdorff examples and empty-set conventions", "[metrics]") {
    CHECK(hausdorff({3}, {1, 5}).value() == 2.0);
    CHECK(hausdorff({1, 9}, {1, 9}).value() == 0.0);
    CHECK(hausdorff({}, {1}).is_infinite());
    CHECK(hausdorff({1}, {}).is_infinite());
    CHECK(hausdorff({}, {}).value() == 0.0);
}

TEST_CASE("distances agree with exhaustive pairing", "[metrics][property]") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 1000; ++rep) {
        const ChangepointSet a = random_set(rng, 60, 8);
        const ChangepointSet b = random_set(rng, 60, 8);
        REQUIRE(screening_distance(a, b).value() == oracle::screening(as_long(a), as_long(b)));
        REQUIRE(hausdorff(a, b).value() == oracle::hausdorff(as_long(a), as_long(b)));
    }
}

TEST_CASE("hausdorff is a metric on nonempty sets", "[metrics][property]") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 1000; ++rep) {
        const ChangepointSet a = random_set(rng, 80, 6, false);
        const ChangepointSet b = random_set(rng, 80, 6, false);
        const ChangepointSet c = random_set(rng, 80, 6, false);
        REQUIRE(hausdorff(a, b) == hausdorff(b, a));
        REQUIRE(hausdorff(a, a).value() == 0.0);
        REQUIRE(hausdorff(a, c).value() <= hausdorff(a, b).value() + hausdorff(b, c).value());
        REQUIRE(screening_distance(a, b) <= hausdorff(a, b));
    }
}

TEST_CASE("screening never exceeds hausdorff, empty sets included", "[metrics][property]") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 500; ++rep) {
        const ChangepointSet a = random_set(rng, 30, 3);
        const ChangepointSet b = random_set(rng, 30, 3);
        REQUIRE(screening_distance(a, b) <= hausdorff(a, b));
    }
}

TEST_CASE("minimum spacing", "[metrics]") {
    CHECK(min_spacing({}, 10) == 10);
    CHECK(min_spacing({2, 5}, 10) == 2);
    GeneratorSpec spec;
    spec.n = 100;
    CHECK(min_spacing(true_changepoints(spec), 100) == 20);
    CHECK_THROWS_AS(min_spacing({10}, 10), InputError);
}

TEST_CASE("minimum gap", "[metrics]") {
    GeneratorSpec spec;
    spec.n = 100;
    const Signal theta = gen_signal(spec);
    CHECK(min_gap(theta, changepoints(theta)) == 2.0);
    CHECK(std::isinf(min_gap(Signal{2, 2, 2}, {})));
    CHECK(min_gap(Signal{0, 5}, {1}) == 5.0);
}

TEST_CASE("second-order diagnostics", "[metrics]") {
    std::vector<double> line;
    for (int i = 1; i <= 12; ++i) line.push_back(0.5 * i - 3);
    CHECK(tv2(Signal(line)) == 0.0);
    CHECK(knots2(Signal(line)).empty());
    CHECK(std::isinf(min_gap2(Signal(line))));

    CHECK(tv2(Signal{0, 1, 0}) == 2.0);
    CHECK(knots2(Signal{0, 1, 0}) == ChangepointSet{2});

    CHECK(tv2(Signal{0, 0, 1, 2, 3}) == 1.0);
    CHECK(knots2(Signal{0, 0, 1, 2, 3}) == ChangepointSet{2});
    CHECK(min_gap2(Signal{0, 0, 1, 2, 3}) == 1.0);
    CHECK(tv2(Signal{1, 2}) == 0.0);
}
